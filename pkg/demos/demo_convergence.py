"""Weighted L_p convergence of the Hermite-Fejer operator.

Runs the theorem functional across doubling n for three admissible test
functions, prints the error table with the Y/Z normalizer ratios, and
then demonstrates the two gates: a constant function (f(0) != 0) and an
odd interpolation order are both refused before any computation starts.

Run:  python3 demos/demo_convergence.py
"""

from hflab import (FreudMonomial, GateRejection, MrsSolver, NormSpec,
                   WeightSpec, convergence_run, get_function,
                   stieltjes_recurrence)


def main():
    spec = WeightSpec(FreudMonomial(2.0), rho=0.0, nu=2)
    solver = MrsSolver(spec)
    table = stieltjes_recurrence(spec, 64, 30, solver)
    nspec = NormSpec(p=2.0, Delta=1.0, alpha=1.0, nu=2)

    for name in ("sin", "x_gauss", "x_over_1px2"):
        rep = convergence_run(nspec, spec, solver, table,
                              get_function(name), [8, 16, 32, 64])
        print(f"\nf = {name}")
        print(f"{'n':>4} {'E_n':>12} {'||Y||':>12} {'ratioY':>10} "
              f"{'quad err':>10}")
        for n, e, y, ry, qe in zip(rep.n, rep.E_n, rep.normY, rep.ratioY,
                                   rep.quad_err):
            print(f"{n:>4} {e:>12.3e} {y:>12.3e} {ry:>10.3e} {qe:>10.1e}")
        print(f"  strictly decreasing: {rep.strictly_decreasing()}")

    print("\ngate demonstrations:")
    try:
        convergence_run(nspec, spec, solver, table, get_function("one"),
                        [8, 16])
    except GateRejection as exc:
        print(f"  f = 1        -> {exc}")
    try:
        odd = NormSpec(p=2.0, Delta=1.0, alpha=1.0, nu=3)
        convergence_run(odd, spec, solver, table, get_function("sin"),
                        [8, 16])
    except GateRejection as exc:
        print(f"  nu = 3       -> {exc}")


if __name__ == "__main__":
    main()
