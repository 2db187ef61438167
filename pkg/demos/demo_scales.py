"""Scales of an exponential weight: MRS numbers and friends.

For the Hermite weight Q = x^2 everything has a closed form (a_t =
sqrt(t), T = 2), which makes it a good first stop; the second half
switches to the Erdos weight Q = exp(x^2) - 1, where T(a_n) grows and
the scales compress logarithmically.

Run:  python3 demos/demo_scales.py
"""

import numpy as np

from hflab import (ExpPower, FreudMonomial, MrsSolver, WeightSpec,
                   freud_mrs_closed_form)


def table_for(spec, title):
    solver = MrsSolver(spec)
    print(f"\n{title}  (gamma = {solver.gamma})")
    print(f"{'n':>5} {'a_n':>12} {'delta_n':>12} {'T(a_n)':>12} "
          f"{'eps_n':>12} {'phi_n(0)':>12}")
    for n in (4, 8, 16, 32, 64, 128):
        print(f"{n:>5} {solver.mrs_number(n):>12.6f} "
              f"{solver.delta_u(n):>12.6f} {solver.t_at(n):>12.6f} "
              f"{solver.eps_n(n):>12.6f} {solver.phi_u(n, 0.0):>12.6f}")
    return solver


def main():
    hermite = WeightSpec(FreudMonomial(2.0), rho=0.0, nu=2)
    solver = table_for(hermite, "Freud weight Q = x^2")
    print("\ncross-check against the closed form a_t = sqrt(t):")
    for t in (1.0, 9.0, 100.0):
        print(f"  a_{t:g} = {solver.mrs_number(t):.12f}  "
              f"(sqrt = {t ** 0.5:.12f})")

    quartic = MrsSolver(WeightSpec(FreudMonomial(4.0), rho=0.0, nu=2))
    print("\nQ = |x|^4 against the Gamma-function closed form:")
    for t in (1.0, 16.0):
        print(f"  a_{t:g} = {quartic.mrs_number(t):.12f}  "
              f"(closed form = {freud_mrs_closed_form(4.0, t):.12f})")

    erdos = WeightSpec(ExpPower(ell=1, alpha=2.0, m=0.0), rho=0.0, nu=2)
    table_for(erdos, "Erdos weight Q = exp(x^2) - 1")
    print("\nNote how slowly a_n grows for the Erdos weight: the zeros of")
    print("p_n crowd into an interval that expands like sqrt(log n).")


if __name__ == "__main__":
    main()
