import math

import numpy as np
import pytest
from scipy.integrate import quad

from hflab import (ConfigError, GateRejection, NormSpec, check_conditions,
                   convergence_run, get_function, theorem_weight,
                   weighted_lp_norm, z_normalizer)


@pytest.fixture(scope="module")
def nspec():
    return NormSpec(p=2.0, Delta=1.0, alpha=1.0, nu=2)


def test_normspec_gate_and_validation():
    # Delta >= 1/p - min(1, alpha) is a gate, not a config error
    with pytest.raises(GateRejection):
        NormSpec(p=2.0, Delta=-0.9, alpha=1.0, nu=2)
    NormSpec(p=2.0, Delta=-0.5, alpha=1.0, nu=2)  # boundary admissible
    with pytest.raises(ConfigError):
        NormSpec(p=1.0, Delta=1.0, alpha=1.0, nu=2)
    with pytest.raises(ConfigError):
        NormSpec(p=2.0, Delta=1.0, alpha=-1.0, nu=2)
    with pytest.raises(ConfigError):
        NormSpec(p=2.0, Delta=1.0, alpha=1.0, nu=2, eta=1.0)
    with pytest.raises(ConfigError):
        NormSpec(p=2.0, Delta=1.0, alpha=1.0, nu=1)


def test_theorem_weight_direct_formula(nspec, spec_hermite, solver_hermite):
    """W(x) recomputed longhand for Q = x^2 at a few points."""
    n = 8
    for x in (0.5, 1.0, 2.5, -1.5):
        q = x * x
        phi = 1.0 / ((1.0 + q) ** (2.0 / 3.0) * 2.0)
        expected = (1.0 + abs(x)) ** (-1.0) * (phi ** 0.75 * math.exp(-q)) ** 2
        got = theorem_weight(nspec, spec_hermite, solver_hermite, n, x)
        assert got == pytest.approx(expected, rel=1e-13)
    with pytest.raises(ConfigError):
        theorem_weight(nspec, spec_hermite, solver_hermite, n, 0.0)


def test_norm_against_scipy_quad(spec_hermite, solver_hermite):
    """p=2, Delta=0, g = x e^{-x^2}: cross-check against scipy.integrate."""
    ns = NormSpec(p=2.0, Delta=0.0, alpha=1.0, nu=2)
    g = lambda x: x * np.exp(-x * x)
    ours = weighted_lp_norm(ns, spec_hermite, solver_hermite, g, 8)

    def integrand(x):
        q = x * x
        phi = 1.0 / ((1.0 + q) ** (2.0 / 3.0) * 2.0)
        W = (phi ** 0.75 * math.exp(-q)) ** 2
        return (W * x * math.exp(-q)) ** 2

    ref, _ = quad(integrand, -12.0, 12.0, limit=400)
    assert ours == pytest.approx(ref ** 0.5, rel=1e-6)


def test_norm_resolution_stability(spec_hermite, solver_hermite):
    ns = NormSpec(p=2.0, Delta=0.0, alpha=1.0, nu=2)
    g = lambda x: x * np.exp(-x * x)
    coarse = weighted_lp_norm(ns, spec_hermite, solver_hermite, g, 8,
                              rtol=1e-7)
    fine = weighted_lp_norm(ns, spec_hermite, solver_hermite, g, 8,
                            rtol=1e-9)
    assert coarse > 0.0
    assert fine == pytest.approx(coarse, rel=1e-6)


def test_norm_homogeneity(nspec, spec_hermite, solver_hermite):
    g = lambda x: np.sin(x) * np.exp(-0.1 * x * x)
    base = weighted_lp_norm(nspec, spec_hermite, solver_hermite, g, 8)
    scaled = weighted_lp_norm(nspec, spec_hermite, solver_hermite,
                              lambda x: -3.0 * g(x), 8)
    assert scaled == pytest.approx(3.0 * base, rel=1e-10)


def test_check_conditions_verdicts(nspec, spec_hermite, solver_hermite):
    ok = check_conditions(nspec, spec_hermite, solver_hermite,
                          get_function("sin"), 16)
    assert ok.passed
    assert ok.cf_working > 0.0
    bad = check_conditions(nspec, spec_hermite, solver_hermite,
                           get_function("one"), 16)
    assert not bad.passed
    assert "f(0)" in bad.reason


def test_z_normalizer_cases(solver_hermite):
    n = 16
    a_n = solver_hermite.mrs_number(16.0)
    base = a_n ** 2 * math.log(n) / n
    assert z_normalizer(solver_hermite, n, 0.5) == pytest.approx(base)
    assert z_normalizer(solver_hermite, n, 1.0) == pytest.approx(
        base * math.log(a_n) / a_n)
    assert z_normalizer(solver_hermite, n, 2.0) == pytest.approx(base / a_n)


def test_convergence_run_gates(nspec, spec_hermite, solver_hermite,
                               table_hermite):
    odd = NormSpec(p=2.0, Delta=1.0, alpha=1.0, nu=3)
    with pytest.raises(GateRejection, match="odd"):
        convergence_run(odd, spec_hermite, solver_hermite, table_hermite,
                        get_function("sin"), [4, 8])
    with pytest.raises(ConfigError, match="sorted"):
        convergence_run(nspec, spec_hermite, solver_hermite, table_hermite,
                        get_function("sin"), [8, 4])
    with pytest.raises(ConfigError, match="range"):
        convergence_run(nspec, spec_hermite, solver_hermite, table_hermite,
                        get_function("sin"), [4, 128])
    with pytest.raises(GateRejection, match="rejected"):
        convergence_run(nspec, spec_hermite, solver_hermite, table_hermite,
                        get_function("one"), [4, 8])


def test_convergence_run_report_shape(nspec, spec_hermite, solver_hermite,
                                      table_hermite):
    rep = convergence_run(nspec, spec_hermite, solver_hermite, table_hermite,
                          get_function("sin"), [4, 8], l=0)
    assert rep.n == [4, 8]
    assert len(rep.rows()) == 2
    assert all(v > 0 for v in rep.E_n)
    assert rep.normZ == [0.0, 0.0]          # l = 0 has no Z component
    assert rep.function == "sin"


def test_convergence_run_with_derivative_matching(spec_hermite,
                                                  solver_hermite,
                                                  table_hermite):
    """l = 1 exercises the Z component; norms stay finite and positive."""
    ns = NormSpec(p=2.0, Delta=1.0, alpha=1.0, nu=4)
    rep = convergence_run(ns, spec_hermite, solver_hermite, table_hermite,
                          get_function("x_gauss"), [4, 8], l=1)
    assert all(v > 0 for v in rep.normZ)
    assert all(np.isfinite(v) for v in rep.ratioZ)
