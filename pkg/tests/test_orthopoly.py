import math

import numpy as np
import pytest

from hflab import (ConfigError, eval_pn, orthonormality_residual,
                   spacing_diag, stieltjes_recurrence, sup_bound_diag, zeros)
from hflab.orthopoly import eval_weighted_all

from oracles import (generalized_hermite_beta, generalized_hermite_beta0,
                     orthonormal_hermite)


def test_beta_closed_form_rho0(table_hermite):
    """w^2 = e^{-2x^2}: beta_k = k/4, beta_0 = sqrt(pi/2)."""
    assert table_hermite.beta0 == pytest.approx(math.sqrt(math.pi / 2.0),
                                                rel=1e-13)
    for k in range(1, 65):
        assert table_hermite.beta[k - 1] == pytest.approx(k / 4.0, rel=1e-12)


def test_beta_closed_form_rho1(table_hermite_rho1):
    """w^2 = x^2 e^{-2x^2}: the generalized-Hermite closed form."""
    assert table_hermite_rho1.beta0 == pytest.approx(
        generalized_hermite_beta0(1.0), rel=1e-12)
    for k in range(1, 65):
        assert table_hermite_rho1.beta[k - 1] == pytest.approx(
            generalized_hermite_beta(1.0, k), rel=1e-12)


def test_eval_pn_against_classical_hermite(table_hermite):
    """p_k from the recurrence vs the rescaled classical Hermite values."""
    xs = np.array([-1.7, -0.3, 0.0, 0.4, 1.1, 2.6])
    for k in (0, 1, 2, 5, 12, 20):
        ours = eval_pn(table_hermite, k, xs, 0)[0]
        ref = orthonormal_hermite(k, xs)
        np.testing.assert_allclose(ours, ref, rtol=1e-12, atol=1e-12)


def test_eval_pn_derivative_against_classical(table_hermite):
    """p_n' from the differentiated recurrence vs d/dx of the oracle."""
    xs = np.array([-0.9, 0.2, 1.3])
    for k in (3, 8, 15):
        ours = eval_pn(table_hermite, k, xs, 1)[1]
        # H_k'(t) = 2k H_{k-1}(t), t = sqrt(2) x, with the same norm ratio
        ref = (orthonormal_hermite(k - 1, xs) * 2.0 * k * math.sqrt(2.0)
               / math.sqrt(2.0 ** k * math.factorial(k))
               * math.sqrt(2.0 ** (k - 1) * math.factorial(k - 1)))
        np.testing.assert_allclose(ours, ref, rtol=1e-11)


def test_orthonormality_small_degrees(table_hermite, solver_hermite):
    for m in range(6):
        for n in range(6):
            r = orthonormality_residual(table_hermite, m, n, solver_hermite)
            assert r < 1e-10


def test_zeros_structure(table_hermite, solver_hermite):
    for n in (1, 2, 7, 10):
        nodes = zeros(table_hermite, n, solver_hermite, nu=2)
        x = nodes.x
        assert np.all(np.diff(x) < 0)
        np.testing.assert_allclose(x, -x[::-1], atol=0)  # exact symmetry
        if n % 2 == 1:
            assert x[n // 2] == 0.0
        # the zeros really are zeros
        if n >= 1:
            pn = eval_pn(table_hermite, n, x, 1)
            rel = np.abs(pn[0]) / (np.abs(pn[1]) * np.maximum(nodes.gap, 1e-30))
            assert np.max(rel) < 1e-12


def test_zeros_two_node_closed_form(table_hermite, solver_hermite):
    """p_2 for e^{-2x^2} is a multiple of x^2 - 1/4: zeros at +-1/2."""
    nodes = zeros(table_hermite, 2, solver_hermite, nu=2)
    np.testing.assert_allclose(nodes.x, [0.5, -0.5], rtol=1e-14)


def test_zeros_interlace(table_hermite, solver_hermite):
    n = 12
    a = zeros(table_hermite, n, solver_hermite, nu=2).x[::-1]
    b = zeros(table_hermite, n + 1, solver_hermite, nu=2).x[::-1]
    for j in range(n):
        assert b[j] < a[j] < b[j + 1]


def test_eval_weighted_all_matches_direct(table_hermite):
    xs = np.array([0.4, 1.6, 3.2])
    R = eval_weighted_all(table_hermite, 10, xs)
    w = np.exp(-xs ** 2)
    for k in (0, 4, 10):
        direct = eval_pn(table_hermite, k, xs, 0)[0] * w
        np.testing.assert_allclose(R[k], direct, rtol=1e-12)


def test_spacing_diag_band(table_hermite, solver_hermite):
    nodes = zeros(table_hermite, 16, solver_hermite, nu=2)
    r = spacing_diag(nodes)
    assert r.shape == (15,)
    assert np.all(r > 0.1) and np.all(r < 10.0)


def test_sup_bound_diag_positive(table_hermite, solver_hermite):
    v = sup_bound_diag(table_hermite, 16, solver_hermite)
    assert 0.0 < v < 10.0


def test_range_validation(table_hermite, solver_hermite):
    with pytest.raises(ConfigError):
        eval_pn(table_hermite, 65, 0.0)
    with pytest.raises(ConfigError):
        zeros(table_hermite, 0, solver_hermite)
    with pytest.raises(ConfigError):
        orthonormality_residual(table_hermite, 0, 65)
    with pytest.raises(ConfigError):
        stieltjes_recurrence(table_hermite.spec, 4, digits=10)
