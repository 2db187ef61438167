import math

import numpy as np
import pytest

from hflab import (ConfigError, build_fundamental, coeff_bound_diag,
                   e_coeffs, eval_fundamental, eval_L, eval_split,
                   get_function, taylor_lk, zeros)
from hflab.weights import w_rho_eval

from oracles import NewtonPoly, fd_cardinal_probe, lagrange_taylor_numpy


@pytest.fixture(scope="module")
def nodes10(table_hermite, solver_hermite):
    return zeros(table_hermite, 10, solver_hermite, nu=4)


@pytest.fixture(scope="module")
def fc10(nodes10):
    return build_fundamental(nodes10, 0)


def test_taylor_coefficients_against_polynomial_algebra(nodes10):
    """Series coefficients of l_k^nu vs direct numpy polynomial expansion."""
    for k in (0, 3, 5, 9):
        ours = taylor_lk(nodes10, k, 3)
        ref = lagrange_taylor_numpy(nodes10.x, k, 4, 3)
        np.testing.assert_allclose(ours, ref, rtol=1e-8, atol=1e-10)


def test_classical_hermite_fejer_coefficients(table_hermite, solver_hermite):
    """nu=2 reduces to the classical operator: e_{0,1} = -l_k''(x_k)... the
    back-substitution must give e_{0,:} = [1, -b_1] with b_1 = 2 c_1."""
    nodes = zeros(table_hermite, 6, solver_hermite, nu=2)
    fc = build_fundamental(nodes, 0)
    c1 = nodes.pn_deriv[2] / (2.0 * nodes.pn_deriv[1])
    np.testing.assert_allclose(fc.taylor_b[:, 1], 2.0 * c1, rtol=1e-12)
    np.testing.assert_allclose(fc.e[:, 0, 0], 1.0, rtol=0)
    np.testing.assert_allclose(fc.e[:, 0, 1], -2.0 * c1, rtol=1e-12)
    np.testing.assert_allclose(fc.e[:, 1, 1], 1.0, rtol=0)


def test_e_coeffs_inverts_taylor_product():
    """By construction sum_i e_{s,i} b_{j-i} = delta_{s,j} for j <= nu-1."""
    rng = np.random.default_rng(7)
    b = np.concatenate(([1.0], rng.normal(size=3)))
    e = e_coeffs(4, b)
    for s in range(4):
        for j in range(4):
            acc = sum(e[s, i] * b[j - i] for i in range(s, j + 1))
            target = 1.0 / math.factorial(s) if j == s else 0.0
            assert acc == pytest.approx(target, abs=1e-12)


def test_cardinal_conditions_fd_probe_small(table_hermite, solver_hermite):
    """Multiprecision FD probe of h_{s,k}^{(j)}(x_p) = delta delta, nu=3."""
    nodes = zeros(table_hermite, 5, solver_hermite, nu=3)
    fc = build_fundamental(nodes, 0)
    worst = fd_cardinal_probe(table_hermite, nodes, fc)
    assert worst < 1e-7


def test_fundamental_delta_at_nodes(nodes10, fc10):
    for k in (0, 4, 9):
        vals = eval_fundamental(nodes10, fc10, 0, k, nodes10.x)
        target = np.zeros(10)
        target[k] = 1.0
        np.testing.assert_allclose(vals, target, atol=1e-10)
        # s >= 1 cardinal polynomials vanish at every node
        vals1 = eval_fundamental(nodes10, fc10, 1, k, nodes10.x)
        np.testing.assert_allclose(vals1, 0.0, atol=1e-10)


def test_interpolation_at_nodes(nodes10, fc10):
    f = get_function("sin")
    vals = eval_L(nodes10, fc10, f, nodes10.x, 0)
    np.testing.assert_allclose(vals, np.sin(nodes10.x), rtol=1e-10)


def test_partition_of_unity_inside_zero_interval(nodes10):
    """L_n(nu-1, nu, 1) = 1: constants lie in the exactness class."""
    fc = build_fundamental(nodes10, 3)
    xs = np.linspace(-nodes10.x[0], nodes10.x[0], 41)
    vals = eval_L(nodes10, fc, get_function("one"), xs, 3)
    np.testing.assert_allclose(vals, 1.0, atol=1e-9)


def test_split_sums_to_operator(nodes10):
    fc = build_fundamental(nodes10, 2)
    f = get_function("x_gauss")
    xs = np.linspace(-2.5, 2.5, 17)
    X, Y, Z = eval_split(nodes10, fc, f, xs, 2)
    L = eval_L(nodes10, fc, f, xs, 2)
    scale = np.maximum(np.abs(X) + np.abs(Y) + np.abs(Z), 1.0)
    np.testing.assert_allclose((X + Y + Z - L) / scale, 0.0, atol=1e-12)


def test_split_l0_has_no_z(nodes10, fc10):
    xs = np.linspace(-2.0, 2.0, 9)
    _, _, Z = eval_split(nodes10, fc10, get_function("sin"), xs, 0)
    np.testing.assert_allclose(Z, 0.0, atol=0)


def test_newton_form_exactness_quick(table_hermite, solver_hermite):
    """L_n(nu-1, nu, P) = P for P in the polynomial class, weighted."""
    nodes = zeros(table_hermite, 8, solver_hermite, nu=2)
    fc = build_fundamental(nodes, 1)
    rng = np.random.default_rng(11)
    centers = np.tile(nodes.x, 2)[:15]
    P = NewtonPoly(centers, rng.uniform(-1.0, 1.0, 16))
    a4 = solver_hermite.mrs_number(32.0)
    xs = np.linspace(-a4, a4, 501)
    w2 = w_rho_eval(nodes.table.spec, xs) ** 2
    L = eval_L(nodes, fc, P, xs, 1)
    dev = np.max(np.abs(L - P.value(xs)) * w2)
    ref = np.max(np.abs(P.value(xs)) * w2)
    assert dev / ref < 1e-10


def test_near_node_series_continuity(nodes10, fc10):
    """Values just inside the series-switch radius match just outside."""
    k = 2
    xk = nodes10.x[k]
    gap = nodes10.gap[k]
    f = get_function("sin")
    inner = eval_L(nodes10, fc10, f, xk + 0.9e-8 * gap, 0)
    outer = eval_L(nodes10, fc10, f, xk + 1.1e-8 * gap, 0)
    assert inner == pytest.approx(outer, rel=1e-6)


def test_coeff_bound_diag_shape(nodes10, fc10):
    rep = coeff_bound_diag(nodes10, fc10)
    assert rep.ratio_tri.shape == (4, 4)
    assert np.all(rep.ratio_tri >= 0.0)
    assert np.all(np.isfinite(rep.ratio_tri))


def test_argument_validation(nodes10, fc10):
    with pytest.raises(ConfigError):
        build_fundamental(nodes10, 4)       # l beyond nu-1
    with pytest.raises(ConfigError):
        eval_fundamental(nodes10, fc10, 4, 0, 0.0)
    with pytest.raises(ConfigError):
        eval_fundamental(nodes10, fc10, 0, 10, 0.0)
    with pytest.raises(ConfigError):
        eval_L(nodes10, fc10, lambda x: x, 0.0, l=1)  # plain callable, l>0
