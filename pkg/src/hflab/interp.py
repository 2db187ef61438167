"""Higher-order Hermite-Fejer fundamental polynomials and operators.

The cardinal basis element for derivative order s at node k is

    h_{s,k}(x) = l_k(x)^nu * sum_{i=s}^{nu-1} e_{s,i} (x - x_k)^i,

where l_k is the Lagrange fundamental polynomial of p_n.  The e
coefficients are determined by a unit-lower-triangular back-substitution
against the Taylor coefficients of l_k^nu at the node, so that
h_{s,k}^{(j)}(x_p) = delta_{s,j} delta_{k,p}.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

_NEAR_FACTOR = 1e-8  # switch l_k to its Taylor series inside this gap fraction


@dataclass
class FundamentalCoeffs:
    """Per-node Taylor data of l_k^nu and the cardinal e coefficients.

    taylor_c[k, j] : j-th Taylor coefficient of l_k at x_k (c_0 = 1)
    taylor_b[k, j] : j-th Taylor coefficient of l_k^nu at x_k (b_0 = 1)
    e[k, s, i]     : e_{s,i}(nu, k, n), zero for i < s
    """

    nu: int
    l: int
    taylor_c: np.ndarray
    taylor_b: np.ndarray
    e: np.ndarray


def taylor_lk(nodes, k, order):
    """Taylor coefficients b_0..b_order of l_k^nu at x_k (0-based node k).

    The l_k coefficients are c_j = p^{(j+1)}(x_k) / ((j+1)! p'(x_k)); the
    power is formed by repeated truncated series multiplication.
    """
    nu = nodes.nu
    if order > nu - 1:
        raise ConfigError(f"order {order} exceeds nu-1 = {nu - 1}")
    c = _taylor_c_all(nodes, order)[k]
    return _series_power(c[np.newaxis, :], nu)[0]


def _taylor_c_all(nodes, order):
    """c[k, j] for j = 0..order, all nodes at once."""
    d = nodes.pn_deriv
    pp = d[1]
    if np.any(np.abs(pp) < 1e-300):
        raise DomainError("degenerate node: |p_n'(x_k)| below threshold")
    c = np.empty((nodes.n, order + 1))
    for j in range(order + 1):
        c[:, j] = d[j + 1] / (math.factorial(j + 1) * pp)
    return c


def _series_power(c, nu):
    """(sum c_j t^j)^nu truncated at the series length, rowwise."""
    out = c.copy()
    K = c.shape[1]
    for _ in range(nu - 1):
        new = np.zeros_like(out)
        for j in range(K):
            new[:, j] = np.sum(out[:, :j + 1] * c[:, j::-1], axis=1)
        out = new
    return out


def e_coeffs(nu, taylor_b):
    """e_{s,i} from the Taylor coefficients of l_k^nu (b_0 must be 1).

    Unit-triangular back-substitution: e_{s,s} = 1/s! and
    e_{s,j} = -sum_{i=s}^{j-1} e_{s,i} b_{j-i} for j > s.
    """
    b = np.atleast_2d(taylor_b)
    if not np.allclose(b[:, 0], 1.0, rtol=1e-12, atol=0):
        raise ConfigError("taylor_b must start with b_0 = 1")
    nk = b.shape[0]
    e = np.zeros((nk, nu, nu))
    for s in range(nu):
        e[:, s, s] = 1.0 / math.factorial(s)
        for j in range(s + 1, nu):
            acc = np.zeros(nk)
            for i in range(s, j):
                acc += e[:, s, i] * b[:, j - i]
            e[:, s, j] = -acc
    return e if np.asarray(taylor_b).ndim == 2 else e[0]


def build_fundamental(nodes, l=0):
    """FundamentalCoeffs for the node set at smoothness order l."""
    nu = nodes.nu
    if not 0 <= l <= nu - 1:
        raise ConfigError(f"l must lie in 0..nu-1, got {l}")
    c = _taylor_c_all(nodes, nu - 1)
    b = _series_power(c, nu)
    return FundamentalCoeffs(nu=nu, l=l, taylor_c=c, taylor_b=b,
                             e=e_coeffs(nu, b))


def _assemble(nodes, fc, coef, x):
    """sum_k l_k(x)^nu * sum_i coef[k, i] (x - x_k)^i, vectorized over x.

    Near a node the k-th term switches to its truncated Taylor expansion
    S[k, j] = sum_i coef[k, i] b[k, j-i]; the neglected remainder is
    O(dx^nu) and dx < 1e-8 * gap there.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    scalar = np.isscalar(x) or np.asarray(x).ndim == 0
    nu = fc.nu
    xk = nodes.x
    pn = _pn_values(nodes, xs)

    dx = xs[None, :] - xk[:, None]
    near = np.abs(dx) < _NEAR_FACTOR * nodes.gap[:, None]
    dx_safe = np.where(near, 1.0, dx)
    lk = pn[None, :] / (dx_safe * nodes.pn_deriv[1][:, None])
    poly = np.zeros_like(dx)
    for i in range(nu - 1, -1, -1):
        poly = poly * dx + coef[:, i][:, None]
    terms = lk ** nu * poly

    if np.any(near):
        S = np.zeros((nodes.n, nu))
        for j in range(nu):
            S[:, j] = np.sum(coef[:, :j + 1] * fc.taylor_b[:, j::-1], axis=1)
        ser = np.zeros_like(dx)
        for j in range(nu - 1, -1, -1):
            ser = ser * dx + S[:, j][:, None]
        terms = np.where(near, ser, terms)

    out = terms.sum(axis=0)
    return float(out[0]) if scalar else out


def _pn_values(nodes, xs):
    from .orthopoly import eval_pn
    return eval_pn(nodes.table, nodes.n, xs, 0)[0]


def eval_fundamental(nodes, fc, s, k, x):
    """h_{s,k}(x) with l_k evaluated from the recurrence, never from a
    stored coefficient expansion."""
    if not 0 <= s <= fc.nu - 1:
        raise ConfigError("s must lie in 0..nu-1")
    if not 0 <= k < nodes.n:
        raise ConfigError("node index out of range")
    coef = np.zeros((nodes.n, fc.nu))
    coef[k, s:] = fc.e[k, s, s:]
    return _assemble(nodes, fc, coef, x)


def _fvals(f, nodes, l):
    """f^{(s)}(x_k) for s = 0..l as an (l+1, n) array."""
    vals = np.empty((l + 1, nodes.n))
    if callable(f) and not hasattr(f, "value"):
        if l > 0:
            raise ConfigError("plain callables carry no derivatives; need l = 0")
        vals[0] = np.asarray(f(nodes.x), dtype=float)
        return vals
    vals[0] = np.asarray(f.value(nodes.x), dtype=float)
    for s in range(1, l + 1):
        vals[s] = np.asarray(f.deriv(s, nodes.x), dtype=float)
    return vals


def eval_L(nodes, fc, f, x, l=None):
    """L_n(l, nu, f; x); l = 0 gives the pure Hermite-Fejer operator."""
    l = fc.l if l is None else l
    if not 0 <= l <= fc.nu - 1:
        raise ConfigError(f"l must lie in 0..nu-1, got {l}")
    fv = _fvals(f, nodes, l)
    coef = np.zeros((nodes.n, fc.nu))
    for i in range(fc.nu):
        for s in range(0, min(i, l) + 1):
            coef[:, i] += fv[s] * fc.e[:, s, i]
    return _assemble(nodes, fc, coef, x)


def eval_split(nodes, fc, f, x, l=None):
    """The (X, Y, Z) decomposition with X + Y = L_n(nu, f) and
    X + Y + Z = L_n(l, nu, f)."""
    l = fc.l if l is None else l
    if not 0 <= l <= fc.nu - 1:
        raise ConfigError(f"l must lie in 0..nu-1, got {l}")
    fv = _fvals(f, nodes, l)
    nu = fc.nu

    coef_x = fv[0][:, None] * fc.e[:, 0, :]
    coef_x[:, nu - 1] = 0.0
    coef_y = np.zeros((nodes.n, nu))
    coef_y[:, nu - 1] = fv[0] * fc.e[:, 0, nu - 1]
    coef_z = np.zeros((nodes.n, nu))
    for i in range(nu):
        for s in range(1, min(i, l) + 1):
            coef_z[:, i] += fv[s] * fc.e[:, s, i]

    return (_assemble(nodes, fc, coef_x, x),
            _assemble(nodes, fc, coef_y, x),
            _assemble(nodes, fc, coef_z, x))


@dataclass
class CoeffBoundReport:
    """Observed e-coefficient magnitudes against the lemma-level envelopes.

    ratio_tri[s, i]    : max_k |e_{s,i}| / (n / sqrt(a_{2n}^2 - x_k^2))^{i-s}
    ratio_parity[i]    : max_k |e_{0,i}| / parity-split envelope (offcenter nodes)
    ratio_center[i]    : |e_{0,i}| / (n/a_n)^i at the pinned middle zero, if any
    """

    n: int
    nu: int
    ratio_tri: np.ndarray
    ratio_parity: np.ndarray
    ratio_center: np.ndarray


def coeff_bound_diag(nodes, fc):
    """Record the coefficient-bound ratios; boundedness across n is a trend
    to be checked by the harness, never asserted pointwise."""
    from .weights import q_derivs, t_func
    n, nu = nodes.n, fc.nu
    solver = nodes.solver
    a_n = solver.mrs_number(float(n))
    a_2n = solver.mrs_number(2.0 * n)
    xk = nodes.x

    env_base = n / np.sqrt(np.maximum(a_2n ** 2 - xk ** 2, 1e-300))
    ratio_tri = np.zeros((nu, nu))
    for s in range(nu):
        for i in range(s, nu):
            ratio_tri[s, i] = np.max(np.abs(fc.e[:, s, i]) / env_base ** (i - s))

    t_an = t_func(nodes.table.spec, a_n)
    d_n = solver.delta_u(float(n))
    off = (xk != 0.0) & (np.abs(xk) <= a_n * (1.0 + d_n))
    ratio_parity = np.zeros(nu)
    ratio_parity[0] = np.max(np.abs(fc.e[off, 0, 0]))
    if np.any(off):
        qp = q_derivs(nodes.table.spec, xk[off], 1)[1]
        first = t_an / a_n + np.abs(qp) + 1.0 / np.abs(xk[off])
        second = n / (a_2n - np.abs(xk[off])) + t_an / a_n
        for i in range(1, nu):
            par = i % 2
            env = first ** par * second ** (i - par)
            ratio_parity[i] = np.max(np.abs(fc.e[off, 0, i]) / env)

    ratio_center = np.zeros(nu)
    center = np.where(xk == 0.0)[0]
    if center.size:
        k0 = center[0]
        for i in range(nu):
            ratio_center[i] = abs(fc.e[k0, 0, i]) / (n / a_n) ** i

    return CoeffBoundReport(n=n, nu=nu, ratio_tri=ratio_tri,
                            ratio_parity=ratio_parity,
                            ratio_center=ratio_center)
