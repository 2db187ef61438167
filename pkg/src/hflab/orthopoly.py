"""Orthonormal polynomials for w_rho^2, their zeros and derivatives.

Recurrence coefficients come from the discretized Stieltjes procedure
carried in multiprecision arithmetic (mpmath); raw moment determinants
would lose about one digit per degree for exponential weights.  The
measure is even, so the monic recurrence is

    pi_{k+1}(x) = x pi_k(x) - beta_k pi_{k-1}(x),

and the orthonormal off-diagonal entries are b_k = sqrt(beta_k).
"""

import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import (ConfigError, ConvergenceError, DomainError,
                     PrecisionError, ScaleOverflowError)
from .mrs import MrsSolver
from .weights import q_eval

_RESCALE_LIMIT = 2.0 ** 500
_RESCALE_SHIFT = 512


@dataclass
class RecurrenceTable:
    """Monic three-term recurrence data for one (family, rho) pair.

    beta[k-1] holds beta_k for k = 1..N; beta0 is the total mass of
    w_rho^2.  The multiprecision values used to build the table are kept
    for zero polishing.
    """

    spec: object
    N: int
    digits: int
    beta0: float
    beta: np.ndarray
    support: float
    beta0_mp: object = field(repr=False, default=None)
    beta_mp: list = field(repr=False, default=None)
    _gram_cache: dict = field(default_factory=dict, repr=False)

    @property
    def b(self):
        """Orthonormal off-diagonal entries sqrt(beta_k), k = 1..N."""
        return np.sqrt(self.beta)

    def gamma_ratio(self, n):
        """b_n = gamma_{n-1}/gamma_n."""
        if not 1 <= n <= self.N:
            raise ConfigError(f"n={n} outside table range 1..{self.N}")
        return float(self.b[n - 1])


@dataclass
class NodeSet:
    """Zeros of p_n (descending) with derivative and spacing data."""

    n: int
    nu: int
    x: np.ndarray              # x[0] = x_{1,n} > ... > x[n-1] = x_{n,n}
    pn_deriv: np.ndarray       # shape (nu+1, n); row j = p_n^{(j)}(x_k)
    varphi: np.ndarray         # phi_n(x_k)
    gap: np.ndarray            # distance to nearest neighboring zero
    x_outer: float             # proof device x_{0,n} = x_{1,n} + phi_n(x_{1,n})
    table: RecurrenceTable
    solver: MrsSolver


def _mp_leggauss(npts):
    """Gauss-Legendre nodes/weights at the current mpmath precision.

    Double-precision seeds are polished by Newton on the Legendre
    recurrence; four iterations reach well past 30 digits.
    """
    xs, _ = np.polynomial.legendre.leggauss(npts)
    nodes, weights = [], []
    for x0 in xs:
        x = mp.mpf(float(x0))
        for _ in range(4):
            p_prev, p_cur = mp.mpf(1), x
            for k in range(1, npts):
                p_prev, p_cur = p_cur, ((2 * k + 1) * x * p_cur - k * p_prev) / (k + 1)
            dp = npts * (x * p_cur - p_prev) / (x * x - 1)
            x = x - p_cur / dp
        p_prev, p_cur = mp.mpf(1), x
        for k in range(1, npts):
            p_prev, p_cur = p_cur, ((2 * k + 1) * x * p_cur - k * p_prev) / (k + 1)
        dp = npts * (x * p_cur - p_prev) / (x * x - 1)
        nodes.append(x)
        weights.append(2 / ((1 - x * x) * dp * dp))
    return nodes, weights


def _support_radius(spec, solver, N):
    """Truncation radius: a_{4N}, widened until exp(-2Q) is below 1e-52.

    The region beyond a_{rn} carries exponentially small mass for
    polynomials of degree <= N, and Q >= 60 pins the raw tail of the
    weight itself below 1e-52 of the total.
    """
    rad = solver.mrs_number(4.0 * max(N, 1))
    x = rad
    for _ in range(200):
        if q_eval(spec, x, 0) >= 60.0:
            break
        x *= 1.5
    return max(rad, x)


def _stieltjes_pass(spec, N, breakpoints, xg, wg):
    """One discretized-Stieltjes sweep over a composite GL grid (x > 0)."""
    nodes, wts = [], []
    two = mp.mpf(2)
    for lo, hi in zip(breakpoints[:-1], breakpoints[1:]):
        mid = (lo + hi) / two
        half = (hi - lo) / two
        for xi, wi in zip(xg, wg):
            x = mid + half * xi
            wq = half * wi * x ** (2 * mp.mpf(spec.rho)) * mp.exp(-2 * spec.family.q_mp(x))
            nodes.append(x)
            wts.append(wq)

    s0 = 2 * mp.fsum(wts)
    pi_prev = [mp.mpf(0)] * len(nodes)
    pi_cur = [mp.mpf(1)] * len(nodes)
    s_prev = s0
    betas = []
    beta_k = mp.mpf(0)
    for _ in range(N):
        pi_prev, pi_cur = pi_cur, [
            x * pc - beta_k * pp for x, pc, pp in zip(nodes, pi_cur, pi_prev)
        ]
        s_cur = 2 * mp.fsum(w * p * p for w, p in zip(wts, pi_cur))
        if s_cur <= 0:
            raise PrecisionError(
                "Stieltjes inner product lost positivity; increase digits "
                f"(stable up to k={len(betas)})")
        beta_k = s_cur / s_prev
        betas.append(beta_k)
        s_prev = s_cur
    return s0, betas


def stieltjes_recurrence(spec, N, digits=30, solver=None, max_refine=7):
    """Recurrence coefficients beta_1..beta_N by the discretized Stieltjes
    procedure at >= `digits` significant digits.

    The discretization is refined (panel doubling) until every beta_k moves
    by less than 1e-12 relative, per the self-check contract.
    """
    if N < 1:
        raise ConfigError("N must be >= 1")
    if digits < 30:
        raise ConfigError("digits must be >= 30")
    solver = solver or MrsSolver(spec)
    rad = _support_radius(spec, solver, N)

    with mp.workdps(digits + 10):
        rad_mp = mp.mpf(rad)
        xg, wg = _mp_leggauss(max(48, min(96, N + 24)))
        graded = not float(2 * spec.rho).is_integer()
        panels = 8
        prev = None
        for _ in range(max_refine + 1):
            bps = [rad_mp * k / panels for k in range(panels + 1)]
            if graded:
                # resolve the |x|^{2 rho} kink with a geometric cascade at 0
                bps = sorted(set(bps) | {rad_mp * mp.mpf(2) ** (-j)
                                         for j in range(int(math.log2(panels)) + 1, 40)})
            beta0, betas = _stieltjes_pass(spec, N, bps, xg, wg)
            if prev is not None:
                p0, pb = prev
                diffs = [abs(b - a) / b for a, b in zip(pb, betas)]
                diffs.append(abs(beta0 - p0) / beta0)
                if max(diffs) < 1e-12:
                    return RecurrenceTable(
                        spec=spec, N=N, digits=digits,
                        beta0=float(beta0),
                        beta=np.array([float(b) for b in betas]),
                        support=rad,
                        beta0_mp=beta0, beta_mp=betas)
            prev = (beta0, betas)
            panels *= 2
        raise PrecisionError(
            "discretization did not stabilize to 1e-12; increase digits or "
            "max_refine")


def eval_pn(table, n, x, max_order=0, return_scale=False):
    """p_n and derivatives up to max_order via the differentiated recurrence.

    Returns an array of shape (max_order+1, len(x)) (or scalars for scalar
    x).  Intermediate growth is handled by periodic binary rescaling; the
    scale is returned separately when return_scale is set.
    """
    if not 0 <= n <= table.N:
        raise ConfigError(f"n={n} outside table range 0..{table.N}")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    scalar = np.isscalar(x) or np.asarray(x).ndim == 0
    J = max_order
    M = xs.size
    b = table.b
    P_prev = np.zeros((J + 1, M))
    P_cur = np.zeros((J + 1, M))
    P_cur[0] = 1.0 / math.sqrt(table.beta0)
    E = np.zeros(M, dtype=np.int64)
    for k in range(n):
        b_k = b[k - 1] if k >= 1 else 0.0
        b_k1 = b[k]
        P_next = np.empty_like(P_cur)
        P_next[0] = (xs * P_cur[0] - b_k * P_prev[0]) / b_k1
        for j in range(1, J + 1):
            P_next[j] = (xs * P_cur[j] + j * P_cur[j - 1] - b_k * P_prev[j]) / b_k1
        P_prev, P_cur = P_cur, P_next
        colmax = np.max(np.abs(P_cur), axis=0)
        big = colmax > _RESCALE_LIMIT
        if np.any(big):
            P_cur[:, big] = np.ldexp(P_cur[:, big], -_RESCALE_SHIFT)
            P_prev[:, big] = np.ldexp(P_prev[:, big], -_RESCALE_SHIFT)
            E[big] += _RESCALE_SHIFT
    if return_scale:
        if scalar:
            return P_cur[:, 0], int(E[0])
        return P_cur, E
    out = np.ldexp(P_cur, E[np.newaxis, :])
    if np.any(np.isinf(out)):
        raise ScaleOverflowError(
            "p_n value exceeds double range even after rescaling")
    return out[:, 0] if scalar else out


def eval_weighted_all(table, upto, x):
    """w_rho(x) * p_k(x) for all k = 0..upto, overflow-free by construction."""
    from .weights import w_rho_eval
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    b = table.b
    out = np.zeros((upto + 1, xs.size))
    with np.errstate(under="ignore"):
        r_prev = np.zeros(xs.size)
        r_cur = w_rho_eval(table.spec, xs) / math.sqrt(table.beta0)
        out[0] = r_cur
        for k in range(upto):
            b_k = b[k - 1] if k >= 1 else 0.0
            r_prev, r_cur = r_cur, (xs * r_cur - b_k * r_prev) / b[k]
            out[k + 1] = r_cur
    return out


def _monic_mp(table, n, x, want_deriv=True):
    """Monic pi_n(x) and pi_n'(x) in multiprecision."""
    betas = table.beta_mp
    p_prev, p_cur = mp.mpf(0), mp.mpf(1)
    d_prev, d_cur = mp.mpf(0), mp.mpf(0)
    for k in range(n):
        beta_k = betas[k - 1] if k >= 1 else mp.mpf(0)
        p_prev, p_cur = p_cur, x * p_cur - beta_k * p_prev
        if want_deriv:
            d_prev, d_cur = d_cur, p_prev + x * d_cur - beta_k * d_prev
    return p_cur, d_cur


def zeros(table, n, solver=None, nu=None):
    """NodeSet for p_n: tridiagonal eigenvalues polished by guarded Newton.

    Symmetry is enforced exactly: the zero set is mirrored from its
    positive half and the middle zero of odd n is pinned to 0.
    """
    if not 1 <= n <= table.N:
        raise ConfigError(f"n={n} outside table range 1..{table.N}")
    solver = solver or MrsSolver(table.spec)
    nu = nu if nu is not None else table.spec.nu

    if n == 1:
        x = np.array([0.0])
    else:
        ev = eigh_tridiagonal(np.zeros(n), table.b[:n - 1], eigvals_only=True)
        x = ev[::-1].copy()
        x = 0.5 * (x - x[::-1])
        if n % 2 == 1:
            x[n // 2] = 0.0
        gaps = np.empty(n)
        gaps[:-1] = x[:-1] - x[1:]
        gaps[-1] = gaps[-2] if n > 1 else 1.0
        gaps = np.minimum(gaps, np.concatenate(([gaps[0]], gaps[:-1])))
        with mp.workdps(table.digits + 10):
            for k in range(n // 2):
                z = mp.mpf(float(x[k]))
                limit = mp.mpf(float(gaps[k])) / 2
                for _ in range(3):
                    p, dp = _monic_mp(table, n, z)
                    if dp == 0:
                        break
                    step = p / dp
                    if abs(step) > limit:
                        break  # keep the eigenvalue estimate; ordering wins
                    z = z - step
                x[k] = float(z)
        x[n - n // 2:] = -x[:n // 2][::-1]
        if n % 2 == 1:
            x[n // 2] = 0.0

    if not np.all(np.diff(x) < 0):
        raise ConvergenceError("zero ordering lost after polishing")

    pn = eval_pn(table, n, x, max_order=max(nu, 1))
    if np.any(pn[1] == 0.0):
        raise ConvergenceError("vanishing p_n' at a node")

    varphi = np.asarray(solver.phi_u(float(n), x), dtype=float)
    if n == 1:
        gap = np.array([solver.mrs_number(1.0)])
    else:
        d = -np.diff(x)
        gap = np.minimum(np.concatenate((d, [d[-1]])),
                         np.concatenate(([d[0]], d)))
    return NodeSet(n=n, nu=nu, x=x, pn_deriv=pn, varphi=varphi, gap=gap,
                   x_outer=float(x[0] + varphi[0]), table=table, solver=solver)


def _gram(table, upto, solver, tol=1e-11, max_refine=8):
    """Gram matrix of p_0..p_upto against w_rho^2 by an independent
    composite Gauss-Legendre rule with panel-doubling control."""
    key = upto
    if key in table._gram_cache:
        return table._gram_cache[key]
    rad = table.support
    xg, wg = np.polynomial.legendre.leggauss(24)
    panels = max(8, upto // 2)
    prev = None
    for _ in range(max_refine + 1):
        edges = np.linspace(-rad, rad, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        xs = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
        ws = (half[:, None] * wg[None, :]).ravel()
        R = eval_weighted_all(table, upto, xs)
        G = (R * ws) @ R.T
        if prev is not None and np.max(np.abs(G - prev)) < tol:
            table._gram_cache[key] = G
            return G
        prev = G
        panels *= 2
    raise PrecisionError("orthonormality quadrature did not stabilize")


def orthonormality_residual(table, m, n, solver=None, tol=1e-11):
    """|integral p_m p_n w_rho^2 - delta_mn| by independent quadrature."""
    if not (0 <= m <= table.N and 0 <= n <= table.N):
        raise ConfigError("m, n must lie in 0..N")
    solver = solver or MrsSolver(table.spec)
    G = _gram(table, max(m, n), solver, tol=tol)
    return float(abs(G[m, n] - (1.0 if m == n else 0.0)))


def spacing_diag(nodes):
    """Consecutive-zero spacing over the spacing function:
    (x_j - x_{j+1}) / phi_n(x_j) for j = 1..n-1.

    The comparison constants are existential; callers record the observed
    band, they never assert a particular value.
    """
    if nodes.n < 2:
        raise ConfigError("spacing diagnostic needs n >= 2")
    return -np.diff(nodes.x) / nodes.varphi[:-1]


def sup_bound_diag(table, n, solver=None, num=4000):
    """Grid supremum of |p_n w| (|x| + a_n/n)^rho Phi^{1/4}, times a_n^{1/2}.

    The product is expected to stay in a band of moderate width across n.
    The grid concentrates points around a_n, where the supremum lives.
    """
    from .weights import q_derivs
    if not 1 <= n <= table.N:
        raise ConfigError(f"n={n} outside table range 1..{table.N}")
    solver = solver or MrsSolver(table.spec)
    spec = table.spec
    a_n = solver.mrs_number(float(n))
    a_2n = solver.mrs_number(2.0 * n)
    xs = np.unique(np.concatenate([
        np.linspace(a_2n / num, a_2n, num),
        a_n * np.linspace(0.8, 1.2, 1001)]))
    R = eval_weighted_all(table, n, xs)[n]          # w_rho * p_n
    fac = ((xs + a_n / n) / xs) ** spec.rho          # w_rho -> w (|x|+a_n/n)^rho
    d = q_derivs(spec, xs, 1)
    q = d[0]
    t = xs * d[1] / q
    phi = 1.0 / ((1.0 + q) ** (2.0 / 3.0) * t)
    return float(np.max(np.abs(R) * fac * phi ** 0.25) * math.sqrt(a_n))
