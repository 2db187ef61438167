"""Weighted L_p error functionals and the convergence-run harness.

The theorem functional weighs an error g by

    W(x) = (1+|x|)^{-Delta} * { Phi(x)^{3/4} w(x) (|x| + a_n/n)^rho }^nu

and takes its L_p(R) norm.  Integrals are truncated at a_{4n}: the
exterior region carries exponentially small mass for weighted polynomials
(restricted-range behavior), and the residual tail is certified by the
convexity of Q plus a sampled check.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, GateRejection, QuadratureError
from .interp import build_fundamental, eval_split
from .orthopoly import zeros as node_zeros
from .weights import q_derivs


@dataclass(frozen=True)
class NormSpec:
    """Parameters of the weighted L_p functional.

    Construction enforces the exponent compatibility condition
    Delta >= 1/p - min(1, alpha); violations are gate rejections, not
    numerical failures.
    """

    p: float
    Delta: float
    alpha: float
    nu: int
    rho: float = 0.0
    eta: float = 0.5

    def __post_init__(self):
        if not 1.0 < self.p < math.inf:
            raise ConfigError(f"p must lie in (1, inf), got {self.p}")
        if not self.Delta > -1.0:
            raise ConfigError(f"Delta must exceed -1, got {self.Delta}")
        if not self.alpha > 0.0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if not 0.0 < self.eta < 1.0:
            raise ConfigError(f"eta must lie in (0, 1), got {self.eta}")
        if self.nu < 2:
            raise ConfigError("nu must be >= 2")
        if self.Delta < 1.0 / self.p - min(1.0, self.alpha) - 1e-15:
            raise GateRejection(
                f"exponent condition violated: Delta={self.Delta} < "
                f"1/p - min(1, alpha) = {1.0 / self.p - min(1.0, self.alpha)}")


def theorem_weight(nspec, spec, solver, n, x):
    """W(x) of the theorem functional, computed in log space."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs == 0.0):
        raise ConfigError("theorem_weight requires x != 0 (Phi undefined at 0)")
    a_n = solver.mrs_number(float(n))
    d = q_derivs(spec, xs, 1)
    q = d[0]
    t = xs * d[1] / q
    log_phi = -(2.0 / 3.0) * np.log1p(q) - np.log(t)
    ax = np.abs(xs)
    logw = (-nspec.Delta * np.log1p(ax)
            + nspec.nu * (0.75 * log_phi - q
                          + nspec.rho * np.log(ax + a_n / n)))
    with np.errstate(under="ignore", over="ignore"):
        out = np.exp(logw)
    if np.any(np.isinf(out)):
        raise QuadratureError("theorem weight overflowed")
    return out if np.asarray(x).ndim else float(out[0])


def _panel_grid(breakpoints, order):
    xg, wg = np.polynomial.legendre.leggauss(order)
    mid = 0.5 * (breakpoints[:-1] + breakpoints[1:])
    half = 0.5 * (breakpoints[1:] - breakpoints[:-1])
    xs = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    ws = (half[:, None] * wg[None, :]).ravel()
    return xs, ws


def multi_weighted_norms(nspec, spec, solver, n, g_multi, nrows,
                         node_x=None, rtol=1e-7, max_refine=6, order=16):
    """L_p norms of W * g for several g rows sharing one adaptive grid.

    Panels are delimited by the interpolation nodes and 0, refined by
    global doubling until every row's norm is stable to `rtol` relative
    (rows at the noise floor converge on an absolute 1e-300 fallback).

    Returns (norms, errests, tail_fraction).
    """
    a4 = solver.mrs_number(4.0 * n)
    pts = [-a4, 0.0, a4]
    if node_x is not None:
        pts.extend(float(v) for v in node_x)
    base = np.array(sorted(set(pts)))
    if base[0] != -a4 or base[-1] != a4:
        raise ConfigError("interpolation nodes must lie inside [-a_4n, a_4n]")

    p = nspec.p
    prev = None
    splits = 1
    for level in range(max_refine + 1):
        bps = np.unique(np.concatenate(
            [np.linspace(base[i], base[i + 1], splits + 1)
             for i in range(base.size - 1)]))
        xs, ws = _panel_grid(bps, order)
        W = theorem_weight(nspec, spec, solver, n, xs)
        G = np.atleast_2d(g_multi(xs))
        I = np.abs(W[None, :] * G) ** p @ ws
        norms = I ** (1.0 / p)
        if prev is not None:
            change = np.abs(norms - prev) / np.maximum(norms, 1e-300)
            change[norms < 1e-250] = 0.0
            if np.all(change < rtol):
                tail = _tail_norms(nspec, spec, solver, n, g_multi, a4, p, nrows)
                total = (norms ** p + tail) ** (1.0 / p)
                tail_frac = float(np.max(np.where(norms > 0, tail / np.maximum(norms ** p, 1e-300), 0.0)))
                return total, change, tail_frac
        prev = norms
        splits *= 2
    raise QuadratureError(
        f"weighted norm quadrature did not stabilize to rtol={rtol} at n={n}")


def _tail_norms(nspec, spec, solver, n, g_multi, a4, p, nrows):
    """Integral of |W g|^p over |x| > a_{4n}.

    The band [a_{4n}, 2 a_{4n}] is quadrated directly; beyond 2 a_{4n} the
    convexity of Q gives int exp(-c(Q(x)-Q(b))) dx <= 1/(c Q'(b)), which
    caps the remainder by the integrand value at the edge.
    """
    xg, wg = np.polynomial.legendre.leggauss(32)
    out = np.zeros(nrows)
    for sign in (1.0, -1.0):
        lo, hi = sign * a4, sign * 2.0 * a4
        xs = 0.5 * (lo + hi) + 0.5 * (hi - lo) * xg
        ws = np.abs(0.5 * (hi - lo)) * wg
        W = theorem_weight(nspec, spec, solver, n, xs)
        G = np.atleast_2d(g_multi(xs))
        out += np.abs(W[None, :] * G) ** p @ ws
        edge = np.array([2.0 * a4 * sign])
        h_edge = (np.abs(theorem_weight(nspec, spec, solver, n, edge)
                         * np.atleast_2d(g_multi(edge))[:, 0])) ** p
        qp_edge = float(q_derivs(spec, edge, 1)[1][0])
        out += h_edge / max(nspec.nu * p * abs(qp_edge), 1.0)
    return out


def weighted_lp_norm(nspec, spec, solver, g, n, node_x=None, rtol=1e-7):
    """L_p norm of W * g for a single callable g."""
    norms, _, _ = multi_weighted_norms(
        nspec, spec, solver, n, lambda x: np.atleast_2d(g(x)), 1,
        node_x=node_x, rtol=rtol)
    return float(norms[0])


@dataclass
class ConditionReport:
    """Grid suprema of the growth-condition left sides plus gate verdicts."""

    name: str
    sup_growth: float          # |f| (1+|x|)^a (Phi^{-3/4} w_rho)^nu
    sup_growth_qprime: float   # the same times (|Q'| + 1/|x|)
    sup_deriv: list            # per s = 1..l
    sup_mixed: float           # |f| (1+|x|)^a w^{nu-eta} (|Q'| + 1/|x|)
    f_at_zero: float
    zero_ratio_trend: float    # |f/x| at 1e-9 over |f/x| at 1e-3
    edge_divergent: bool
    cf_working: float
    passed: bool
    reason: str = ""


def check_conditions(nspec, spec, solver, f, n_max, l=0, num=2000):
    """Sample the theorem hypotheses for f on a punctured geometric grid.

    The working constant C_f is the largest observed supremum; rejection
    reasons cite the failing hypothesis.
    """
    if num < 2:
        raise ConfigError("empty sampling grid")
    edge = solver.mrs_number(4.0 * n_max)
    gp = np.geomspace(1e-7, edge, num)
    grid = np.concatenate((-gp[::-1], gp))

    d = q_derivs(spec, grid, 1)
    q, qp = d[0], grid * 0 + d[1]
    t = grid * d[1] / q
    log_phi = -(2.0 / 3.0) * np.log1p(q) - np.log(t)
    ax = np.abs(grid)
    nu, al, eta, rho = nspec.nu, nspec.alpha, nspec.eta, nspec.rho

    with np.errstate(under="ignore"):
        core = np.exp(nu * (-0.75 * log_phi - q) + al * np.log1p(ax)
                      + nu * rho * np.where(ax > 0, np.log(ax), 0.0))
        spike = np.abs(d[1]) + 1.0 / ax
        mixed_w = np.exp(al * np.log1p(ax) - (nu - eta) * q)

    fv = np.abs(np.asarray(f.value(grid), dtype=float))
    lhs_210 = fv * core
    lhs_212 = lhs_210 * spike
    lhs_214 = fv * mixed_w * spike
    sup_deriv = []
    for s in range(1, l + 1):
        sup_deriv.append(float(np.max(np.abs(np.asarray(f.deriv(s, grid))) * core)))

    f0 = float(np.asarray(f.value(np.array([0.0])))[0])
    small = np.array([1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9])
    ratios = np.abs(np.asarray(f.value(small)) / small)
    trend = float(ratios[-1] / max(ratios[0], 1e-300))

    k_edge = max(1, num // 20)
    tail_vals = lhs_214[-k_edge:]
    edge_div = bool(np.argmax(lhs_214) >= grid.size - k_edge
                    and tail_vals[-1] > 2.0 * tail_vals[0])

    reasons = []
    if abs(f0) > 1e-12:
        reasons.append("f(0) != 0, contradicting the growth/limit hypothesis")
    if trend > 10.0:
        reasons.append("f(x)/x diverges as x -> 0")
    if edge_div:
        reasons.append("growth condition still increasing at the grid edge")
    passed = not reasons

    return ConditionReport(
        name=getattr(f, "name", "<callable>"),
        sup_growth=float(np.max(lhs_210)),
        sup_growth_qprime=float(np.max(lhs_212)),
        sup_deriv=sup_deriv,
        sup_mixed=float(np.max(lhs_214)),
        f_at_zero=f0,
        zero_ratio_trend=trend,
        edge_divergent=edge_div,
        cf_working=float(max(np.max(lhs_210), np.max(lhs_212), np.max(lhs_214),
                             max(sup_deriv, default=0.0))),
        passed=passed,
        reason="; ".join(reasons))


def z_normalizer(solver, n, delta_p):
    """a_n^2 log n / n times the three-way Delta*p case factor."""
    a_n = solver.mrs_number(float(n))
    base = a_n ** 2 * math.log(n) / n
    if delta_p < 1.0:
        return base
    if delta_p == 1.0:
        return base * math.log(a_n) / a_n
    return base / a_n


@dataclass
class ErrorReport:
    """Per-n weighted error norms, component norms and normalizer ratios."""

    function: str
    l: int
    n: list = field(default_factory=list)
    a_n: list = field(default_factory=list)
    eps_n: list = field(default_factory=list)
    E_n: list = field(default_factory=list)
    normX: list = field(default_factory=list)
    normY: list = field(default_factory=list)
    normZ: list = field(default_factory=list)
    ratioY: list = field(default_factory=list)
    ratioZ: list = field(default_factory=list)
    quad_err: list = field(default_factory=list)

    COLUMNS = ("n", "a_n", "eps_n", "E_n", "normX", "normY", "normZ",
               "ratioY", "ratioZ", "quad_err")

    def rows(self):
        cols = [getattr(self, c) for c in self.COLUMNS]
        return list(zip(*cols))

    def strictly_decreasing(self):
        return all(b < a for a, b in zip(self.E_n, self.E_n[1:]))


def convergence_run(nspec, spec, solver, table, f, n_list, l=0,
                    quad_rtol=1e-7):
    """Evaluate the theorem functional and component norms across n_list.

    Gates: nu must be even (the convergence theorems cover only even
    order), and f must pass the growth-condition sampler.
    """
    if nspec.nu % 2 != 0:
        raise GateRejection(
            f"nu={nspec.nu} is odd; the L_p convergence theorems cover even "
            "order only")
    if sorted(n_list) != list(n_list):
        raise ConfigError("n_list must be sorted ascending")
    if max(n_list) > table.N:
        raise ConfigError("n_list exceeds the recurrence table range")
    cond = check_conditions(nspec, spec, solver, f, max(n_list), l=l)
    if not cond.passed:
        raise GateRejection(
            f"test function {cond.name!r} rejected: {cond.reason}")

    report = ErrorReport(function=cond.name, l=l)
    dp = nspec.Delta * nspec.p
    for n in n_list:
        nodes = node_zeros(table, n, solver, nu=nspec.nu)
        fc = build_fundamental(nodes, l)

        def g_multi(x, nodes=nodes, fc=fc):
            X, Y, Z = eval_split(nodes, fc, f, x, l)
            err = (X + Y + Z) - np.asarray(f.value(x), dtype=float)
            return np.vstack((err, X, Y, Z))

        norms, errs, _ = multi_weighted_norms(
            nspec, spec, solver, n, g_multi, 4, node_x=nodes.x,
            rtol=quad_rtol)
        a_n = solver.mrs_number(float(n))
        eps = solver.eps_n(n)
        report.n.append(n)
        report.a_n.append(a_n)
        report.eps_n.append(eps)
        report.E_n.append(float(norms[0]))
        report.normX.append(float(norms[1]))
        report.normY.append(float(norms[2]))
        report.normZ.append(float(norms[3]))
        report.ratioY.append(float(norms[2]) / (eps * (a_n + math.log(n))))
        report.ratioZ.append(float(norms[3]) / z_normalizer(solver, n, dp))
        report.quad_err.append(float(np.max(errs)))
    return report
