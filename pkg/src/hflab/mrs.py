"""Mhaskar-Rakhmanov-Saff numbers and the derived scale functions.

a_t solves  t = (2/pi) * int_0^1 a_t u Q'(a_t u) / sqrt(1 - u^2) du.
The substitution u = sin(theta) removes the endpoint singularity exactly,
after which composite Gauss-Legendre converges spectrally.  The right-hand
side is strictly increasing in a_t, so bracketing plus Brent is robust.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, ConvergenceError, ScaleOverflowError
from .weights import q_derivs


@dataclass
class MrsSolver:
    """Root solver for the MRS defining equation, with an a_t cache."""

    spec: object
    quad_points: int = 256
    tol: float = 1e-12
    gamma: float = None
    _cache: dict = field(default_factory=dict, repr=False)
    _rules: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.quad_points < 64:
            raise ConfigError("quad_points must be >= 64")
        if not 0 < self.tol <= 1e-6:
            raise ConfigError("tol must lie in (0, 1e-6]")
        if self.gamma is None:
            # Freud weights force gamma = 0; Erdos families default to 0.1
            self.gamma = 0.0 if self.spec.family.is_freud else 0.1
        if not 0.0 <= self.gamma < 1.0:
            raise ConfigError("gamma must lie in [0, 1)")

    def _rule(self, points):
        if points not in self._rules:
            u, w = np.polynomial.legendre.leggauss(points)
            theta = (u + 1.0) * (math.pi / 4.0)
            self._rules[points] = (np.sin(theta), w * (math.pi / 4.0))
        return self._rules[points]

    def _rhs(self, a, points=None):
        s, w = self._rule(points or self.quad_points)
        x = a * s
        qp = q_derivs(self.spec, x, 1)[1]
        return (2.0 / math.pi) * float(np.dot(w, x * qp))

    def mrs_number(self, t):
        """The MRS number a_t for t > 0 (cached)."""
        t = float(t)
        if t <= 0:
            raise ConfigError("mrs_number requires t > 0")
        if t in self._cache:
            return self._cache[t]

        a_lo = a_hi = 1.0
        try:
            for _ in range(200):
                if self._rhs(a_hi) >= t:
                    break
                a_hi *= 2.0
            else:
                raise ConvergenceError("no upper bracket for a_t")
        except ScaleOverflowError as exc:
            raise ScaleOverflowError(
                f"a_{t} exceeds the overflow limit of {self.spec.family.label()}"
            ) from exc
        for _ in range(200):
            if self._rhs(a_lo) <= t:
                break
            a_lo /= 2.0
        else:
            raise ConvergenceError("no lower bracket for a_t")

        a = brentq(lambda v: self._rhs(v) - t, a_lo, a_hi,
                   rtol=max(self.tol, 1e-15), maxiter=200)
        resid = abs(self._rhs(a, points=2 * self.quad_points) - t) / t
        if resid > 10.0 * self.tol:
            raise ConvergenceError(
                f"a_{t}: residual {resid:.3e} above tolerance under quadrature "
                "doubling", residual=resid)
        self._cache[t] = a
        return a

    def residual(self, t):
        """Relative defect of the defining equation at a_t under quadrature
        doubling; a direct self-check independent of the solve path."""
        t = float(t)
        a = self.mrs_number(t)
        return abs(self._rhs(a, points=2 * self.quad_points) - t) / t

    def t_at(self, u):
        """T(a_u)."""
        from .weights import t_func
        return t_func(self.spec, self.mrs_number(u))

    def delta_u(self, u):
        """delta_u = (u T(a_u))^{-2/3}."""
        if u <= 0:
            raise ConfigError("delta_u requires u > 0")
        return (u * self.t_at(u)) ** (-2.0 / 3.0)

    def phi_u(self, u, x):
        """The spacing function phi_u(x), clamped to its value at a_u outside.

        The prefactor is a_u/u, which gives phi_u(0) ~ a_u/u, the actual
        zero spacing scale near the origin (a |x|/u prefactor would vanish
        at 0 and break the spacing comparison it is meant to satisfy).
        """
        if u <= 0:
            raise ConfigError("phi_u requires u > 0")
        a_u = self.mrs_number(u)
        a_2u = self.mrs_number(2.0 * u)
        d_u = self.delta_u(u)

        def inner(ax):
            return (a_u / u) * (1.0 - ax / a_2u) / np.sqrt(1.0 - ax / a_u + d_u)

        ax = np.abs(np.asarray(x, dtype=float))
        out = np.where(ax <= a_u, inner(np.minimum(ax, a_u)), inner(a_u))
        return float(out) if np.isscalar(x) or np.asarray(x).ndim == 0 else out

    def phi_n_factor(self, n, x):
        """Phi_n(x) = max(delta_n, 1 - |x|/a_n)."""
        if n < 1:
            raise ConfigError("phi_n_factor requires n >= 1")
        d_n = self.delta_u(float(n))
        a_n = self.mrs_number(float(n))
        out = np.maximum(d_n, 1.0 - np.abs(np.asarray(x, dtype=float)) / a_n)
        return float(out) if np.isscalar(x) or np.asarray(x).ndim == 0 else out

    def eps_n(self, n, gamma=None):
        """The normalizing sequence eps_n, following the printed branch split
        (strict < 1 vs >= 1 on T(a_n)/a_n)."""
        if n < 1:
            raise ConfigError("eps_n requires n >= 1")
        g = self.gamma if gamma is None else gamma
        if not 0.0 <= g < 1.0:
            raise ConfigError("gamma must lie in [0, 1)")
        a_n = self.mrs_number(float(n))
        if self.t_at(float(n)) / a_n < 1.0:
            return a_n / n
        return 1.0 / n ** (1.0 - g)


@dataclass
class ScaleTable:
    """Precomputed (t, a_t) rows plus the eps_n map for a run."""

    entries: dict
    gamma_bound: float
    eps: dict

    @classmethod
    def build(cls, solver, t_list):
        entries = {float(t): solver.mrs_number(t) for t in t_list}
        ts = sorted(entries)
        for t1, t2 in zip(ts, ts[1:]):
            if not entries[t1] < entries[t2]:
                raise ConvergenceError("a_t failed strict monotonicity")
        eps = {int(t): solver.eps_n(int(t)) for t in t_list if float(t).is_integer()}
        return cls(entries=entries, gamma_bound=solver.gamma, eps=eps)


def freud_mrs_closed_form(m, t):
    """Analytic a_t for Q = |x|^m, used as an independent oracle.

    From int_0^1 u^m (1-u^2)^{-1/2} du = (sqrt(pi)/2) Gamma((m+1)/2) / Gamma(m/2+1):
    t = (2/pi) m a^m I_m  =>  a_t = (pi t / (2 m I_m))^{1/m}.
    """
    i_m = (math.sqrt(math.pi) / 2.0) * math.gamma((m + 1.0) / 2.0) / math.gamma(m / 2.0 + 1.0)
    return (math.pi * t / (2.0 * m * i_m)) ** (1.0 / m)
