"""Admissible exponential-type weight families and derived functions.

A weight is w_rho(x) = |x|^rho * exp(-Q(x)) with Q even, Q(0) = 0 and
Q growing at infinity.  Three families are provided:

* ``FreudMonomial(m)``:        Q(x) = |x|^m, m > 1 (Freud type, T == m).
* ``ExpPower(ell, alpha, m)``: Q(x) = |x|^m (exp_ell(|x|^alpha) - a* exp_ell(0))
  where exp_ell is the ell-fold iterated exponential (Erdos type when
  ell >= 1 and alpha > 0).
* ``PowerExp(alpha)``:         Q(x) = (1+|x|)^{|x|^alpha} - 1, alpha > 1.

Derivatives are produced by exact jet arithmetic (see :mod:`hflab.jets`),
never by finite differences.
"""

import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from . import jets
from .errors import ConfigError, DomainError, UnsupportedOrderError


def _exp_tower_const(ell):
    """exp_ell(0): 0, 1, e, e^e, ... for ell = 0, 1, 2, 3, ..."""
    v = mp.mpf(0)
    for _ in range(ell):
        v = mp.exp(v)
    return v


@dataclass(frozen=True)
class FreudMonomial:
    """Q(x) = |x|^m with m > 1."""

    m: float
    delta_smooth: float = 0.0

    def __post_init__(self):
        if not self.m > 1:
            raise ConfigError(f"FreudMonomial requires m > 1, got m={self.m}")
        if not 0.0 <= self.delta_smooth < 1.0:
            raise ConfigError("delta_smooth must lie in [0, 1)")

    @property
    def is_freud(self):
        return True

    @property
    def zero_exponent(self):
        return self.m

    def q_jet(self, x, order):
        # valid for x > 0
        return jets.powr(jets.seed(x, order), self.m)

    def q_mp(self, x):
        return mp.mpf(x) ** self.m

    def label(self):
        return f"freud(m={self.m!r})"


@dataclass(frozen=True)
class ExpPower:
    """Q(x) = |x|^m * (exp_ell(|x|^alpha) - a* exp_ell(0)).

    a* = 0 when alpha = 0 and 1 otherwise (for ell > 0); the ell = 0 case
    degenerates to the monomial |x|^m and then requires m > 1, alpha = 0.
    The common Erdos example exp(x^2) - 1 is ExpPower(ell=1, alpha=2, m=0).
    """

    ell: int
    alpha: float
    m: float
    delta_smooth: float = 0.0

    def __post_init__(self):
        if self.ell < 0 or int(self.ell) != self.ell:
            raise ConfigError("ell must be a nonnegative integer")
        if self.alpha < 0 or self.m < 0:
            raise ConfigError("alpha and m must be nonnegative")
        if not self.alpha + self.m > 1:
            raise ConfigError(
                f"ExpPower requires alpha + m > 1, got {self.alpha + self.m}"
            )
        if self.ell == 0 and not (self.m > 1 and self.alpha == 0):
            raise ConfigError("ExpPower with ell=0 requires m > 1 and alpha = 0")
        if not 0.0 <= self.delta_smooth < 1.0:
            raise ConfigError("delta_smooth must lie in [0, 1)")

    @property
    def is_freud(self):
        # T is bounded iff the exponential tower is inactive
        return self.ell == 0 or self.alpha == 0

    @property
    def _astar(self):
        return 0.0 if self.alpha == 0 else 1.0

    @property
    def zero_exponent(self):
        return self.m + (self.alpha if self.alpha > 0 else 0.0)

    def q_jet(self, x, order):
        xj = jets.seed(x, order)
        if self.alpha == 0:
            tower = jets.const(float(_exp_tower_const(self.ell + 1) if self.ell else 1.0),
                               order, like=xj[0])
            # exp_ell(1) for ell >= 1; exp_0(1) = 1
        else:
            tower = jets.powr(xj, self.alpha)
            for _ in range(self.ell):
                tower = jets.exp(tower)
            tower = jets.shift(tower, -self._astar * float(_exp_tower_const(self.ell)))
        if self.m == 0:
            return tower
        return jets.mul(jets.powr(xj, self.m), tower)

    def q_mp(self, x):
        x = mp.mpf(abs(x))
        if self.alpha == 0:
            tower = _exp_tower_const(self.ell + 1) if self.ell else mp.mpf(1)
        else:
            tower = x ** self.alpha
            for _ in range(self.ell):
                tower = mp.exp(tower)
            tower = tower - self._astar * _exp_tower_const(self.ell)
        if self.m == 0:
            return tower
        return x ** self.m * tower

    def label(self):
        return f"exppower(ell={self.ell!r},alpha={self.alpha!r},m={self.m!r})"


@dataclass(frozen=True)
class PowerExp:
    """Q(x) = (1+|x|)^{|x|^alpha} - 1 with alpha > 1 (Erdos type)."""

    alpha: float
    delta_smooth: float = 0.0

    def __post_init__(self):
        if not self.alpha > 1:
            raise ConfigError(f"PowerExp requires alpha > 1, got {self.alpha}")
        if not 0.0 <= self.delta_smooth < 1.0:
            raise ConfigError("delta_smooth must lie in [0, 1)")

    @property
    def is_freud(self):
        return False

    @property
    def zero_exponent(self):
        return self.alpha + 1.0

    def q_jet(self, x, order):
        xj = jets.seed(x, order)
        inner = jets.mul(jets.powr(xj, self.alpha), jets.log(jets.shift(xj, 1.0)))
        return jets.shift(jets.exp(inner), -1.0)

    def q_mp(self, x):
        x = mp.mpf(abs(x))
        return mp.expm1(x ** self.alpha * mp.log1p(x))

    def label(self):
        return f"powerexp(alpha={self.alpha!r})"


@dataclass(frozen=True)
class WeightSpec:
    """A weight family together with the |x|^rho exponent and the target
    interpolation order nu."""

    family: object
    rho: float = 0.0
    nu: int = 2

    def __post_init__(self):
        if self.rho < 0:
            raise ConfigError(f"rho must be >= 0, got {self.rho}")
        if self.nu < 2 or int(self.nu) != self.nu:
            raise ConfigError(f"nu must be an integer >= 2, got {self.nu}")

    @property
    def max_order(self):
        return self.nu + 1

    def label(self):
        return f"{self.family.label()};rho={self.rho!r}"


def q_derivs(spec, x, max_order):
    """All derivatives Q^(j)(x), j = 0..max_order, as a (max_order+1, ...) array.

    x may be a scalar or an array; zeros are not allowed here (use q_eval
    for the per-point x = 0 conventions).
    """
    if max_order > spec.max_order:
        raise UnsupportedOrderError(
            f"order {max_order} exceeds nu+1 = {spec.max_order} for this spec"
        )
    x = np.asarray(x, dtype=float)
    if np.any(x == 0.0):
        raise DomainError("q_derivs requires x != 0; use q_eval at x = 0")
    ax = np.abs(x)
    jet = spec.family.q_jet(ax, max_order)
    out = np.empty((max_order + 1,) + x.shape)
    sign = np.where(x < 0, -1.0, 1.0)
    for j in range(max_order + 1):
        out[j] = jets.derivative(jet, j) * sign ** j
    return out


def q_eval(spec, x, order=0):
    """Q^(order)(x) by exact differentiation of the closed form."""
    if order > spec.max_order:
        raise UnsupportedOrderError(
            f"order {order} exceeds nu+1 = {spec.max_order} for this spec"
        )
    x = float(x)
    if x == 0.0:
        if order == 0:
            return 0.0
        if order % 2 == 1:
            # odd derivative of an even function
            return 0.0
        ze = spec.family.zero_exponent
        if order < ze:
            return 0.0
        if (isinstance(spec.family, FreudMonomial)
                and float(ze).is_integer() and order == int(ze)):
            return float(math.factorial(int(ze)))
        raise DomainError(
            f"Q^({order}) is singular or unavailable at x = 0 for "
            f"{spec.family.label()}"
        )
    return float(q_derivs(spec, x, order)[order])


def t_func(spec, x):
    """T(x) = x Q'(x) / Q(x), defined for x != 0."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs == 0.0):
        raise DomainError("T(x) is undefined at x = 0")
    d = q_derivs(spec, xs, 1)
    out = xs * d[1] / d[0]
    return float(out) if np.isscalar(x) or xs.ndim == 0 else out


def w_rho_eval(spec, x):
    """w_rho(x) = |x|^rho * exp(-Q(x)); underflow flushes to 0."""
    xs = np.asarray(x, dtype=float)
    scalar = np.isscalar(x) or xs.ndim == 0
    xs = np.atleast_1d(xs)
    out = np.zeros_like(xs)
    nz = xs != 0.0
    if np.any(nz):
        q = q_derivs(spec, xs[nz], 0)[0]
        logv = -q
        if spec.rho != 0.0:
            logv = logv + spec.rho * np.log(np.abs(xs[nz]))
        with np.errstate(under="ignore"):
            out[nz] = np.exp(logv)
    if np.any(~nz):
        out[~nz] = 1.0 if spec.rho == 0.0 else 0.0
    return float(out[0]) if scalar else out


def w_eval(spec, x):
    """Plain w(x) = exp(-Q(x)) without the |x|^rho factor."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.ones_like(xs)
    nz = xs != 0.0
    if np.any(nz):
        with np.errstate(under="ignore"):
            out[nz] = np.exp(-q_derivs(spec, xs[nz], 0)[0])
    return float(out[0]) if np.isscalar(x) or np.asarray(x).ndim == 0 else out


def phi_cap(spec, x):
    """Phi(x) = 1 / ((1 + Q(x))^{2/3} T(x)), x != 0."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs == 0.0):
        raise DomainError("Phi(x) is undefined at x = 0 (T undefined there)")
    d = q_derivs(spec, xs, 1)
    t = xs * d[1] / d[0]
    out = 1.0 / ((1.0 + d[0]) ** (2.0 / 3.0) * t)
    return float(out) if np.isscalar(x) or xs.ndim == 0 else out


def geometric_grid(x_min, x_max, num):
    """Strictly positive geometric grid used by the sampling diagnostics."""
    if num < 2 or not (0 < x_min < x_max):
        raise ConfigError("grid requires 0 < x_min < x_max and num >= 2")
    return np.geomspace(x_min, x_max, num)


@dataclass
class ClassMembershipReport:
    """Sampled diagnostics for the weight-class conditions.

    All entries are observed margins or fitted constants on the grid; no
    boolean verdicts are attached because the defining constants are
    existential.
    """

    spec_label: str
    grid_min: float
    grid_max: float
    lambda_fit: float            # min T on grid (the fitted Lambda)
    t_quasi_increase_const: float  # max over x<y of T(x)/T(y)
    t_monotone_violations: int
    c1_fit: float                # Def (e): max Q''(x) Q(x) / Q'(x)^2
    c2_fit: float                # lower companion of the same ratio
    ci_fits: list = field(default_factory=list)  # per i: max |Q^(i+1)| Q / (|Q^(i)| |Q'|)
    qderiv_min: list = field(default_factory=list)  # per order: min Q^(j) on grid
    delta_fit: float = 0.0       # max Q^(nu+1)(x) * x^delta_smooth on (0, 1]


def check_class_membership(spec, x_min=1e-7, x_max=10.0, num=400):
    """Sample the Definition-level weight-class conditions on a geometric grid.

    Reports fitted constants and worst violation margins per condition;
    see :class:`ClassMembershipReport`.
    """
    grid = geometric_grid(x_min, x_max, num)
    K = spec.max_order
    d = q_derivs(spec, grid, K)
    q, qp = d[0], d[1]
    t = grid * qp / q

    # quasi-increasing diagnostic for T: worst ratio T(x)/T(y) with x < y
    run_max_after = np.maximum.accumulate(t[::-1])[::-1]
    with np.errstate(divide="ignore"):
        qi_const = float(np.max(t / run_max_after))
    violations = int(np.sum(t[:-1] > t[1:] * (1 + 1e-12)))

    ratio = d[2] * q / qp ** 2
    ci = []
    for i in range(1, spec.nu + 1):
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.abs(d[i + 1]) * q / (np.abs(d[i]) * np.abs(qp))
        ci.append(float(np.nanmax(r)))

    small = grid <= 1.0
    delta_fit = float(np.max(d[K][small] * grid[small] ** spec.family.delta_smooth)) \
        if np.any(small) else 0.0

    return ClassMembershipReport(
        spec_label=spec.label(),
        grid_min=float(grid[0]),
        grid_max=float(grid[-1]),
        lambda_fit=float(np.min(t)),
        t_quasi_increase_const=qi_const,
        t_monotone_violations=violations,
        c1_fit=float(np.max(ratio)),
        c2_fit=float(np.min(ratio)),
        ci_fits=ci,
        qderiv_min=[float(np.min(d[j])) for j in range(K + 1)],
        delta_fit=delta_fit,
    )


def family_from_dict(block):
    """Build a weight family from the config-file dictionary form."""
    try:
        kind = block["family"]
    except (KeyError, TypeError):
        raise ConfigError("weight block must carry a 'family' field") from None
    delta = float(block.get("delta_smooth", 0.0))
    if kind == "freud":
        return FreudMonomial(m=float(block.get("m", 2.0)), delta_smooth=delta)
    if kind == "exppower":
        return ExpPower(ell=int(block.get("ell", 1)),
                        alpha=float(block.get("alpha", 2.0)),
                        m=float(block.get("m", 0.0)),
                        delta_smooth=delta)
    if kind == "powerexp":
        return PowerExp(alpha=float(block.get("alpha", 2.0)), delta_smooth=delta)
    raise ConfigError(f"unknown weight family {kind!r}")
