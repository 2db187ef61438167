"""Truncated Taylor-series (jet) arithmetic.

A jet of order K at a point x0 is the array of Taylor coefficients
``a[j] = f^(j)(x0) / j!`` for ``j = 0..K``.  Composing elementary
operations on jets differentiates exactly (up to roundoff): no finite
differences are involved anywhere.

Coefficients may be scalars or numpy arrays, so a single jet can carry a
whole evaluation grid.
"""

import math

import numpy as np

from .errors import ScaleOverflowError

_HUGE = 1e300


def seed(x, order):
    """Jet of the identity function at x, i.e. the variable itself."""
    x = np.asarray(x, dtype=float)
    coeffs = [np.zeros_like(x) for _ in range(order + 1)]
    coeffs[0] = x.copy()
    if order >= 1:
        coeffs[1] = np.ones_like(x)
    return coeffs


def const(c, order, like=None):
    """Jet of a constant."""
    z = np.zeros_like(like) if like is not None else 0.0
    coeffs = [np.asarray(z, dtype=float).copy() for _ in range(order + 1)]
    coeffs[0] = coeffs[0] + c
    return coeffs


def add(a, b):
    return [x + y for x, y in zip(a, b)]


def sub(a, b):
    return [x - y for x, y in zip(a, b)]


def scale(a, c):
    return [c * x for x in a]


def shift(a, c):
    out = [np.asarray(x).copy() for x in a]
    out[0] = out[0] + c
    return out


def mul(a, b):
    """Cauchy product truncated at the jet order."""
    K = len(a) - 1
    out = []
    for k in range(K + 1):
        s = a[0] * b[k]
        for j in range(1, k + 1):
            s = s + a[j] * b[k - j]
        out.append(s)
    return out


def exp(a):
    """exp of a jet: e[k] = (1/k) sum_{j=1..k} j*a[j]*e[k-j]."""
    K = len(a) - 1
    e0 = np.exp(a[0])
    _check(e0)
    out = [e0]
    for k in range(1, K + 1):
        s = 1.0 * a[1] * out[k - 1] if K >= 1 else 0.0
        for j in range(2, k + 1):
            s = s + j * a[j] * out[k - j]
        out.append(s / k)
        _check(out[k])
    return out


def log(a):
    """log of a jet with strictly positive leading coefficient."""
    K = len(a) - 1
    out = [np.log(a[0])]
    for k in range(1, K + 1):
        s = k * a[k]
        for j in range(1, k):
            s = s - j * out[j] * a[k - j]
        out.append(s / (k * a[0]))
    return out


def powr(a, p):
    """Real power a**p for jets with positive leading coefficient.

    Integer exponents 0, 1, 2 are special-cased so they stay valid when
    the leading coefficient can vanish.
    """
    if p == 0:
        return const(1.0, len(a) - 1, like=a[0])
    if p == 1:
        return [np.asarray(x).copy() for x in a]
    if p == 2:
        return mul(a, a)
    if float(p).is_integer() and p > 0 and p <= 8:
        out = a
        for _ in range(int(p) - 1):
            out = mul(out, a)
        return out
    return exp(scale(log(a), p))


def derivative(a, j):
    """j-th derivative from the jet: j! * a[j]."""
    return math.factorial(j) * a[j]


def _check(x):
    if np.any(~np.isfinite(np.asarray(x))) or np.any(np.abs(np.asarray(x)) > _HUGE):
        raise ScaleOverflowError(
            "jet arithmetic overflowed; the requested point is beyond the "
            "representable range of this weight family"
        )
