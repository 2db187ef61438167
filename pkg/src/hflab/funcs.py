"""Named test functions with hand-coded derivatives.

Each entry supplies the derivatives needed for the smoothness orders used
by the experiments (up to order 3).  The metadata (alpha, eta) feeds the
growth-condition gate in :mod:`hflab.wnorm`.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class TestFunction:
    """A sampled function f with derivative callables of order 1..len(derivs)."""

    name: str
    f: object
    derivs: tuple = ()
    alpha: float = 1.0
    eta: float = 0.5

    def value(self, x):
        return self.f(np.asarray(x, dtype=float))

    def deriv(self, s, x):
        if s == 0:
            return self.value(x)
        if s > len(self.derivs):
            raise ConfigError(
                f"test function {self.name!r} provides derivatives up to "
                f"order {len(self.derivs)}, requested {s}")
        return self.derivs[s - 1](np.asarray(x, dtype=float))

    @property
    def max_deriv(self):
        return len(self.derivs)


def _gauss(x):
    return np.exp(-x * x)


REGISTRY = {
    "sin": TestFunction(
        "sin", np.sin, (np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x))),
    "x_gauss": TestFunction(
        "x_gauss",
        lambda x: x * _gauss(x),
        (lambda x: (1 - 2 * x ** 2) * _gauss(x),
         lambda x: (4 * x ** 3 - 6 * x) * _gauss(x),
         lambda x: (-8 * x ** 4 + 24 * x ** 2 - 6) * _gauss(x))),
    "x_over_1px2": TestFunction(
        "x_over_1px2",
        lambda x: x / (1 + x ** 2),
        (lambda x: (1 - x ** 2) / (1 + x ** 2) ** 2,
         lambda x: 2 * x * (x ** 2 - 3) / (1 + x ** 2) ** 3,
         lambda x: -6 * (x ** 4 - 6 * x ** 2 + 1) / (1 + x ** 2) ** 4)),
    "identity": TestFunction(
        "identity", lambda x: x,
        (lambda x: np.ones_like(x), lambda x: np.zeros_like(x),
         lambda x: np.zeros_like(x))),
    "one": TestFunction(
        "one", lambda x: np.ones_like(x),
        (lambda x: np.zeros_like(x), lambda x: np.zeros_like(x),
         lambda x: np.zeros_like(x))),
}


def get_function(name):
    try:
        return REGISTRY[name]
    except KeyError:
        raise ConfigError(
            f"unknown test function {name!r}; known: {sorted(REGISTRY)}"
        ) from None
