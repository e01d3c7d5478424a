"""Euclidean Bregman divergences of scalar convex potentials and their duals."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoDualPointError

__all__ = [
    "ScalarPotential",
    "square",
    "xlogx",
    "neglog",
    "BUILTIN_POTENTIALS",
    "linear_combination",
    "bregman",
    "bregman_array",
    "dual_point",
    "inverse_derivative",
    "conjugate_value",
    "conjugate_values",
    "inverse_derivative_array",
    "duality_gap",
    "second_derivative",
]

FD_STEP = 1e-5


@dataclass(frozen=True)
class ScalarPotential:
    """A smooth, strictly convex scalar function on an open interval.

    ``value`` and ``derivative`` must accept numpy arrays. The interval
    ``(lo, hi)`` is open; either end may be infinite.
    """

    name: str
    value: Callable
    derivative: Callable
    lo: float = -math.inf
    hi: float = math.inf

    def contains(self, z):
        z = np.asarray(z, dtype=float)
        return (z > self.lo) & (z < self.hi)

    def check(self, z, label="argument"):
        z = np.asarray(z, dtype=float)
        bad = ~self.contains(z)
        if np.any(bad):
            offending = z[bad].ravel()[0] if z.ndim else float(z)
            raise DomainError(
                f"{label} {offending!r} outside domain ({self.lo}, {self.hi}) of {self.name}"
            )

    def is_strictly_convex(self, n: int = 200) -> bool:
        """Sample the domain and check that the derivative strictly increases."""
        lo = self.lo if math.isfinite(self.lo) else -50.0
        hi = self.hi if math.isfinite(self.hi) else 50.0
        span = hi - lo
        z = np.linspace(lo + 1e-3 * span, hi - 1e-3 * span, n)
        d = self.derivative(z)
        return bool(np.all(np.diff(d) > 0))


def _xlogx(z):
    z = np.asarray(z, dtype=float)
    return z * np.log(z)


square = ScalarPotential("square", lambda z: np.square(z), lambda z: 2.0 * np.asarray(z))
xlogx = ScalarPotential("xlogx", _xlogx, lambda z: np.log(z) + 1.0, lo=0.0)
neglog = ScalarPotential("neglog", lambda z: -np.log(z), lambda z: -1.0 / np.asarray(z), lo=0.0)

BUILTIN_POTENTIALS = {p.name: p for p in (square, xlogx, neglog)}


def linear_combination(first: ScalarPotential, second: ScalarPotential, a: float) -> ScalarPotential:
    """Return ``first + a * second`` on the intersection of the two domains."""
    if a <= 0:
        raise ValueError("linear combination requires a > 0")
    return ScalarPotential(
        f"{first.name}+{a:g}*{second.name}",
        lambda z: first.value(z) + a * second.value(z),
        lambda z: first.derivative(z) + a * second.derivative(z),
        lo=max(first.lo, second.lo),
        hi=min(first.hi, second.hi),
    )


def bregman_array(psi: ScalarPotential, y, x):
    """Vectorised D_psi(y || x); no domain checks."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    return psi.value(y) - psi.value(x) - psi.derivative(x) * (y - x)


def bregman(psi: ScalarPotential, y, x):
    """Bregman divergence ``psi(y) - psi(x) - psi'(x) (y - x)``."""
    psi.check(y, "y")
    psi.check(x, "x")
    out = bregman_array(psi, y, x)
    return float(out) if np.ndim(out) == 0 else out


def dual_point(psi: ScalarPotential, x):
    psi.check(x, "x")
    out = psi.derivative(x)
    return float(out) if np.ndim(out) == 0 else out


def second_derivative(psi: ScalarPotential, x: float, h: float = FD_STEP) -> float:
    return float((psi.derivative(x + h) - psi.derivative(x - h)) / (2.0 * h))


def _start(psi: ScalarPotential) -> float:
    lo, hi = psi.lo, psi.hi
    if math.isfinite(lo) and math.isfinite(hi):
        return 0.5 * (lo + hi)
    if math.isfinite(lo):
        return lo + 1.0
    if math.isfinite(hi):
        return hi - 1.0
    return 0.0


def _step_towards(psi: ScalarPotential, x0: float, k: int, upward: bool) -> float:
    if upward:
        if math.isfinite(psi.hi):
            return psi.hi - (psi.hi - x0) * 0.5**k
        return x0 + 2.0**k if k < 1024 else math.inf
    if math.isfinite(psi.lo):
        return psi.lo + (x0 - psi.lo) * 0.5**k
    return x0 - 2.0**k if k < 1024 else -math.inf


def inverse_derivative(psi: ScalarPotential, xstar: float) -> float:
    """Solve ``psi'(x) = xstar`` by bracketing and Brent's method."""
    if not math.isfinite(xstar):
        raise NoDualPointError(f"dual point {xstar!r} is not finite")
    f = lambda z: float(psi.derivative(z)) - xstar  # noqa: E731
    x0 = _start(psi)
    f0 = f(x0)
    if f0 == 0.0:
        return x0
    upward = f0 < 0.0
    a = x0
    for k in range(1, 1100):
        b = _step_towards(psi, x0, k, upward)
        if not psi.contains(b) or b == a:
            break
        fb = f(b)
        if fb == 0.0:
            return b
        if (fb > 0.0) == upward:
            lo, hi = (a, b) if a < b else (b, a)
            return brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        a = b
    raise NoDualPointError(f"{xstar!r} is outside the range of {psi.name}'")


def conjugate_value(psi: ScalarPotential, xstar: float) -> float:
    """Legendre conjugate psi*(x*) = x x* - psi(x) with psi'(x) = x*."""
    x = inverse_derivative(psi, xstar)
    return float(x * xstar - psi.value(x))


def duality_gap(psi: ScalarPotential, y: float, x: float) -> float:
    """|D_psi(y||x) - D_psi*(x*||y*)| with the conjugate assembled numerically."""
    primal = bregman(psi, y, x)
    xs = float(psi.derivative(x))
    ys = float(psi.derivative(y))
    grad_at_ys = inverse_derivative(psi, ys)
    dual = conjugate_value(psi, xs) - conjugate_value(psi, ys) - grad_at_ys * (xs - ys)
    return abs(primal - dual)


def inverse_derivative_array(psi: ScalarPotential, xstar) -> np.ndarray:
    """Vectorised solve of ``psi'(x) = xstar`` by bracket expansion and bisection.

    Bisection runs until the bracket stops shrinking in floating point, so
    the result is accurate to a few ulps of x.
    """
    xstar = np.asarray(xstar, dtype=float)
    if not np.all(np.isfinite(xstar)):
        raise NoDualPointError("dual points must be finite")
    x0 = _start(psi)
    d0 = float(psi.derivative(x0))
    up = xstar > d0
    lo = np.full(xstar.shape, x0)
    hi = np.full(xstar.shape, x0)
    for k in range(1, 1100):
        todo_up = up & (psi.derivative(hi) < xstar)
        todo_dn = ~up & (psi.derivative(lo) > xstar)
        if not (todo_up.any() or todo_dn.any()):
            break
        lo = np.where(todo_up, hi, lo)
        hi = np.where(todo_up, _step_towards(psi, x0, k, True), hi)
        hi = np.where(todo_dn, lo, hi)
        lo = np.where(todo_dn, _step_towards(psi, x0, k, False), lo)
    else:
        raise NoDualPointError(f"some dual points are outside the range of {psi.name}'")
    if np.any(psi.derivative(hi) < xstar) or np.any(psi.derivative(lo) > xstar):
        raise NoDualPointError(f"some dual points are outside the range of {psi.name}'")
    for _ in range(2200):
        mid = 0.5 * (lo + hi)
        moved = (mid > lo) & (mid < hi)
        if not moved.any():
            break
        right = psi.derivative(mid) < xstar
        lo = np.where(moved & right, mid, lo)
        hi = np.where(moved & ~right, mid, hi)
    return 0.5 * (lo + hi)


def conjugate_values(psi: ScalarPotential, xstar) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised conjugate: returns ``(psi*(xstar), x)`` with ``psi'(x) = xstar``."""
    xstar = np.asarray(xstar, dtype=float)
    x = inverse_derivative_array(psi, xstar)
    return x * xstar - psi.value(x), x
