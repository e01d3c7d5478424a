"""One-dimensional densities represented through their quantile functions.

A :class:`Density1D` exposes ``quantile(u)`` (the inverse CDF) and
``quantile_derivative(u)`` on ``(0, 1)``. In one dimension the optimal map
between two densities is a composition of quantile functions and CDFs, so
every transport divergence in this package is an integral over quantile
levels of these two functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.special import ndtri

from .errors import DegenerateQuantileError
from .quadrature import Nodes

__all__ = [
    "Density1D",
    "GridDensity",
    "gaussian1d",
    "uniform1d",
    "from_quantile",
    "from_grid",
    "from_samples",
    "displacement_interpolate",
    "shift",
    "load_grid",
    "load_samples",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _as_array(u):
    return np.asarray(u, dtype=float)


def _unwrap(out):
    return float(out) if np.ndim(out) == 0 else out


class Density1D:
    """Base class. Subclasses implement ``_lower`` and may refine ``_upper``.

    ``_lower(u)`` returns ``(quantile, quantile_derivative)`` at ``u``;
    ``_upper(v)`` returns the same pair at ``1 - v`` and exists so that
    densities with unbounded support can be evaluated deep in the upper tail
    without the rounding of ``1 - v``.
    """

    kind: str = "analytic"
    support: tuple[float, float] = (-math.inf, math.inf)
    # quantile levels where the quantile jumps over a zero-density gap
    jumps: tuple[float, ...] = ()

    def _lower(self, u):
        raise NotImplementedError

    def _upper(self, v):
        return self._lower(1.0 - v)

    def quantile(self, u):
        return _unwrap(self._lower(_as_array(u))[0])

    def quantile_derivative(self, u):
        return _unwrap(self._lower(_as_array(u))[1])

    def evaluate(self, nodes: Nodes):
        """Quantile and quantile derivative on quadrature nodes."""
        upper = nodes.u > 0.5
        q = np.empty_like(nodes.u)
        dq = np.empty_like(nodes.u)
        q[~upper], dq[~upper] = self._lower(nodes.u[~upper])
        q[upper], dq[upper] = self._upper(nodes.v[upper])
        return q, dq

    def __repr__(self):
        return f"<{type(self).__name__} kind={self.kind} support={self.support}>"


class Gaussian1D(Density1D):
    kind = "analytic"

    def __init__(self, mean: float, variance: float):
        if not variance > 0:
            raise ValueError(f"variance must be positive, got {variance}")
        self.mean = float(mean)
        self.variance = float(variance)
        self.sd = math.sqrt(variance)
        self.support = (-math.inf, math.inf)

    def _deriv(self, z):
        return self.sd * _SQRT_2PI * np.exp(0.5 * z * z)

    def _lower(self, u):
        z = ndtri(u)
        return self.mean + self.sd * z, self._deriv(z)

    def _upper(self, v):
        z = ndtri(v)
        return self.mean - self.sd * z, self._deriv(z)

    def pdf(self, x):
        z = (_as_array(x) - self.mean) / self.sd
        return np.exp(-0.5 * z * z) / (self.sd * _SQRT_2PI)

    def __repr__(self):
        return f"gaussian1d(mean={self.mean:g}, variance={self.variance:g})"


class Uniform1D(Density1D):
    kind = "analytic"

    def __init__(self, a: float, b: float):
        if not a < b:
            raise ValueError(f"uniform1d needs a < b, got a={a}, b={b}")
        self.a, self.b = float(a), float(b)
        self.support = (self.a, self.b)

    def _lower(self, u):
        return self.a + (self.b - self.a) * u, np.full_like(u, self.b - self.a)

    def _upper(self, v):
        return self.b - (self.b - self.a) * v, np.full_like(v, self.b - self.a)

    def pdf(self, x):
        x = _as_array(x)
        return np.where((x >= self.a) & (x <= self.b), 1.0 / (self.b - self.a), 0.0)

    def __repr__(self):
        return f"uniform1d({self.a:g}, {self.b:g})"


class _Custom(Density1D):
    kind = "analytic"

    def __init__(self, quantile, derivative, support, name, upper=None):
        self._q = quantile
        self._dq = derivative
        self._up = upper
        self.support = support
        self.name = name

    def _lower(self, u):
        return np.asarray(self._q(u), dtype=float), np.asarray(self._dq(u), dtype=float)

    def _upper(self, v):
        if self._up is None:
            return self._lower(1.0 - v)
        q, dq = self._up(v)
        return np.asarray(q, dtype=float), np.asarray(dq, dtype=float)

    def __repr__(self):
        return f"from_quantile({self.name})"


def gaussian1d(mean: float, variance: float) -> Density1D:
    return Gaussian1D(mean, variance)


def uniform1d(a: float, b: float) -> Density1D:
    return Uniform1D(a, b)


def from_quantile(
    quantile: Callable,
    derivative: Callable,
    support: tuple[float, float] = (-math.inf, math.inf),
    name: str = "custom",
    upper: Callable | None = None,
) -> Density1D:
    """Wrap an analytic quantile function and its derivative.

    ``upper(v)``, if given, returns ``(quantile, derivative)`` at ``1 - v``;
    supply it when the quantile is unbounded as u -> 1, since ``1 - v``
    rounds to 1 for the deepest tail nodes.
    """
    return _Custom(quantile, derivative, support, name, upper)


@dataclass(frozen=True)
class GridDensity:
    """A density tabulated on strictly increasing abscissae.

    The pdf is taken to be piecewise linear between grid points and is
    normalised at construction, so its trapezoid integral is exactly one.
    """

    grid: np.ndarray
    pdf: np.ndarray
    cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x = np.array(self.grid, dtype=float)
        p = np.array(self.pdf, dtype=float)
        if x.ndim != 1 or x.shape != p.shape or x.size < 2:
            raise ValueError("grid and pdf must be 1-D arrays of equal length >= 2")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(p)):
            raise ValueError("grid and pdf must be finite")
        if np.any(np.diff(x) <= 0):
            raise ValueError("grid abscissae must be strictly increasing")
        if np.any(p < 0):
            raise ValueError("pdf values must be non-negative")
        mass = np.diff(x) * (p[1:] + p[:-1]) / 2.0
        total = mass.sum()
        if not total > 0:
            raise ValueError("pdf has zero total mass")
        p = p / total
        cum = np.concatenate([[0.0], np.cumsum(mass / total)])
        cum[-1] = 1.0
        for arr in (x, p, cum):
            arr.setflags(write=False)
        object.__setattr__(self, "grid", x)
        object.__setattr__(self, "pdf", p)
        object.__setattr__(self, "cumulative", cum)

    @classmethod
    def tabulate(cls, density, lo: float, hi: float, points: int) -> "GridDensity":
        """Tabulate anything with a ``pdf`` method on an even grid."""
        x = np.linspace(lo, hi, points)
        return cls(x, density.pdf(x))

    def pdf_at(self, x):
        """Linear interpolation of the pdf, zero outside the grid."""
        return np.interp(_as_array(x), self.grid, self.pdf, left=0.0, right=0.0)

    def cdf(self, x):
        """CDF of the piecewise-linear pdf (exact within each cell)."""
        x = _as_array(x)
        g, p, c = self.grid, self.pdf, self.cumulative
        i = np.clip(np.searchsorted(g, x, side="right") - 1, 0, g.size - 2)
        h = g[i + 1] - g[i]
        s = np.clip(x - g[i], 0.0, h)
        slope = (p[i + 1] - p[i]) / h
        out = c[i] + p[i] * s + 0.5 * slope * s * s
        out = np.where(x <= g[0], 0.0, np.where(x >= g[-1], 1.0, out))
        return _unwrap(out)

    def entropy(self) -> float:
        """Boltzmann-Shannon entropy -int p log p by the trapezoid rule."""
        p = self.pdf
        f = -np.where(p > 0, p * np.log(np.where(p > 0, p, 1.0)), 0.0)
        return float(np.sum(np.diff(self.grid) * (f[1:] + f[:-1]) / 2.0))


class GridQuantile(Density1D):
    kind = "grid"

    def __init__(self, g: GridDensity, mirrored: bool = False):
        self.table = g
        self.support = (float(g.grid[0]), float(g.grid[-1]))
        mass = np.diff(g.cumulative)
        self._last = int(np.flatnonzero(mass > 0)[-1])
        # gaps come from the pdf, since the cumulative table saturates near 1
        massive = np.flatnonzero((g.pdf[1:] + g.pdf[:-1]) > 0)
        interior = np.zeros(mass.size, dtype=bool)
        interior[massive[0] : massive[-1] + 1] = True
        gap = interior & ((g.pdf[1:] + g.pdf[:-1]) == 0)
        starts = np.flatnonzero(gap & ~np.concatenate([[False], gap[:-1]]))
        self.jumps = tuple(float(g.cumulative[i]) for i in starts)
        # the reflected table gives the upper tail without forming 1 - v
        self._mirror = None if mirrored else GridQuantile(GridDensity(-g.grid[::-1], g.pdf[::-1]), True)

    def _upper(self, v):
        x, dx = self._mirror._lower(v)
        return -x, dx

    def _lower(self, u):
        g = self.table
        x, p, c = g.grid, g.pdf, g.cumulative
        i = np.searchsorted(c, u, side="right") - 1
        i = np.clip(i, 0, self._last)
        h = x[i + 1] - x[i]
        a = p[i]
        slope = (p[i + 1] - a) / h
        delta = np.clip(u - c[i], 0.0, c[i + 1] - c[i])
        root = np.sqrt(np.maximum(a * a + 2.0 * slope * delta, 0.0))
        denom = a + root
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(denom > 0, 2.0 * delta / np.where(denom > 0, denom, 1.0), 0.0)
            deriv = 1.0 / root
        return x[i] + np.minimum(s, h), deriv

    def quantile_derivative(self, u):
        u = _as_array(u)
        if self.jumps and np.any(np.isin(u, self.jumps)):
            raise DegenerateQuantileError(f"quantile jumps over a zero-density gap at u in {self.jumps}")
        d = self._lower(u)[1]
        if np.any(~np.isfinite(d)):
            bad = np.atleast_1d(_as_array(u))[~np.isfinite(np.atleast_1d(d))][0]
            raise DegenerateQuantileError(f"quantile level {bad!r} falls on a zero-density point")
        return _unwrap(d)

    def __repr__(self):
        return f"from_grid({self.table.grid.size} points on [{self.support[0]:g}, {self.support[1]:g}])"


def from_grid(g: GridDensity) -> Density1D:
    return GridQuantile(g)


class Empirical(Density1D):
    kind = "empirical"

    def __init__(self, xs):
        xs = np.sort(np.asarray(xs, dtype=float).ravel())
        if xs.size < 2 or np.unique(xs).size < 2:
            raise ValueError("from_samples needs at least 2 distinct samples")
        if not np.all(np.isfinite(xs)):
            raise ValueError("samples must be finite")
        n = xs.size
        self.samples = xs
        self.positions = (np.arange(1, n + 1) - 0.5) / n
        self.step = 1.0 / n
        self.support = (float(xs[0]), float(xs[-1]))
        pos = self.positions
        self._left_slope = (xs[1] - xs[0]) / (pos[1] - pos[0])
        self._right_slope = (xs[-1] - xs[-2]) / (pos[-1] - pos[-2])

    def _extended(self, u):
        pos, xs = self.positions, self.samples
        out = np.interp(u, pos, xs)
        out = np.where(u < pos[0], xs[0] + self._left_slope * (u - pos[0]), out)
        return np.where(u > pos[-1], xs[-1] + self._right_slope * (u - pos[-1]), out)

    def _lower(self, u):
        h = self.step
        q = np.interp(u, self.positions, self.samples)
        dq = (self._extended(u + h) - self._extended(u - h)) / (2.0 * h)
        return q, dq

    def __repr__(self):
        return f"from_samples(n={self.samples.size})"


def from_samples(xs) -> Density1D:
    """Empirical quantile with plotting positions (k - 1/2)/n.

    The quantile is flat beyond the first and last plotting positions; the
    derivative is a central difference (step 1/n) of the interpolant with its
    edge segments extended, so it stays positive in the tails.
    """
    return Empirical(xs)


class DisplacementInterpolant(Density1D):
    kind = "analytic"

    def __init__(self, p: Density1D, q: Density1D, t: float):
        self.p, self.q, self.t = p, q, t
        kinds = {p.kind, q.kind}
        self.kind = "analytic" if kinds == {"analytic"} else "grid" if "empirical" not in kinds else "empirical"
        self.support = (
            t * p.support[0] + (1 - t) * q.support[0],
            t * p.support[1] + (1 - t) * q.support[1],
        )
        self.jumps = tuple(sorted(set(p.jumps) | set(q.jumps)))

    def _mix(self, a, b):
        t = self.t
        return t * a[0] + (1 - t) * b[0], t * a[1] + (1 - t) * b[1]

    def _lower(self, u):
        return self._mix(self.p._lower(u), self.q._lower(u))

    def _upper(self, v):
        return self._mix(self.p._upper(v), self.q._upper(v))

    def __repr__(self):
        return f"displacement_interpolate({self.p!r}, {self.q!r}, t={self.t:g})"


def displacement_interpolate(p: Density1D, q: Density1D, t: float) -> Density1D:
    """Point ``t`` on the Wasserstein geodesic from ``q`` (t=0) to ``p`` (t=1)."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if t == 0.0:
        return q
    if t == 1.0:
        return p
    return DisplacementInterpolant(p, q, float(t))


class _Shifted(Density1D):
    def __init__(self, p: Density1D, c: float):
        self.p, self.c = p, float(c)
        self.kind = p.kind
        self.support = (p.support[0] + c, p.support[1] + c)
        self.jumps = p.jumps

    def _lower(self, u):
        q, dq = self.p._lower(u)
        return q + self.c, dq

    def _upper(self, v):
        q, dq = self.p._upper(v)
        return q + self.c, dq


def shift(p: Density1D, c: float) -> Density1D:
    """The translate x -> x + c of ``p``."""
    return _Shifted(p, c)


def load_grid(path) -> GridDensity:
    """Read a two-column ``x pdf`` text file; ``#`` starts a comment."""
    data = np.loadtxt(Path(path), comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns (x, pdf), got {data.shape[1]}")
    return GridDensity(data[:, 0], data[:, 1])


def load_samples(path) -> np.ndarray:
    """Read one real number per line; ``#`` starts a comment."""
    return np.loadtxt(Path(path), comments="#", ndmin=1)
