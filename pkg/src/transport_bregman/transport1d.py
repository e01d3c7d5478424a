"""Closed-form transport divergences between one-dimensional densities.

Every divergence here is an integral over quantile levels u in (0, 1):
pointwise Bregman divergences of quantiles (linear energies), of pairwise
quantile differences (interaction energies), or of quantile derivatives
(entropies, including transport KL and transport JS).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bregman import ScalarPotential, bregman_array
from .density import Density1D, GridDensity, from_grid
from .errors import DegenerateQuantileError, DomainError, QuadratureError, SupportError
from .quadrature import DEFAULT_CONFIG, Nodes, QuadratureConfig, pair_rule, rule

__all__ = [
    "EntropyPotential",
    "boltzmann",
    "quadratic_entropy",
    "square_kernel",
    "log_kernel",
    "DivergenceResult",
    "wasserstein2_1d",
    "linear_energy_divergence",
    "interaction_energy_divergence",
    "entropy_divergence",
    "transport_kl_1d",
    "transport_js_1d",
    "transport_cross_entropy_1d",
    "classical_divergence_grid",
    "boltzmann_entropy",
]


@dataclass(frozen=True)
class EntropyPotential:
    """A convex entropy density U(p) and its transform z U(1/z)."""

    U: ScalarPotential

    @property
    def name(self) -> str:
        return self.U.name

    @property
    def tilde(self) -> ScalarPotential:
        U = self.U

        def value(z):
            z = np.asarray(z, dtype=float)
            return z * U.value(1.0 / z)

        def derivative(z):
            inv = 1.0 / np.asarray(z, dtype=float)
            return U.value(inv) - inv * U.derivative(inv)

        return ScalarPotential(f"tilde({U.name})", value, derivative, lo=0.0)


def _zlogz(z):
    z = np.asarray(z, dtype=float)
    return z * np.log(z)


boltzmann = EntropyPotential(ScalarPotential("zlogz", _zlogz, lambda z: np.log(z) + 1.0, lo=0.0))
quadratic_entropy = EntropyPotential(
    ScalarPotential("half_square", lambda z: 0.5 * np.square(z), lambda z: np.asarray(z, dtype=float), lo=0.0)
)

# Kernels W~ of interaction energies (1/2) int int W~(x - x') p(x) p(x') dx dx'.
# square_kernel is the energy int int |x - x'|^2 p p, log_kernel is
# int int log(1/|x - x'|) p p; both are even, so only z > 0 is needed.
square_kernel = ScalarPotential(
    "square_kernel", lambda z: 2.0 * np.square(z), lambda z: 4.0 * np.asarray(z, dtype=float)
)
log_kernel = ScalarPotential(
    "log_kernel", lambda z: -2.0 * np.log(z), lambda z: -2.0 / np.asarray(z, dtype=float), lo=0.0
)


@dataclass(frozen=True)
class DivergenceResult:
    value: float
    nodes_used: int
    clip_used: float


def _evaluate(density: Density1D, nodes: Nodes, label: str):
    q, dq = density.evaluate(nodes)
    if not np.all(np.isfinite(q)):
        k = int(np.flatnonzero(~np.isfinite(q))[0])
        raise QuadratureError(f"quantile of {label} is not finite at node u={nodes.u[k]!r}")
    return q, dq


def _derivatives(density: Density1D, nodes: Nodes, label: str):
    if density.jumps:
        raise DegenerateQuantileError(
            f"quantile of {label} jumps over a zero-density gap at u={density.jumps[0]!r}; "
            "the monotone map is not differentiable"
        )
    dq = _evaluate(density, nodes, label)[1]
    bad = ~(np.isfinite(dq) & (dq > 0))
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise DegenerateQuantileError(
            f"quantile derivative of {label} is {dq[k]!r} at node u={nodes.u[k]!r}"
        )
    return dq


def _integrate(nodes: Nodes, values, what: str) -> float:
    bad = ~np.isfinite(values)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise QuadratureError(f"{what}: integrand {values[k]!r} at node u={nodes.u[k]!r}")
    return nodes.integrate(values)


def _require_domain(psi: ScalarPotential, values, nodes: Nodes, label: str):
    bad = ~psi.contains(values)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise DomainError(
            f"{label} value {values[k]!r} at node u={nodes.u[k]!r} "
            f"outside domain ({psi.lo}, {psi.hi}) of {psi.name}"
        )


def wasserstein2_1d(p: Density1D, q: Density1D, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Squared L2-Wasserstein distance, int_0^1 (Q_p - Q_q)^2 du."""
    nodes = rule(cfg)
    qp = _evaluate(p, nodes, "p")[0]
    qq = _evaluate(q, nodes, "q")[0]
    return _integrate(nodes, np.square(qp - qq), "wasserstein2_1d")


def linear_energy_divergence(
    V: ScalarPotential, p: Density1D, q: Density1D, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """int_0^1 D_V(Q_p(u) || Q_q(u)) du."""
    nodes = rule(cfg)
    qp = _evaluate(p, nodes, "p")[0]
    qq = _evaluate(q, nodes, "q")[0]
    _require_domain(V, qp, nodes, "quantile of p")
    _require_domain(V, qq, nodes, "quantile of q")
    return _integrate(nodes, bregman_array(V, qp, qq), "linear_energy_divergence")


def interaction_energy_divergence(
    W: ScalarPotential, p: Density1D, q: Density1D, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """(1/2) int int D_W(Q_p(u) - Q_p(v) || Q_q(u) - Q_q(v)) du dv for an even kernel W.

    By evenness the double integral equals the integral over u > v, where
    both quantile differences are non-negative. Kernels singular at zero
    skip the band |u - v| < ``cfg.diagonal_clip``.
    """
    nodes = pair_rule(cfg)
    qp = _evaluate(p, nodes, "p")[0]
    qq = _evaluate(q, nodes, "q")[0]
    i, j = np.tril_indices(len(nodes), k=-1)
    if not W.contains(0.0):
        keep = nodes.u[i] - nodes.u[j] >= cfg.diagonal_clip
        i, j = i[keep], j[keep]
    a = qp[i] - qp[j]
    b = qq[i] - qq[j]
    for label, diff in (("p", a), ("q", b)):
        bad = ~W.contains(diff)
        if np.any(bad):
            k = int(np.flatnonzero(bad)[0])
            raise DomainError(
                f"quantile difference {diff[k]!r} of {label} at nodes "
                f"(u={nodes.u[i[k]]!r}, v={nodes.u[j[k]]!r}) outside domain of {W.name}"
            )
    vals = nodes.w[i] * nodes.w[j] * bregman_array(W, a, b)
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("interaction_energy_divergence: non-finite integrand")
    return float(np.sum(vals))


def entropy_divergence(
    U: EntropyPotential, p: Density1D, q: Density1D, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """int_0^1 D_{U~}(Q_p'(u) || Q_q'(u)) du with U~(z) = z U(1/z)."""
    nodes = rule(cfg)
    dp = _derivatives(p, nodes, "p")
    dq = _derivatives(q, nodes, "q")
    return _integrate(nodes, bregman_array(U.tilde, dp, dq), "entropy_divergence")


def transport_kl_1d(p: Density1D, q: Density1D, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Transport KL: Itakura-Saito divergence between quantile derivatives."""
    nodes = rule(cfg)
    dp = _derivatives(p, nodes, "p")
    dq = _derivatives(q, nodes, "q")
    ratio = dp / dq
    excess = ratio - 1.0
    # log1p keeps precision near ratio = 1; log keeps it near ratio = 0
    near = np.abs(excess) < 0.5
    logs = np.log(ratio)
    logs[near] = np.log1p(excess[near])
    return _integrate(nodes, excess - logs, "transport_kl_1d")


def transport_js_1d(p: Density1D, q: Density1D, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Transport Jensen-Shannon divergence, -1/2 int log(Q_p' Q_q' / ((Q_p' + Q_q')/2)^2)."""
    nodes = rule(cfg)
    dp = _derivatives(p, nodes, "p")
    dq = _derivatives(q, nodes, "q")
    # (a+b)^2 / 4ab = 1 + d^2: symmetric bit for bit, exactly 0 when a == b
    d = (dp - dq) / (2.0 * np.sqrt(dp) * np.sqrt(dq))
    vals = 0.5 * np.log1p(d * d)
    return _integrate(nodes, vals, "transport_js_1d")


def transport_cross_entropy_1d(
    p: Density1D, q: GridDensity, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """Transport cross entropy int Q_p'/Q_q' du - int q log q - 1."""
    nodes = rule(cfg)
    dp = _derivatives(p, nodes, "p")
    dq = _derivatives(from_grid(q), nodes, "q")
    return _integrate(nodes, dp / dq, "transport_cross_entropy_1d") + q.entropy() - 1.0


def boltzmann_entropy(g: GridDensity) -> float:
    """-int p log p on the grid."""
    return g.entropy()


def _trapezoid(x, f) -> float:
    return float(np.sum(np.diff(x) * (f[1:] + f[:-1]) / 2.0))


def _kl_values(p, q):
    pos = p > 0
    if np.any(pos & (q <= 0)):
        return None
    out = np.zeros_like(p)
    out[pos] = p[pos] * np.log(p[pos] / q[pos])
    return out


def classical_divergence_grid(kind: str, p: GridDensity, q: GridDensity) -> float:
    """Classical KL or JS on a common grid by the trapezoid rule.

    KL returns ``math.inf`` when q vanishes where p has mass.
    """
    if p.grid.shape != q.grid.shape or not np.allclose(p.grid, q.grid, rtol=0, atol=1e-12):
        raise SupportError("classical divergences need both densities on a common grid")
    x = p.grid
    if kind == "kl":
        vals = _kl_values(p.pdf, q.pdf)
        return math.inf if vals is None else _trapezoid(x, vals)
    if kind == "js":
        m = 0.5 * (p.pdf + q.pdf)
        # m underflows only where p and q are subnormal; those terms are below 1e-300
        keep = m > 0
        a = _kl_values(np.where(keep, p.pdf, 0.0), m)
        b = _kl_values(np.where(keep, q.pdf, 0.0), m)
        return 0.5 * _trapezoid(x, a) + 0.5 * _trapezoid(x, b)
    raise ValueError(f"unknown classical divergence {kind!r}; expected 'kl' or 'js'")
