"""Closed-form transport divergences between multivariate Gaussians.

All matrix functions go through a symmetric eigendecomposition. Means are
carried for the transport map and the Wasserstein distance; transport KL
and transport JS depend only on the Hessian of the Brenier potential, which
is translation invariant, so they ignore the means.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GaussianDensity",
    "TransportMapGaussian",
    "spd_power",
    "sqrtm_spd",
    "ot_map_gaussian",
    "transport_kl_gaussian",
    "transport_kl_commuting",
    "midpoint_covariance",
    "transport_js_gaussian",
    "transport_js_formula",
    "transport_js_commuting",
    "classical_kl_gaussian",
    "wasserstein2_gaussian",
    "commute",
]

COND_FLOOR = 1e-10


def _symmetric(a) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return 0.5 * (a + a.T)


def spd_power(a, power: float) -> np.ndarray:
    """A**power for a symmetric positive-definite matrix."""
    a = _symmetric(a)
    vals, vecs = np.linalg.eigh(a)
    if vals[0] <= 0:
        raise np.linalg.LinAlgError(f"matrix is not positive definite (eigenvalue {vals[0]:g})")
    out = (vecs * vals**power) @ vecs.T
    return 0.5 * (out + out.T)


def sqrtm_spd(a) -> np.ndarray:
    return spd_power(a, 0.5)


@dataclass(frozen=True)
class GaussianDensity:
    mean: np.ndarray
    covariance: np.ndarray
    _eigvals: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        cov = _symmetric(self.covariance)
        d = cov.shape[0]
        mean = np.zeros(d) if self.mean is None else np.atleast_1d(np.asarray(self.mean, dtype=float))
        if mean.shape != (d,):
            raise ValueError(f"mean has shape {mean.shape}, covariance is {d}x{d}")
        vals = np.linalg.eigvalsh(cov)
        if not vals[0] > COND_FLOOR * vals[-1] or not vals[-1] > 0:
            raise ValueError(f"covariance is not positive definite (eigenvalues {vals})")
        for arr in (mean, cov, vals):
            arr.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "_eigvals", vals)

    @classmethod
    def scalar(cls, variance: float, mean: float = 0.0) -> "GaussianDensity":
        return cls(np.array([mean]), np.array([[variance]]))

    @property
    def dim(self) -> int:
        return self.mean.size

    def logdet(self) -> float:
        return float(np.sum(np.log(self._eigvals)))


@dataclass(frozen=True)
class TransportMapGaussian:
    """The affine map x -> matrix @ x + shift."""

    matrix: np.ndarray
    shift: np.ndarray

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.matrix.T + self.shift

    def pushforward_error(self, source_cov, target_cov) -> float:
        """Relative Frobenius error of matrix @ source_cov @ matrix.T against target_cov."""
        pushed = self.matrix @ source_cov @ self.matrix.T
        return float(np.linalg.norm(pushed - target_cov) / np.linalg.norm(target_cov))


def _check(X: GaussianDensity, Y: GaussianDensity):
    if X.dim != Y.dim:
        raise ValueError(f"dimension mismatch: {X.dim} vs {Y.dim}")


def _map_matrix(sx: np.ndarray, sy: np.ndarray) -> np.ndarray:
    """Brenier map pushing covariance sy onto sx."""
    rx = sqrtm_spd(sx)
    out = rx @ spd_power(rx @ sy @ rx, -0.5) @ rx
    return 0.5 * (out + out.T)


def ot_map_gaussian(X: GaussianDensity, Y: GaussianDensity) -> TransportMapGaussian:
    """Optimal map pushing Y forward to X."""
    _check(X, Y)
    T = _map_matrix(X.covariance, Y.covariance)
    return TransportMapGaussian(T, X.mean - T @ Y.mean)


def commute(a, b, rtol: float = 1e-10) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    return bool(np.linalg.norm(a @ b - b @ a) < rtol * np.linalg.norm(a) * np.linalg.norm(b))


def _tkl(sx, sy, logdet_x, logdet_y) -> float:
    T = _map_matrix(sx, sy)
    return 0.5 * (logdet_y - logdet_x) + float(np.trace(T)) - sx.shape[0]


def transport_kl_gaussian(X: GaussianDensity, Y: GaussianDensity) -> float:
    """1/2 log(det Sy / det Sx) + tr(Sx^1/2 (Sx^1/2 Sy Sx^1/2)^-1/2 Sx^1/2) - d."""
    _check(X, Y)
    return _tkl(X.covariance, Y.covariance, X.logdet(), Y.logdet())


def transport_kl_commuting(X: GaussianDensity, Y: GaussianDensity) -> float:
    """Transport KL for commuting covariances: 1/2 log(det Sy/det Sx) + tr(Sx^1/2 Sy^-1/2) - d."""
    _check(X, Y)
    tr = np.trace(sqrtm_spd(X.covariance) @ spd_power(Y.covariance, -0.5))
    return 0.5 * (Y.logdet() - X.logdet()) + float(tr) - X.dim


def midpoint_covariance(X: GaussianDensity, Y: GaussianDensity) -> np.ndarray:
    """Covariance of the Wasserstein midpoint, (I + T) Sy (I + T) / 4 with T pushing Y to X."""
    _check(X, Y)
    A = np.eye(X.dim) + _map_matrix(X.covariance, Y.covariance)
    Z = 0.25 * A @ Y.covariance @ A
    return 0.5 * (Z + Z.T)


def _midpoint(X: GaussianDensity, Y: GaussianDensity) -> GaussianDensity:
    return GaussianDensity(0.5 * (X.mean + Y.mean), midpoint_covariance(X, Y))


def transport_js_gaussian(X: GaussianDensity, Y: GaussianDensity) -> float:
    """Transport JS as 1/2 TKL(X||Z) + 1/2 TKL(Y||Z), Z the Wasserstein midpoint."""
    Z = _midpoint(X, Y)
    return 0.5 * transport_kl_gaussian(X, Z) + 0.5 * transport_kl_gaussian(Y, Z)


def transport_js_formula(X: GaussianDensity, Y: GaussianDensity, quarter_power: bool = False) -> float:
    """The expanded transport JS expression, evaluated directly.

    ``quarter_power`` selects the -1/4 log(det Sx det Sy / det Sz^2) form of
    the log-determinant term instead of -1/2 log(det Sx^1/2 det Sy^1/2 / det Sz).
    """
    _check(X, Y)
    sz = midpoint_covariance(X, Y)
    ldz = float(np.linalg.slogdet(sz)[1])
    if quarter_power:
        logterm = -0.25 * (X.logdet() + Y.logdet() - 2.0 * ldz)
    else:
        half_x = float(np.linalg.slogdet(sqrtm_spd(X.covariance))[1])
        half_y = float(np.linalg.slogdet(sqrtm_spd(Y.covariance))[1])
        logterm = -0.5 * (half_x + half_y - ldz)
    tr = np.trace(_map_matrix(X.covariance, sz) + _map_matrix(Y.covariance, sz))
    return logterm + 0.5 * float(tr) - X.dim


def transport_js_commuting(X: GaussianDensity, Y: GaussianDensity) -> float:
    """-1/2 log(det Sx^1/2 det Sy^1/2 / det((Sx^1/2 + Sy^1/2)^2 / 4))."""
    _check(X, Y)
    m = 0.5 * (sqrtm_spd(X.covariance) + sqrtm_spd(Y.covariance))
    ldm = float(np.linalg.slogdet(m @ m)[1])
    return -0.5 * (0.5 * X.logdet() + 0.5 * Y.logdet() - ldm)


def classical_kl_gaussian(X: GaussianDensity, Y: GaussianDensity) -> float:
    _check(X, Y)
    prec_y = spd_power(Y.covariance, -1.0)
    dm = Y.mean - X.mean
    return 0.5 * (
        Y.logdet() - X.logdet() + float(np.trace(prec_y @ X.covariance)) + float(dm @ prec_y @ dm) - X.dim
    )


def wasserstein2_gaussian(X: GaussianDensity, Y: GaussianDensity) -> float:
    """Squared Bures-Wasserstein distance between two Gaussians."""
    _check(X, Y)
    rx = sqrtm_spd(X.covariance)
    cross = float(np.trace(sqrtm_spd(rx @ Y.covariance @ rx)))
    dm = X.mean - Y.mean
    val = float(dm @ dm) + float(np.trace(X.covariance)) + float(np.trace(Y.covariance)) - 2.0 * cross
    return max(val, 0.0)
