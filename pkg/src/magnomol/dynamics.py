"""Drift-matrix stability and the steady-state covariance matrix."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.linalg.lapack import dgecon

from .errors import NumericalError, StabilityError

STABILITY_EPS = 1e-12
ILL_CONDITIONED = 1e12
DIVERGENCE_LIMIT = 1e12

MODE_LABELS = ("a", "m", "B")


def symplectic_form(n_modes: int) -> np.ndarray:
    """``Omega = direct sum of [[0, 1], [-1, 0]]`` over ``n_modes`` modes."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric ``2n x 2n`` quadrature covariance matrix (vacuum = I/2)."""

    data: np.ndarray = field(repr=False)
    mode_labels: tuple[str, ...] = ()
    ill_conditioned: bool = False

    def __post_init__(self):
        v = np.array(self.data, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2:
            raise ValueError(f"covariance matrix must be square of even size, got {v.shape}")
        v = 0.5 * (v + v.T)
        v.setflags(write=False)
        object.__setattr__(self, "data", v)
        labels = tuple(self.mode_labels)
        if not labels:
            labels = tuple(MODE_LABELS[:self.n_modes]) if self.n_modes <= 3 else tuple(
                str(k) for k in range(self.n_modes)
            )
        if len(labels) != self.n_modes:
            raise ValueError(f"{len(labels)} labels for {self.n_modes} modes")
        object.__setattr__(self, "mode_labels", labels)

    @property
    def n_modes(self) -> int:
        return self.data.shape[0] // 2

    def physicality_margin(self) -> float:
        """Smallest eigenvalue of ``V + i Omega / 2`` (>= 0 for a physical state)."""
        h = self.data + 0.5j * symplectic_form(self.n_modes)
        return float(np.linalg.eigvalsh(h).min())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.data, dtype=dtype)


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    spectral_abscissa: float
    eigenvalues: tuple[complex, ...]

    def to_dict(self) -> dict:
        return {
            "stable": self.stable,
            "spectral_abscissa": self.spectral_abscissa,
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
        }


def is_stable(drift) -> StabilityReport:
    """Eigenvalue test: stable iff every real part is below ``-1e-12``."""
    a = np.asarray(drift, dtype=float)
    if not np.all(np.isfinite(a)):
        raise NumericalError("drift matrix has non-finite entries", a)
    try:
        ev = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue solver failed: {exc}", a) from exc
    ev = ev[np.lexsort((ev.imag, ev.real))]
    abscissa = float(ev.real.max())
    return StabilityReport(abscissa < -STABILITY_EPS, abscissa, tuple(complex(z) for z in ev))


def lyapunov_residual(drift, v, diffusion) -> float:
    """``||A V + V A^T + D||_F / ||D||_F``."""
    a = np.asarray(drift)
    v = np.asarray(v)
    d = np.asarray(diffusion)
    return float(np.linalg.norm(a @ v + v @ a.T + d) / np.linalg.norm(d))


def solve_lyapunov(drift, diffusion, mode_labels=()) -> CovarianceMatrix:
    """Solve ``A V + V A^T = -D`` as a dense Kronecker-vectorized system.

    Raises
    ------
    StabilityError
        If ``drift`` is not Hurwitz.
    """
    a = np.asarray(drift, dtype=float)
    d = np.asarray(diffusion, dtype=float)
    report = is_stable(a)
    if not report.stable:
        raise StabilityError(
            f"drift matrix is unstable (spectral abscissa {report.spectral_abscissa:.3e})"
        )
    n = a.shape[0]
    eye = np.eye(n)
    # row-major vec: vec(A V) = (A kron I) vec V, vec(V A^T) = (I kron A) vec V
    op = np.kron(a, eye) + np.kron(eye, a)
    lu, piv = lu_factor(op, check_finite=False)
    rcond, info = dgecon(lu, np.linalg.norm(op, 1), norm="1")
    v = lu_solve((lu, piv), -d.reshape(-1), check_finite=False).reshape(n, n)
    ill = bool(rcond == 0 or 1.0 / rcond > ILL_CONDITIONED)
    if ill:
        warnings.warn(f"Lyapunov operator is ill-conditioned (rcond={rcond:.2e})", RuntimeWarning)
    return CovarianceMatrix(v, tuple(mode_labels), ill_conditioned=ill)


def integrate_covariance(drift, diffusion, v0, t_final: float, dt: float) -> np.ndarray:
    """RK4 integration of ``dV/dt = A V + V A^T + D`` on raw arrays.

    Leading dimensions broadcast, so a stack of ``(k, n, n)`` systems is
    integrated in lock-step. The step is shrunk so that an integer number of
    steps lands exactly on ``t_final``.
    """
    if not dt > 0 or not t_final > 0:
        raise ValueError("dt and t_final must be positive")
    a = np.asarray(drift, dtype=float)
    at = np.swapaxes(a, -1, -2)
    d = np.asarray(diffusion, dtype=float)
    v = np.array(np.broadcast_to(v0, np.broadcast_shapes(np.shape(v0), a.shape)), dtype=float)
    steps = math.ceil(t_final / dt - 1e-9)
    h = t_final / steps

    def rhs(x):
        return a @ x + x @ at + d

    for k in range(steps):
        k1 = rhs(v)
        k2 = rhs(v + 0.5 * h * k1)
        k3 = rhs(v + 0.5 * h * k2)
        k4 = rhs(v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        v = 0.5 * (v + np.swapaxes(v, -1, -2))
        if k % 1024 == 0 and not np.all(np.abs(v) < DIVERGENCE_LIMIT):
            raise StabilityError(f"covariance integration diverged at t={(k + 1) * h:.6g}")
    if not np.all(np.abs(v) < DIVERGENCE_LIMIT):
        raise StabilityError(f"covariance integration diverged at t={t_final:.6g}")
    return v


def evolve_covariance(drift, diffusion, v0, t_final: float, dt: float) -> CovarianceMatrix:
    """Evolve a covariance matrix forward in time with classical RK4."""
    labels = v0.mode_labels if isinstance(v0, CovarianceMatrix) else ()
    v = integrate_covariance(drift, diffusion, np.asarray(v0), t_final, dt)
    return CovarianceMatrix(v, labels)
