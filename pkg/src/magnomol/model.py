"""Physical parameters, classical steady state, and the linearized quadrature model.

All rates and detunings are stored normalized to the vibrational frequency
``omega_nu``; ``omega_nu`` itself is carried in rad/s and only enters the
thermal occupation of the vibrational bath.

Quadrature order everywhere is ``(X_a, Y_a, X_m, Y_m, X_B, Y_B)`` with
``X = (o + o^dag)/sqrt(2)`` and ``Y = (o - o^dag)/(i sqrt(2))``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants, optimize

from .errors import ConvergenceError, InvalidParameterError

HBAR = constants.hbar
K_B = constants.k
#: Electron gyromagnetic ratio (magnitude), rad s^-1 T^-1, CODATA via scipy.
GYROMAGNETIC_RATIO = constants.physical_constants["electron gyromag. ratio"][0]
#: Spin density of YIG, m^-3.
YIG_SPIN_DENSITY = 4.22e27

DETUNING_MODES = ("effective", "bare")

BARE_RELAXATION = 0.5
BARE_TOLERANCE = 1e-12
BARE_MAX_ITERATIONS = 10_000


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation ``1 / (exp(hbar omega / k_B T) - 1)``.

    Parameters
    ----------
    omega : float
        Angular frequency in rad/s.
    temperature : float
        Bath temperature in kelvin. ``0`` gives exactly ``0``.
    """
    if not (math.isfinite(omega) and math.isfinite(temperature)):
        raise InvalidParameterError("omega/temperature", "must be finite")
    if omega <= 0:
        raise InvalidParameterError("omega", f"must be positive, got {omega}")
    if temperature < 0:
        raise InvalidParameterError("temperature", f"must be >= 0, got {temperature}")
    if temperature == 0:
        return 0.0
    x = HBAR * omega / (K_B * temperature)
    if x > 700.0:
        # expm1 overflows; exp(-x) is the same value to double precision here
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def drive_amplitude(field_amplitude: float, sphere_volume: float) -> float:
    """Magnon drive rate ``gamma * sqrt(5 N_spins) * B0 / 4`` in rad/s.

    ``N_spins = rho * V`` with the YIG spin density ``rho = 4.22e27 m^-3``.
    """
    if not (math.isfinite(field_amplitude) and math.isfinite(sphere_volume)):
        raise InvalidParameterError("field_amplitude/sphere_volume", "must be finite")
    if sphere_volume <= 0:
        raise InvalidParameterError("sphere_volume", f"must be positive, got {sphere_volume}")
    if field_amplitude < 0:
        raise InvalidParameterError("field_amplitude", f"must be >= 0, got {field_amplitude}")
    n_spins = YIG_SPIN_DENSITY * sphere_volume
    return GYROMAGNETIC_RATIO * math.sqrt(5.0 * n_spins) * field_amplitude / 4.0


@dataclass(frozen=True)
class SystemParams:
    """Bare parameters of the driven photon-magnon-vibration system.

    Defaults reproduce the common figure parameters: omega_nu/2pi = 30 THz,
    E_l = 3.8, gamma_nu = 0.005, g = 3.3e-6, |Delta_B| = 0.3 (negative branch),
    kappa_a = kappa_m = 0.0166, J = 0.2, N = 1e7, T = 210 K.
    """

    omega_nu: float = 2 * math.pi * 30e12
    delta_a: float = -1.0
    delta_m: float = 1.0
    delta_b: float = -0.3
    j_coupling: float = 0.2
    g_a: float = 3.3e-6
    g_m: float = 3.3e-6
    n_molecules: int = 10_000_000
    kappa_a: float = 0.0166
    kappa_m: float = 0.0166
    gamma_nu: float = 0.005
    drive: float = 3.8
    temperature: float = 210.0
    detuning_mode: str = "effective"

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name == "detuning_mode":
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
                raise InvalidParameterError(f.name, f"must be a number, got {value!r}")
            if not math.isfinite(value):
                raise InvalidParameterError(f.name, f"must be finite, got {value}")
        if self.omega_nu <= 0:
            raise InvalidParameterError("omega_nu", f"must be positive, got {self.omega_nu}")
        for name in ("kappa_a", "kappa_m", "gamma_nu"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(name, f"must be positive, got {getattr(self, name)}")
        if self.n_molecules < 1 or int(self.n_molecules) != self.n_molecules:
            raise InvalidParameterError(
                "n_molecules", f"must be a positive integer, got {self.n_molecules}"
            )
        if self.temperature < 0:
            raise InvalidParameterError("temperature", f"must be >= 0, got {self.temperature}")
        if self.detuning_mode not in DETUNING_MODES:
            raise InvalidParameterError(
                "detuning_mode", f"must be one of {DETUNING_MODES}, got {self.detuning_mode!r}"
            )
        object.__setattr__(self, "n_molecules", int(self.n_molecules))

    @property
    def big_g_a(self) -> float:
        """Collective photon-vibration coupling ``g_a sqrt(N)``."""
        return self.g_a * math.sqrt(self.n_molecules)

    @property
    def big_g_m(self) -> float:
        """Collective magnon-vibration coupling ``g_m sqrt(N)``."""
        return self.g_m * math.sqrt(self.n_molecules)

    def replace(self, **changes) -> SystemParams:
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class SteadyState:
    alpha: complex
    m_s: complex
    beta: complex
    iterations: int = 0
    residual: float = 0.0


@dataclass(frozen=True)
class LinearModel:
    delta_a_eff: float
    delta_tilde: float
    g_a_eff: float
    g_m_eff: float
    drift: np.ndarray = field(repr=False)
    diffusion: np.ndarray = field(repr=False)
    n_th: float = 0.0


def effective_detunings(params: SystemParams, beta: complex = 0j) -> tuple[float, float]:
    """Return ``(Delta~_a, Delta~_m)``.

    In ``effective`` mode the stored detunings already are the effective ones.
    In ``bare`` mode they are shifted by ``2 G Re[beta]``.
    """
    if params.detuning_mode == "effective":
        return params.delta_a, params.delta_m
    shift = 2.0 * beta.real
    return params.delta_a + params.big_g_a * shift, params.delta_m + params.big_g_m * shift


def _linear_amplitudes(params, delta_a_eff, delta_m_eff):
    # alpha = -iJ m/(i Da + ka);  m (i(Dm + DB) + km) = E - iJ alpha
    ca = 1j * delta_a_eff + params.kappa_a
    cm = 1j * (delta_m_eff + params.delta_b) + params.kappa_m
    j = params.j_coupling
    m_s = params.drive / (cm + j * j / ca)
    alpha = -1j * j * m_s / ca
    return alpha, m_s


def _beta_of(params, alpha, m_s):
    # omega_nu is 1 in normalized units
    source = params.big_g_a * abs(alpha) ** 2 + params.big_g_m * abs(m_s) ** 2
    return -1j * source / (1j + params.gamma_nu)


def steady_state_residual(params: SystemParams, alpha: complex, m_s: complex, beta: complex) -> float:
    """Max-norm mismatch of the three mean-field steady-state equations.

    Each equation's mismatch is divided by ``max(1, sum of |terms|)`` so the
    tolerance stays above the rounding floor at large amplitudes.
    """
    da, dm = effective_detunings(params, beta)
    j = params.j_coupling
    nv = params.big_g_a * abs(alpha) ** 2 + params.big_g_m * abs(m_s) ** 2
    terms = (
        (alpha * (1j * da + params.kappa_a), 1j * j * m_s),
        (m_s * (1j * (dm + params.delta_b) + params.kappa_m), -params.drive, 1j * j * alpha),
        (beta * (1j + params.gamma_nu), 1j * nv),
    )
    return float(max(abs(sum(t)) / max(1.0, sum(abs(x) for x in t)) for t in terms))


def solve_steady_state(
    params: SystemParams,
    *,
    relaxation: float = BARE_RELAXATION,
    tol: float = BARE_TOLERANCE,
    max_iterations: int = BARE_MAX_ITERATIONS,
) -> SteadyState:
    """Solve the classical fixed point ``(alpha, m_s, beta)``.

    ``effective`` mode solves the linear photon-magnon pair in closed form with
    the given detunings. ``bare`` mode iterates the detuning feedback through
    ``Re[beta]`` with a damped update until the residual drops below ``tol``.
    Near a fold of the response curve the damped map contracts too slowly; if
    it runs out of iterations, a secant solve on ``Re[beta]`` is started from
    the last iterate and accepted only if it meets ``tol``.
    """
    if params.detuning_mode == "effective":
        alpha, m_s = _linear_amplitudes(params, params.delta_a, params.delta_m)
        beta = _beta_of(params, alpha, m_s)
        return SteadyState(alpha, m_s, beta, 0, steady_state_residual(params, alpha, m_s, beta))

    beta = 0j
    residual = math.inf
    for it in range(1, max_iterations + 1):
        da, dm = effective_detunings(params, beta)
        alpha, m_s = _linear_amplitudes(params, da, dm)
        residual = steady_state_residual(params, alpha, m_s, beta)
        if residual < tol:
            return SteadyState(alpha, m_s, beta, it, residual)
        beta = (1.0 - relaxation) * beta + relaxation * _beta_of(params, alpha, m_s)
    polished = _polish(params, beta.real)
    if polished is not None and polished.residual < tol:
        return dataclasses.replace(polished, iterations=max_iterations)
    raise ConvergenceError("bare-mode steady state did not converge", residual, max_iterations)


def _state_at(params, x):
    da, dm = effective_detunings(params, complex(x, 0.0))
    alpha, m_s = _linear_amplitudes(params, da, dm)
    return alpha, m_s, _beta_of(params, alpha, m_s)


def _polish(params, x0):
    def gap(x):
        return _state_at(params, x)[2].real - x

    try:
        x = optimize.newton(gap, x0, x1=x0 * (1 + 1e-6) + 1e-12, tol=1e-15, maxiter=100)
    except (RuntimeError, OverflowError, ZeroDivisionError):
        return None
    alpha, m_s, beta = _state_at(params, x)
    return SteadyState(alpha, m_s, beta, 0, steady_state_residual(params, alpha, m_s, beta))


def effective_system(
    params: SystemParams, steady: SteadyState, *, collective: bool = True
) -> LinearModel:
    """Assemble the 6x6 drift and diffusion matrices around ``steady``.

    ``collective=False`` uses the single-molecule couplings ``g|amplitude|``
    instead of ``g sqrt(N) |amplitude|``.
    """
    da, dm = effective_detunings(params, steady.beta)
    dt = dm + params.delta_b
    if collective:
        ga = params.big_g_a * abs(steady.alpha)
        gm = params.big_g_m * abs(steady.m_s)
    else:
        ga = params.g_a * abs(steady.alpha)
        gm = params.g_m * abs(steady.m_s)
    ka, km, gn, j = params.kappa_a, params.kappa_m, params.gamma_nu, params.j_coupling
    w = 1.0

    drift = np.array(
        [
            [-ka, da, 0.0, j, 0.0, 0.0],
            [-da, -ka, -j, 0.0, -2 * ga, 0.0],
            [0.0, j, -km, dt, 0.0, 0.0],
            [-j, 0.0, -dt, -km, -2 * gm, 0.0],
            [0.0, 0.0, 0.0, 0.0, -gn, w],
            [-2 * ga, 0.0, -2 * gm, 0.0, -w, -gn],
        ]
    )
    n_th = thermal_occupation(params.omega_nu, params.temperature)
    vib = gn * (2 * n_th + 1)
    diffusion = np.diag([ka, ka, km, km, vib, vib])
    drift.setflags(write=False)
    diffusion.setflags(write=False)
    return LinearModel(float(da), float(dt), float(ga), float(gm), drift, diffusion, n_th)


def linearize(params: SystemParams, *, collective: bool = True) -> tuple[SteadyState, LinearModel]:
    steady = solve_steady_state(params)
    return steady, effective_system(params, steady, collective=collective)
