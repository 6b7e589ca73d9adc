"""Gaussian correlation measures on quadrature covariance matrices.

Conventions: vacuum covariance ``I/2``, natural logarithms, mode indices
``a=0, m=1, B=2`` into the three-mode matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np
from scipy.special import xlogy

from .dynamics import CovarianceMatrix, symplectic_form
from .errors import InvalidParameterError, NumericalError

MODE_INDEX = {"a": 0, "m": 1, "B": 2}
MODE_NAMES = ("a", "m", "B")

PAIRS = (("a", "m"), ("a", "B"), ("m", "B"))
#: Partitions r|st in the order a|mB, m|aB, B|am.
PARTITIONS = (("a", ("m", "B")), ("m", ("a", "B")), ("B", ("a", "m")))
DIRECTIONS = tuple((s, t) for s in MODE_NAMES for t in MODE_NAMES if s != t)

FIRST_TO_SECOND = "first->second"
SECOND_TO_FIRST = "second->first"

MEASURE_GROUPS = ("entanglement", "contangle", "discord", "steering")

DISC_TOL = 1e-12
G_ARG_TOL = 1e-9
I3_EPS = 1e-15
BRANCH_EPS = 1e-12
#: relative size below which a float discriminant is recomputed exactly
CANCELLATION = 1e-6
# log-negativity / steering below this are rounding noise on a separable state
NOISE_FLOOR = 1e-12


class _NoSignal:
    """Marker for a contrast ratio whose two inputs are both zero."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NO_SIGNAL"

    def __str__(self):
        return "no-signal"

    def __reduce__(self):
        return (_NoSignal, ())


NO_SIGNAL = _NoSignal()


def _index(mode) -> int:
    if isinstance(mode, str):
        try:
            return MODE_INDEX[mode]
        except KeyError:
            raise InvalidParameterError("mode", f"unknown mode {mode!r}") from None
    return int(mode)


def _arr(v) -> np.ndarray:
    return v.data if isinstance(v, CovarianceMatrix) else np.asarray(v, dtype=float)


def reduced_cm(v, modes: Iterable) -> CovarianceMatrix:
    """Submatrix over the quadrature pairs of ``modes``, in the given order."""
    data = _arr(v)
    n = data.shape[0] // 2
    idx = [_index(m) for m in modes]
    if len(set(idx)) != len(idx):
        raise InvalidParameterError("modes", f"indices must be distinct, got {idx}")
    for k in idx:
        if not 0 <= k < n:
            raise InvalidParameterError("modes", f"index {k} out of range for {n} modes")
    quad = [q for k in idx for q in (2 * k, 2 * k + 1)]
    labels = None
    if isinstance(v, CovarianceMatrix):
        labels = tuple(v.mode_labels[k] for k in idx)
    return CovarianceMatrix(data[np.ix_(quad, quad)], labels or ())


def _blocks(v4):
    data = _arr(v4)
    if data.shape != (4, 4):
        raise InvalidParameterError("v4", f"expected a 4x4 two-mode matrix, got {data.shape}")
    return data[:2, :2], data[2:, 2:], data[:2, 2:], data


def symplectic_eigenvalues(v) -> np.ndarray:
    """Symplectic spectrum of a positive-definite ``V``, one value per mode, ascending.

    Taken as the positive eigenvalues of the Hermitian ``i V^1/2 Omega V^1/2``,
    which stays well conditioned when the spectrum is degenerate (near-vacuum
    blocks), unlike the characteristic-polynomial route.
    """
    data = _arr(v)
    n = data.shape[0] // 2
    try:
        w, u = np.linalg.eigh(data)
        if w.min() <= 0:
            raise NumericalError("covariance matrix is not positive definite", data)
        root = (u * np.sqrt(w)) @ u.T
        ev = np.linalg.eigvalsh(1j * root @ symplectic_form(n) @ root)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue solver failed: {exc}", data) from exc
    return np.sort(ev)[n:]


def _floor(x: float) -> float:
    return x if x > NOISE_FLOOR else 0.0


def log_negativity(v4) -> float:
    """Two-mode logarithmic negativity ``max[0, -ln 2 zeta]``.

    ``zeta`` is the smaller symplectic eigenvalue after flipping the second
    mode's momentum.
    """
    _, _, _, v = _blocks(v4)
    p = np.array([1.0, 1.0, 1.0, -1.0])
    zeta = symplectic_eigenvalues(p[:, None] * v * p[None, :])[0]
    return _floor(-math.log(2.0 * zeta))


def transpose_mask(partition) -> np.ndarray:
    """Diagonal of the partial-transposition matrix flipping the momentum of ``partition``."""
    r = _index(partition)
    diag = np.ones(6)
    diag[2 * r + 1] = -1.0
    return diag


def one_vs_two_negativity(v6, partition) -> float:
    """Logarithmic negativity between mode ``partition`` and the other two modes."""
    data = _arr(v6)
    if data.shape != (6, 6):
        raise InvalidParameterError("v6", f"expected a 6x6 three-mode matrix, got {data.shape}")
    p = transpose_mask(partition)
    eta = symplectic_eigenvalues(p[:, None] * data * p[None, :])[0]
    return _floor(-math.log(2.0 * eta))


def residual_contangle(v6) -> tuple[tuple[float, float, float], float]:
    """Residual contangles ``R^{r|st}`` for r = a, m, B and their minimum.

    Values are returned unclamped so monogamy violations stay visible.
    """
    parts = []
    for r, (s, t) in PARTITIONS:
        c_r_st = one_vs_two_negativity(v6, r) ** 2
        c_r_s = log_negativity(reduced_cm(v6, (r, s))) ** 2
        c_r_t = log_negativity(reduced_cm(v6, (r, t))) ** 2
        parts.append(c_r_st - c_r_s - c_r_t)
    return tuple(parts), min(parts)


def _g(x: float) -> float:
    if x < 0.5 - G_ARG_TOL:
        raise NumericalError(f"entropy argument {x!r} below 1/2")
    x = max(x, 0.5)
    return float(xlogy(x + 0.5, x + 0.5) - xlogy(x - 0.5, x - 0.5))


def _det2_exact(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _det4_exact(v):
    # Laplace expansion along the first two rows
    total = Fraction(0)
    cols = range(4)
    for j, k in itertools.combinations(cols, 2):
        rest = [c for c in cols if c not in (j, k)]
        sign = -1 if (j + k + 1) % 2 else 1
        top = v[0][j] * v[1][k] - v[0][k] * v[1][j]
        bottom = v[2][rest[0]] * v[3][rest[1]] - v[2][rest[1]] * v[3][rest[0]]
        total += sign * top * bottom
    return total


def _exact_invariants(v):
    f = [[Fraction(float(x)) for x in row] for row in v]
    i1 = _det2_exact([r[:2] for r in f[:2]])
    i2 = _det2_exact([r[2:] for r in f[2:]])
    i3 = _det2_exact([r[2:] for r in f[:2]])
    return i1, i2, i3, _det4_exact(f)


# Radicands below are plain arithmetic so they evaluate on floats or Fractions.
def _rad_nu(i1, i2, i3, i4):
    return (i1 + i2 + 2 * i3) ** 2 - 4 * i4


def _rad_w_first(i1, i2, i3, i4):
    return 4 * i3 * i3 + (4 * i1 - 1) * (4 * i4 - i2)


def _rad_w_second(i1, i2, i3, i4):
    return (i1 * i2 + i4 - i3 * i3) ** 2 - 4 * i1 * i2 * i4


class _Invariants:
    """Float determinants of a two-mode CM with exact fallback for radicands."""

    def __init__(self, v):
        self.v = v
        p1, p2, p3 = v[:2, :2], v[2:, 2:], v[:2, 2:]
        self.floats = tuple(float(np.linalg.det(x)) for x in (p1, p2, p3, v))
        self._exact = None

    def radicand(self, fn, scale):
        fast = fn(*self.floats)
        if abs(fast) > CANCELLATION * scale:
            return fast
        if self._exact is None:
            self._exact = _exact_invariants(self.v)
        return float(fn(*self._exact))


def _discord_w(inv: _Invariants) -> float:
    i1, i2, i3, i4 = inv.floats
    use_first = False
    if abs(i3) >= I3_EPS and abs(4 * i1 - 1) >= BRANCH_EPS:
        cond = 4 * (i1 * i2 - i4) ** 2 / ((i2 + 4 * i4) * (1 + 4 * i1) * i3 * i3)
        use_first = cond <= 1
    if use_first:
        rad = inv.radicand(_rad_w_first, 4 * i3 * i3 + abs((4 * i1 - 1) * (4 * i4 - i2)))
        return ((2 * abs(i3) + math.sqrt(max(rad, 0.0))) / (4 * i1 - 1)) ** 2
    q = i1 * i2 + i4 - i3 * i3
    rad = inv.radicand(_rad_w_second, q * q + 4 * abs(i1 * i2 * i4))
    # rationalized (q - sqrt(rad)) / (2 i1)
    return 2 * i2 * i4 / (q + math.sqrt(max(rad, 0.0)))


def gaussian_discord(v4) -> float:
    """Gaussian quantum discord with the Gaussian measurement on the first mode.

    Radicands that lose most of their digits to cancellation (near-pure
    states) are re-evaluated exactly from the matrix entries.
    """
    _, _, _, v = _blocks(v4)
    inv = _Invariants(v)
    i1, i2, i3, i4 = inv.floats
    sigma = i1 + i2 + 2 * i3
    disc = inv.radicand(_rad_nu, sigma * sigma + 4 * abs(i4))
    if disc < -DISC_TOL:
        raise NumericalError(f"negative discriminant {disc:.3e} in discord", v)
    root = math.sqrt(max(disc, 0.0))
    nu_plus = math.sqrt(0.5 * (sigma + root))
    nu_minus = math.sqrt(2 * i4 / (sigma + root))
    w = _discord_w(inv)
    value = _g(math.sqrt(i1)) - _g(nu_minus) - _g(nu_plus) + _g(math.sqrt(max(w, 0.0)))
    return max(0.0, value)


def steering(v4, direction: str = FIRST_TO_SECOND) -> float:
    """Gaussian steerability ``max[0, 1/2 ln(det V_steerer / (4 det V))]``."""
    p1, p2, _, v = _blocks(v4)
    if direction == FIRST_TO_SECOND:
        steerer = p1
    elif direction == SECOND_TO_FIRST:
        steerer = p2
    else:
        raise InvalidParameterError("direction", f"unknown steering direction {direction!r}")
    det_s = np.linalg.det(steerer)
    det_v = np.linalg.det(v)
    if det_s <= 0 or det_v <= 0:
        raise NumericalError("non-positive determinant in steering", v)
    return _floor(0.5 * math.log(det_s / (4.0 * det_v)))


def contrast_ratio(value_pos: float, value_neg: float):
    """``|x+ - x-| / (x+ + x-)``; ``NO_SIGNAL`` when both inputs are zero."""
    if not (value_pos >= 0 and value_neg >= 0):
        raise InvalidParameterError("contrast_ratio", f"inputs must be >= 0, got {value_pos}, {value_neg}")
    total = value_pos + value_neg
    if total == 0:
        return NO_SIGNAL
    return abs(value_pos - value_neg) / total


def steering_key(steerer: str, steered: str) -> str:
    return f"g_{steerer}_to_{steered}"


@dataclass(frozen=True)
class CorrelationReport:
    """All scalar measures at one parameter point.

    Measure fields are ``None`` when the point is unstable, failed, or the
    measure group was not requested. ``d_xy`` measures on mode ``x``.
    """

    stable: bool
    spectral_abscissa: Optional[float] = None
    nu_min: Optional[float] = None
    physicality_margin: Optional[float] = None
    e_am: Optional[float] = None
    e_aB: Optional[float] = None
    e_mB: Optional[float] = None
    r_min: Optional[float] = None
    r_parts: Optional[tuple] = None
    d_am: Optional[float] = None
    d_aB: Optional[float] = None
    d_mB: Optional[float] = None
    steering: Optional[dict] = field(default=None)
    error: Optional[str] = None

    def to_flat(self) -> dict:
        """Flat key-value mapping with stable column names."""
        out = {
            "stable": self.stable,
            "spectral_abscissa": self.spectral_abscissa,
            "nu_min": self.nu_min,
            "physicality_margin": self.physicality_margin,
            "e_am": self.e_am,
            "e_aB": self.e_aB,
            "e_mB": self.e_mB,
            "r_min": self.r_min,
        }
        parts = self.r_parts or (None, None, None)
        for (r, (s, t)), value in zip(PARTITIONS, parts):
            out[f"r_{r}_{s}{t}"] = value
        out.update(d_am=self.d_am, d_aB=self.d_aB, d_mB=self.d_mB)
        for s, t in DIRECTIONS:
            key = steering_key(s, t)
            out[key] = None if self.steering is None else self.steering[key]
        out["error"] = self.error
        return out

    def value(self, name: str):
        """Look up any flat column, e.g. ``"e_aB"`` or ``"g_B_to_a"``."""
        return self.to_flat()[name]


FLAT_COLUMNS = tuple(CorrelationReport(stable=False).to_flat())
MEASURE_COLUMNS = tuple(
    c for c in FLAT_COLUMNS if c not in ("stable", "spectral_abscissa", "error")
)


def correlate(v6, measures: Iterable[str] = MEASURE_GROUPS, spectral_abscissa=None) -> CorrelationReport:
    """Evaluate the requested measure groups on a stable three-mode CM."""
    cm = v6 if isinstance(v6, CovarianceMatrix) else CovarianceMatrix(v6)
    measures = set(measures)
    unknown = measures - set(MEASURE_GROUPS)
    if unknown:
        raise InvalidParameterError("measures", f"unknown measure groups {sorted(unknown)}")
    values: dict = {
        "stable": True,
        "spectral_abscissa": spectral_abscissa,
        "nu_min": float(symplectic_eigenvalues(cm)[0]),
        "physicality_margin": cm.physicality_margin(),
    }
    reduced = {pair: reduced_cm(cm, pair) for pair in PAIRS}
    if "entanglement" in measures:
        for (s, t), sub in reduced.items():
            values[f"e_{s}{t}"] = log_negativity(sub)
    if "contangle" in measures:
        parts, r_min = residual_contangle(cm)
        values["r_parts"] = parts
        values["r_min"] = r_min
    if "discord" in measures:
        for (s, t), sub in reduced.items():
            values[f"d_{s}{t}"] = gaussian_discord(sub)
    if "steering" in measures:
        st = {}
        for (s, t), sub in reduced.items():
            st[steering_key(s, t)] = steering(sub, FIRST_TO_SECOND)
            st[steering_key(t, s)] = steering(sub, SECOND_TO_FIRST)
        values["steering"] = {steering_key(s, t): st[steering_key(s, t)] for s, t in DIRECTIONS}
    return CorrelationReport(**values)


REPORT_FIELDS = tuple(f.name for f in fields(CorrelationReport))
