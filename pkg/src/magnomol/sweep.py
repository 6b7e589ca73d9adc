"""Parameter grids, Barnett-branch pairing, and contrast ratios."""

from __future__ import annotations

import dataclasses
import datetime as _dt
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dynamics import is_stable, solve_lyapunov
from .errors import InvalidParameterError, MagnomolError, SweepError
from .measures import MEASURE_GROUPS, NO_SIGNAL, CorrelationReport, contrast_ratio, correlate
from .model import SystemParams, linearize

BRANCHES = ("both", "positive", "negative")
SCALES = ("linear", "log")
#: Measures that receive a bidirectional contrast column.
CONTRAST_MEASURES = ("e_am", "e_aB", "e_mB", "r_min")

SWEEPABLE = tuple(
    f.name for f in dataclasses.fields(SystemParams) if f.name != "detuning_mode"
)


def run_point(
    params: SystemParams, measures=MEASURE_GROUPS, *, collective: bool = True
) -> CorrelationReport:
    """Steady state, linearization, stability, Lyapunov solve, then all measures."""
    _, lin = linearize(params, collective=collective)
    stab = is_stable(lin.drift)
    if not stab.stable:
        return CorrelationReport(stable=False, spectral_abscissa=stab.spectral_abscissa)
    v = solve_lyapunov(lin.drift, lin.diffusion)
    return correlate(v, measures, spectral_abscissa=stab.spectral_abscissa)


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.name not in SWEEPABLE:
            raise InvalidParameterError("axis", f"{self.name!r} is not a sweepable parameter")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise InvalidParameterError("axis", "range must be finite")
        if int(self.points) != self.points or self.points < 1:
            raise InvalidParameterError("points", f"must be a positive integer, got {self.points}")
        if self.points == 1 and self.start != self.stop:
            raise InvalidParameterError("points", "a single-point axis needs start == stop")
        if self.scale not in SCALES:
            raise InvalidParameterError("scale", f"must be one of {SCALES}, got {self.scale!r}")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise InvalidParameterError("scale", "log axis needs positive bounds")

    def values(self) -> list:
        if self.scale == "log":
            vals = np.geomspace(self.start, self.stop, self.points)
        else:
            vals = np.linspace(self.start, self.stop, self.points)
        if self.name == "n_molecules":
            return [int(round(x)) for x in vals]
        return [float(x) for x in vals]


@dataclass(frozen=True)
class SweepSpec:
    base: SystemParams
    axes: tuple
    barnett_branches: str = "both"
    measures_requested: tuple = MEASURE_GROUPS
    worker_count: int = 1
    collective: bool = True
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "measures_requested", tuple(self.measures_requested))
        if not 1 <= len(self.axes) <= 2:
            raise InvalidParameterError("axes", f"need 1 or 2 axes, got {len(self.axes)}")
        if len({a.name for a in self.axes}) != len(self.axes):
            raise InvalidParameterError("axes", "axis names must differ")
        if self.barnett_branches not in BRANCHES:
            raise InvalidParameterError("branches", f"must be one of {BRANCHES}")
        bad = set(self.measures_requested) - set(MEASURE_GROUPS)
        if bad:
            raise InvalidParameterError("measures", f"unknown measure groups {sorted(bad)}")
        if int(self.worker_count) != self.worker_count or self.worker_count < 1:
            raise InvalidParameterError("workers", f"must be a positive integer, got {self.worker_count}")

    @property
    def signs(self) -> tuple:
        return {"both": (-1, 1), "positive": (1,), "negative": (-1,)}[self.barnett_branches]

    def grid(self) -> list:
        """Axis-value tuples in row-major order (first axis outermost)."""
        return list(itertools.product(*(a.values() for a in self.axes)))

    def point_params(self, values, sign: int) -> SystemParams:
        changes = {a.name: v for a, v in zip(self.axes, values)}
        params = self.base.replace(**changes)
        return params.replace(delta_b=sign * abs(params.delta_b))

    def with_workers(self, n: int) -> SweepSpec:
        return dataclasses.replace(self, worker_count=n)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "base": dataclasses.asdict(self.base),
            "axes": [dataclasses.asdict(a) for a in self.axes],
            "barnett_branches": self.barnett_branches,
            "measures_requested": list(self.measures_requested),
            "collective": self.collective,
        }


@dataclass(frozen=True)
class SweepRow:
    index: int
    values: tuple
    sign: int
    delta_b: float
    report: CorrelationReport


@dataclass(frozen=True)
class ContrastRow:
    index: int
    values: tuple
    contrasts: dict


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list
    contrasts: list
    metadata: dict = field(default_factory=dict)

    @property
    def axis_names(self) -> tuple:
        return tuple(a.name for a in self.spec.axes)

    @property
    def any_unstable(self) -> bool:
        return any(not r.report.stable for r in self.rows)

    def branch(self, sign: int) -> list:
        return [r for r in self.rows if r.sign == sign]

    def series(self, measure: str, sign: int) -> tuple:
        """``(axis values, measure values)`` for one branch; ``None`` where missing."""
        rows = self.branch(sign)
        return [r.values for r in rows], [r.report.value(measure) for r in rows]

    def contrast_at(self, index: int) -> Optional[dict]:
        for c in self.contrasts:
            if c.index == index:
                return c.contrasts
        return None


def _evaluate(task):
    params, measures, collective = task
    try:
        return run_point(params, measures, collective=collective)
    except (MagnomolError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return CorrelationReport(stable=False, error=f"{type(exc).__name__}: {exc}")


def _contrasts(neg: CorrelationReport, pos: CorrelationReport) -> dict:
    out = {}
    for m in CONTRAST_MEASURES:
        x_pos, x_neg = pos.value(m), neg.value(m)
        if x_pos is None or x_neg is None:
            out[m] = None
        else:
            # residual contangles can carry rounding-level negatives
            out[m] = contrast_ratio(max(x_pos, 0.0), max(x_neg, 0.0))
    return out


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every grid point on every requested Barnett branch.

    Output order is row-major over the grid with the negative branch first,
    independent of ``spec.worker_count``.
    """
    grid = spec.grid()
    keys = [(i, values, sign) for i, values in enumerate(grid) for sign in spec.signs]
    tasks = [
        (spec.point_params(values, sign), spec.measures_requested, spec.collective)
        for _, values, sign in keys
    ]
    if spec.worker_count == 1 or len(tasks) == 1:
        reports = [_evaluate(t) for t in tasks]
    else:
        workers = min(spec.worker_count, len(tasks))
        chunk = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_evaluate, tasks, chunksize=chunk))

    rows = [
        SweepRow(i, values, sign, task[0].delta_b, rep)
        for (i, values, sign), task, rep in zip(keys, tasks, reports)
    ]
    if all(r.report.error is not None for r in rows):
        raise SweepError(f"all {len(rows)} sweep points failed; first error: {rows[0].report.error}")

    contrasts = []
    if len(spec.signs) == 2:
        for k in range(0, len(rows), 2):
            neg, pos = rows[k], rows[k + 1]
            if neg.report.stable and pos.report.stable:
                contrasts.append(ContrastRow(neg.index, neg.values, _contrasts(neg.report, pos.report)))

    from . import __version__

    metadata = {
        "spec": spec.to_dict(),
        "code_version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    return SweepResult(spec, rows, contrasts, metadata)


def cutoff(values, series) -> Optional[float]:
    """Last axis value with a strictly positive measure, or ``None``."""
    last = None
    for x, y in zip(values, series):
        if y is not None and y > 0:
            last = x
    return last


def summarize(result: SweepResult, measures=None) -> str:
    """One-line qualitative summary: per-branch maxima and their locations."""
    from .presets import HEADLINES

    spec = result.spec
    measures = measures or HEADLINES.get(spec.name, ("e_am", "e_aB", "e_mB", "r_min"))
    names = result.axis_names
    parts = []
    for m in measures:
        if m.startswith("contrast_"):
            base = m[len("contrast_"):]
            best = None
            for c in result.contrasts:
                val = c.contrasts.get(base)
                if isinstance(val, float) and (best is None or val > best[0]):
                    best = (val, c.values)
            if best is not None:
                parts.append(f"max {m}={best[0]:.4g} at {_loc(names, best[1])}")
            else:
                parts.append(f"max {m}=n/a")
            continue
        for sign in spec.signs:
            xs, ys = result.series(m, sign)
            pairs = [(y, x) for x, y in zip(xs, ys) if y is not None]
            tag = "dB<0" if sign < 0 else "dB>0"
            if not pairs:
                parts.append(f"max {m}[{tag}]=n/a")
                continue
            y, x = max(pairs, key=lambda p: p[0])
            parts.append(f"max {m}[{tag}]={y:.4g} at {_loc(names, x)}")
    if names == ("temperature",):
        for sign in spec.signs:
            xs, ys = result.series("e_aB", sign)
            c = cutoff([x[0] for x in xs], ys)
            tag = "dB<0" if sign < 0 else "dB>0"
            parts.append(f"e_aB cutoff[{tag}]=" + ("none" if c is None else f"{c:.6g} K"))
    return f"{spec.name}: " + "; ".join(parts)


def _loc(names, values) -> str:
    return ",".join(f"{n}={v:.4g}" for n, v in zip(names, values))


__all__ = [
    "Axis",
    "CONTRAST_MEASURES",
    "ContrastRow",
    "NO_SIGNAL",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "cutoff",
    "run_point",
    "run_sweep",
    "summarize",
]
