"""Parameter grids and phase-diagram sweeps.

A sweep is evaluated in fixed-size chunks.  Chunk boundaries depend only on the
grid and ``chunk_size``, never on the number of workers, so the output is
bit-identical whatever the parallelism.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import estimators, quantum_model
from .classifier import CASE_TO_OUTCOME_INDEX, OUTCOMES, ValidationError, decide
from .scenario import _QUANTITY_FIELDS, FieldKind, MirrorConfig, MirrorTiming, Scenario, moments, validate
from .units import LENGTH, TIME, as_planck

DEFAULT_CHUNK = 4096

# derived axes set the source strength from a target moment at the current d
MOMENT_AXES = {"D_A", "Q_A", "moment"}
MIRROR_AXES = {"R_M": "radius", "T_M": "erection_time"}
AXIS_NAMES = set(_QUANTITY_FIELDS) | MOMENT_AXES | set(MIRROR_AXES)


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    points: int
    spacing: str = "log"

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigurationError(f"unknown axis {self.name!r}; choose from {sorted(AXIS_NAMES)}")
        if self.spacing not in ("linear", "log"):
            raise ConfigurationError(f"axis {self.name}: spacing must be 'linear' or 'log'")
        if int(self.points) != self.points or self.points < 2:
            raise ConfigurationError(f"axis {self.name}: need at least 2 points")
        if not self.min < self.max:
            raise ConfigurationError(f"axis {self.name}: min must be below max")
        if self.spacing == "log" and self.min <= 0:
            raise ConfigurationError(f"axis {self.name}: log spacing needs min > 0")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, int(self.points))
        return np.linspace(self.min, self.max, int(self.points))


@dataclass(frozen=True)
class GridSpec:
    """Swept axes (row-major, first axis slowest) plus fixed scenario parameters.

    ``fixed`` holds any Scenario keyword (numbers in Planck units); mirror
    settings use ``mirror_timing``, ``mirror_radius`` and ``mirror_erection_time``.
    """

    field: FieldKind
    axes: tuple = ()
    fixed: dict = field(default_factory=dict)
    slack: tuple = (0.1, 10.0)
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "field", FieldKind.parse(self.field))
        object.__setattr__(self, "axes", tuple(self.axes))
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ConfigurationError("duplicate axis names")
        if len(MOMENT_AXES & set(names)) > 1:
            raise ConfigurationError("sweep at most one of D_A, Q_A, moment")
        if "D_A" in names and self.field is not FieldKind.ELECTROMAGNETIC:
            raise ConfigurationError("axis D_A is only meaningful for the electromagnetic version")
        if "Q_A" in names and self.field is not FieldKind.GRAVITATIONAL:
            raise ConfigurationError("axis Q_A is only meaningful for the gravitational version")
        c_min, c_max = self.slack
        if not 0 < c_min <= 1 <= c_max:
            raise ConfigurationError("slack interval must satisfy 0 < c_min <= 1 <= c_max")

    @property
    def shape(self) -> tuple:
        return tuple(int(a.points) for a in self.axes)

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    def axis_columns(self, index: np.ndarray) -> dict:
        """Values of each swept axis at flat row-major indices ``index``."""
        cols = {}
        if not self.axes:
            return cols
        multi = np.unravel_index(index, self.shape)
        for axis, idx in zip(self.axes, multi):
            cols[axis.name] = axis.values()[idx]
        return cols

    def scenario(self, index: Optional[np.ndarray] = None) -> Scenario:
        """Batch scenario for the given flat indices (all grid points by default)."""
        if index is None:
            index = np.arange(self.size)
        index = np.asarray(index)
        n = index.size
        params = dict(self.fixed)
        mirror = {k: params.pop(k) for k in ("mirror_timing", "mirror_radius", "mirror_erection_time") if k in params}
        cols = self.axis_columns(index)
        for name, vals in cols.items():
            if name in _QUANTITY_FIELDS:
                params[name] = vals
            elif name in MIRROR_AXES:
                mirror["mirror_radius" if name == "R_M" else "mirror_erection_time"] = vals
        for name in _QUANTITY_FIELDS:
            if name in params:
                params[name] = np.broadcast_to(np.asarray(as_planck(params[name], _QUANTITY_FIELDS[name]), dtype=float), (n,))
        if mirror:
            if "mirror_radius" not in mirror:
                raise ConfigurationError("mirror settings need mirror_radius")
            params["mirror"] = MirrorConfig(
                radius=np.broadcast_to(np.asarray(as_planck(mirror["mirror_radius"], LENGTH), dtype=float), (n,)),
                timing=MirrorTiming(mirror.get("mirror_timing", "always")),
                erection_time=None if "mirror_erection_time" not in mirror else
                np.broadcast_to(np.asarray(as_planck(mirror["mirror_erection_time"], TIME), dtype=float), (n,)),
            )
        try:
            s = Scenario(field=self.field, slack=self.slack, **params)
        except TypeError as exc:
            raise ConfigurationError(str(exc)) from None
        moment_axis = MOMENT_AXES & set(cols)
        if moment_axis:
            target = cols[moment_axis.pop()]
            n_order = int(s.multipole_order)
            source = target / np.asarray(s.d, dtype=float) ** n_order
            s = s.replace(**({"q_A": source} if s.is_em else {"m_A": source}))
        return s


COLUMNS = [
    "index", "field",
    "q_A[q_P]", "q_B[q_P]", "m_A[m_P]", "m_B[m_P]", "d[l_P]", "D[l_P]", "T_A[t_P]", "T_B[t_P]",
    "moment[planck]", "multipole_order", "bob_opens",
    "which_path_ratio", "recoherence_N", "alice_spacelike", "bob_spacelike",
    "outcome", "V", "D_dist", "signaling_metric",
]
MIRROR_COLUMNS = ["mirror_timing", "R_M[l_P]", "T_M[t_P]"]


def evaluate(grid: GridSpec, index: np.ndarray) -> dict:
    """Evaluate every reported quantity at flat grid indices ``index``; returns column arrays."""
    s = grid.scenario(index)
    problems = validate(s)
    if problems:
        raise ValidationError(problems)
    n = index.size
    wp = estimators.which_path_criterion(s)
    rec = estimators.recoherence_criterion(s)
    alice_sp, bob_sp = (np.broadcast_to(np.asarray(x), (n,)) for x in estimators.spacelike(s))
    codes = decide(s)
    names = np.array([o.value for o in OUTCOMES], dtype=object)
    comp = quantum_model.complementarity_check(s)
    bc = lambda x: np.broadcast_to(np.asarray(x, dtype=float), (n,))
    out = {
        "index": index,
        "q_A[q_P]": bc(s.q_A), "q_B[q_P]": bc(s.q_B), "m_A[m_P]": bc(s.m_A), "m_B[m_P]": bc(s.m_B),
        "d[l_P]": bc(s.d), "D[l_P]": bc(s.D), "T_A[t_P]": bc(s.T_A), "T_B[t_P]": bc(s.T_B),
        "moment[planck]": bc(moments(s).effective.value),
        "which_path_ratio": bc(wp.ratio), "recoherence_N": bc(rec.ratio),
        "alice_spacelike": alice_sp, "bob_spacelike": bob_sp,
        "outcome": names[CASE_TO_OUTCOME_INDEX[codes]],
        "V": bc(comp.visibility), "D_dist": bc(comp.distinguishability),
        "signaling_metric": bc(quantum_model.signaling_metric(s)),
    }
    if s.mirror is not None:
        out["R_M[l_P]"] = bc(s.mirror.radius)
        out["T_M[t_P]"] = bc(np.nan if s.mirror.erection_time is None else s.mirror.erection_time)
    return out


def _evaluate_chunk(args):
    grid, start, stop = args
    return evaluate(grid, np.arange(start, stop))


def run_sweep(grid: GridSpec, workers: int = 1, chunk_size: int = DEFAULT_CHUNK) -> dict:
    """Evaluate the whole grid; returns column arrays in row-major order."""
    total = max(grid.size, 1)
    bounds = [(grid, a, min(a + chunk_size, total)) for a in range(0, total, chunk_size)]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_evaluate_chunk, bounds))
    else:
        parts = [_evaluate_chunk(b) for b in bounds]
    return {key: np.concatenate([p[key] for p in parts]) for key in parts[0]}


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(grid: GridSpec, columns: dict, stream) -> None:
    mirror = "R_M[l_P]" in columns
    header = COLUMNS + (MIRROR_COLUMNS if mirror else [])
    writer = csv.writer(stream, lineterminator="\r\n")
    writer.writerow(header)
    n = len(columns["index"])
    order = int(grid.fixed.get("multipole_order") or (1 if grid.field is FieldKind.ELECTROMAGNETIC else 2))
    bob_opens = bool(grid.fixed.get("bob_opens", True))
    timing = MirrorTiming(grid.fixed.get("mirror_timing", "always")).value if mirror else None
    for i in range(n):
        row = []
        for name in header:
            if name == "field":
                row.append(grid.field.value)
            elif name == "multipole_order":
                row.append(str(order))
            elif name == "bob_opens":
                row.append(_fmt(bob_opens))
            elif name == "mirror_timing":
                row.append(timing)
            else:
                row.append(_fmt(columns[name][i]))
        writer.writerow(row)


def sweep_to_csv(grid: GridSpec, workers: int = 1, chunk_size: int = DEFAULT_CHUNK) -> str:
    buf = io.StringIO()
    write_csv(grid, run_sweep(grid, workers=workers, chunk_size=chunk_size), buf)
    return buf.getvalue()
