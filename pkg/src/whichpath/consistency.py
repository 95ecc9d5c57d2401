"""Executable no-paradox theorems, counterfactual probes, and the signaling-residue sweep."""

from __future__ import annotations

import csv
import enum
import io
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import estimators, quantum_model
from .classifier import classify
from .scenario import FieldKind, Scenario
from .sweep import Axis, ConfigurationError, GridSpec

DECADES = 6


class Ingredient(str, enum.Enum):
    VACUUM_FLUCTUATIONS = "vacuum-fluctuations"
    QUANTIZED_RADIATION = "quantized-radiation"


def default_order(field: FieldKind) -> int:
    return 1 if FieldKind.parse(field) is FieldKind.ELECTROMAGNETIC else 2


@dataclass
class TheoremReport:
    field: FieldKind
    multipole_order: int
    trials: int
    seed: int
    evaluated: int
    violations: int
    sup_ratio: float
    sup_ratio_over_bound: float
    runtime_s: float
    counterexample: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "field": self.field.value,
            "multipole_order": self.multipole_order,
            "trials": self.trials,
            "seed": self.seed,
            "evaluated": self.evaluated,
            "violations": self.violations,
            "sup_ratio": self.sup_ratio,
            "sup_ratio_over_bound": self.sup_ratio_over_bound,
            "runtime_s": self.runtime_s,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


THEOREM_CSV_COLUMNS = [
    "field", "multipole_order", "trials", "seed", "evaluated", "violations",
    "sup_ratio", "sup_ratio_over_bound", "passed",
]


def theorems_to_csv(reports: list[TheoremReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(THEOREM_CSV_COLUMNS)
    for r in reports:
        d = r.to_dict()
        w.writerow([repr(v) if isinstance(v, float) else str(v).lower() if isinstance(v, bool) else v
                    for v in (d[c] for c in THEOREM_CSV_COLUMNS)])
    return buf.getvalue()


def _log_uniform_below(rng, upper, size, decades=DECADES):
    # upper * 10^(-decades * u), u in (0, 1]; strictly below upper
    u = 1.0 - rng.random(size)
    return upper * 10.0 ** (-decades * u)


def sample_quiet_spacelike(field: FieldKind, n: int, trials: int, rng) -> Scenario:
    """Batch of log-uniform scenarios with T_A, T_B < D and moment < T_A^n (before filtering)."""
    D = 10.0 ** rng.uniform(-DECADES / 2, DECADES / 2, trials)
    T_A = _log_uniform_below(rng, D, trials)
    T_B = _log_uniform_below(rng, D, trials)
    M = _log_uniform_below(rng, T_A ** n, trials)
    d = D * 10.0 ** rng.uniform(-DECADES, -1, trials)
    source = M / d ** n
    if field is FieldKind.ELECTROMAGNETIC:
        q_B = 10.0 ** rng.uniform(-DECADES / 2, DECADES / 2, trials)
        m_B = 10.0 ** rng.uniform(-DECADES / 2, DECADES / 2, trials)
        return Scenario(field, d=d, D=D, T_A=T_A, T_B=T_B, q_A=source, q_B=q_B, m_B=m_B,
                        multipole_order=n, bob_opens=True)
    m_B = 10.0 ** rng.uniform(-DECADES / 2, DECADES / 2, trials)
    return Scenario(field, d=d, D=D, T_A=T_A, T_B=T_B, m_A=source, m_B=m_B,
                    multipole_order=n, bob_opens=True)


def _row(s: Scenario, i: int) -> dict:
    out = s.to_dict()
    for k in ("q_A", "q_B", "m_A", "m_B", "d", "D", "T_A", "T_B"):
        v = out[k]
        out[k] = v[i] if isinstance(v, list) else v
    return out


def no_paradox_theorem(field, n: Optional[int] = None, trials: int = 100_000, seed: int = 0) -> TheoremReport:
    """Check that quiet recombination within the light cone never coexists with which-path information.

    Samples spacelike scenarios (T_A < D, T_B < D) whose recoherence criterion
    holds at slack 1 and asserts the which-path ratio stays strictly below 1.
    The analytic bound is ``(T_A/D)^n``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    field = FieldKind.parse(field)
    n = default_order(field) if n is None else int(n)
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    s = sample_quiet_spacelike(field, n, trials, rng)
    alice_sp, bob_sp = estimators.spacelike(s)
    quiet = np.asarray(estimators.recoherence_criterion(s).satisfied(1.0))
    keep = alice_sp & bob_sp & quiet
    ratio = np.asarray(estimators.which_path_criterion(s).ratio)
    bound = (s.T_A / s.D) ** n
    bad = keep & ~(ratio < 1.0)
    counterexample = _row(s, int(np.flatnonzero(bad)[0])) if bad.any() else None
    return TheoremReport(
        field=field,
        multipole_order=n,
        trials=trials,
        seed=seed,
        evaluated=int(keep.sum()),
        violations=int(bad.sum()),
        sup_ratio=float(ratio[keep].max()) if keep.any() else 0.0,
        sup_ratio_over_bound=float((ratio[keep] / bound[keep]).max()) if keep.any() else 0.0,
        runtime_s=time.perf_counter() - t0,
        counterexample=counterexample,
    )


@dataclass
class ParadoxWitness:
    field: FieldKind
    dropped: Optional[Ingredient]
    found: bool
    scenario: Optional[Scenario] = None
    which_path_ratio: Optional[float] = None
    quanta: Optional[float] = None
    # what the full theory says about the witness scenario
    outcome_with_ingredient: Optional[str] = None
    theorem: Optional[TheoremReport] = None
    runtime_s: float = 0.0

    def to_dict(self) -> dict:
        return {
            "field": self.field.value,
            "dropped": None if self.dropped is None else self.dropped.value,
            "found": self.found,
            "scenario": None if self.scenario is None else self.scenario.to_dict(),
            "which_path_ratio": self.which_path_ratio,
            "quanta": self.quanta,
            "outcome_with_ingredient": self.outcome_with_ingredient,
            "theorem": None if self.theorem is None else self.theorem.to_dict(),
            "runtime_s": self.runtime_s,
        }


def _candidates(field: FieldKind, n: int, drop: Optional[Ingredient]) -> Scenario:
    """Hand-picked witnesses first, then a deterministic log grid of spacelike scenarios (D = 1)."""
    D = 1.0
    picks_TA, picks_TB, picks_M = [], [], []
    if drop is Ingredient.VACUUM_FLUCTUATIONS:
        # quiet recombination; any displacement counts once the floor is gone
        picks_TA.append(0.5 * D), picks_TB.append(0.5 * D), picks_M.append(0.5 * (0.5 * D) ** n)
    elif drop is Ingredient.QUANTIZED_RADIATION:
        # moment larger than D: Bob's criterion is met inside the light cone
        picks_TA.append(0.9 * D), picks_TB.append(0.9 * D), picks_M.append(2.0 * D ** n)
    ts = np.geomspace(1e-3, 0.99, 24)
    ms = np.geomspace(1e-6, 1e6, 49)
    TA, TB, M = (g.ravel() for g in np.meshgrid(ts, ts, ms, indexing="ij"))
    TA = np.concatenate([picks_TA, TA])
    TB = np.concatenate([picks_TB, TB])
    M = np.concatenate([picks_M, M])
    d = 0.01 * D
    source = M / d ** n
    common = dict(d=d, D=np.full(M.shape, D), T_A=TA, T_B=TB, multipole_order=n, bob_opens=True)
    if field is FieldKind.ELECTROMAGNETIC:
        return Scenario(field, q_A=source, q_B=1.0, m_B=1.0, **common)
    return Scenario(field, m_A=source, **common)


def counterfactual_probe(field, drop: Optional[Ingredient], n: Optional[int] = None,
                         theorem_trials: int = 10_000, seed: int = 0) -> ParadoxWitness:
    """Search for a spacelike paradox with one quantum-field ingredient switched off.

    A witness is a scenario with T_A, T_B < D in which Alice's recoherence
    criterion and Bob's which-path criterion hold simultaneously (slack 1).
    With nothing dropped no witness exists; the no-paradox theorem is run and attached.
    """
    t0 = time.perf_counter()
    field = FieldKind.parse(field)
    drop = None if drop is None else Ingredient(drop)
    n = default_order(field) if n is None else int(n)
    s = _candidates(field, n, drop)
    rec = estimators.recoherence_criterion(s, quantized_radiation=drop is not Ingredient.QUANTIZED_RADIATION)
    wp = estimators.which_path_criterion(s, vacuum_fluctuations=drop is not Ingredient.VACUUM_FLUCTUATIONS)
    alice_sp, bob_sp = estimators.spacelike(s)
    hits = np.flatnonzero(alice_sp & bob_sp & np.asarray(rec.satisfied(1.0)) & np.asarray(wp.satisfied(1.0)))
    theorem = None
    if drop is None:
        theorem = no_paradox_theorem(field, n, trials=theorem_trials, seed=seed)
    if hits.size == 0:
        return ParadoxWitness(field, drop, False, theorem=theorem, runtime_s=time.perf_counter() - t0)
    i = int(hits[0])
    row = _row(s, i)
    # witnesses are defined at slack 1, so classify them there too
    witness = Scenario(**{k: v for k, v in row.items() if k != "slack"}, slack=(1.0, 1.0))
    return ParadoxWitness(
        field=field,
        dropped=drop,
        found=True,
        scenario=witness,
        which_path_ratio=float(np.asarray(wp.ratio)[i]),
        quanta=float(np.asarray(rec.ratio)[i]),
        outcome_with_ingredient=classify(witness).outcome.value,
        theorem=theorem,
        runtime_s=time.perf_counter() - t0,
    )


@dataclass
class SignalingPoint:
    margin: float
    max_metric: float
    count: int
    argmax: Optional[dict] = None


SIGNALING_CSV_COLUMNS = ["k", "max_metric", "count", "q_A", "q_B", "m_A", "m_B", "d", "D", "T_A", "T_B"]


def signaling_to_csv(curve: list[SignalingPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(SIGNALING_CSV_COLUMNS)
    for p in curve:
        arg = p.argmax or {}
        w.writerow([repr(float(p.margin)), repr(float(p.max_metric)), p.count]
                   + [repr(float(arg[c])) if c in arg else "" for c in SIGNALING_CSV_COLUMNS[3:]])
    return buf.getvalue()


def signaling_sweep(field, margins, grid: GridSpec) -> list[SignalingPoint]:
    """Max signaling metric over grid points with D >= k·max(T_A, T_B) and recoherence satisfied.

    Restrictions for larger k are nested, so the curve is non-increasing in k.
    """
    field = FieldKind.parse(field)
    if grid.field is not field:
        raise ConfigurationError("grid field kind does not match")
    margins = [float(k) for k in margins]
    if any(k < 1 for k in margins):
        raise ConfigurationError("margins must be >= 1")
    s = grid.scenario()
    metric = np.asarray(quantum_model.signaling_metric(s), dtype=float)
    quiet = np.asarray(estimators.recoherence_criterion(s).satisfied(1.0))
    reach = np.maximum(np.asarray(s.T_A, dtype=float), np.asarray(s.T_B, dtype=float))
    D = np.asarray(s.D, dtype=float)
    curve = []
    for k in margins:
        mask = quiet & (D >= k * reach)
        if not mask.any():
            raise ConfigurationError(f"no grid points satisfy the margin k = {k:g} with recoherence")
        idx = np.flatnonzero(mask)
        best = int(idx[np.argmax(metric[idx])])
        curve.append(SignalingPoint(k, float(metric[best]), int(mask.sum()), _row(s, best)))
    return curve


def default_signaling_grid(field, points: int = 24) -> GridSpec:
    """Log grid over (moment, T_A, T_B) at D = 1 used for the signaling-residue baseline."""
    field = FieldKind.parse(field)
    n = default_order(field)
    fixed = {"D": 1.0, "d": 0.01, "q_B": 1.0, "m_B": 1.0} if field is FieldKind.ELECTROMAGNETIC else {"D": 1.0, "d": 0.01}
    axes = (
        Axis("moment", 1e-4 ** n, 1.0, points, "log"),
        Axis("T_A", 1e-3, 1.0, points, "log"),
        Axis("T_B", 1e-3, 1.0, points, "log"),
    )
    return GridSpec(field, axes, fixed)
