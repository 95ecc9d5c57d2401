"""Outcome taxonomy for the Alice/Bob which-path experiment.

The decision tree is evaluated elementwise on numpy arrays so the same code
serves single-scenario reports and whole phase-diagram sweeps.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from . import estimators, quantum_model
from .estimators import Criterion
from .scenario import FieldKind, MirrorTiming, Scenario, Violation, validate


class Outcome(str, enum.Enum):
    ALICE_RECOHERES_NO_WHICH_PATH = "AliceRecoheres_NoWhichPath"
    ALICE_DECOHERES_BOB_INNOCENT_BYSTANDER = "AliceDecoheres_BobInnocentBystander"
    ALICE_DECOHERES_BOB_CULPRIT = "AliceDecoheres_BobCulprit"
    ALICE_RECOHERES_BOB_SHIELDED = "AliceRecoheres_BobShielded"
    INDETERMINATE = "Indeterminate"

    @property
    def alice_recoheres(self):
        if self is Outcome.INDETERMINATE:
            return None
        return self.value.startswith("AliceRecoheres")


OUTCOMES = list(Outcome)


class ValidationError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


class UnsupportedConfiguration(ValueError):
    pass


class ParadoxError(AssertionError):
    """Raised if a spacelike scenario ever shows both recoherence and which-path acquisition."""


class Case(enum.IntEnum):
    """Which branch of the decision tree produced the outcome (keys the narrative)."""

    UNDECIDED_RECOHERENCE = 0
    RADIATES = 1
    SPACELIKE_QUIET = 2
    TIMELIKE_TRAP_CLOSED = 3
    TIMELIKE_BOB_CULPRIT = 4
    TIMELIKE_NO_WHICH_PATH = 5
    UNDECIDED_WHICH_PATH = 6
    MIRROR_IA = 7
    MIRROR_IIA_RADIATES = 8
    MIRROR_IIA_QUIET = 9
    MIRROR_IIA_UNDECIDED = 10
    MIRROR_OUTSIDE_CULPRIT = 11
    MIRROR_OUTSIDE_NO_WHICH_PATH = 12
    MIRROR_OUTSIDE_UNDECIDED = 13


_CASE_OUTCOME = {
    Case.UNDECIDED_RECOHERENCE: Outcome.INDETERMINATE,
    Case.RADIATES: Outcome.ALICE_DECOHERES_BOB_INNOCENT_BYSTANDER,
    Case.SPACELIKE_QUIET: Outcome.ALICE_RECOHERES_NO_WHICH_PATH,
    Case.TIMELIKE_TRAP_CLOSED: Outcome.ALICE_RECOHERES_NO_WHICH_PATH,
    Case.TIMELIKE_BOB_CULPRIT: Outcome.ALICE_DECOHERES_BOB_CULPRIT,
    Case.TIMELIKE_NO_WHICH_PATH: Outcome.ALICE_RECOHERES_NO_WHICH_PATH,
    Case.UNDECIDED_WHICH_PATH: Outcome.INDETERMINATE,
    Case.MIRROR_IA: Outcome.ALICE_RECOHERES_BOB_SHIELDED,
    Case.MIRROR_IIA_RADIATES: Outcome.ALICE_DECOHERES_BOB_INNOCENT_BYSTANDER,
    Case.MIRROR_IIA_QUIET: Outcome.ALICE_RECOHERES_BOB_SHIELDED,
    Case.MIRROR_IIA_UNDECIDED: Outcome.INDETERMINATE,
    Case.MIRROR_OUTSIDE_CULPRIT: Outcome.ALICE_DECOHERES_BOB_CULPRIT,
    Case.MIRROR_OUTSIDE_NO_WHICH_PATH: Outcome.ALICE_RECOHERES_NO_WHICH_PATH,
    Case.MIRROR_OUTSIDE_UNDECIDED: Outcome.INDETERMINATE,
}

# codes usable as a numpy lookup table
CASE_TO_OUTCOME_INDEX = np.array([OUTCOMES.index(_CASE_OUTCOME[c]) for c in Case])


def _symbols(s: Scenario) -> tuple[str, str]:
    n = int(s.multipole_order)
    if s.is_em and n == 1:
        return "D_A", "T_A"
    if not s.is_em and n == 2:
        return "Q_A", "T_A^2"
    return f"Q^({n})_A", f"T_A^{n}"


def _narrative(case: Case, s: Scenario) -> str:
    M, T = _symbols(s)
    kind = "photons" if s.is_em else "gravitons"
    texts = {
        Case.UNDECIDED_RECOHERENCE:
            f"recoherence ({M} vs {T}) changes verdict inside the slack interval; no outcome assigned",
        Case.RADIATES:
            f"recoherence violated ({M} > {T}): the difference field carries {kind}, so Alice's "
            "coherence is lost independent of Bob; any record Bob obtains is secondary",
        Case.SPACELIKE_QUIET:
            f"recoherence satisfied ({M} < {T}) and alice_spacelike (T_A < D): the which_path "
            "ratio is bounded below 1 in this region, so Bob's choice has no effect and Alice recoheres",
        Case.TIMELIKE_TRAP_CLOSED:
            f"recoherence satisfied ({M} < {T}), T_A >= D, trap closed: which_path is 0, the field "
            "difference is undone on recombination and Alice recoheres",
        Case.TIMELIKE_BOB_CULPRIT:
            f"recoherence satisfied ({M} < {T}), T_A >= D, trap open and which_path satisfied: "
            "Bob's packets separate beyond his floor, so his measurement decoheres Alice",
        Case.TIMELIKE_NO_WHICH_PATH:
            f"recoherence satisfied ({M} < {T}), T_A >= D, trap open but which_path fails: "
            "Bob's packets stay within his floor and Alice recoheres",
        Case.UNDECIDED_WHICH_PATH:
            "recoherence satisfied, T_A >= D, trap open: which_path changes verdict inside the "
            "slack interval; no outcome assigned",
        Case.MIRROR_IA:
            "mirror present throughout and mirror_inside (R_M < D): radiation is reflected back "
            "for recombination and Bob sees no moment, so Alice recoheres",
        Case.MIRROR_IIA_RADIATES:
            "mirror erected over T_M with mirror_inside: recoherence_mirror (T_M in place of T_A) "
            f"is violated, so erecting it emits {kind} that escape; Bob is not responsible",
        Case.MIRROR_IIA_QUIET:
            "mirror erected over T_M with mirror_inside: recoherence_mirror satisfied, nothing "
            "escapes and Bob sees no moment, so Alice recoheres",
        Case.MIRROR_IIA_UNDECIDED:
            "mirror erected over T_M with mirror_inside: recoherence_mirror changes verdict inside "
            "the slack interval; no outcome assigned",
        Case.MIRROR_OUTSIDE_CULPRIT:
            "mirror_inside fails (R_M >= D), trap open and which_path satisfied: Bob measures the "
            "moment before any reflection and decoheres Alice",
        Case.MIRROR_OUTSIDE_NO_WHICH_PATH:
            "mirror_inside fails (R_M >= D) and which_path fails or the trap stays closed: the "
            "mirror returns the radiation and Alice recoheres",
        Case.MIRROR_OUTSIDE_UNDECIDED:
            "mirror_inside fails (R_M >= D), trap open: which_path changes verdict inside the slack "
            "interval; no outcome assigned",
    }
    return texts[case]


def _verdicts(c: Criterion):
    lo, hi = c.bracket()
    lo, hi = np.asarray(lo), np.asarray(hi)
    return lo == hi, lo


def decide(s: Scenario) -> np.ndarray:
    """Return :class:`Case` codes (int array, or 0-d) for a validated scenario or batch."""
    rec = estimators.recoherence_criterion(s)
    wp = estimators.which_path_criterion(s)
    alice_sp, bob_sp = (np.asarray(x) for x in estimators.spacelike(s))
    shape = np.broadcast_shapes(np.shape(rec.ratio), np.shape(wp.ratio), alice_sp.shape)

    rec_ok1 = np.asarray(rec.satisfied(1.0))
    wp_ok1 = np.asarray(wp.satisfied(1.0))
    paradox = rec_ok1 & wp_ok1 & alice_sp & bob_sp
    if np.any(paradox):
        raise ParadoxError("spacelike scenario with recoherence and which-path information")

    wp_det, wp_ok = _verdicts(wp)
    wp_case = np.select(
        [~wp_det, wp_ok],
        [Case.UNDECIDED_WHICH_PATH, Case.TIMELIKE_BOB_CULPRIT],
        Case.TIMELIKE_NO_WHICH_PATH,
    )

    if s.mirror is None:
        rec_det, rec_ok = _verdicts(rec)
        timelike = wp_case if s.bob_opens else np.full(shape, Case.TIMELIKE_TRAP_CLOSED)
        codes = np.select(
            [~rec_det, ~rec_ok, alice_sp],
            [Case.UNDECIDED_RECOHERENCE, Case.RADIATES, Case.SPACELIKE_QUIET],
            timelike,
        )
        return np.broadcast_to(codes, shape).astype(int)

    if s.field is not FieldKind.ELECTROMAGNETIC:
        raise UnsupportedConfiguration("mirror configurations are only defined for the electromagnetic version")
    m = s.mirror
    inside = np.less(m.radius, s.D)
    if s.bob_opens:
        outside = np.select(
            [wp_case == Case.UNDECIDED_WHICH_PATH, wp_case == Case.TIMELIKE_BOB_CULPRIT],
            [Case.MIRROR_OUTSIDE_UNDECIDED, Case.MIRROR_OUTSIDE_CULPRIT],
            Case.MIRROR_OUTSIDE_NO_WHICH_PATH,
        )
    else:
        outside = np.full(shape, Case.MIRROR_OUTSIDE_NO_WHICH_PATH)
    if m.timing is MirrorTiming.ALWAYS_PRESENT:
        inner = np.full(shape, Case.MIRROR_IA)
    else:
        rec_m = estimators.recoherence_criterion(s.replace(T_A=m.erection_time))
        det_m, ok_m = _verdicts(rec_m)
        inner = np.select([~det_m, ~ok_m], [Case.MIRROR_IIA_UNDECIDED, Case.MIRROR_IIA_RADIATES], Case.MIRROR_IIA_QUIET)
    codes = np.where(inside, inner, outside)
    return np.broadcast_to(codes, shape).astype(int)


def outcomes(s: Scenario) -> np.ndarray:
    """Vectorized classification; returns an array of :class:`Outcome` value strings."""
    problems = validate(s)
    if problems:
        raise ValidationError(problems)
    codes = decide(s)
    names = np.array([o.value for o in OUTCOMES], dtype=object)
    return names[CASE_TO_OUTCOME_INDEX[codes]]


@dataclass
class OutcomeReport:
    outcome: Outcome
    case: Case
    criteria: list[tuple[str, Criterion]]
    narrative: str
    visibility: float
    distinguishability: float
    signaling_metric: float
    coherence_interval: tuple
    alice_spacelike: bool
    bob_spacelike: bool
    scenario: dict = field(default_factory=dict)
    undecided: list[str] = field(default_factory=list)

    def criterion(self, name: str) -> Criterion:
        return dict(self.criteria)[name]

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "case": self.case.name,
            "narrative": self.narrative,
            "undecided": list(self.undecided),
            "criteria": [c.to_dict() for _, c in self.criteria],
            "spacelike": {"alice": self.alice_spacelike, "bob": self.bob_spacelike},
            "model": {
                "visibility": self.visibility,
                "distinguishability": self.distinguishability,
                "signaling_metric": self.signaling_metric,
                "signaling_meaningful": self.alice_spacelike and self.bob_spacelike,
                "coherence_interval": list(self.coherence_interval),
            },
            "scenario": self.scenario,
        }

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("indent", 2)
        return json.dumps(self.to_dict(), **kwargs)


def classify(s: Scenario) -> OutcomeReport:
    """Classify a single scenario into the outcome taxonomy, with criteria and narrative."""
    if s.is_batch:
        raise TypeError("classify takes a single scenario; use outcomes() for batches")
    problems = validate(s)
    if problems:
        raise ValidationError(problems)
    case = Case(int(decide(s)))
    rec = estimators.recoherence_criterion(s)
    wp = estimators.which_path_criterion(s)
    alice_sp, bob_sp = estimators.spacelike(s)
    criteria = [
        ("recoherence", rec),
        ("which_path", wp),
        ("alice_spacelike", Criterion("alice_spacelike", s.T_A / s.D, "<", slack=(1.0, 1.0))),
        ("bob_spacelike", Criterion("bob_spacelike", s.T_B / s.D, "<", slack=(1.0, 1.0))),
    ]
    if s.mirror is not None:
        criteria.append(("mirror_inside", Criterion("mirror_inside", s.mirror.radius / s.D, "<", slack=(1.0, 1.0))))
    if s.mirror is not None and s.mirror.timing is MirrorTiming.ERECTED_DURING:
        rec_m = estimators.recoherence_criterion(s.replace(T_A=s.mirror.erection_time))
        criteria.append(("recoherence_mirror", Criterion("recoherence_mirror", rec_m.ratio, "<", slack=rec_m.slack)))
    undecided = [name for name, c in criteria if c.verdict is None]
    comp = quantum_model.complementarity_check(s)
    return OutcomeReport(
        outcome=_CASE_OUTCOME[case],
        case=case,
        criteria=criteria,
        narrative=_narrative(case, s),
        visibility=comp.visibility,
        distinguishability=comp.distinguishability,
        signaling_metric=float(quantum_model.signaling_metric(s)),
        coherence_interval=quantum_model.coherence_interval(s),
        alice_spacelike=alice_sp,
        bob_spacelike=bob_sp,
        scenario=s.to_dict(),
        undecided=undecided,
    )


def classify_mirror(s: Scenario) -> OutcomeReport:
    """Classify a scenario in which Alice surrounds her apparatus with a mirror."""
    if s.mirror is None:
        raise ValueError("classify_mirror needs a scenario with a mirror configuration")
    if s.field is not FieldKind.ELECTROMAGNETIC:
        raise UnsupportedConfiguration("mirror configurations are only defined for the electromagnetic version")
    return classify(s)
