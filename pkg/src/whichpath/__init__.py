"""Consistency engine for the Alice/Bob which-path gedankenexperiment with quantized fields."""

from .classifier import Outcome, OutcomeReport, classify, classify_mirror, outcomes
from .consistency import Ingredient, counterfactual_probe, no_paradox_theorem, signaling_sweep
from .estimators import Criterion
from .scenario import FieldKind, MirrorConfig, MirrorTiming, Scenario, moments, validate
from .sweep import Axis, GridSpec, run_sweep

__all__ = [
    "Axis", "Criterion", "FieldKind", "GridSpec", "Ingredient", "MirrorConfig", "MirrorTiming",
    "Outcome", "OutcomeReport", "Scenario", "classify", "classify_mirror", "counterfactual_probe",
    "moments", "no_paradox_theorem", "outcomes", "run_sweep", "signaling_sweep", "validate",
]
