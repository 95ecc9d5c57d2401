"""Experiment configuration and Alice's effective multipole moments.

All numeric fields are stored as Planck-unit floats (or numpy arrays for batch
evaluation).  Inputs may also be given as :class:`~whichpath.units.Quantity`
objects or ``"value@unit"`` strings; these are converted and dimension-checked.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import units
from .units import CHARGE, LENGTH, MASS, TIME, Quantity, planck

DEFAULT_SEPARATION_CUTOFF = 0.1


class FieldKind(str, enum.Enum):
    ELECTROMAGNETIC = "em"
    GRAVITATIONAL = "gr"

    @classmethod
    def parse(cls, text) -> FieldKind:
        if isinstance(text, FieldKind):
            return text
        aliases = {"em": cls.ELECTROMAGNETIC, "electromagnetic": cls.ELECTROMAGNETIC,
                   "gr": cls.GRAVITATIONAL, "gravitational": cls.GRAVITATIONAL}
        try:
            return aliases[str(text).strip().lower()]
        except KeyError:
            raise ValueError(f"unknown field kind {text!r}") from None


class MirrorTiming(str, enum.Enum):
    ALWAYS_PRESENT = "always"
    ERECTED_DURING = "erected"


@dataclass(frozen=True)
class MirrorConfig:
    """Spherical mirror around Alice's apparatus, of radius ``radius``.

    ``erection_time`` (T_M) is required for ``ERECTED_DURING`` and ignored otherwise.
    """

    radius: float
    timing: MirrorTiming = MirrorTiming.ALWAYS_PRESENT
    erection_time: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "timing", MirrorTiming(self.timing))
        object.__setattr__(self, "radius", units.as_planck(self.radius, LENGTH))
        if self.erection_time is not None:
            object.__setattr__(self, "erection_time", units.as_planck(self.erection_time, TIME))


_QUANTITY_FIELDS = {
    "q_A": CHARGE, "q_B": CHARGE, "m_A": MASS, "m_B": MASS,
    "d": LENGTH, "D": LENGTH, "T_A": TIME, "T_B": TIME,
}


@dataclass(frozen=True)
class Scenario:
    field: FieldKind
    d: float
    D: float
    T_A: float
    T_B: float
    q_A: float = 0.0
    q_B: float = 0.0
    m_A: float = 1.0
    m_B: float = 1.0
    bob_opens: bool = True
    mirror: Optional[MirrorConfig] = None
    multipole_order: Optional[int] = None
    # Bob's packet width; defaults to the localization floor
    sigma_B: Optional[float] = None
    separation_cutoff: float = DEFAULT_SEPARATION_CUTOFF
    slack: tuple = field(default=(0.1, 10.0))

    def __post_init__(self):
        object.__setattr__(self, "field", FieldKind.parse(self.field))
        for name, dim in _QUANTITY_FIELDS.items():
            object.__setattr__(self, name, units.as_planck(getattr(self, name), dim))
        if self.sigma_B is not None:
            object.__setattr__(self, "sigma_B", units.as_planck(self.sigma_B, LENGTH))
        if self.multipole_order is None:
            default = 1 if self.field is FieldKind.ELECTROMAGNETIC else 2
            object.__setattr__(self, "multipole_order", default)
        object.__setattr__(self, "slack", tuple(float(c) for c in self.slack))

    @property
    def is_em(self) -> bool:
        return self.field is FieldKind.ELECTROMAGNETIC

    @property
    def is_batch(self) -> bool:
        return any(np.ndim(getattr(self, name)) for name in _QUANTITY_FIELDS)

    def replace(self, **changes) -> Scenario:
        return dataclasses.replace(self, **changes)

    def quantity(self, name: str) -> Quantity:
        """Return a numeric field as a dimensioned Planck-unit Quantity."""
        if name == "sigma_B":
            return planck(self.sigma_B, LENGTH)
        return planck(getattr(self, name), _QUANTITY_FIELDS[name])

    def to_dict(self) -> dict:
        out = {"field": self.field.value}
        for name in ("q_A", "q_B", "m_A", "m_B", "d", "D", "T_A", "T_B"):
            out[name] = _plain(getattr(self, name))
        out["bob_opens"] = bool(self.bob_opens)
        out["multipole_order"] = int(self.multipole_order)
        if self.sigma_B is not None:
            out["sigma_B"] = _plain(self.sigma_B)
        if self.mirror is not None:
            out["mirror"] = {
                "timing": self.mirror.timing.value,
                "radius": _plain(self.mirror.radius),
                "erection_time": None if self.mirror.erection_time is None else _plain(self.mirror.erection_time),
            }
        out["slack"] = list(self.slack)
        return out


def _plain(x):
    return x.tolist() if isinstance(x, np.ndarray) else float(x)


@dataclass(frozen=True)
class Violation:
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message}"


def _bad(mask) -> bool:
    return bool(np.any(mask))


def validate(s: Scenario) -> list[Violation]:
    """Return every violated scenario invariant; an empty list means the scenario is valid."""
    out: list[Violation] = []
    for name in ("d", "D", "T_A", "T_B", "m_A", "m_B"):
        v = np.asarray(getattr(s, name), dtype=float)
        if _bad(~(v > 0)):
            out.append(Violation(name, f"{name} must be positive"))
    if not 0 < s.separation_cutoff < 1:
        out.append(Violation("separation_cutoff", "cutoff for D ≫ d must lie in (0, 1)"))
    ratio = np.asarray(s.d, dtype=float) / np.asarray(s.D, dtype=float)
    if _bad(ratio > s.separation_cutoff):
        worst = float(np.nanmax(ratio))
        out.append(Violation("d", f"requires D ≫ d (d/D = {worst:g} exceeds {s.separation_cutoff:g})"))
    if not s.is_em and (_bad(np.asarray(s.q_A) != 0) or _bad(np.asarray(s.q_B) != 0)):
        out.append(Violation("q_A", "gravitational version requires q_A = q_B = 0"))
    n_min = 1 if s.is_em else 2
    if int(s.multipole_order) != s.multipole_order or s.multipole_order < n_min:
        out.append(Violation("multipole_order", f"multipole order must be an integer >= {n_min} for {s.field.value}"))
    c_min, c_max = s.slack
    if not 0 < c_min <= 1 <= c_max:
        out.append(Violation("slack", "slack interval must satisfy 0 < c_min <= 1 <= c_max"))
    if s.sigma_B is not None and _bad(~(np.asarray(s.sigma_B, dtype=float) > 0)):
        out.append(Violation("sigma_B", "sigma_B must be positive"))
    m = s.mirror
    if m is not None:
        if _bad(~(np.asarray(m.radius, dtype=float) > 0)):
            out.append(Violation("mirror.radius", "mirror radius must be positive"))
        if m.timing is MirrorTiming.ERECTED_DURING:
            if m.erection_time is None:
                out.append(Violation("mirror.erection_time", "an erected mirror needs an erection time T_M"))
            else:
                t_m = np.asarray(m.erection_time, dtype=float)
                if _bad(~(t_m > 0)):
                    out.append(Violation("mirror.erection_time", "T_M must be positive"))
                elif _bad(t_m >= np.asarray(s.D, dtype=float)):
                    out.append(Violation("mirror.erection_time", "mirror must be erected within T_M < D"))
    return out


@dataclass(frozen=True)
class MomentLadder:
    """Effective multipole moments of the difference between Alice's two branches.

    EM: the 2^n-pole is ``q_A d^n``.  GR: the dipole vanishes identically because
    the laboratory recoils to hold the center of mass fixed; the 2^n-pole is
    ``m_A d^n`` for n >= 2 (laboratory mass taken infinite).
    """

    field: FieldKind
    source: Quantity  # q_A or m_A
    d: Quantity
    order: int

    @property
    def dipole(self) -> Quantity:
        moment = self.source * self.d
        if self.field is FieldKind.GRAVITATIONAL:
            moment.value = np.zeros_like(moment.value, dtype=float) if np.ndim(moment.value) else 0.0
        return moment

    @property
    def quadrupole(self) -> Quantity:
        return self.higher(2)

    def higher(self, n: int) -> Quantity:
        if n < 1:
            raise ValueError("multipole order must be >= 1")
        if n == 1:
            return self.dipole
        return self.source * self.d ** n

    @property
    def effective(self) -> Quantity:
        """The moment at the scenario's multipole order."""
        return self.higher(self.order)


def moments(s: Scenario) -> MomentLadder:
    source = s.quantity("q_A") if s.is_em else s.quantity("m_A")
    return MomentLadder(s.field, source, s.quantity("d"), int(s.multipole_order))
