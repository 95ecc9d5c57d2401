"""Dimensional bookkeeping in SI, natural (hbar = c = 1) and Planck (hbar = c = G = 1) units.

Natural and Planck quantities carry only two live axes: length and charge.
Time is folded into length (c = 1) and mass into inverse length (hbar = c = 1)
at construction, so a natural-unit ``Dimension`` always has ``mass == time == 0``.
Charge is measured in units of the Planck charge ``q_P = sqrt(4 pi eps0 hbar c)``
(Gaussian ``sqrt(hbar c)``), which keeps the electron at ``q = sqrt(alpha)``.

Natural quantities use the metre as their length unit; Planck quantities use
the Planck length.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import constants as _sc

HBAR = _sc.hbar
C = _sc.c
G_NEWTON = _sc.G
EPSILON_0 = _sc.epsilon_0
ELEMENTARY_CHARGE = _sc.e

# SI values of the Planck scales
PLANCK_LENGTH_SI = math.sqrt(HBAR * G_NEWTON / C**3)
PLANCK_TIME_SI = PLANCK_LENGTH_SI / C
PLANCK_MASS_SI = math.sqrt(HBAR * C / G_NEWTON)
PLANCK_CHARGE_SI = math.sqrt(4 * math.pi * EPSILON_0 * HBAR * C)

Number = Union[float, int, np.ndarray]


class DimensionError(ValueError):
    """Raised when quantities of incompatible dimension or unit system are combined."""


class UnitSystem(enum.Enum):
    SI = "si"
    NATURAL = "natural"
    PLANCK = "planck"


@dataclass(frozen=True)
class Dimension:
    mass_exp: int = 0
    length_exp: int = 0
    time_exp: int = 0
    charge_exp: int = 0

    def __mul__(self, other: Dimension) -> Dimension:
        return Dimension(
            self.mass_exp + other.mass_exp,
            self.length_exp + other.length_exp,
            self.time_exp + other.time_exp,
            self.charge_exp + other.charge_exp,
        )

    def __truediv__(self, other: Dimension) -> Dimension:
        return self * other ** -1

    def __pow__(self, k: int) -> Dimension:
        return Dimension(self.mass_exp * k, self.length_exp * k, self.time_exp * k, self.charge_exp * k)

    def root(self, k: int) -> Dimension:
        exps = (self.mass_exp, self.length_exp, self.time_exp, self.charge_exp)
        if any(e % k for e in exps):
            raise DimensionError(f"cannot take root {k} of {self}")
        return Dimension(*(e // k for e in exps))

    @property
    def is_dimensionless(self) -> bool:
        return self == DIMENSIONLESS

    @property
    def is_collapsed(self) -> bool:
        """True when the dimension is already in the natural (length, charge) basis."""
        return self.mass_exp == 0 and self.time_exp == 0

    def collapsed(self) -> Dimension:
        """Fold time into length (c = 1) and mass into inverse length (hbar = c = 1)."""
        return Dimension(0, self.length_exp + self.time_exp - self.mass_exp, 0, self.charge_exp)

    def __str__(self) -> str:
        parts = []
        for sym, e in (("M", self.mass_exp), ("L", self.length_exp), ("T", self.time_exp), ("Q", self.charge_exp)):
            if e:
                parts.append(sym if e == 1 else f"{sym}^{e}")
        return "·".join(parts) or "1"


def natural_dim(mass: int = 0, length: int = 0, time: int = 0, charge: int = 0) -> Dimension:
    return Dimension(mass, length, time, charge).collapsed()


DIMENSIONLESS = Dimension()

# SI dimensions
SI_LENGTH = Dimension(length_exp=1)
SI_TIME = Dimension(time_exp=1)
SI_MASS = Dimension(mass_exp=1)
SI_CHARGE = Dimension(charge_exp=1)

# natural / Planck dimensions
LENGTH = natural_dim(length=1)
TIME = natural_dim(time=1)
MASS = natural_dim(mass=1)
CHARGE = natural_dim(charge=1)
ENERGY = natural_dim(mass=1, length=2, time=-2)
# force per unit charge
ELECTRIC_FIELD = natural_dim(mass=1, length=1, time=-2, charge=-1)
# G in natural units is l_P^2
NEWTON_G = natural_dim(mass=-1, length=3, time=-2)


class Quantity:
    """A value (scalar or numpy array) tagged with a dimension and a unit system."""

    __slots__ = ("value", "dim", "system")
    __array_priority__ = 1000

    def __init__(self, value: Number, dim: Dimension = DIMENSIONLESS, system: UnitSystem = UnitSystem.PLANCK):
        if system is not UnitSystem.SI and not dim.is_collapsed:
            raise DimensionError(f"{system.value} quantities must use collapsed dimensions, got {dim}")
        self.value = value
        self.dim = dim
        self.system = system

    def _same_system(self, other: Quantity) -> None:
        if self.system is not other.system:
            raise DimensionError(f"cannot combine {self.system.value} and {other.system.value} quantities")

    def _coerce(self, other) -> Quantity:
        if isinstance(other, Quantity):
            self._same_system(other)
            return other
        if isinstance(other, (int, float, np.ndarray, np.number)):
            return Quantity(other, DIMENSIONLESS, self.system)
        return NotImplemented

    def _check_same_dim(self, other: Quantity, op: str) -> None:
        if self.dim != other.dim:
            raise DimensionError(f"cannot {op} {self.dim} and {other.dim}")

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._check_same_dim(other, "add")
        return Quantity(self.value + other.value, self.dim, self.system)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._check_same_dim(other, "subtract")
        return Quantity(self.value - other.value, self.dim, self.system)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Quantity(self.value * other.value, self.dim * other.dim, self.system)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Quantity(self.value / other.value, self.dim / other.dim, self.system)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int) -> Quantity:
        if not isinstance(k, (int, np.integer)):
            raise DimensionError("quantities may only be raised to integer powers; use sqrt()")
        return Quantity(self.value ** k, self.dim ** int(k), self.system)

    def sqrt(self) -> Quantity:
        return Quantity(np.sqrt(self.value), self.dim.root(2), self.system)

    def __neg__(self) -> Quantity:
        return Quantity(-self.value, self.dim, self.system)

    def __abs__(self) -> Quantity:
        return Quantity(np.abs(self.value), self.dim, self.system)

    def _compare(self, other, op):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._check_same_dim(other, "compare")
        return op(self.value, other.value)

    def __lt__(self, other):
        return self._compare(other, np.less)

    def __le__(self, other):
        return self._compare(other, np.less_equal)

    def __gt__(self, other):
        return self._compare(other, np.greater)

    def __ge__(self, other):
        return self._compare(other, np.greater_equal)

    def __float__(self) -> float:
        if not self.dim.is_dimensionless:
            raise DimensionError(f"cannot convert {self.dim} quantity to a bare number")
        return float(self.value)

    def magnitude(self, dim: Dimension) -> Number:
        """Return the bare value after asserting the dimension is ``dim``."""
        if self.dim != dim:
            raise DimensionError(f"expected {dim}, got {self.dim}")
        return self.value

    def __repr__(self) -> str:
        return f"Quantity({self.value!r}, {self.dim}, {self.system.value})"


def planck(value: Number, dim: Dimension = DIMENSIONLESS) -> Quantity:
    return Quantity(value, dim, UnitSystem.PLANCK)


def si(value: Number, dim: Dimension) -> Quantity:
    return Quantity(value, dim, UnitSystem.SI)


# Planck-unit constants; numerically 1, kept for dimension checking
G = planck(1.0, NEWTON_G)
Q_P = planck(1.0, CHARGE)
L_P = planck(1.0, LENGTH)


def _natural_factor(dim: Dimension) -> float:
    # multiplier taking an SI value of dimension ``dim`` to metres^k · q_P^j
    return (C / HBAR) ** dim.mass_exp * C ** dim.time_exp * PLANCK_CHARGE_SI ** (-dim.charge_exp)


def to_natural(q: Quantity) -> Quantity:
    """Express an SI quantity in natural units (length in metres, charge in q_P)."""
    if q.system is UnitSystem.NATURAL:
        return q
    if q.system is not UnitSystem.SI:
        raise DimensionError(f"to_natural expects an SI quantity, got {q.system.value}")
    return Quantity(q.value * _natural_factor(q.dim), q.dim.collapsed(), UnitSystem.NATURAL)


def to_si(q: Quantity, dim: Dimension) -> Quantity:
    """Inverse of :func:`to_natural`; ``dim`` names the SI dimension to restore."""
    if q.system is UnitSystem.PLANCK:
        q = from_planck(q)
    if q.system is not UnitSystem.NATURAL:
        raise DimensionError(f"to_si expects a natural or Planck quantity, got {q.system.value}")
    if dim.collapsed() != q.dim:
        raise DimensionError(f"SI dimension {dim} does not collapse to {q.dim}")
    return Quantity(q.value / _natural_factor(dim), dim, UnitSystem.SI)


def planck_normalize(q: Quantity) -> Quantity:
    """Rescale lengths to Planck lengths so that l_P maps to 1."""
    if q.system is UnitSystem.PLANCK:
        return q
    if q.system is UnitSystem.SI:
        q = to_natural(q)
    return Quantity(q.value / PLANCK_LENGTH_SI ** q.dim.length_exp, q.dim, UnitSystem.PLANCK)


def from_planck(q: Quantity) -> Quantity:
    if q.system is not UnitSystem.PLANCK:
        raise DimensionError(f"from_planck expects a Planck quantity, got {q.system.value}")
    return Quantity(q.value * PLANCK_LENGTH_SI ** q.dim.length_exp, q.dim, UnitSystem.NATURAL)


# Unit tags accepted by the `value@unit` syntax.
SI_UNITS: dict[str, tuple[float, Dimension]] = {
    "m": (1.0, SI_LENGTH),
    "cm": (1e-2, SI_LENGTH),
    "mm": (1e-3, SI_LENGTH),
    "um": (1e-6, SI_LENGTH),
    "nm": (1e-9, SI_LENGTH),
    "fm": (1e-15, SI_LENGTH),
    "s": (1.0, SI_TIME),
    "ms": (1e-3, SI_TIME),
    "us": (1e-6, SI_TIME),
    "ns": (1e-9, SI_TIME),
    "ps": (1e-12, SI_TIME),
    "kg": (1.0, SI_MASS),
    "g": (1e-3, SI_MASS),
    "amu": (_sc.atomic_mass, SI_MASS),
    "C": (1.0, SI_CHARGE),
    "e": (ELEMENTARY_CHARGE, SI_CHARGE),
    "l_P": (PLANCK_LENGTH_SI, SI_LENGTH),
    "t_P": (PLANCK_TIME_SI, SI_TIME),
    "m_P": (PLANCK_MASS_SI, SI_MASS),
    "q_P": (PLANCK_CHARGE_SI, SI_CHARGE),
}

_TAGGED = re.compile(r"^\s*(?P<num>[-+0-9.eE]+)\s*@\s*(?P<unit>\w+)\s*$")


def parse_tagged(text: str) -> Quantity:
    """Parse ``"<number>@<unit>"`` into an SI quantity, e.g. ``"2.5@um"``."""
    m = _TAGGED.match(text)
    if m is None:
        raise ValueError(f"expected '<number>@<unit>', got {text!r}")
    unit = m.group("unit")
    if unit not in SI_UNITS:
        raise ValueError(f"unknown unit {unit!r}; known: {', '.join(SI_UNITS)}")
    scale, dim = SI_UNITS[unit]
    return si(float(m.group("num")) * scale, dim)


def as_planck(value, dim: Dimension) -> float:
    """Coerce a bare number (taken as Planck units), a Quantity, or a tagged string to a Planck float.

    Raises :class:`DimensionError` when a Quantity or tag carries the wrong dimension.
    """
    if isinstance(value, str):
        value = parse_tagged(value)
    if isinstance(value, Quantity):
        return planck_normalize(value).magnitude(dim)
    return value
