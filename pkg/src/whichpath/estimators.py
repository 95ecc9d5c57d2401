"""Order-of-magnitude criteria for which-path acquisition and entangling radiation.

Every "∼" relation is evaluated with coefficient 1.  The dropped O(1) factors
are represented by a slack interval ``[c_min, c_max]`` on each
:class:`Criterion`; a verdict that flips across the interval is indeterminate.

Formulas are evaluated on :class:`~whichpath.units.Quantity` objects in Planck
units, with ``G`` and ``q_P`` carried explicitly so each result is
dimension-checked.  Scenario fields may be numpy arrays, in which case every
function is evaluated elementwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .scenario import Scenario, moments
from .units import (
    DIMENSIONLESS,
    ENERGY,
    ELECTRIC_FIELD,
    LENGTH,
    G,
    L_P,
    Q_P,
    Quantity,
    as_planck,
    planck,
    CHARGE,
    MASS,
)

DEFAULT_SLACK = (0.1, 10.0)


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class Criterion:
    """A dimensionless ratio compared against a threshold, up to an O(1) slack factor.

    ``sense == ">"``: satisfied when ``c * ratio > threshold``.
    ``sense == "<"``: satisfied when ``c * ratio < threshold``.
    """

    name: str
    ratio: object
    sense: Literal[">", "<"]
    threshold: float = 1.0
    slack: tuple = DEFAULT_SLACK

    def satisfied(self, c: float = 1.0):
        scaled = c * np.asarray(self.ratio, dtype=float)
        out = scaled > self.threshold if self.sense == ">" else scaled < self.threshold
        return bool(out) if out.ndim == 0 else out

    def bracket(self):
        """Verdicts at ``c_min`` and ``c_max``."""
        return self.satisfied(self.slack[0]), self.satisfied(self.slack[1])

    @property
    def determinate(self):
        lo, hi = self.bracket()
        return lo == hi if isinstance(lo, bool) else np.equal(lo, hi)

    @property
    def verdict(self):
        """True/False when the slack interval agrees, None (scalar) when it does not.

        For batch criteria use :attr:`determinate` together with :meth:`satisfied`.
        """
        lo, hi = self.bracket()
        if not isinstance(lo, bool):
            raise TypeError("verdict is only defined for scalar criteria")
        return lo if lo == hi else None

    def to_dict(self) -> dict:
        lo, hi = self.bracket()
        return {
            "name": self.name,
            "ratio": float(self.ratio),
            "sense": self.sense,
            "threshold": self.threshold,
            "slack": list(self.slack),
            "satisfied_at_c_min": lo,
            "satisfied_at_c_max": hi,
            "verdict": self.verdict,
        }


def _positive_length(R) -> Quantity:
    R = planck(as_planck(R, LENGTH), LENGTH)
    if np.any(~(np.asarray(R.value) > 0)):
        raise DomainError("length scale must be positive")
    return R


def vacuum_E_fluctuation(R) -> Quantity:
    """Vacuum electric-field fluctuation averaged over a region of size R: ``1/R^2``."""
    R = _positive_length(R)
    # with q_P = 1 the field unit is force per Planck charge
    return 1 / (Q_P * R ** 2)


def charge_radius(q, m) -> Quantity:
    """Localization floor ``|q|/(m q_P)`` set by vacuum field fluctuations; independent of R."""
    q = planck(as_planck(q, CHARGE), CHARGE)
    m = planck(as_planck(m, MASS), MASS)
    if np.any(~(np.asarray(m.value) > 0)):
        raise DomainError("mass must be positive")
    return abs(q) / (m * Q_P)


def localization_limit(s: Scenario, particle: Literal["A", "B"] = "B", *, vacuum_fluctuations: bool = True) -> Quantity:
    """Smallest resolvable displacement for Alice's or Bob's particle.

    EM: the charge radius.  GR: one Planck length.  With
    ``vacuum_fluctuations=False`` the floor is removed (counterfactual probing).
    """
    if particle not in ("A", "B"):
        raise ValueError("particle must be 'A' or 'B'")
    if s.is_em:
        floor = charge_radius(s.quantity(f"q_{particle}"), s.quantity(f"m_{particle}"))
    else:
        floor = L_P * np.ones_like(np.asarray(s.D, dtype=float))
    if not vacuum_fluctuations:
        floor = floor * 0.0
    return floor


def _field_gradient_source(s: Scenario) -> Quantity:
    """Acceleration of Bob's particle per unit T_B^2 (i.e. the differential kick)."""
    n = int(s.multipole_order)
    M = abs(moments(s).effective)
    D = s.quantity("D")
    if s.is_em:
        E = M / (Q_P ** 2 * D ** (n + 2))
        E.magnitude(ELECTRIC_FIELD)
        return abs(s.quantity("q_B")) / s.quantity("m_B") * E
    return G * M / D ** (n + 2)


def bob_displacement(s: Scenario) -> Quantity:
    """Separation of Bob's two conditional wavepackets after time T_B.

    EM: ``(q_B/m_B)(Q^(n)/D^{n+2}) T_B^2`` (n = 1 is the dipole ``D_A/D^3``).
    GR: ``Q^(n) T_B^2 / D^{n+2}``.  Zero when the trap stays closed.
    """
    dx = _field_gradient_source(s) * s.quantity("T_B") ** 2
    dx.magnitude(LENGTH)
    if not s.bob_opens:
        dx = dx * 0.0
    return dx


def which_path_criterion(s: Scenario, *, vacuum_fluctuations: bool = True, slack=None) -> Criterion:
    """Bob obtains significant which-path information when δx exceeds his localization floor."""
    dx = bob_displacement(s).magnitude(LENGTH)
    floor = localization_limit(s, "B", vacuum_fluctuations=vacuum_fluctuations).magnitude(LENGTH)
    dx = np.asarray(dx, dtype=float)
    floor = np.broadcast_to(np.asarray(floor, dtype=float), dx.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(dx == 0, 0.0, dx / floor)
    ratio = float(ratio) if ratio.ndim == 0 else ratio
    return Criterion("which_path", ratio, ">", slack=tuple(slack or s.slack))


def radiated_energy(s: Scenario) -> Quantity:
    """Energy radiated while Alice closes her multipole in time T_A: ``(Q^(n)/T_A^{n+1})^2 T_A``."""
    n = int(s.multipole_order)
    T = s.quantity("T_A")
    M = moments(s).effective
    coupling = 1 / Q_P ** 2 if s.is_em else G
    E = coupling * (M / T ** (n + 1)) ** 2 * T
    E.magnitude(ENERGY)
    return E


def entangling_quanta(s: Scenario):
    """Number of photons (EM) or gravitons (GR) of frequency ~1/T_A in the difference state."""
    n = int(s.multipole_order)
    coupling = 1 / Q_P ** 2 if s.is_em else G
    N = coupling * (moments(s).effective / s.quantity("T_A") ** n) ** 2
    return N.magnitude(DIMENSIONLESS)


def recoherence_criterion(s: Scenario, *, quantized_radiation: bool = True, slack=None) -> Criterion:
    """Alice avoids entangling radiation (and can recohere) when N < 1.

    With ``quantized_radiation=False`` no quanta are ever emitted (counterfactual probing).
    """
    N = entangling_quanta(s)
    if not quantized_radiation:
        N = np.zeros_like(np.asarray(N, dtype=float))
        N = float(N) if N.ndim == 0 else N
    return Criterion("recoherence", N, "<", slack=tuple(slack or s.slack))


def spacelike(s: Scenario):
    """``(T_A < D, T_B < D)``; the light-cone boundary counts as not spacelike."""
    alice = np.less(s.T_A, s.D)
    bob = np.less(s.T_B, s.D)
    if alice.ndim == 0 and bob.ndim == 0:
        return bool(alice), bool(bob)
    return alice, bob
