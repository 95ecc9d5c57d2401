"""Toy quantum model: Alice's path qubit, the field difference state, and Bob's packet pair.

The global state is ``(|L>|e_L> + |R>|e_R>)/sqrt(2)`` where the environment
states ``|e_{L,R}> = |field_{L,R}> ⊗ |bob_{L,R}>`` overlap by

    gamma = <alpha_R|alpha_L> · <bob_R|bob_L> = exp(-N/2) · exp(-δx²/(8σ²)).

Only magnitudes are tracked; coherent-state phases are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import estimators
from .scenario import Scenario


class InvariantViolation(ValueError):
    pass


@dataclass(frozen=True)
class FieldLabel:
    """Difference coherent state ``|alpha_L - alpha_R>`` labelled by its mean quantum number."""

    N_diff: float

    def __post_init__(self):
        if np.any(~(np.asarray(self.N_diff, dtype=float) >= 0)):
            raise estimators.DomainError("N_diff must be non-negative")


@dataclass(frozen=True)
class BobPacketPair:
    """Two equal-width Gaussian packets for Bob's particle, one per branch of Alice's."""

    delta_x: float
    sigma: float
    floor: float = 0.0

    def __post_init__(self):
        if np.any(~(np.asarray(self.delta_x, dtype=float) >= 0)):
            raise InvariantViolation("delta_x must be non-negative")
        if np.any(~(np.asarray(self.sigma, dtype=float) > 0)):
            raise InvariantViolation("sigma must be positive")
        if np.any(np.asarray(self.sigma) < np.asarray(self.floor)):
            raise InvariantViolation("sigma is below the localization floor")


@dataclass(frozen=True)
class AliceReducedState:
    """Alice's path density matrix ``½[[1, gamma], [gamma, 1]]`` (gamma real, phases dropped)."""

    gamma: float

    @property
    def visibility(self):
        return np.abs(self.gamma)

    @property
    def purity(self):
        return (1 + np.abs(self.gamma) ** 2) / 2

    def density_matrix(self) -> np.ndarray:
        g = complex(self.gamma)
        return 0.5 * np.array([[1, g], [np.conj(g), 1]])


def field_overlap(label: FieldLabel):
    return np.exp(-np.asarray(label.N_diff, dtype=float) / 2)


def bob_overlap(p: BobPacketPair):
    dx = np.asarray(p.delta_x, dtype=float)
    sigma = np.asarray(p.sigma, dtype=float)
    return np.exp(-dx ** 2 / (8 * sigma ** 2))


def _bob_factor(s: Scenario, slack: float = 1.0):
    # overlap of Bob's conditional packets; 1 when he does not couple
    dx = np.asarray(estimators.bob_displacement(s).value, dtype=float) * slack
    floor = np.asarray(estimators.localization_limit(s, "B").value, dtype=float)
    sigma = floor if s.sigma_B is None else np.asarray(s.sigma_B, dtype=float)
    if s.sigma_B is not None and np.any(sigma < floor):
        raise InvariantViolation("sigma_B is below Bob's localization floor")
    dx, sigma = np.broadcast_arrays(dx, sigma)
    out = np.ones(dx.shape)
    moving = dx > 0
    if np.any(moving):
        out[moving] = bob_overlap(BobPacketPair(dx[moving], sigma[moving]))
    return out


def coherence(s: Scenario, slack: float = 1.0):
    """|gamma| for scenario ``s``; ``slack`` scales both N and δx (for interval reporting)."""
    N = np.asarray(estimators.entangling_quanta(s), dtype=float) * slack
    gamma = field_overlap(FieldLabel(N))
    if s.bob_opens:
        gamma = gamma * _bob_factor(s, slack)
    return float(gamma) if np.ndim(gamma) == 0 else gamma


def reduce_alice(s: Scenario) -> AliceReducedState:
    return AliceReducedState(coherence(s))


def coherence_interval(s: Scenario) -> tuple:
    """(min, max) of |gamma| as the slack factor ranges over the scenario's interval."""
    c_min, c_max = s.slack
    return coherence(s, c_max), coherence(s, c_min)


class Complementarity(NamedTuple):
    visibility: object
    distinguishability: object
    defect: object


def _trace_distance_pure(overlap):
    # trace distance between |e_L> = (1, 0) and |e_R> = (g, sqrt(1 - g^2)), computed numerically
    g = np.asarray(overlap, dtype=float).ravel()
    h = np.sqrt(np.clip(1 - g ** 2, 0.0, None))
    e_l = np.stack([np.ones_like(g), np.zeros_like(g)], axis=-1)
    e_r = np.stack([g, h], axis=-1)
    diff = np.einsum("ni,nj->nij", e_l, e_l) - np.einsum("ni,nj->nij", e_r, e_r)
    eig = np.linalg.eigvalsh(diff)
    return 0.5 * np.abs(eig).sum(axis=-1)


def complementarity_check(s: Scenario) -> Complementarity:
    """Visibility from Alice's reduced state, distinguishability from her environment states.

    V is ``2|rho_01|``; D is the trace distance between the two conditional
    environment states.  For the pure global state ``V^2 + D^2 = 1``.
    """
    gamma = np.asarray(coherence(s), dtype=float)
    shape = gamma.shape
    gamma = gamma.ravel()
    rho_01 = 0.5 * gamma
    V = 2 * np.abs(rho_01)
    D = _trace_distance_pure(gamma)
    defect = np.abs(V ** 2 + D ** 2 - 1)
    if not shape:
        return Complementarity(float(V[0]), float(D[0]), float(defect[0]))
    return Complementarity(V.reshape(shape), D.reshape(shape), defect.reshape(shape))


def signaling_metric(s: Scenario):
    """``|gamma(s) - gamma(s with Bob's trap closed)|``.

    With the trap open this is ``field_overlap · (1 - bob_overlap)``; with it
    closed the two branches coincide and the metric is 0.  Only meaningful as a
    signaling measure when both parties are spacelike separated.
    """
    closed = coherence(s.replace(bob_opens=False))
    if not s.bob_opens:
        return 0.0 if np.ndim(closed) == 0 else np.zeros_like(closed)
    return np.abs(coherence(s) - closed)
