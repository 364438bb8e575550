"""Mach-Zehnder observables: fringe, visibility, predictability, loss.

One output port of an ideal 50/50 recombiner is modeled.  With
N = |c1|^2 + |c2|^2 (1 unless photons were lost) the detection probability,
conditional on photon survival, is

    P(phi) = [N + 2 |c1 c2| gamma cos(phi + phi0)] / (2 N),

where phi0 collects every fixed phase in the system: the argument of
c1 * conj(c2) * conj(<M1|M2>) plus the state's accumulated phase.  The
complementary port carries N minus the fringe term, so both ports sum to 1.
Only the total relative phase is observable, so which physical port this is
amounts to a choice of phi0.

The fringe contrast and path imbalance follow as

    V = 2 |c1 c2| gamma / N,        D = | |c1|^2 - |c2|^2 | / N,

and they satisfy the ellipse identity (V / gamma)^2 + D^2 = 1 for every
state, lossy or not; coherence gamma sets the ellipticity 1 - gamma.
Losing amplitude in one arm (c1 -> a * c1) rescales V and D but leaves the
identity intact, since it only reshapes the coefficients.
"""

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

from .states import NORM_TOL, TwoPathState

GAMMA_EPSILON = 1e-9


class Arm(enum.Enum):
    ARM1 = 1
    ARM2 = 2


@dataclass(frozen=True)
class LossChannel:
    """Amplitude damping of one arm; survival amplitude a, loss prob 1 - a^2."""

    arm: Arm
    survival_amplitude: float

    def __post_init__(self):
        if not 0.0 <= self.survival_amplitude <= 1.0:
            raise ValueError(f"survival amplitude must lie in [0, 1], got {self.survival_amplitude}")


@dataclass(frozen=True)
class LossyTwoPathState:
    """Two-path state after photon loss; |c1|^2 + |c2|^2 = survival_norm <= 1.

    The lost-photon component lives in a sink mode orthogonal to both
    surviving paths and never re-interferes, so it is tracked only through
    the reduced norm.
    """

    c1: complex
    c2: complex
    marginal_overlap: complex
    extra_phase: float
    survival_norm: float

    def __post_init__(self):
        norm = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if not 0.0 < self.survival_norm <= 1.0 + NORM_TOL:
            raise ValueError(f"survival norm must lie in (0, 1], got {self.survival_norm}")
        if abs(norm - self.survival_norm) > NORM_TOL:
            raise ValueError("survival_norm inconsistent with amplitudes")

    @property
    def gamma(self) -> float:
        return min(1.0, abs(self.marginal_overlap))


AnyTwoPathState = Union[TwoPathState, LossyTwoPathState]


def _norm(state: AnyTwoPathState) -> float:
    return abs(state.c1) ** 2 + abs(state.c2) ** 2


def fringe_phase_offset(state: AnyTwoPathState) -> float:
    """phi0: argument of c1 * conj(c2) * conj(overlap), plus the stored phase."""
    z = state.c1 * state.c2.conjugate() * state.marginal_overlap.conjugate()
    if z == 0:
        return state.extra_phase
    return float(np.angle(z)) + state.extra_phase


def detection_probability(state: AnyTwoPathState, phi):
    """One-port detection probability P(phi), conditional on survival.

    Accepts a scalar phase or an array of phases.
    """
    n = _norm(state)
    amp = 2.0 * abs(state.c1) * abs(state.c2) * state.gamma
    phi0 = fringe_phase_offset(state)
    return 0.5 * (n + amp * np.cos(np.asarray(phi) + phi0)) / n


def visibility(state: AnyTwoPathState) -> float:
    """Fringe contrast V = (P_max - P_min) / (P_max + P_min) = 2|c1 c2| gamma / N."""
    n = _norm(state)
    return 2.0 * abs(state.c1) * abs(state.c2) * state.gamma / n


def predictability(state: AnyTwoPathState) -> float:
    """Path imbalance D = |P1 - P2|, renormalized to the surviving photon."""
    n = _norm(state)
    return abs(abs(state.c1) ** 2 - abs(state.c2) ** 2) / n


def duality_residual(state: AnyTwoPathState) -> float:
    """(V / gamma)^2 + D^2 - 1; identically zero for every valid state.

    For gamma below 1e-9 the ratio V / gamma is replaced by its analytic
    limit 2 |c1 c2| / N, which avoids 0/0 while preserving the identity.
    """
    n = _norm(state)
    g = state.gamma
    if g < GAMMA_EPSILON:
        v_over_gamma = 2.0 * abs(state.c1) * abs(state.c2) / n
    else:
        v_over_gamma = visibility(state) / g
    d = predictability(state)
    return v_over_gamma ** 2 + d ** 2 - 1.0


def apply_loss(state: TwoPathState, channel: LossChannel) -> LossyTwoPathState:
    """Damp one arm's amplitude: c -> a * c, gamma untouched.

    The duality residual of the result is still zero once V and D are
    renormalized; equivalent to rebuilding a unit-norm state with
    p1' = a^2 p1 / (a^2 p1 + 1 - p1) for ARM1 loss.
    """
    a = channel.survival_amplitude
    c1, c2 = state.c1, state.c2
    if channel.arm is Arm.ARM1:
        c1 = c1 * a
    else:
        c2 = c2 * a
    survival = abs(c1) ** 2 + abs(c2) ** 2
    if survival <= 0.0:
        raise ValueError("no photon survives: both arms have zero amplitude")
    return LossyTwoPathState(c1=c1, c2=c2,
                             marginal_overlap=state.marginal_overlap,
                             extra_phase=state.extra_phase,
                             survival_norm=survival)
