"""Undetected-photon imaging chain (induced coherence, no induced emission).

A pump photon is split over two arms (probability p1 / 1 - p1), each arm
feeding an identical nonlinear crystal that down-converts it into a
signal-idler pair (the single-pair term is post-selected).  The idler from
crystal 1 passes through the object, which transmits its amplitude with a
real coefficient T and dumps the rest into an orthogonal reflected/absorbed
sink.  The transmitted idler is then aligned with the idler from crystal 2
(mode overlap alpha), after which the two signal modes are recombined on a
50/50 splitter and detected; the idler is never detected.

Every imperfection enters the signal fringe only through the product

    kappa = T * gamma * alpha

(gamma = pump coherence, alpha = idler alignment overlap), so the chain
state carries kappa plus explicit branch probabilities for conservation
checks.  The observables on the detected signal are

    P(phi) = [1 + 2 sqrt(p1 (1-p1)) kappa cos(phi + phi0)] / 2
    V      = 2 sqrt(p1 (1-p1)) kappa
    D      = |2 p1 - 1|

and satisfy the imaging ellipse identity V^2 / kappa^2 + D^2 = 1: the
object's partial transmission acts exactly like a partial coherence, and
for a balanced pump sweep the (V, D) locus is an ellipse whose
eccentricity is the object's reflection coefficient sqrt(1 - T^2).

The derivation is strictly sequential (split -> down-conversion -> object
-> alignment), so the stage is tagged and enforced; applying an operation
out of order raises :class:`StageOrderError` instead of silently producing
wrong physics.
"""

import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import StageOrderError

KAPPA_EPSILON = 1e-9


@dataclass(frozen=True)
class QiupConfig:
    """Source-side parameters, constant across the transverse plane."""

    p1: float = 0.5
    pump_coherence: float = 1.0
    alignment_overlap: float = 1.0
    fringe_phase: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p1 <= 1.0:
            raise ValueError(f"p1 must lie in [0, 1], got {self.p1}")
        if not 0.0 <= self.pump_coherence <= 1.0:
            raise ValueError(f"pump coherence must lie in [0, 1], got {self.pump_coherence}")
        if not 0.0 <= self.alignment_overlap <= 1.0:
            raise ValueError(f"alignment overlap must lie in [0, 1], got {self.alignment_overlap}")


@dataclass(frozen=True)
class ObjectPixel:
    """Real amplitude transmittance of the object at one transverse point."""

    transmittance: float

    def __post_init__(self):
        t = self.transmittance
        if isinstance(t, complex):
            raise ValueError("transmittance must be real; phase objects are not modeled")
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"transmittance must lie in [0, 1], got {t}")
        object.__setattr__(self, "transmittance", t)

    @property
    def reflectance(self) -> float:
        """Amplitude into the reflected/absorbed sink; T^2 + R^2 = 1."""
        t = self.transmittance
        return np.sqrt(max(0.0, 1.0 - t * t))


class Stage(enum.Enum):
    PUMP_SPLIT = "pump-split"
    POST_SPDC = "post-spdc"
    POST_OBJECT = "post-object"
    POST_ALIGNMENT = "post-alignment"


@dataclass(frozen=True)
class QiupState:
    """Chain state: stage tag, arm probabilities, accumulated overlap kappa.

    Probabilities are primary (amplitudes are derived), which keeps the
    balanced point exact: 2 sqrt(p1 p2) is 1.0 to the last bit at p1 = 0.5.
    ``branches`` lists (label, probability) for every mode the photon pair
    can occupy, including sink modes, and always sums to 1; it exists for
    conservation checks, not for the fringe formulas.
    """

    stage: Stage
    p1: float
    p2: float
    kappa: float
    fringe_phase: float
    branches: Tuple[Tuple[str, float], ...]

    @property
    def c1(self) -> float:
        return float(np.sqrt(self.p1))

    @property
    def c2(self) -> float:
        return float(np.sqrt(self.p2))

    def branch_total(self) -> float:
        return sum(p for _, p in self.branches)


def _require_stage(state: QiupState, expected: Stage, op: str) -> None:
    if state.stage is not expected:
        raise StageOrderError(
            f"{op} expects stage {expected.value!r}, got {state.stage.value!r}")


def pump_split(cfg: QiupConfig) -> QiupState:
    """Split the pump; kappa starts at the pump coherence gamma."""
    return QiupState(stage=Stage.PUMP_SPLIT, p1=cfg.p1, p2=1.0 - cfg.p1,
                     kappa=cfg.pump_coherence, fringe_phase=cfg.fringe_phase,
                     branches=(("pump-1", cfg.p1), ("pump-2", 1.0 - cfg.p1)))


def spdc(state: QiupState) -> QiupState:
    """Down-convert each arm into a signal-idler pair (single pair kept).

    Pure relabeling: amplitudes and kappa are unchanged.
    """
    _require_stage(state, Stage.PUMP_SPLIT, "spdc")
    return QiupState(stage=Stage.POST_SPDC, p1=state.p1, p2=state.p2,
                     kappa=state.kappa, fringe_phase=state.fringe_phase,
                     branches=(("s1-i1", state.p1), ("s2-i2", state.p2)))


def object_interaction(state: QiupState, pixel: ObjectPixel) -> QiupState:
    """Pass idler 1 through the object: amplitude T transmitted, R sunk."""
    _require_stage(state, Stage.POST_SPDC, "object_interaction")
    t = pixel.transmittance
    r = pixel.reflectance
    return QiupState(stage=Stage.POST_OBJECT, p1=state.p1, p2=state.p2,
                     kappa=state.kappa * t, fringe_phase=state.fringe_phase,
                     branches=(("s1-i1-transmitted", state.p1 * t * t),
                               ("s1-sink", state.p1 * r * r),
                               ("s2-i2", state.p2)))


def align_idlers(state: QiupState, alpha: float) -> QiupState:
    """Overlap the two idler modes; the misaligned part never interferes."""
    _require_stage(state, Stage.POST_OBJECT, "align_idlers")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alignment overlap must lie in [0, 1], got {alpha}")
    trans, sink = state.branches[0][1], state.branches[1][1]
    return QiupState(stage=Stage.POST_ALIGNMENT, p1=state.p1, p2=state.p2,
                     kappa=state.kappa * alpha, fringe_phase=state.fringe_phase,
                     branches=(("s1-i0", trans),
                               ("s1-sink", sink),
                               ("s2-i0", state.p2 * alpha * alpha),
                               ("s2-misaligned", state.p2 * (1.0 - alpha * alpha))))


def run_chain(cfg: QiupConfig, pixel: ObjectPixel) -> QiupState:
    """Full chain for one transverse point."""
    state = spdc(pump_split(cfg))
    state = object_interaction(state, pixel)
    return align_idlers(state, cfg.alignment_overlap)


# -----------------------------
# Observables on the detected signal photon
# -----------------------------

def signal_probability(state: QiupState, phi):
    """One-port signal detection probability; scalar or array phase."""
    _require_stage(state, Stage.POST_ALIGNMENT, "signal_probability")
    amp = 2.0 * np.sqrt(state.p1 * state.p2) * state.kappa
    return 0.5 * (1.0 + amp * np.cos(np.asarray(phi) + state.fringe_phase))


def qiup_visibility(state: QiupState) -> float:
    _require_stage(state, Stage.POST_ALIGNMENT, "qiup_visibility")
    return float(2.0 * np.sqrt(state.p1 * state.p2) * state.kappa)


def qiup_predictability(state: QiupState) -> float:
    _require_stage(state, Stage.POST_ALIGNMENT, "qiup_predictability")
    return abs(state.p1 - state.p2)


def ide_residual(state: QiupState) -> float:
    """V^2 / kappa^2 + D^2 - 1; identically zero for every chain.

    Below kappa = 1e-9 the ratio uses its analytic limit 2 sqrt(p1 p2),
    the same convention as the interferometer-side residual.
    """
    _require_stage(state, Stage.POST_ALIGNMENT, "ide_residual")
    if state.kappa < KAPPA_EPSILON:
        v_over_kappa = 2.0 * np.sqrt(state.p1 * state.p2)
    else:
        v_over_kappa = qiup_visibility(state) / state.kappa
    d = qiup_predictability(state)
    return v_over_kappa ** 2 + d ** 2 - 1.0
