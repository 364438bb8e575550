"""Complex-amplitude algebra for generic two-path states.

A photon split over two paths, with everything else (internal degrees of
freedom plus environment) bundled into a normalized "marginal" vector per
path, is described by

    |Psi> = c1 |1>|M1> + e^{-i phi} c2 |2>|M2>,      |c1|^2 + |c2|^2 = 1.

The physics downstream depends on the marginals only through their overlap
<M1|M2>, whose magnitude gamma in [0, 1] is the degree of coherence of the
two paths (1 = fully coherent, 0 = incoherent).  ``TwoPathState`` therefore
stores just (c1, c2, overlap, phi); explicit ``MarginalVector`` pairs exist
so oracle tests can rebuild the joint vector and check everything by brute
force.

Entanglement between path and marginal degrees of freedom is measured by
the concurrence C = 2|c1 c2| sqrt(1 - gamma^2).
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

NORM_TOL = 1e-12


# -----------------------------
# Marginal (non-path) states
# -----------------------------

@dataclass(frozen=True)
class MarginalVector:
    """Normalized finite-dimensional complex vector for the non-path state."""

    components: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.components, dtype=np.complex128)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("marginal vector must be 1-D with dimension >= 1")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("marginal vector has non-finite components")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"marginal vector norm {norm!r} is not 1 within {NORM_TOL}")
        arr.setflags(write=False)
        object.__setattr__(self, "components", arr)

    @property
    def dimension(self) -> int:
        return self.components.size

    @classmethod
    def normalized(cls, components: Sequence[complex]) -> "MarginalVector":
        """Build from an arbitrary nonzero vector, rescaling to unit norm."""
        arr = np.asarray(components, dtype=np.complex128)
        norm = np.linalg.norm(arr)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(arr / norm)

    @classmethod
    def basis(cls, dimension: int, index: int) -> "MarginalVector":
        """The ``index``-th standard basis vector in ``dimension`` dims."""
        arr = np.zeros(dimension, dtype=np.complex128)
        arr[index] = 1.0
        return cls(arr)


def inner_product(a: MarginalVector, b: MarginalVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dimension != b.dimension:
        raise ValueError(f"dimension mismatch: {a.dimension} vs {b.dimension}")
    return complex(np.vdot(a.components, b.components))


def degree_of_coherence(a: MarginalVector, b: MarginalVector) -> float:
    """gamma = |<a|b>| in [0, 1] for normalized a, b."""
    return min(1.0, abs(inner_product(a, b)))


# -----------------------------
# Two-path states
# -----------------------------

@dataclass(frozen=True)
class TwoPathState:
    """Two-path state (c1, c2, marginal overlap, accumulated phase).

    Phase convention: the interfering superposition is
    c1 |1>|M1> + e^{-i extra_phase} c2 |2>|M2>; c1, c2 come out real and
    nonnegative from :func:`make_two_path_state`, with every relative phase
    folded into the overlap's argument plus ``extra_phase``.
    """

    c1: complex
    c2: complex
    marginal_overlap: complex
    extra_phase: float = 0.0

    def __post_init__(self):
        for name in ("c1", "c2", "marginal_overlap"):
            z = complex(getattr(self, name))
            if not (np.isfinite(z.real) and np.isfinite(z.imag)):
                raise ValueError(f"{name} is not finite: {z!r}")
            object.__setattr__(self, name, z)
        object.__setattr__(self, "extra_phase", float(self.extra_phase))
        norm = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"|c1|^2 + |c2|^2 = {norm!r}, expected 1 within {NORM_TOL}")
        if abs(self.marginal_overlap) > 1.0 + NORM_TOL:
            raise ValueError(f"|marginal overlap| = {abs(self.marginal_overlap)!r} exceeds 1")

    @property
    def gamma(self) -> float:
        """Degree of coherence |<M1|M2>|."""
        return min(1.0, abs(self.marginal_overlap))

    @property
    def p1(self) -> float:
        return abs(self.c1) ** 2

    @property
    def p2(self) -> float:
        return abs(self.c2) ** 2


def make_two_path_state(p1: float, gamma: float, overlap_phase: float = 0.0,
                        phi: float = 0.0) -> TwoPathState:
    """Build a two-path state from path probability and coherence.

    c1 = sqrt(p1) and c2 = sqrt(1 - p1) are real and nonnegative; the
    marginal overlap is gamma * exp(i * overlap_phase) and ``phi`` is the
    accumulated interferometer phase.
    """
    if not 0.0 <= p1 <= 1.0:
        raise ValueError(f"p1 must lie in [0, 1], got {p1}")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    overlap = gamma * np.exp(1j * overlap_phase)
    return TwoPathState(c1=np.sqrt(p1), c2=np.sqrt(1.0 - p1),
                        marginal_overlap=complex(overlap), extra_phase=phi)


def two_path_state_from_marginals(p1: float, m1: MarginalVector, m2: MarginalVector,
                                  phi: float = 0.0) -> TwoPathState:
    """Build a two-path state with the overlap computed from explicit marginals."""
    if not 0.0 <= p1 <= 1.0:
        raise ValueError(f"p1 must lie in [0, 1], got {p1}")
    overlap = inner_product(m1, m2)
    return TwoPathState(c1=np.sqrt(p1), c2=np.sqrt(1.0 - p1),
                        marginal_overlap=overlap, extra_phase=phi)


# -----------------------------
# Reduced path density matrix
# -----------------------------

@dataclass(frozen=True)
class DensityMatrix2:
    """2x2 density matrix over the path mode; rho21 = conj(rho12) by construction."""

    rho11: complex
    rho12: complex
    rho22: complex

    @property
    def rho21(self) -> complex:
        return self.rho12.conjugate()

    def as_array(self) -> np.ndarray:
        return np.array([[self.rho11, self.rho12],
                         [self.rho21, self.rho22]], dtype=np.complex128)

    def trace(self) -> float:
        return (self.rho11 + self.rho22).real

    def determinant(self) -> float:
        return (self.rho11 * self.rho22 - self.rho12 * self.rho21).real

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.as_array())


def reduced_path_density(state: TwoPathState) -> DensityMatrix2:
    """Trace the marginal degrees of freedom out of the joint pure state.

    rho11 = |c1|^2, rho22 = |c2|^2, and the coherence entry follows the
    phase convention of :class:`TwoPathState` (extra_phase rides on path 2
    as e^{-i phi}, so it appears here as e^{+i phi}):

        rho12 = c1 * conj(c2) * conj(<M1|M2>) * e^{i extra_phase}.

    For lossy states the surviving amplitudes are renormalized, so the
    result is always unit trace (conditional on photon survival).
    """
    norm = abs(state.c1) ** 2 + abs(state.c2) ** 2
    rho12 = (state.c1 * state.c2.conjugate()
             * state.marginal_overlap.conjugate()
             * np.exp(1j * state.extra_phase)) / norm
    return DensityMatrix2(rho11=abs(state.c1) ** 2 / norm,
                          rho12=complex(rho12),
                          rho22=abs(state.c2) ** 2 / norm)


def concurrence(state: TwoPathState) -> float:
    """Path-marginal entanglement C = 2 |c1 c2| sqrt(1 - gamma^2).

    For the pure joint state this equals 2 * sqrt(det(reduced density)),
    which the test suite checks against an explicit partial-trace oracle.
    """
    g = state.gamma
    return 2.0 * abs(state.c1) * abs(state.c2) * np.sqrt(max(0.0, 1.0 - g * g))
