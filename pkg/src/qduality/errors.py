"""Exception types shared across the package.

The CLI maps these onto exit codes: map/CSV parse problems exit with 2,
physics-domain conditions (no surviving signal, degenerate predictability,
out-of-order optical chains) exit with 3.
"""


class DualityError(Exception):
    """Base class for physics-domain errors."""


class StageOrderError(DualityError):
    """An optical-chain operation was applied at the wrong stage."""


class NoSignalError(DualityError):
    """A measurement record contains no photon counts at all."""


class SingularPredictabilityError(DualityError):
    """Predictability is (numerically) 1: one arm is empty, so the fringe
    visibility vanishes for every transmittance and T cannot be inferred."""


class MapFormatError(DualityError):
    """A transmittance-map file (PGM or CSV) could not be parsed."""
