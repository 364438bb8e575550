"""Statistical measurement layer: fringe scans, estimators, calibration.

Fringe scans realize the counting experiment: the interferometer phase is
stepped over a uniform grid on [0, 2pi) and each point records a Poisson
count with mean N * P(phi).  Visibility is estimated by a plain (unweighted)
three-parameter least-squares fit of

    counts ~= A * (1 + V cos(phi - phi0)),

which is linear in the basis {1, cos phi, sin phi}; the literal max/min
contrast over the grid is kept as a secondary cross-check estimator.
Predictability comes from two blocked-arm counting runs.  Raw estimates are
clamped to [0, 1] (shot noise can push them out of physical range); the
sigma fields keep the honesty.

For imaging, the combined source imperfection alpha * gamma is calibrated
by running the chain with no object (T = 1), where

    alpha_gamma = V / sqrt(1 - D^2),

and transmittance is then extracted per pixel as
T = V / (alpha_gamma * sqrt(1 - D^2)).  When D is numerically 1 one arm is
empty and V = 0 for every T, so T is unidentifiable; that raises
:class:`SingularPredictabilityError` rather than guessing.

All randomness flows through explicit seeds (see :mod:`qduality.rng`), so
identical inputs give bit-identical scans, estimates and calibrations.
A ``noiseless`` switch replaces sampled counts by their expectations, which
separates physics-correctness tests from statistical-tolerance tests.
"""

import io
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .errors import NoSignalError, SingularPredictabilityError
from .qiup import QiupConfig, ObjectPixel, run_chain, signal_probability
from .rng import derive_seed, make_generator

PREDICTABILITY_EPSILON = 1e-6

# no-object calibration photon budget split: most photons go to the fringe
# scan (visibility noise dominates alpha*gamma), a sliver to each blocked arm
CAL_SCAN_FRACTION = 0.90
CAL_ARM_FRACTION = 0.05


# -----------------------------
# Fringe scans
# -----------------------------

@dataclass(frozen=True)
class FringeScan:
    """One phase-stepped counting run.

    ``counts`` are Poisson samples (integer-valued) or, in noiseless mode,
    the expected counts themselves; ``expected`` always holds N * P(phi).
    """

    phase_grid: np.ndarray
    photons_per_point: int
    expected: np.ndarray
    counts: np.ndarray
    seed: int

    def __post_init__(self):
        grid = np.asarray(self.phase_grid, dtype=np.float64)
        expected = np.asarray(self.expected, dtype=np.float64)
        counts = np.asarray(self.counts, dtype=np.float64)
        if grid.size < 8:
            raise ValueError(f"phase grid needs >= 8 points, got {grid.size}")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("phase grid must be strictly increasing")
        if counts.shape != grid.shape or expected.shape != grid.shape:
            raise ValueError("counts/expected length must match the phase grid")
        if np.any(counts < 0) or not np.all(np.isfinite(counts)):
            raise ValueError("counts must be finite and nonnegative")
        if self.photons_per_point < 1:
            raise ValueError("photons_per_point must be >= 1")
        for name, arr in (("phase_grid", grid), ("expected", expected), ("counts", counts)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("phase_rad,expected,count\n")
        for phi, exp, cnt in zip(self.phase_grid, self.expected, self.counts):
            buf.write(f"{phi:.17g},{exp:.17g},{cnt:.17g}\n")
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(self.to_csv())


def simulate_fringe_scan(prob_fn: Callable[[float], float], grid_size: int,
                         photons_per_point: int, seed: int,
                         noiseless: bool = False) -> FringeScan:
    """Sample counts[k] ~ Poisson(N * prob_fn(phi_k)) on a uniform grid.

    ``prob_fn`` may be vectorized over a phase array or scalar-only.
    """
    if grid_size < 8:
        raise ValueError(f"grid_size must be >= 8, got {grid_size}")
    if photons_per_point < 1:
        raise ValueError(f"photons_per_point must be >= 1, got {photons_per_point}")
    grid = np.linspace(0.0, 2.0 * np.pi, grid_size, endpoint=False)
    try:
        probs = np.asarray(prob_fn(grid), dtype=np.float64)
        if probs.shape != grid.shape:
            raise TypeError
    except TypeError:
        probs = np.array([float(prob_fn(p)) for p in grid])
    if np.any(probs < -1e-12) or np.any(probs > 1.0 + 1e-12):
        raise ValueError("prob_fn returned values outside [0, 1]")
    expected = photons_per_point * np.clip(probs, 0.0, 1.0)
    if noiseless:
        counts = expected.copy()
    else:
        rng = make_generator(seed)
        counts = rng.poisson(expected).astype(np.float64)
    return FringeScan(phase_grid=grid, photons_per_point=photons_per_point,
                      expected=expected, counts=counts, seed=int(seed))


# -----------------------------
# Visibility estimation
# -----------------------------

def estimate_visibility(scan: FringeScan) -> Tuple[float, float, float]:
    """Least-squares sinusoid fit; returns (v_hat, fitted_phase, sigma_v).

    The model A * (1 + V cos(phi - phi0)) is linear in {1, cos, sin}, so the
    fit is exact (no iteration).  sigma_v propagates the fit covariance
    through V = hypot(a_cos, a_sin) / a_0; v_hat is clamped to [0, 1].
    """
    y = scan.counts
    if not np.any(y > 0):
        raise NoSignalError("all counts are zero; cannot estimate visibility")
    phi = scan.phase_grid
    design = np.column_stack([np.ones_like(phi), np.cos(phi), np.sin(phi)])
    gram = design.T @ design
    coef = np.linalg.solve(gram, design.T @ y)
    a0, a1, a2 = coef
    resid = y - design @ coef
    dof = max(1, y.size - 3)
    sigma2 = float(resid @ resid) / dof
    cov = sigma2 * np.linalg.inv(gram)

    r = float(np.hypot(a1, a2))
    v_raw = r / a0
    phase = float(np.arctan2(a2, a1))
    if r > 0:
        grad = np.array([-r / a0 ** 2, a1 / (r * a0), a2 / (r * a0)])
    else:
        grad = np.array([0.0, 1.0 / a0, 1.0 / a0])
    sigma_v = float(np.sqrt(max(0.0, grad @ cov @ grad)))
    return float(np.clip(v_raw, 0.0, 1.0)), phase, sigma_v


def estimate_visibility_minmax(scan: FringeScan) -> Tuple[float, float]:
    """Literal grid contrast (max - min) / (max + min), with uncertainty.

    The sigma combines three effects: Poisson noise at the two extremes,
    inflated by sqrt(2 ln G) because the extremes of G samples sit that many
    standard deviations out (which also biases this estimator upward on
    near-flat fringes), and the grid discretization bound
    v * (1 - cos(pi / G)) from missing the true extrema by up to half a step.
    """
    y = scan.counts
    hi = float(np.max(y))
    lo = float(np.min(y))
    total = hi + lo
    if total <= 0:
        raise NoSignalError("all counts are zero; cannot estimate visibility")
    v = (hi - lo) / total
    stat = 2.0 * np.sqrt(max(hi * lo, max(hi, 1.0)) / total ** 3)
    extreme = np.sqrt(2.0 * np.log(y.size))
    disc = v * (1.0 - np.cos(np.pi / y.size))
    return float(np.clip(v, 0.0, 1.0)), float(stat * extreme + disc)


# -----------------------------
# Predictability estimation
# -----------------------------

def estimate_predictability(p_arm1: float, p_arm2: float, photons: int, seed: int,
                            noiseless: bool = False) -> Tuple[float, float]:
    """Blocked-arm counting: N_i ~ Poisson(photons * p_i), d = |N1-N2|/(N1+N2)."""
    if not (p_arm1 >= 0.0 and p_arm2 >= 0.0 and 0.0 < p_arm1 + p_arm2 <= 1.0 + 1e-12):
        raise ValueError(f"arm probabilities must be nonnegative with sum in (0, 1], "
                         f"got {p_arm1}, {p_arm2}")
    if photons < 1:
        raise ValueError(f"photons must be >= 1, got {photons}")
    if noiseless:
        n1 = photons * p_arm1
        n2 = photons * p_arm2
    else:
        rng = make_generator(seed)
        n1 = float(rng.poisson(photons * p_arm1))
        n2 = float(rng.poisson(photons * p_arm2))
    total = n1 + n2
    if total <= 0:
        raise NoSignalError("both blocked-arm runs returned zero counts")
    d = abs(n1 - n2) / total
    sigma_d = 2.0 * np.sqrt(max(n1 * n2, max(n1, n2, 1.0)) / total ** 3)
    return float(np.clip(d, 0.0, 1.0)), float(sigma_d)


# -----------------------------
# Ellipse inversion and calibration
# -----------------------------

def ellipticity(v_hat: float, d_hat: float) -> float:
    """eta = 1 - min(1, V / sqrt(1 - D^2)); the image-forming quantity."""
    if d_hat > 1.0 - PREDICTABILITY_EPSILON:
        raise SingularPredictabilityError(
            f"predictability {d_hat} is numerically 1; transmittance is unidentifiable")
    return 1.0 - min(1.0, v_hat / np.sqrt(1.0 - d_hat * d_hat))


@dataclass(frozen=True)
class DualityEstimate:
    """Measured duality pair for one configuration or pixel."""

    v_hat: float
    sigma_v: float
    d_hat: float
    sigma_d: float
    ellipticity_hat: float
    fitted_phase: float


@dataclass(frozen=True)
class Calibration:
    """No-object estimate of the combined source imperfection alpha * gamma."""

    alpha_gamma_hat: float
    photons_used: int
    seed: int

    def __post_init__(self):
        if not 0.0 < self.alpha_gamma_hat <= 1.0:
            raise ValueError(f"alpha_gamma_hat must lie in (0, 1], got {self.alpha_gamma_hat}")


IDENTITY_CALIBRATION = Calibration(alpha_gamma_hat=1.0, photons_used=0, seed=0)


def measure_duality(prob_fn: Callable[[float], float], p_arm1: float, p_arm2: float,
                    grid_size: int, photons_per_point: int, predict_photons: int,
                    seed: int, noiseless: bool = False) -> DualityEstimate:
    """Fringe scan + blocked-arm runs for one configuration.

    Sub-seeds 0 (scan) and 1 (blocked arms) are derived from ``seed``.
    """
    scan = simulate_fringe_scan(prob_fn, grid_size, photons_per_point,
                                derive_seed(seed, 0), noiseless=noiseless)
    v_hat, phase, sigma_v = estimate_visibility(scan)
    d_hat, sigma_d = estimate_predictability(p_arm1, p_arm2, predict_photons,
                                             derive_seed(seed, 1), noiseless=noiseless)
    eta = ellipticity(v_hat, d_hat)
    return DualityEstimate(v_hat=v_hat, sigma_v=sigma_v, d_hat=d_hat,
                           sigma_d=sigma_d, ellipticity_hat=eta, fitted_phase=phase)


def calibrate_no_object(cfg: QiupConfig, photons: int, seed: int,
                        grid_size: int = 24, noiseless: bool = False) -> Calibration:
    """Run the chain with T = 1 and estimate alpha * gamma = V / sqrt(1 - D^2).

    ``photons`` is the total calibration budget: 90% goes to the fringe scan
    and 5% to each blocked-arm run.
    """
    if photons < 1:
        raise ValueError(f"photons must be >= 1, got {photons}")
    chain = run_chain(cfg, ObjectPixel(1.0))
    scan_pp = max(1, int(photons * CAL_SCAN_FRACTION / grid_size))
    arm_photons = max(1, int(photons * CAL_ARM_FRACTION))
    est = measure_duality(lambda phi: signal_probability(chain, phi),
                          cfg.p1, 1.0 - cfg.p1, grid_size, scan_pp, arm_photons,
                          seed, noiseless=noiseless)
    alpha_gamma = est.v_hat / np.sqrt(1.0 - est.d_hat ** 2)
    alpha_gamma = float(np.clip(alpha_gamma, np.finfo(float).tiny, 1.0))
    return Calibration(alpha_gamma_hat=alpha_gamma,
                       photons_used=grid_size * scan_pp + 2 * arm_photons,
                       seed=int(seed))


def extract_transmittance(v_hat: float, d_hat: float, cal: Calibration) -> float:
    """Invert the imaging ellipse: T = V / (alpha_gamma * sqrt(1 - D^2))."""
    if d_hat > 1.0 - PREDICTABILITY_EPSILON:
        raise SingularPredictabilityError(
            f"predictability {d_hat} is numerically 1; transmittance is unidentifiable")
    t = v_hat / (cal.alpha_gamma_hat * np.sqrt(1.0 - d_hat * d_hat))
    return float(np.clip(t, 0.0, 1.0))
