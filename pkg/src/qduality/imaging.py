"""Per-pixel imaging pipeline: forward chain, measurement, inversion.

For every transverse pixel the undetected-photon chain is run with that
pixel's transmittance, a phase-stepped fringe scan plus blocked-arm runs
are simulated, and the transmittance is recovered from the measured
visibility/predictability pair through the imaging ellipse.  One no-object
calibration of the source term alpha * gamma is shared by the whole image:
source decoherence and idler misalignment act uniformly across the
transverse plane, so a single scale factor undoes them everywhere.

Pixels are independent; their measurement seeds derive from the master
seed and the pixel coordinates, so serial and thread-pool execution give
bit-identical reports.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .maps import TransmittanceMap, rmse, save_map
from .measure import (Calibration, IDENTITY_CALIBRATION, calibrate_no_object,
                      extract_transmittance, measure_duality)
from .qiup import ObjectPixel, QiupConfig, run_chain, signal_probability
from .rng import derive_seed

FLOAT_KEYS = ("p1", "pump_coherence", "alignment_overlap", "fringe_phase",
              "calibration_alpha_gamma", "rmse")


@dataclass(frozen=True)
class ReconstructionReport:
    """Everything one imaging run produced."""

    reconstructed: TransmittanceMap
    v_hat: np.ndarray = field(repr=False)
    d_hat: np.ndarray = field(repr=False)
    ellipticity: np.ndarray = field(repr=False)
    rmse: float
    photons_per_point: int
    grid_size: int
    master_seed: int
    noiseless: bool
    config: QiupConfig
    calibration: Calibration

    def __post_init__(self):
        shape = self.reconstructed.values.shape
        for name in ("v_hat", "d_hat", "ellipticity"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != shape:
                raise ValueError(f"{name} grid shape {arr.shape} != map shape {shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.rmse < 0:
            raise ValueError("rmse must be nonnegative")


def _measure_pixel(t: float, cfg: QiupConfig, cal: Calibration, grid_size: int,
                   budget: int, predict_photons: int, seed: int, noiseless: bool):
    chain = run_chain(cfg, ObjectPixel(t))
    est = measure_duality(lambda phi: signal_probability(chain, phi),
                          cfg.p1, 1.0 - cfg.p1, grid_size, budget,
                          predict_photons, seed, noiseless=noiseless)
    t_hat = extract_transmittance(est.v_hat, est.d_hat, cal)
    return est.v_hat, est.d_hat, est.ellipticity_hat, t_hat


def reconstruct(truth: TransmittanceMap, cfg: QiupConfig, budget: int,
                grid_size: int = 24, master_seed: int = 0, noiseless: bool = False,
                calibrated: bool = True, calibration_photons: Optional[int] = None,
                workers: int = 0) -> ReconstructionReport:
    """Image ``truth`` through the chain and invert it back, pixel by pixel.

    ``budget`` is photons per phase point per pixel; the blocked-arm runs
    get half a scan's worth each.  With ``calibrated=False`` the raw
    ellipse inversion is used (alpha_gamma treated as 1), which dims the
    image by the true alpha * gamma but preserves pixel ordering.
    ``workers`` > 1 runs pixels on a thread pool; results are identical to
    the serial path by construction.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1 photon per phase point, got {budget}")
    if not 0.0 < cfg.p1 < 1.0:
        raise ValueError(f"imaging needs both pump arms occupied, got p1 = {cfg.p1}")
    if calibrated:
        cal_photons = calibration_photons or max(1_000_000, grid_size * budget)
        cal = calibrate_no_object(cfg, cal_photons, derive_seed(master_seed, 1),
                                  grid_size=grid_size, noiseless=noiseless)
    else:
        cal = IDENTITY_CALIBRATION

    height, width = truth.values.shape
    predict_photons = max(1, budget * grid_size // 2)
    v_grid = np.zeros((height, width))
    d_grid = np.zeros((height, width))
    eta_grid = np.zeros((height, width))
    t_grid = np.zeros((height, width))

    def job(xy):
        x, y = xy
        return _measure_pixel(float(truth.values[y, x]), cfg, cal, grid_size,
                              budget, predict_photons,
                              derive_seed(master_seed, 0, x, y), noiseless)

    pixels = [(x, y) for y in range(height) for x in range(width)]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, pixels, chunksize=64))
    else:
        results = [job(xy) for xy in pixels]
    for (x, y), (v, d, eta, t_hat) in zip(pixels, results):
        v_grid[y, x] = v
        d_grid[y, x] = d
        eta_grid[y, x] = eta
        t_grid[y, x] = t_hat

    recon = TransmittanceMap(t_grid)
    return ReconstructionReport(reconstructed=recon, v_hat=v_grid, d_hat=d_grid,
                                ellipticity=eta_grid, rmse=rmse(truth, recon),
                                photons_per_point=budget, grid_size=grid_size,
                                master_seed=master_seed, noiseless=noiseless,
                                config=cfg, calibration=cal)


# -----------------------------
# Report directory layout
# -----------------------------

def _write_grid_csv(arr: np.ndarray, path) -> None:
    lines = [",".join(f"{v:.17g}" for v in row) for row in arr]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def report_summary(report: ReconstructionReport) -> str:
    """key=value summary block (17 significant digits for floats)."""
    cfg = report.config
    items = [
        ("width", report.reconstructed.width),
        ("height", report.reconstructed.height),
        ("grid_size", report.grid_size),
        ("photons_per_point", report.photons_per_point),
        ("master_seed", report.master_seed),
        ("noiseless", "true" if report.noiseless else "false"),
        ("p1", cfg.p1),
        ("pump_coherence", cfg.pump_coherence),
        ("alignment_overlap", cfg.alignment_overlap),
        ("fringe_phase", cfg.fringe_phase),
        ("calibration_alpha_gamma", report.calibration.alpha_gamma_hat),
        ("calibration_photons", report.calibration.photons_used),
        ("calibration_seed", report.calibration.seed),
        ("rmse", report.rmse),
    ]
    lines = []
    for key, value in items:
        if isinstance(value, float):
            lines.append(f"{key}={value:.17g}")
        else:
            lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def write_report_dir(report: ReconstructionReport, out_dir,
                     truth: Optional[TransmittanceMap] = None,
                     figures: bool = True) -> None:
    """Write the report: summary text, grids as CSV/PGM, overview figure."""
    import os
    os.makedirs(out_dir, exist_ok=True)
    join = lambda name: os.path.join(str(out_dir), name)
    with open(join("report.txt"), "w", encoding="ascii", newline="\n") as fh:
        fh.write(report_summary(report))
    save_map(report.reconstructed, join("reconstruction.csv"), fmt="csv")
    save_map(report.reconstructed, join("reconstruction.pgm"), fmt="pgm")
    _write_grid_csv(report.v_hat, join("visibility.csv"))
    _write_grid_csv(report.d_hat, join("predictability.csv"))
    _write_grid_csv(report.ellipticity, join("ellipticity.csv"))
    if truth is not None:
        save_map(truth, join("truth.csv"), fmt="csv")
    if figures:
        from .figures import save_reconstruction_figure
        save_reconstruction_figure(report.reconstructed.values, report.ellipticity,
                                   join("overview.png"),
                                   truth=None if truth is None else truth.values,
                                   rmse_value=report.rmse)


def read_report_dir(run_dir) -> dict:
    """Load a report directory back into a dict of scalars and grids."""
    import os
    summary = {}
    with open(os.path.join(str(run_dir), "report.txt"), "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or "=" not in line:
                continue
            key, value = line.split("=", 1)
            if key in FLOAT_KEYS:
                summary[key] = float(value)
            elif key == "noiseless":
                summary[key] = value == "true"
            else:
                summary[key] = int(value)
    out = {"summary": summary}
    for name, fname in (("reconstruction", "reconstruction.csv"),
                        ("visibility", "visibility.csv"),
                        ("predictability", "predictability.csv"),
                        ("ellipticity", "ellipticity.csv"),
                        ("truth", "truth.csv")):
        fpath = os.path.join(str(run_dir), fname)
        if os.path.exists(fpath):
            out[name] = np.loadtxt(fpath, delimiter=",", ndmin=2)
    return out
