"""Two-path duality simulator and undetected-photon imaging toolkit.

Layers, bottom up:

* :mod:`qduality.states`: two-path state algebra (coherence, concurrence);
* :mod:`qduality.mzi`: interferometer observables and photon loss;
* :mod:`qduality.qiup`: the undetected-photon imaging chain;
* :mod:`qduality.measure`: Poisson fringe scans, estimators, calibration;
* :mod:`qduality.maps` / :mod:`qduality.imaging`: object maps and the
  per-pixel reconstruction pipeline;
* :mod:`qduality.cli`: the ``qduality`` command-line front end.
"""

from .errors import (DualityError, MapFormatError, NoSignalError,
                     SingularPredictabilityError, StageOrderError)
from .states import (DensityMatrix2, MarginalVector, TwoPathState, concurrence,
                     degree_of_coherence, inner_product, make_two_path_state,
                     reduced_path_density, two_path_state_from_marginals)
from .mzi import (Arm, LossChannel, LossyTwoPathState, apply_loss,
                  detection_probability, duality_residual, predictability,
                  visibility)
from .qiup import (ObjectPixel, QiupConfig, QiupState, Stage, align_idlers,
                   ide_residual, object_interaction, pump_split, qiup_predictability,
                   qiup_visibility, run_chain, signal_probability, spdc)
from .measure import (Calibration, DualityEstimate, FringeScan, calibrate_no_object,
                      ellipticity, estimate_predictability, estimate_visibility,
                      estimate_visibility_minmax, extract_transmittance,
                      measure_duality, simulate_fringe_scan)
from .maps import TransmittanceMap, load_map, rmse, save_map, synth_letter_object
from .imaging import ReconstructionReport, read_report_dir, reconstruct, write_report_dir
from .rng import derive_seed, make_generator

__version__ = "0.1.0"
