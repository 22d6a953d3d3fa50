"""Primary-user-emulation attack detection for cognitive radio networks.

Simulation of CR sensing under free-space and log-normal shadowing
propagation, the interval-intersection and distance-spread hypothesis tests,
their analytic error bounds, and a small back-propagation baseline.
"""

from .detect import (BoundParams, Hypothesis, NaiveTestInput, fn_probability_bound,
                     fp_probability_bound, naive_detection_rate_bound, naive_interval_test,
                     rss_threshold_test)
from .errors import ConfigError, ValidityError
from .experiments import (RocCurve, TrialOutcome, naive_sweep, run_bpnn_comparison,
                          run_naive_false_positive, run_naive_monte_carlo, run_trial,
                          simulate, sweep_roc)
from .kernels import BACKEND
from .propagation import (FsplModel, LogShadowModel, ModelErrors, TransmitterProfile,
                          estimated_distance_under_error, fspl_received_power,
                          ideal_distance_estimate, lognormal_path_loss, make_hata_urban_model)
from .scenario import Scenario, load_scenario, preset_scenario
from .topology import Point2D, Topology, distance, move_pu, sample_topology

__version__ = "0.1.0"
