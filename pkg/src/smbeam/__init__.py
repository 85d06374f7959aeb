"""Constrained reduced-rank adaptive beamforming with set-membership
(data-selective) updates.

The package provides the uniform-linear-array signal model, LCMV filtering
primitives, the jointly adapted transform/weight beamformers in their
gradient and least-squares forms (with and without data-selective updates),
the analytical tooling (arithmetic-cost formulas, MSE-trend prediction,
stability and curvature diagnostics), and a seeded Monte-Carlo experiment
harness with CSV output.
"""

from .arrays import (ChangeEvent, ScenarioError, Snapshot, SourceScenario, SourceSpec,
                     UlaConfig, generate_snapshot, generate_snapshots,
                     interference_noise_covariance, steering_matrix, steering_vector,
                     true_covariance)
from .bounds import BoundState
from .gradient import (FrSg, FrSmSg, JioSg, JioSmSg, SgConfig, orthogonal_projector,
                       project_out, transform_step_size, transform_update,
                       weight_step_size, weight_update)
from .lcmv import (GainConstraint, NumericsError, ReducedRankState,
                   initial_reduced_state, optimal_full_rank, optimal_reduced_rank)
from .rls import (FrRls, FrSmRls, JioRls, JioSmRls, RlsConfig, constrained_weights,
                  forgetting_factor_raw, min_norm_transform, riccati_update)
from .analysis import (COMPLEXITY_TAGS, HessianReport, PredictedMse, StabilityReport,
                       complexity_count, empirical_mse, hessian_condition, mmse,
                       optimal_transform, output_sinr_db, predict_mse_trajectory,
                       stability_matrix, update_probability)
from .harness import (AlgorithmSetup, ConfigError, ExperimentConfig, ExperimentResult,
                      PRESETS, ScenarioSpec, TrajectoryRecord, emit_csv, get_preset,
                      load_config, rank_sweep, run_experiment, save_config)

__version__ = "0.1.0"
