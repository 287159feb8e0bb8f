"""Locally smoothed Gaussian process regression.

Exact GP regression plus a localized variant that conditions each
prediction on a weighted neighborhood of the query point, with classical
local baselines, model selection, and a benchmark CLI.
"""

from lsgpr import backend
from lsgpr.baselines import (KnnConfig, NadarayaWatsonResult, knn_predict,
                             local_krr, nadaraya_watson)
from lsgpr.data import (Dataset, ScalingInfo, SplitSpec, doppler_function,
                        gen_doppler, load_csv, load_matrix_csv, save_csv,
                        scale_minmax, split, standardize, unscale)
from lsgpr.exceptions import (ConfigError, DataError, DataFileError,
                              LsgprError, NonNumericCellError, NumericalError,
                              SingularMatrixError, TargetColumnError)
from lsgpr.global_gp import (GPModel, HyperOptResult, OptimizerConfig,
                             PredictiveDistribution, fit,
                             log_marginal_likelihood, mll_gradient,
                             optimize_hypers, predict, predict_batch)
from lsgpr.kernels import (CovKernelParams, LocalKernelSpec, cov_eval,
                           cov_vector, gram, local_weight,
                           local_weight_vector, localized_cov,
                           localized_gram, profile_eval, unit_ball_volume)
from lsgpr.linalg import (CholeskyFactor, cholesky, log_det, sample_gaussian,
                          solve_lower, solve_psd)
from lsgpr.local_gp import (BandwidthPolicy, LocalModel, adapt_bandwidth,
                            hetero_predict, local_mll, local_predict,
                            local_predict_batch, select_neighbors)
from lsgpr.selection import (BenchReport, CVConfig, CVResult, GridCell,
                             WilcoxonResult, compute_report, grid_search_h,
                             kfold_cv, mse, refine_kernel_params,
                             wilcoxon_one_sided)

__version__ = "0.1.0"

__all__ = [
    "backend",
    "BandwidthPolicy", "BenchReport", "CholeskyFactor", "ConfigError",
    "CovKernelParams", "CVConfig", "CVResult", "DataError", "DataFileError",
    "Dataset", "GPModel", "GridCell", "HyperOptResult", "KnnConfig",
    "LocalKernelSpec", "LocalModel", "LsgprError", "NadarayaWatsonResult",
    "NonNumericCellError", "NumericalError", "OptimizerConfig",
    "PredictiveDistribution", "ScalingInfo", "SingularMatrixError",
    "SplitSpec", "TargetColumnError", "WilcoxonResult",
    "adapt_bandwidth", "cholesky", "compute_report", "cov_eval", "cov_vector",
    "doppler_function", "fit", "gen_doppler", "gram", "grid_search_h",
    "hetero_predict", "kfold_cv", "knn_predict", "load_csv",
    "load_matrix_csv", "local_krr", "local_mll", "local_predict",
    "local_predict_batch", "local_weight", "local_weight_vector",
    "localized_cov", "localized_gram", "log_det", "log_marginal_likelihood",
    "mll_gradient", "mse", "nadaraya_watson", "optimize_hypers", "predict",
    "predict_batch", "profile_eval", "refine_kernel_params",
    "sample_gaussian", "save_csv", "scale_minmax", "select_neighbors",
    "solve_lower", "solve_psd", "split", "standardize", "unit_ball_volume",
    "unscale", "wilcoxon_one_sided",
]
