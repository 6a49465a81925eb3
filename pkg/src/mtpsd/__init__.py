"""Multitaper power spectral density estimation.

Slepian taper banks with non-asymptotic eigenvalue bounds, exact and
adaptive multitaper estimators, closed-form bias/variance/concentration
bounds, an approximate estimator that replaces the per-taper FFTs with a
constant number of transforms plus small corrections, and an exact
stationary complex Gaussian process sampler for Monte Carlo validation.
"""

from .bounds import (BoundReport, LocalPsdStats, SigmaStats,
                     bias_bound_general, bias_bound_smooth, bound_report,
                     covariance_bound, kappa_lower_bound, local_psd_stats,
                     sigma_stats, tail_probability, variance_bound)
from .dpss import (ProlateKernel, TaperBank, apply_prolate, build_prolate_kernel,
                   build_taper_bank, eigenvalue_lower_bound, load_bank,
                   save_bank, select_num_tapers, taper_range,
                   transition_width_bound, transition_window)
from .errors import (ConfigurationError, InapplicableBoundError, InputError,
                     NumericalError, ParameterError)
from .estimators import (AdaptiveResult, FrequencyGrid, SpectralEstimate,
                         adaptive_multitaper, mean_log_deviation,
                         multitaper_exact, periodogram, spectral_window,
                         tapered_periodogram)
from .fastmt import (FastMultitaperPlan, FftCounter, IndexPartition,
                     SincKernelExt, TransitionTapers, build_sinc_kernel,
                     compute_transition_tapers, fast_multitaper,
                     multitaper_approx, partition_indices,
                     prepare_fast_multitaper, psi_weighted_sum)
from .process import (PiecewisePsd, ProcessSampler, autocorrelation,
                      build_sampler, draw, load_psd_json, load_samples,
                      multiband_fixture, save_samples)

__version__ = "0.1.0"
