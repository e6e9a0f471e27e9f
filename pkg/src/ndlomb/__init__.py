"""Multivariate Lomb-Scargle spectral analysis for irregularly sampled data."""

from ._backend import BACKENDS, DEFAULT as BACKEND
from .baselines import (GriddedField, emax_factor, emax_scan, omd_error_budget,
                        quadrature_demod, truncation_bound, zero_padded_dft_psd)
from .errors import *  # noqa: F401,F403
from .lsm import (amplitude_phase, analyze, coeffs, confidence_intervals, lsq_fit_oracle,
                  tau_star)
from .stats import (SnrReport, false_alarm_probability, independent_frequencies, prob_exceed,
                    snr_and_sigma_f, standardized_psd)
from .synth import PRESETS, SamplingSpec, SignalSpec, generate, traveling_wave
from .types import (ErrorBudget, FrequencyGrid, NoiseSpec, SampleSet, Spectrum, SpectrumPoint,
                    build_regular_grid, validate_samples)

__version__ = "0.1.0"
