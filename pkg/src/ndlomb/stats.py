"""Standardised PSD, exceedance probability, FAP, SNR and frequency spread.

The functions accept scalars or numpy arrays; scalar input gives a float.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BadInput, BadN, ZeroResidual, ZeroVariance
from .types import SampleSet


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def sample_variance(values) -> float:
    """Biased variance (1/N) * sum (y - mean)^2; raises on constant data."""
    values = np.asarray(values, dtype=np.float64)
    if values.size < 2:
        raise BadN(f"need at least 2 values, got {values.size}")
    if np.ptp(values) == 0.0:
        raise ZeroVariance("all values are equal")
    return float(np.mean((values - values.mean()) ** 2))


def psd_from_power(power, n: int, var0: float):
    """N/(N-1) * power / (2 var0), clipped to [0, 1]. ``power`` is A^2."""
    psd = (n / (n - 1.0)) * np.asarray(power, dtype=np.float64) / (2.0 * var0)
    return _out(np.clip(psd, 0.0, 1.0))


def standardized_psd(a, b, values: Sequence[float]):
    """Standardised PSD of coefficients (a, b) fitted to ``values``.

    A value of 1 means the sinusoid explains all variance in the data;
    pure Gaussian noise sits around 2/(N-1).
    """
    values = np.asarray(values, dtype=np.float64)
    var0 = sample_variance(values)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return psd_from_power(a * a + b * b, values.size, var0)


def prob_exceed(psd, n: int):
    """(1 - psd)^((N-3)/2): chance that noise alone yields no higher peak."""
    if n < 4:
        raise BadN(f"exceedance probability needs N >= 4, got {n}")
    psd = np.clip(np.asarray(psd, dtype=np.float64), 0.0, 1.0)
    return _out(np.power(1.0 - psd, 0.5 * (n - 3)))


def independent_frequencies(n: int) -> float:
    """Empirical polynomial for the effective number of independent trials."""
    m = -6.362 + 1.193 * n + 0.00098 * n * n
    if m <= 0:
        raise BadN(f"independent-frequency estimate is not positive for N={n}")
    return m


def false_alarm_probability(prob, m: float):
    """1 - (1 - prob)^M evaluated through log1p/expm1.

    Reduces to M*prob for small prob without a switch-over threshold.
    """
    if not m > 0:
        raise BadInput(f"M must be positive, got {m}")
    prob = np.clip(np.asarray(prob, dtype=np.float64), 0.0, 1.0)
    if m == 1:
        # a single trial; skip the log round trip so FAP equals prob exactly
        return _out(prob)
    with np.errstate(divide="ignore"):
        fap = -np.expm1(m * np.log1p(-prob))
    return _out(np.clip(fap, 0.0, 1.0))


@dataclass(frozen=True)
class SnrReport:
    sigma_sample: float
    snr: float
    sigma_f: float


def snr_and_sigma_f(samples: SampleSet, model_values, significant_amplitudes,
                    delta_f: float, sigma_n: Optional[Sequence[float]] = None) -> SnrReport:
    """Signal-to-noise ratio and the resulting peak-frequency uncertainty.

    By default the SNR is the root of the summed squared significant
    amplitudes over the RMS residual. If per-sample uncertainties
    ``sigma_n`` are given, the residual-over-uncertainty RMS is used
    instead. ``sigma_f = delta_f * sqrt(2 / (N * snr^2))``.
    """
    model_values = np.asarray(model_values, dtype=np.float64)
    if model_values.shape != samples.values.shape:
        raise BadInput("model_values must have one entry per sample")
    if not delta_f > 0:
        raise BadInput(f"delta_f must be positive, got {delta_f}")
    n = samples.n
    resid = samples.values - model_values
    sigma_sample = math.sqrt(float(np.mean(resid * resid)))
    if sigma_n is not None:
        sigma_n = np.asarray(sigma_n, dtype=np.float64)
        if sigma_n.shape != resid.shape or np.any(sigma_n <= 0):
            raise BadInput("sigma_n must be positive, one per sample")
        snr = math.sqrt(float(np.mean((resid / sigma_n) ** 2)))
    elif sigma_sample == 0.0:
        warnings.warn("residuals are identically zero", ZeroResidual, stacklevel=2)
        return SnrReport(0.0, math.inf, 0.0)
    else:
        amps = np.asarray(significant_amplitudes, dtype=np.float64)
        snr = math.sqrt(float(np.sum(amps * amps))) / sigma_sample
    sigma_f = delta_f * math.sqrt(2.0 / (n * snr * snr)) if snr > 0 else math.inf
    return SnrReport(sigma_sample, snr, sigma_f)
