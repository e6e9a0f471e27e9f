"""Reference estimators that LSM is compared against.

* quadrature demodulation: projection on unshifted cos/sin, scaled by 2/N
* the analytic OMD error budget (truncation + random part) next to the
  LSM bound
* a numerical scan of the LSM worst-case error factor
* the zero-padded multidimensional DFT PSD on a regular grid
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import AllMissing, BadInput, BadN, DimensionMismatch, ZeroVariance
from .lsm import phase_argument
from .stats import false_alarm_probability, independent_frequencies, prob_exceed
from .types import TWO_PI, ErrorBudget, FrequencyGrid, NoiseSpec, SampleSet, Spectrum

EPS_T_CAP = 0.2


def quadrature_demod(samples: SampleSet, omega) -> tuple[float, float]:
    """(2/N) sum y cos(w.t) and (2/N) sum y sin(w.t); no shift, no normalisation."""
    theta = phase_argument(samples, omega)
    y = samples.values
    scale = 2.0 / samples.n
    return scale * float(np.sum(y * np.cos(theta))), scale * float(np.sum(y * np.sin(theta)))


def truncation_bound(T: float, omega: float) -> float:
    """Relative OMD truncation bound: distance of T to the nearest multiple of
    pi/omega, divided by T, capped at 0.2."""
    half = math.pi / omega
    i = max(0, round(T / half))
    dphi = abs(T - i * half)
    return min(dphi / T, EPS_T_CAP)


def omd_error_budget(T: float, omega: float, n: int, noise: NoiseSpec) -> ErrorBudget:
    """Analytic error bounds of OMD (truncation, random) and of LSM, 1-D only."""
    if not (T > 0 and math.isfinite(T)):
        raise BadInput(f"observation length must be positive, got {T}")
    if not (omega > 0 and math.isfinite(omega)):
        raise BadInput(f"omega must be positive, got {omega}")
    if n < 1:
        raise BadN(f"need N >= 1, got {n}")
    root_n = math.sqrt(n)
    return ErrorBudget(
        eps_T=truncation_bound(T, omega),
        eps_FS=noise.quantile * 2.0 * noise.sigma / root_n,
        eps_LS=(4.0 / math.pi) * noise.quantile * noise.sigma / root_n,
    )


def emax_factor(beta):
    """Ratio of int_0^beta cos over int_0^beta cos^2, i.e. 4 sin(b)/(2b + sin 2b)."""
    beta = np.asarray(beta, dtype=np.float64)
    val = 4.0 * np.sin(beta) / (2.0 * beta + np.sin(2.0 * beta))
    return float(val) if val.ndim == 0 else val


def emax_scan(resolution: int = 1_000_000) -> tuple[float, float]:
    """Maximise the error factor over beta in (0, 2*pi].

    A uniform scan locates the maximum, a bounded Brent step polishes it
    inside the bracketing cells. Returns (beta_star, e_max).
    """
    if resolution < 1000:
        raise BadInput(f"resolution must be >= 1000, got {resolution}")
    beta = TWO_PI * np.arange(1, resolution + 1) / resolution
    vals = emax_factor(beta)
    k = int(np.argmax(vals))
    lo = beta[k - 1] if k > 0 else beta[0] * 0.5
    hi = beta[min(k + 1, resolution - 1)]
    res = minimize_scalar(lambda x: -emax_factor(x), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    if -res.fun >= vals[k]:
        return float(res.x), float(-res.fun)
    return float(beta[k]), float(vals[k])


@dataclass(frozen=True, eq=False)
class GriddedField:
    """Values on a regular m-dimensional lattice; NaN marks a missing cell.

    Cell ``idx`` sits at ``origin + idx * spacing`` (per axis).
    """

    values: np.ndarray
    origin: np.ndarray
    spacing: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        origin = np.atleast_1d(np.asarray(self.origin, dtype=np.float64))
        spacing = np.atleast_1d(np.asarray(self.spacing, dtype=np.float64))
        if origin.shape != (values.ndim,) or spacing.shape != (values.ndim,):
            raise DimensionMismatch("origin and spacing need one entry per axis")
        if np.any(spacing <= 0) or not np.all(np.isfinite(spacing)):
            raise BadInput("grid spacing must be positive and finite")
        values[~np.isfinite(values)] = np.nan
        for name, arr in (("values", values), ("origin", origin), ("spacing", spacing)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dims(self) -> int:
        return self.values.ndim

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @property
    def n_zero(self) -> int:
        return int(np.count_nonzero(np.isnan(self.values)))

    def axis_coords(self, d: int) -> np.ndarray:
        return self.origin[d] + self.spacing[d] * np.arange(self.shape[d])

    def to_samples(self, label: Optional[str] = None) -> SampleSet:
        mesh = np.meshgrid(*(self.axis_coords(d) for d in range(self.dims)), indexing="ij")
        coords = np.stack([m.ravel() for m in mesh], axis=1)
        return SampleSet.from_arrays(coords, self.values.ravel(), label)

    @classmethod
    def from_samples(cls, samples: SampleSet, origin: Optional[Sequence[float]] = None,
                     spacing: Optional[Sequence[float]] = None,
                     shape: Optional[Sequence[int]] = None) -> "GriddedField":
        """Snap samples onto a lattice; unspecified geometry is inferred.

        The default spacing per axis is the smallest gap between distinct
        coordinates, the default origin the minimum coordinate. Cells that
        receive no sample are missing.
        """
        coords = samples.coords
        m = samples.dims
        if origin is None:
            origin = coords.min(axis=0)
        origin = np.asarray(origin, dtype=np.float64)
        if spacing is None:
            spacing = []
            for d in range(m):
                gaps = np.diff(np.unique(coords[:, d]))
                gaps = gaps[gaps > 1e-12 * max(1.0, np.abs(coords[:, d]).max())]
                spacing.append(gaps.min() if gaps.size else 1.0)
        spacing = np.asarray(spacing, dtype=np.float64)
        idx = np.rint((coords - origin) / spacing).astype(np.int64)
        if np.any(idx < 0):
            raise BadInput("samples lie below the grid origin")
        if shape is None:
            shape = idx.max(axis=0) + 1
        shape = tuple(int(s) for s in shape)
        if np.any(idx >= np.asarray(shape)):
            raise BadInput("samples lie outside the grid extent")
        values = np.full(shape, np.nan)
        values[tuple(idx.T)] = samples.values
        return cls(values, origin, spacing)


def dft_frequencies(n: int, spacing: float) -> np.ndarray:
    """Ordinary DFT frequencies of an n-point axis, ascending."""
    return np.fft.fftshift(np.fft.fftfreq(n, spacing))


def zero_padded_dft_psd(field: GriddedField, m_indep: Optional[float] = None) -> Spectrum:
    """Standardised PSD from a direct DFT of the zero-filled field.

    The transform F(f) = sum z(x) exp(i 2 pi f.x) is divided by the total
    cell count N; the factor 2 / (1 - N_zero/N) then restores the amplitude
    lost to the zero-filled cells. a and b are reported in the same scaling
    (a = 2 Re F / (1 - N_zero/N), b likewise with Im F).
    """
    finite = np.isfinite(field.values)
    n_finite = int(np.count_nonzero(finite))
    if n_finite == 0:
        raise AllMissing("field contains no finite value")
    n_total = field.values.size
    z = np.where(finite, field.values, 0.0)
    axes = []
    transform = z.astype(np.complex128)
    for d in range(field.dims):
        f_axis = dft_frequencies(field.shape[d], field.spacing[d])
        axes.append(f_axis)
        kernel = np.exp(1j * TWO_PI * np.multiply.outer(f_axis, field.axis_coords(d)))
        # contract axis d, put the new frequency axis back in place d
        transform = np.moveaxis(np.tensordot(kernel, transform, axes=([1], [d])), 0, d)
    fill = 1.0 - field.n_zero / n_total
    coef = 2.0 * transform.ravel() / n_total / fill
    a = coef.real.copy()
    b = coef.imag.copy()
    amplitude = np.abs(coef)
    phase = np.arctan2(b, a)
    phase[phase == -math.pi] = math.pi

    vals = field.values[finite]
    if n_finite < 2 or n_total < 2:
        raise BadN("need at least two finite values for a standardised PSD")
    if np.ptp(vals) == 0.0:
        raise ZeroVariance("all finite values are equal")
    var0 = float(np.mean((vals - vals.mean()) ** 2))
    psd = np.clip((n_total / (n_total - 1.0)) * amplitude**2 / (2.0 * var0), 0.0, 1.0)

    nan = np.full(psd.shape, math.nan)
    prob, fap, m = nan, nan, math.nan
    if n_finite >= 4:
        try:
            m = float(m_indep) if m_indep is not None else independent_frequencies(n_finite)
            prob = prob_exceed(psd, n_finite)
            fap = false_alarm_probability(prob, m)
        except BadN:
            m = math.nan
    grid = FrequencyGrid.from_axes(
        axes, "ordinary", spacing=1.0 / (np.asarray(field.shape) * field.spacing))
    return Spectrum(grid, np.zeros(psd.shape), a, b, amplitude, phase, psd, prob, fap,
                    np.zeros(psd.shape, np.int8), n_finite, m, "dft")
