"""Shared data model: samples, frequency grids, spectra and noise settings.

All containers are frozen and hold read-only numpy arrays, so they can be
handed to worker threads without copying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.special import ndtri

from .errors import BadInput, BadRange, DimensionMismatch, EmptyAfterFilter

TWO_PI = 2.0 * math.pi

# degeneracy bit flags stored per spectrum point
DEGENERATE_COS = 1
DEGENERATE_SIN = 2


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SampleSet:
    """N samples, each an m-dimensional coordinate with one real value.

    Build instances with :func:`validate_samples` or :meth:`from_arrays`;
    both drop rows whose value is not finite (those encode missing data).
    """

    coords: np.ndarray
    values: np.ndarray
    label: Optional[str] = None

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if coords.ndim == 1:
            coords = coords[:, None]
        if coords.ndim != 2 or values.ndim != 1 or coords.shape[0] != values.shape[0]:
            raise DimensionMismatch(
                f"coords {coords.shape} and values {values.shape} do not line up"
            )
        if coords.shape[0] == 0:
            raise EmptyAfterFilter("sample set is empty")
        if coords.shape[1] == 0:
            raise DimensionMismatch("coordinates need at least one component")
        if not np.all(np.isfinite(coords)):
            raise BadInput("non-finite coordinate in sample set")
        if not np.all(np.isfinite(values)):
            raise BadInput("non-finite value stored in sample set")
        object.__setattr__(self, "coords", _frozen(coords))
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def from_arrays(cls, coords, values, label: Optional[str] = None) -> "SampleSet":
        """Drop non-finite values, reject non-finite coordinates."""
        coords = np.asarray(coords, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64).ravel()
        if coords.ndim == 1:
            coords = coords[:, None]
        if coords.shape[0] != values.shape[0]:
            raise DimensionMismatch(
                f"{coords.shape[0]} coordinate rows but {values.shape[0]} values"
            )
        if not np.all(np.isfinite(coords)):
            raise BadInput("coordinates must be finite; only values may be missing")
        keep = np.isfinite(values)
        if not np.any(keep):
            raise EmptyAfterFilter("no finite-valued rows remain")
        return cls(coords[keep], values[keep], label)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def dims(self) -> int:
        return self.coords.shape[1]

    def __len__(self) -> int:
        return self.n

    def shifted(self, delta: Sequence[float]) -> "SampleSet":
        """Same values at coordinates translated by ``delta``."""
        delta = np.asarray(delta, dtype=np.float64)
        return SampleSet(self.coords + delta, self.values, self.label)


def validate_samples(
    raw: Iterable[tuple[Sequence[float], float]], label: Optional[str] = None
) -> SampleSet:
    """Turn ``(coordinate, value)`` pairs into a :class:`SampleSet`.

    Rows with a non-finite value are missing data and get dropped. A
    non-finite coordinate is an error, as is a ragged coordinate length.
    """
    coords = []
    values = []
    width = None
    for coord, value in raw:
        coord = tuple(float(c) for c in np.atleast_1d(coord))
        if width is None:
            width = len(coord)
        elif len(coord) != width:
            raise DimensionMismatch(
                f"coordinate of length {len(coord)} in a {width}-dimensional set"
            )
        coords.append(coord)
        values.append(float(value))
    if not coords:
        raise EmptyAfterFilter("no rows given")
    return SampleSet.from_arrays(np.array(coords), np.array(values), label)


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """F frequency vectors in one declared convention.

    ``freqs`` keeps the values exactly as supplied; ``convention`` says
    whether they are ordinary (cycles per unit) or angular (radians per
    unit). :attr:`omegas` is the only place the 2*pi factor is applied.
    ``axes`` is set for Cartesian-product grids (first axis varies slowest)
    and enables the separable evaluation path.
    """

    freqs: np.ndarray
    convention: str = "ordinary"
    spacing: Optional[np.ndarray] = None
    axes: Optional[tuple] = None

    def __post_init__(self):
        if self.convention not in ("ordinary", "angular"):
            raise BadInput(f"unknown frequency convention {self.convention!r}")
        freqs = np.asarray(self.freqs, dtype=np.float64)
        if freqs.ndim == 1:
            freqs = freqs[:, None]
        if freqs.ndim != 2 or freqs.shape[0] == 0 or freqs.shape[1] == 0:
            raise BadInput("a frequency grid needs at least one frequency vector")
        if not np.all(np.isfinite(freqs)):
            raise BadInput("frequencies must be finite")
        object.__setattr__(self, "freqs", _frozen(freqs))
        if self.spacing is not None:
            spacing = _frozen(np.atleast_1d(self.spacing))
            if spacing.shape != (freqs.shape[1],):
                raise DimensionMismatch("one spacing value per axis expected")
            object.__setattr__(self, "spacing", spacing)
        if self.axes is not None:
            axes = tuple(_frozen(np.atleast_1d(ax)) for ax in self.axes)
            if len(axes) != freqs.shape[1] or math.prod(a.size for a in axes) != freqs.shape[0]:
                raise DimensionMismatch("axes do not span the frequency list")
            object.__setattr__(self, "axes", axes)
        scale = TWO_PI if self.convention == "ordinary" else 1.0
        object.__setattr__(self, "_omegas", _frozen(freqs * scale))

    @classmethod
    def from_axes(cls, axes: Sequence[Sequence[float]], convention: str = "ordinary",
                  spacing=None) -> "FrequencyGrid":
        axes = [np.asarray(a, dtype=np.float64).ravel() for a in axes]
        mesh = np.meshgrid(*axes, indexing="ij")
        freqs = np.stack([m.ravel() for m in mesh], axis=1)
        return cls(freqs, convention, spacing, tuple(axes))

    @property
    def omegas(self) -> np.ndarray:
        """Angular frequencies, shape (F, m)."""
        return self._omegas

    @property
    def axis_omegas(self) -> Optional[tuple]:
        if self.axes is None:
            return None
        scale = TWO_PI if self.convention == "ordinary" else 1.0
        return tuple(ax * scale for ax in self.axes)

    @property
    def dims(self) -> int:
        return self.freqs.shape[1]

    @property
    def shape(self) -> tuple:
        if self.axes is None:
            return (self.freqs.shape[0],)
        return tuple(ax.size for ax in self.axes)

    def __len__(self) -> int:
        return self.freqs.shape[0]


def axis_count(lo: float, hi: float, step: float) -> int:
    return int(math.floor((hi - lo) / step + 0.5)) + 1


def build_regular_grid(ranges: Sequence[tuple[float, float]], steps: Sequence[float],
                       convention: str = "ordinary") -> FrequencyGrid:
    """Cartesian product of inclusive arithmetic sequences, one per axis."""
    if len(ranges) != len(steps) or not ranges:
        raise DimensionMismatch("need one step per range")
    axes = []
    for (lo, hi), step in zip(ranges, steps):
        lo, hi, step = float(lo), float(hi), float(step)
        if not (math.isfinite(lo) and math.isfinite(hi) and math.isfinite(step)):
            raise BadRange("range and step must be finite")
        if lo >= hi:
            raise BadRange(f"empty range ({lo}, {hi})")
        if step <= 0:
            raise BadRange(f"step must be positive, got {step}")
        axes.append(lo + step * np.arange(axis_count(lo, hi, step)))
    return FrequencyGrid.from_axes(axes, convention, spacing=np.asarray(steps, float))


@dataclass(frozen=True)
class NoiseSpec:
    """Noise level and confidence setting.

    ``quantile`` is the (1 - alpha) quantile of the absolute error of a
    Gaussian, i.e. the standard-normal inverse CDF at 1 - alpha/2, so that
    ``estimate +- quantile * scale`` is a (1 - alpha) interval.
    """

    sigma: float = 0.0
    alpha: float = 0.05
    quantile: float = field(init=False)

    def __post_init__(self):
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise BadInput(f"sigma must be finite and >= 0, got {self.sigma}")
        if not 0 < self.alpha < 1:
            raise BadInput(f"alpha must lie in (0, 1), got {self.alpha}")
        object.__setattr__(self, "quantile", float(ndtri(1.0 - self.alpha / 2.0)))


@dataclass(frozen=True)
class ErrorBudget:
    eps_T: float
    eps_FS: float
    eps_LS: float

    def __post_init__(self):
        if not 0.0 <= self.eps_T <= 0.2:
            raise BadInput(f"eps_T must lie in [0, 0.2], got {self.eps_T}")
        if self.eps_FS < 0 or self.eps_LS < 0:
            raise BadInput("error bounds must be non-negative")


@dataclass(frozen=True)
class SpectrumPoint:
    freq: tuple
    tau_star: float
    a: float
    b: float
    amplitude: float
    phase: float
    psd: float
    prob_exceed: float
    fap: float
    degenerate: int = 0

    @property
    def signal_phase(self) -> float:
        """Phase lag psi of the fitted model A*cos(w.t - psi), in (-pi, pi]."""
        return wrap_phase(self.phase + self.tau_star)


def wrap_phase(x):
    """Map angles into (-pi, pi]."""
    y = np.mod(np.asarray(x, dtype=np.float64) + math.pi, TWO_PI) - math.pi
    y = np.where(y == -math.pi, math.pi, y)
    return float(y) if np.ndim(y) == 0 else y


SPECTRUM_COLUMNS = ("tau_star", "a", "b", "amplitude", "phase", "psd", "prob", "fap")


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Columnar per-frequency results in grid order.

    ``prob`` and ``fap`` hold NaN where they were not evaluated (too few
    samples); ``degenerate`` carries the DEGENERATE_* bit flags.
    """

    grid: FrequencyGrid
    tau_star: np.ndarray
    a: np.ndarray
    b: np.ndarray
    amplitude: np.ndarray
    phase: np.ndarray
    psd: np.ndarray
    prob: np.ndarray
    fap: np.ndarray
    degenerate: np.ndarray
    n_samples: int
    m_indep: float = math.nan
    method: str = "lsm"
    noise: Optional[NoiseSpec] = None

    def __post_init__(self):
        f = len(self.grid)
        for name in SPECTRUM_COLUMNS:
            arr = _frozen(getattr(self, name))
            if arr.shape != (f,):
                raise DimensionMismatch(f"column {name} has shape {arr.shape}, expected ({f},)")
            object.__setattr__(self, name, arr)
        deg = np.ascontiguousarray(self.degenerate, dtype=np.int8)
        deg.setflags(write=False)
        object.__setattr__(self, "degenerate", deg)

    def __len__(self) -> int:
        return len(self.grid)

    def __getitem__(self, i: int) -> SpectrumPoint:
        return SpectrumPoint(
            tuple(float(v) for v in self.grid.freqs[i]),
            float(self.tau_star[i]), float(self.a[i]), float(self.b[i]),
            float(self.amplitude[i]), float(self.phase[i]), float(self.psd[i]),
            float(self.prob[i]), float(self.fap[i]), int(self.degenerate[i]),
        )

    @property
    def freqs(self) -> np.ndarray:
        return self.grid.freqs

    @property
    def signal_phase(self) -> np.ndarray:
        return wrap_phase(self.phase + self.tau_star)

    def _rank_key(self) -> np.ndarray:
        # psd is clipped at 1, so near a perfect fit many points tie; the
        # amplitude orders them the same way as the unclipped psd
        return np.where(np.isnan(self.amplitude), -np.inf, self.amplitude)

    def argmax(self) -> int:
        """Index of the strongest point; ties resolve to the first in grid order."""
        return int(np.argmax(self._rank_key()))

    def peak(self) -> SpectrumPoint:
        return self[self.argmax()]

    def top_peaks(self, k: int = 5) -> list[SpectrumPoint]:
        order = np.argsort(-self._rank_key(), kind="stable")
        return [self[int(i)] for i in order[:k]]
