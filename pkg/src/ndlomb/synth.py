"""Seeded synthetic data: plane-wave sums, sampling patterns, gaps, noise.

Random numbers come from numpy's PCG64. A run seed is expanded with
``SeedSequence(seed).spawn(3)`` into three independent substreams:

    0  sampling locations (uniform / jittered patterns)
    1  missing-value mask
    2  Gaussian noise

Uniform deviates are built from the raw 64-bit outputs as
``((raw >> 11) + 0.5) / 2**53`` (never 0 or 1); Gaussian deviates are the
standard-normal inverse CDF of those uniforms. Both steps are explicit so
the streams can be reproduced outside numpy from the PCG64 definition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import ndtri

from .errors import BadInput, BadRange, DimensionMismatch
from .types import TWO_PI, FrequencyGrid, SampleSet, axis_count, build_regular_grid

STREAM_LOCATIONS, STREAM_MASK, STREAM_NOISE = range(3)
PATTERNS = ("regular", "uniform", "jittered")


def streams(seed: int) -> list[np.random.PCG64]:
    children = np.random.SeedSequence(int(seed)).spawn(3)
    return [np.random.PCG64(child) for child in children]


def uniforms(bitgen: np.random.PCG64, n: int) -> np.ndarray:
    raw = bitgen.random_raw(n)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) / 9007199254740992.0


def gaussians(bitgen: np.random.PCG64, n: int) -> np.ndarray:
    return ndtri(uniforms(bitgen, n))


@dataclass(frozen=True)
class SignalSpec:
    """Sum of cosines A_k cos(2 pi f_k . t + phi_k); f_k in ordinary units."""

    components: tuple = ()

    def __post_init__(self):
        comps = []
        dims = None
        for freq, amp, phase in self.components:
            freq = tuple(float(v) for v in np.atleast_1d(freq))
            amp, phase = float(amp), float(phase)
            if dims is None:
                dims = len(freq)
            elif len(freq) != dims:
                raise DimensionMismatch("all components need the same dimension")
            if amp < 0 or not all(map(math.isfinite, (*freq, amp, phase))):
                raise BadInput("amplitudes must be >= 0 and all entries finite")
            comps.append((freq, amp, phase))
        object.__setattr__(self, "components", tuple(comps))

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        out = np.zeros(coords.shape[0])
        for freq, amp, phase in self.components:
            if len(freq) != coords.shape[1]:
                raise DimensionMismatch(
                    f"{len(freq)}-D component on {coords.shape[1]}-D coordinates")
            theta = freq[0] * coords[:, 0]
            for d in range(1, len(freq)):
                theta = theta + freq[d] * coords[:, d]
            out = out + amp * np.cos(TWO_PI * theta + phase)
        return out


@dataclass(frozen=True)
class SamplingSpec:
    """Where samples are taken and which of them go missing.

    ``pattern`` is ``regular`` (inclusive lattice from ranges/steps),
    ``uniform`` (``n`` points uniform in the box) or ``jittered`` (lattice
    points displaced by up to +-jitter/2 of a step per axis). ``gaps``
    lists ``(axis, lo, hi)`` intervals whose samples are removed;
    ``missing_fraction`` then deletes that share of the rest at random.
    """

    pattern: str = "regular"
    ranges: tuple = ()
    steps: tuple = ()
    n: int = 0
    jitter: float = 0.0
    gaps: tuple = ()
    missing_fraction: float = 0.0

    def __post_init__(self):
        if self.pattern not in PATTERNS:
            raise BadInput(f"unknown pattern {self.pattern!r}; choose from {PATTERNS}")
        ranges = tuple((float(lo), float(hi)) for lo, hi in self.ranges)
        object.__setattr__(self, "ranges", ranges)
        object.__setattr__(self, "steps", tuple(float(s) for s in self.steps))
        object.__setattr__(self, "gaps", tuple((int(a), float(lo), float(hi))
                                               for a, lo, hi in self.gaps))
        if not ranges:
            raise BadRange("at least one axis range is required")
        for lo, hi in ranges:
            if not lo < hi:
                raise BadRange(f"empty range ({lo}, {hi})")
        if self.pattern in ("regular", "jittered"):
            if len(self.steps) != len(ranges) or any(s <= 0 for s in self.steps):
                raise BadRange("one positive step per axis is required")
        if self.pattern == "uniform" and self.n < 1:
            raise BadInput("uniform pattern needs n >= 1")
        if not 0 <= self.jitter <= 1:
            raise BadInput("jitter must lie in [0, 1]")
        if not 0 <= self.missing_fraction < 1:
            raise BadInput("missing_fraction must lie in [0, 1)")
        for axis, lo, hi in self.gaps:
            if not 0 <= axis < len(ranges) or not lo < hi:
                raise BadRange(f"bad gap ({axis}, {lo}, {hi})")

    @property
    def dims(self) -> int:
        return len(self.ranges)

    def locations(self, bitgen: np.random.PCG64) -> np.ndarray:
        if self.pattern == "uniform":
            lo = np.array([r[0] for r in self.ranges])
            hi = np.array([r[1] for r in self.ranges])
            u = uniforms(bitgen, self.n * self.dims).reshape(self.n, self.dims)
            return lo + (hi - lo) * u
        axes = [lo + step * np.arange(axis_count(lo, hi, step))
                for (lo, hi), step in zip(self.ranges, self.steps)]
        mesh = np.meshgrid(*axes, indexing="ij")
        coords = np.stack([m.ravel() for m in mesh], axis=1)
        if self.pattern == "jittered" and self.jitter > 0:
            u = uniforms(bitgen, coords.size).reshape(coords.shape)
            coords = coords + (u - 0.5) * self.jitter * np.asarray(self.steps)
        return coords

    def keep_mask(self, coords: np.ndarray, bitgen: np.random.PCG64) -> np.ndarray:
        keep = np.ones(coords.shape[0], dtype=bool)
        for axis, lo, hi in self.gaps:
            keep &= ~((coords[:, axis] >= lo) & (coords[:, axis] <= hi))
        return keep & random_keep(coords.shape[0], self.missing_fraction, bitgen)


def random_keep(n: int, fraction: float, bitgen: np.random.PCG64) -> np.ndarray:
    """Boolean mask dropping round(fraction * n) points chosen at random."""
    keep = np.ones(n, dtype=bool)
    n_drop = int(round(fraction * n))
    if n_drop:
        keys = uniforms(bitgen, n)
        keep[np.argsort(keys, kind="stable")[:n_drop]] = False
    return keep


def generate(signal: SignalSpec, sampling: SamplingSpec, noise_sigma: float = 0.0,
             seed: int = 0, label: Optional[str] = None) -> SampleSet:
    """Evaluate ``signal`` on ``sampling``, add noise, then drop missing points.

    Noise is drawn for every location before deletion, so the mask and the
    noise realisation do not influence each other.
    """
    if not noise_sigma >= 0:
        raise BadInput(f"noise sigma must be >= 0, got {noise_sigma}")
    loc, mask, noise = streams(seed)
    coords = sampling.locations(loc)
    values = signal.evaluate(coords)
    if noise_sigma > 0:
        values = values + noise_sigma * gaussians(noise, coords.shape[0])
    keep = sampling.keep_mask(coords, mask)
    return SampleSet.from_arrays(coords[keep], values[keep], label)


def traveling_wave(omega_t: float, k_z: float, m_phi: int, ranges: Sequence, steps: Sequence,
                   seed: int = 0, *, noise_sigma: float = 0.0, missing_fraction: float = 0.0,
                   two_sensor: bool = False, omega_out: float = TWO_PI * 0.013,
                   label: Optional[str] = None) -> SampleSet:
    """Real part of exp(i(omega_t t + k_z z + m phi)) on a (t, z, phi) lattice.

    With ``two_sensor`` the azimuth is not an independent axis: two probes
    on opposite sides of a wall rotating at ``omega_out`` see
    phi = omega_out t and phi = omega_out t + pi. ``ranges``/``steps`` then
    describe only (t, z); any third entry is ignored.
    """
    if int(m_phi) != m_phi:
        raise BadInput(f"azimuthal mode number must be an integer, got {m_phi}")
    if two_sensor:
        lattice = build_regular_grid(list(ranges)[:2], list(steps)[:2]).freqs
        phi1 = np.mod(omega_out * lattice[:, 0], TWO_PI)
        phi2 = np.mod(phi1 + math.pi, TWO_PI)
        coords = np.vstack([np.column_stack([lattice, phi1]),
                            np.column_stack([lattice, phi2])])
    else:
        if len(ranges) != 3:
            raise DimensionMismatch("traveling wave needs (t, z, phi) ranges")
        coords = build_regular_grid(ranges, steps).freqs
    _, mask, noise = streams(seed)
    theta = omega_t * coords[:, 0] + k_z * coords[:, 1] + m_phi * coords[:, 2]
    values = np.cos(theta)
    if noise_sigma > 0:
        values = values + noise_sigma * gaussians(noise, coords.shape[0])
    keep = random_keep(coords.shape[0], missing_fraction, mask)
    return SampleSet.from_arrays(coords[keep], values[keep], label)


# --- presets -------------------------------------------------------------

SIMPLE_WAVE_FREQ = (3.25, 6.32)
SIMPLE_WAVE_PHASE = math.pi / 4
TRAVELING_WAVE_MODE = (0.009, 20.0, 1)


@dataclass(frozen=True)
class Preset:
    name: str
    samples: SampleSet
    grid: FrequencyGrid
    description: str
    config: dict = field(default_factory=dict)


def simple_wave_specs(missing_fraction: float = 0.6):
    signal = SignalSpec(((SIMPLE_WAVE_FREQ, 1.0, SIMPLE_WAVE_PHASE),))
    sampling = SamplingSpec("regular", ((-1.0, 1.0), (-1.0, 1.0)), (0.025, 0.025),
                            missing_fraction=missing_fraction)
    return signal, sampling


def simple_wave(seed: int = 1, step: float = 0.025) -> Preset:
    signal, sampling = simple_wave_specs()
    samples = generate(signal, sampling, 0.0, seed, "simple-wave")
    grid = build_regular_grid([(-10.0, 10.0)] * 2, [step, step])
    return Preset("simple-wave", samples, grid,
                  "cos(2 pi (3.25 x + 6.32 y) + pi/4) on [-1,1]^2, step 0.025, 60% missing",
                  {"seed": seed, "sigma": 0.0})


def noise_only(seed: int = 1, n: int = 200, sigma: float = 1.0) -> Preset:
    sampling = SamplingSpec("uniform", ((0.0, 1.0),), n=n)
    samples = generate(SignalSpec(), sampling, sigma, seed, "noise-only")
    # 500 points from the resolution limit 1/T upward; below it the fitted
    # sinusoid is nearly constant over the window and the A^2-based psd is
    # no longer the explained variance
    grid = build_regular_grid([(1.0, 100.8)], [0.2])
    return Preset("noise-only", samples, grid,
                  f"white Gaussian noise, sigma={sigma}, N={n} uniform times on [0, 1]",
                  {"seed": seed, "sigma": sigma, "window": 1.0})


def traveling_wave_grid() -> FrequencyGrid:
    """Angular (omega_t, k, m) grid around the synthetic traveling-wave mode."""
    f = 0.001 * np.arange(21)
    k = -40.0 + 5.0 * np.arange(17)
    m = np.arange(5, dtype=float)
    return FrequencyGrid.from_axes([TWO_PI * f, k, m], "angular",
                                   spacing=[TWO_PI * 0.001, 5.0, 1.0])


def traveling_wave_preset(seed: int = 1) -> Preset:
    f, k, m = TRAVELING_WAVE_MODE
    samples = traveling_wave(TWO_PI * f, k, m, [(0.0, 1990.0), (0.0, 0.95)], [10.0, 0.05],
                             seed, noise_sigma=0.5, missing_fraction=0.2, two_sensor=True,
                             label="traveling-wave")
    return Preset("traveling-wave", samples, traveling_wave_grid(),
                  "Re exp(i(2 pi 0.009 t + 20 z + phi)), two probes at phi and phi + pi, "
                  "outer rotation 0.013 Hz, sigma=0.5, 20% missing",
                  {"seed": seed, "sigma": 0.5})


PRESETS = {
    "simple-wave": simple_wave,
    "traveling-wave": traveling_wave_preset,
    "noise-only": noise_only,
}
