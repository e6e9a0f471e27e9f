"""Multivariate Lomb-Scargle estimator.

Per frequency vector w the model is

    a * cos(w.t - tau) + b * sin(w.t - tau)

with the scalar shift ``tau`` chosen so that the shifted cosine and sine
are orthogonal on the actual sample set. With that choice the two
coefficients decouple and each is a single ratio of sums, which equals the
least-squares fit of a sinusoid at w.
"""

from __future__ import annotations

import math
import warnings
from typing import Optional

import numpy as np

from . import _backend
from .errors import (BadN, DegenerateDenominator, DimensionMismatch, SingularSystem,
                     ZeroVariance)
from .errors import FapUnavailable
from .stats import (false_alarm_probability, independent_frequencies, prob_exceed,
                    psd_from_power, sample_variance)
from .types import (DEGENERATE_COS, DEGENERATE_SIN, FrequencyGrid, NoiseSpec, SampleSet,
                    Spectrum)

# relative floor on sum cos^2 / sum sin^2, in units of N
DENOM_FLOOR = 1e-12


def _omega(samples: SampleSet, omega) -> np.ndarray:
    omega = np.atleast_1d(np.asarray(omega, dtype=np.float64))
    if omega.shape != (samples.dims,):
        raise DimensionMismatch(
            f"frequency has {omega.size} components, samples have {samples.dims}"
        )
    return omega


def phase_argument(samples: SampleSet, omega) -> np.ndarray:
    """w.t for every sample, accumulated axis by axis."""
    omega = _omega(samples, omega)
    theta = omega[0] * samples.coords[:, 0]
    for d in range(1, samples.dims):
        theta = theta + omega[d] * samples.coords[:, d]
    return theta


def _canonical(tau):
    # atan2 can return -pi exactly; keep tau in (-pi/2, pi/2]
    return np.where(tau <= -0.5 * math.pi, tau + math.pi, tau)


def _tau_from_sums(scc, sss, scs):
    # tan(2 tau) = sum sin(2 w.t) / sum cos(2 w.t), with the sums written
    # through cos^2 - sin^2 and 2 sin cos
    return _canonical(0.5 * np.arctan2(2.0 * scs, scc - sss))


def tau_star(samples: SampleSet, omega) -> float:
    """Shift restoring sine/cosine orthogonality on the sample set.

    Returned in (-pi/2, pi/2]; any shift by a multiple of pi/2 also
    satisfies the orthogonality condition.
    """
    theta = phase_argument(samples, omega)
    tau = 0.5 * math.atan2(np.sum(np.sin(2.0 * theta)), np.sum(np.cos(2.0 * theta)))
    return float(_canonical(tau))


def coeffs(samples: SampleSet, omega, tau: float) -> tuple[float, float]:
    """Coefficients (a, b) of the tau-shifted cosine and sine at ``omega``.

    Raises DegenerateDenominator when either basis function is (numerically)
    zero on every sample, e.g. the sine term at w = 0.
    """
    shifted = phase_argument(samples, omega) - tau
    c = np.cos(shifted)
    s = np.sin(shifted)
    cc = float(np.sum(c * c))
    ss = float(np.sum(s * s))
    floor = DENOM_FLOOR * samples.n
    if cc < floor or ss < floor:
        which = "cosine" if cc < floor else "sine"
        raise DegenerateDenominator(f"{which} term is unconstrained at omega={list(omega)}")
    y = samples.values
    return float(np.sum(y * c)) / cc, float(np.sum(y * s)) / ss


def amplitude_phase(a: float, b: float) -> tuple[float, float]:
    phi = math.atan2(b, a)
    if phi == -math.pi:
        phi = math.pi
    return math.hypot(a, b), phi


def confidence_intervals(noise: NoiseSpec, n: int, amplitude: float) -> tuple[float, float, float]:
    """Half-widths (delta_ab, delta_A, delta_phi) of the LSM confidence intervals.

    delta_phi is +inf for a zero amplitude (phase undefined), except in the
    noiseless case where all three widths are 0.
    """
    if n < 1:
        raise BadN(f"need N >= 1, got {n}")
    scale = (4.0 / math.pi) * noise.quantile * noise.sigma
    delta_ab = scale / math.sqrt(n)
    delta_a = scale * math.sqrt(2.0 / n)
    if delta_a == 0.0:
        delta_phi = 0.0
    elif amplitude > 0:
        delta_phi = delta_a / amplitude
    else:
        delta_phi = math.inf
    return delta_ab, delta_a, delta_phi


def lsq_fit_oracle(samples: SampleSet, omega) -> tuple[float, float]:
    """Least-squares fit of a*cos(w.t) + b*sin(w.t) via the normal equations.

    Independent of the tau machinery: the result rotated by tau (see
    :func:`rotate_to_shifted`) must reproduce :func:`coeffs`.
    """
    theta = phase_argument(samples, omega)
    c = np.cos(theta)
    s = np.sin(theta)
    y = samples.values
    gram = np.array([[np.dot(c, c), np.dot(c, s)], [np.dot(c, s), np.dot(s, s)]])
    rhs = np.array([np.dot(c, y), np.dot(s, y)])
    det = gram[0, 0] * gram[1, 1] - gram[0, 1] ** 2
    if det <= 1e-13 * samples.n**2:
        raise SingularSystem(f"sampling cannot separate cos and sin at omega={list(omega)}")
    a, b = np.linalg.solve(gram, rhs)
    return float(a), float(b)


def rotate_to_shifted(a: float, b: float, tau: float) -> tuple[float, float]:
    """Express a*cos(x) + b*sin(x) in the basis cos(x - tau), sin(x - tau)."""
    ct, st = math.cos(tau), math.sin(tau)
    return a * ct + b * st, -a * st + b * ct


def classical_coeffs(samples: SampleSet, omega) -> tuple[float, float]:
    """Coefficients in Lomb's original scaling (larger by sqrt(sum cos^2 / (N/2)))."""
    tau = tau_star(samples, omega)
    shifted = phase_argument(samples, omega) - tau
    c = np.cos(shifted)
    s = np.sin(shifted)
    half = math.sqrt(samples.n / 2.0)
    y = samples.values
    return (float(np.sum(y * c)) / (half * math.sqrt(float(np.sum(c * c)))),
            float(np.sum(y * s)) / (half * math.sqrt(float(np.sum(s * s)))))


def solve_sums(sums: np.ndarray, n: int):
    """Vectorised tau, a, b and degeneracy flags from kernel sums (F, 5)."""
    scc, sss, scs, syc, sys_ = (sums[:, k] for k in range(5))
    tau = _tau_from_sums(scc, sss, scs)
    ct = np.cos(tau)
    st = np.sin(tau)
    cross = 2.0 * ct * st * scs
    cc = ct * ct * scc + cross + st * st * sss
    ss = st * st * scc - cross + ct * ct * sss
    yc = ct * syc + st * sys_
    ys = ct * sys_ - st * syc
    floor = DENOM_FLOOR * n
    bad_c = cc < floor
    bad_s = ss < floor
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(bad_c, 0.0, yc / np.where(bad_c, 1.0, cc))
        b = np.where(bad_s, 0.0, ys / np.where(bad_s, 1.0, ss))
    flags = bad_c * DEGENERATE_COS + bad_s * DEGENERATE_SIN
    return tau, a, b, flags.astype(np.int8)


def analyze(samples: SampleSet, grid: FrequencyGrid, noise: Optional[NoiseSpec] = None,
            m_indep: Optional[float] = None, threads: int = 1,
            backend: Optional[str] = None, separable: bool = True) -> Spectrum:
    """LSM spectrum of ``samples`` on every frequency of ``grid``.

    Product grids go through the separable kernel unless ``separable`` is
    False. ``m_indep`` overrides the independent-frequency count used for
    the FAP. If the FAP cannot be formed (N < 4, or no positive default M)
    its columns are NaN and a FapUnavailable warning is emitted; constant
    data leaves psd as NaN as well.
    """
    if grid.dims != samples.dims:
        raise DimensionMismatch(f"grid is {grid.dims}-D, samples are {samples.dims}-D")
    n = samples.n
    if separable and grid.axes is not None:
        sums = _backend.trig_sums(samples.coords, samples.values,
                                  axis_omegas=grid.axis_omegas, threads=threads,
                                  backend=backend)
    else:
        sums = _backend.trig_sums(samples.coords, samples.values, omegas=grid.omegas,
                                  threads=threads, backend=backend)
    tau, a, b, flags = solve_sums(sums, n)
    amplitude = np.hypot(a, b)
    phase = np.arctan2(b, a)
    phase[phase == -math.pi] = math.pi

    nan = np.full(len(grid), math.nan)
    psd, prob, fap = nan, nan, nan
    try:
        var0 = sample_variance(samples.values)
    except (BadN, ZeroVariance) as exc:
        warnings.warn(f"psd not evaluated: {exc}", FapUnavailable, stacklevel=2)
        var0 = None
    m = math.nan
    if var0 is not None:
        psd = psd_from_power(amplitude * amplitude, n, var0)
        try:
            m = float(m_indep) if m_indep is not None else independent_frequencies(n)
            prob = prob_exceed(psd, n)
            fap = false_alarm_probability(prob, m)
        except BadN as exc:
            warnings.warn(f"FAP not evaluated: {exc}", FapUnavailable, stacklevel=2)
            m = math.nan
            prob, fap = nan, nan
    return Spectrum(grid, tau, a, b, amplitude, phase, psd, prob, fap, flags, n, m,
                    "lsm", noise)
