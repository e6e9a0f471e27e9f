"""Monte Carlo harness for the 1-D consistency experiment.

The setup is a single sinusoid a0 cos(w t) + b0 sin(w t) sampled at
t_n = n T / N, n = 0..N-1, i.e. N cells of width T/N covering a window of
length T. Increasing N at fixed T refines the sampling without extending
the window, which is where OMD keeps its truncation bias and LSM does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadInput, BadN
from .synth import gaussians
from .types import SampleSet

SINUS_WINDOW = 2.0 * math.pi + math.pi / 5.0


@dataclass(frozen=True)
class SinusSetup:
    window: float = SINUS_WINDOW
    omega: float = 1.0
    a0: float = 1.0
    b0: float = 0.0

    def times(self, n: int) -> np.ndarray:
        if n < 2:
            raise BadN(f"need N >= 2, got {n}")
        return np.arange(n) * (self.window / n)

    def clean(self, n: int) -> np.ndarray:
        th = self.omega * self.times(n)
        return self.a0 * np.cos(th) + self.b0 * np.sin(th)

    def samples(self, n: int) -> SampleSet:
        return SampleSet(self.times(n)[:, None], self.clean(n), "sinus")


def _lsm_operators(t: np.ndarray, omega: float):
    th = omega * t
    tau = 0.5 * math.atan2(np.sum(np.sin(2 * th)), np.sum(np.cos(2 * th)))
    c = np.cos(th - tau)
    s = np.sin(th - tau)
    return tau, c / np.dot(c, c), s / np.dot(s, s)


@dataclass(frozen=True)
class SweepRow:
    n: int
    method: str
    replicate: int
    error: float


def consistency_sweep(ns: Sequence[int], sigma: float, replicates: int, seed: int = 0,
                      setup: SinusSetup = SinusSetup()) -> list[SweepRow]:
    """Errors of the cosine coefficient for LSM and OMD, per N and replicate.

    LSM error is the deviation of a_hat from the true coefficient in the
    same tau-shifted basis; OMD error is the deviation of (2/N) sum y cos(w t)
    from a0. Each N draws its noise from its own child of
    ``SeedSequence(seed)``, so adding an N leaves the others unchanged.
    """
    if replicates < 1:
        raise BadInput("need at least one replicate")
    if sigma < 0:
        raise BadInput("sigma must be >= 0")
    ns = [int(n) for n in ns]
    children = np.random.SeedSequence(int(seed)).spawn(len(ns))
    rows = []
    for n, child in zip(ns, children):
        t = setup.times(n)
        y0 = setup.clean(n)
        tau, op_a, _ = _lsm_operators(t, setup.omega)
        a_true = setup.a0 * math.cos(tau) + setup.b0 * math.sin(tau)
        op_omd = (2.0 / n) * np.cos(setup.omega * t)
        noise = np.zeros((replicates, n))
        if sigma > 0:
            noise = sigma * gaussians(np.random.PCG64(child), replicates * n).reshape(replicates, n)
        y = y0 + noise
        err_lsm = y @ op_a - a_true
        err_omd = y @ op_omd - setup.a0
        for r in range(replicates):
            rows.append(SweepRow(n, "lsm", r, float(err_lsm[r])))
            rows.append(SweepRow(n, "omd", r, float(err_omd[r])))
    return rows


def rms_by_n(rows: Sequence[SweepRow], method: str) -> tuple[np.ndarray, np.ndarray]:
    ns = sorted({r.n for r in rows if r.method == method})
    rms = []
    for n in ns:
        errs = np.array([r.error for r in rows if r.method == method and r.n == n])
        rms.append(math.sqrt(float(np.mean(errs * errs))))
    return np.array(ns, dtype=float), np.array(rms)


def loglog_slope(ns, values) -> float:
    """Least-squares slope of log(values) against log(ns); nan if undefined."""
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    ok = (ns > 0) & (values > 0)
    if np.count_nonzero(ok) < 2 or np.ptp(ns[ok]) == 0:
        return math.nan
    return float(np.polyfit(np.log(ns[ok]), np.log(values[ok]), 1)[0])
