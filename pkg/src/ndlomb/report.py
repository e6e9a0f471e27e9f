"""Markdown summaries of a spectrum and gnuplot-ready column dumps."""

from __future__ import annotations

import io as _io
import math
from typing import Optional, Sequence

import numpy as np
from scipy.ndimage import maximum_filter

from .baselines import omd_error_budget
from .lsm import confidence_intervals
from .types import TWO_PI, NoiseSpec, Spectrum, wrap_phase


def _g(x: float, digits: int = 6) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "n/a"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.{digits}g}"


def local_maxima(spectrum: Spectrum, k: int = 5) -> list[int]:
    """Indices of the k largest local amplitude maxima, strongest first.

    On product grids a point is a local maximum if no neighbour in its
    3^m block is larger; on scattered grids this falls back to plain
    ranking.
    """
    amp = np.where(np.isnan(spectrum.amplitude), -np.inf, spectrum.amplitude)
    if spectrum.grid.axes is None:
        if spectrum.grid.dims == 1 and len(amp) > 2:
            order = np.argsort(spectrum.freqs[:, 0], kind="stable")
            a = amp[order]
            left = np.r_[-np.inf, a[:-1]]
            right = np.r_[a[1:], -np.inf]
            cand = order[(a >= left) & (a >= right)]
        else:
            cand = np.arange(len(amp))
    else:
        cube = amp.reshape(spectrum.grid.shape)
        peak = cube == maximum_filter(cube, size=3, mode="nearest")
        cand = np.flatnonzero(peak.ravel())
    cand = cand[np.isfinite(amp[cand])]
    order = np.argsort(-amp[cand], kind="stable")
    return [int(i) for i in cand[order][:k]]


def cosine_phase(spectrum: Spectrum) -> np.ndarray:
    """phi of the fitted A cos(w.t + phi)."""
    return wrap_phase(-(spectrum.phase + spectrum.tau_star))


def render(spectrum: Spectrum, title: str = "spectrum", noise: Optional[NoiseSpec] = None,
           window: Optional[float] = None, top: int = 5,
           checks: Sequence[tuple] = (), columns_path: Optional[str] = None) -> str:
    """Markdown report for ``spectrum``.

    ``noise`` defaults to the noise setting stored with the spectrum; without
    one the CI section is skipped. ``window`` (1-D only) enables the OMD
    truncation bound in the error budget. ``checks`` rows are
    (quantity, target, observed, verdict) and go into their own table.
    """
    noise = noise or spectrum.noise
    out = _io.StringIO()
    w = out.write
    grid = spectrum.grid
    w(f"# {title}\n\n")
    w(f"- method: {spectrum.method}\n")
    w(f"- samples N: {spectrum.n_samples}\n")
    w(f"- independent frequencies M: {_g(spectrum.m_indep)}\n")
    w(f"- grid: {len(grid)} points, shape {'x'.join(str(s) for s in grid.shape)}, "
      f"{grid.convention} frequencies\n")
    if spectrum.n_samples > 1:
        w(f"- noise floor 2/(N-1): {_g(2.0 / (spectrum.n_samples - 1))}\n")
    w(f"- mean psd over grid: {_g(float(np.nanmean(spectrum.psd)))}\n")
    n_deg = int(np.count_nonzero(spectrum.degenerate))
    if n_deg:
        w(f"- degenerate points: {n_deg}\n")
    w("\n## Peaks\n\n")
    fcols = [f"f{d + 1}" for d in range(grid.dims)]
    w("| rank | " + " | ".join(fcols) + " | amplitude | phi | psd | prob | FAP |\n")
    w("|" + "---|" * (len(fcols) + 6) + "\n")
    phi = cosine_phase(spectrum)
    peaks = local_maxima(spectrum, top)
    for rank, i in enumerate(peaks, 1):
        cells = [str(rank)] + [_g(v, 8) for v in spectrum.freqs[i]]
        cells += [_g(spectrum.amplitude[i]), _g(phi[i], 5), _g(spectrum.psd[i]),
                  _g(spectrum.prob[i], 4), _g(spectrum.fap[i], 4)]
        w("| " + " | ".join(cells) + " |\n")
    w("\nphi is the phase of A cos(w.t + phi); conjugate frequencies carry "
      "opposite phi.\n")

    if noise is not None and spectrum.n_samples > 0:
        w(f"\n## Confidence intervals (sigma={_g(noise.sigma)}, alpha={_g(noise.alpha)}, "
          f"quantile={_g(noise.quantile)})\n\n")
        w("| rank | A | delta_ab | delta_A | delta_phi |\n|---|---|---|---|---|\n")
        for rank, i in enumerate(peaks, 1):
            d_ab, d_a, d_phi = confidence_intervals(noise, spectrum.n_samples,
                                                    float(spectrum.amplitude[i]))
            w(f"| {rank} | {_g(spectrum.amplitude[i])} | {_g(d_ab)} | {_g(d_a)} | "
              f"{_g(d_phi)} |\n")
        w("\n## Error budget\n\n")
        n = spectrum.n_samples
        if window is not None and grid.dims == 1 and peaks:
            omega = float(grid.omegas[peaks[0], 0])
            if omega > 0:
                budget = omd_error_budget(window, omega, n, noise)
                w(f"At the strongest peak (omega={_g(omega)}, T={_g(window)}):\n\n")
                w(f"- eps_T (OMD truncation, relative): {_g(budget.eps_T)}\n")
                w(f"- eps_FS (OMD random): {_g(budget.eps_FS)}\n")
                w(f"- eps_LS (LSM): {_g(budget.eps_LS)}\n")
            else:
                w("- strongest peak at zero frequency; no truncation bound\n")
        else:
            root_n = math.sqrt(n)
            w(f"- eps_FS (OMD random): {_g(noise.quantile * 2.0 * noise.sigma / root_n)}\n")
            w(f"- eps_LS (LSM): {_g((4.0 / math.pi) * noise.quantile * noise.sigma / root_n)}\n")
            w("- eps_T: needs a 1-D spectrum and the window length\n")

    if checks:
        w("\n## Checks\n\n| quantity | target | observed | verdict |\n|---|---|---|---|\n")
        for row in checks:
            w("| " + " | ".join(str(c) for c in row) + " |\n")
    if columns_path:
        w(f"\n## Columns\n\nGnuplot-ready columns written to `{columns_path}`.\n")
    return out.getvalue()


def write_columns(spectrum: Spectrum, dest) -> None:
    """Whitespace-separated frequency, amplitude, psd and FAP columns.

    On product grids a blank line follows each run of the last axis, which
    is the block layout gnuplot's splot expects.
    """
    grid = spectrum.grid
    out = _io.StringIO()
    names = [f"f{d + 1}" for d in range(grid.dims)] + ["amplitude", "phi", "psd", "fap"]
    out.write("# " + " ".join(names) + "\n")
    phi = cosine_phase(spectrum)
    run = grid.shape[-1] if grid.axes is not None and grid.dims > 1 else 0
    for i in range(len(grid)):
        vals = list(spectrum.freqs[i]) + [spectrum.amplitude[i], phi[i], spectrum.psd[i],
                                          spectrum.fap[i]]
        out.write(" ".join("%.10g" % v for v in vals) + "\n")
        if run and (i + 1) % run == 0:
            out.write("\n")
    if hasattr(dest, "write"):
        dest.write(out.getvalue())
    else:
        with open(dest, "w") as fh:
            fh.write(out.getvalue())


def _verdict(ok: bool) -> str:
    return "pass" if ok else "FAIL"


def preset_checks(name: str, spectrum: Spectrum) -> list[tuple]:
    """Recovery checks for the built-in datasets."""
    rows = []
    i = spectrum.argmax()
    f = tuple(float(v) for v in spectrum.freqs[i])
    if name == "simple-wave":
        target = np.array([3.25, 6.32])
        step = spectrum.grid.spacing if spectrum.grid.spacing is not None else np.zeros(2)
        nearest = np.round(target / step) * step
        hit = np.allclose(np.abs(f), nearest, atol=1e-9)
        rows.append(("argmax abs(f)", _fmt_vec(nearest), _fmt_vec(np.abs(f)), _verdict(hit)))
        rows.append(("peak psd", ">= 0.99", _g(spectrum.psd[i]), _verdict(spectrum.psd[i] >= 0.99)))
        amp = spectrum.amplitude[i]
        rows.append(("amplitude", "1 +- 1%", _g(amp), _verdict(abs(amp - 1) <= 0.01)))
        phi = float(cosine_phase(spectrum)[i]) * math.copysign(1.0, f[0])
        rows.append(("phase", "pi/4 +- 0.02", _g(phi), _verdict(abs(phi - math.pi / 4) <= 0.02)))
    elif name == "traveling-wave":
        # angular grid over (omega_t, k, m); only the first axis is converted
        raw = spectrum.freqs[i]
        shown = (raw[0] / TWO_PI, raw[1], raw[2])
        hit = np.allclose(shown, (0.009, 20.0, 1.0), rtol=0, atol=1e-9)
        rows.append(("argmax (f, k, m)", "(0.009, 20, 1)", _fmt_vec(shown), _verdict(hit)))
    elif name == "noise-only":
        n = spectrum.n_samples
        floor = 2.0 / (n - 1)
        mean = float(np.nanmean(spectrum.psd))
        rows.append(("mean psd", f"{_g(floor)} +- 25%", _g(mean),
                     _verdict(abs(mean - floor) <= 0.25 * floor)))
        fmin = float(np.nanmin(spectrum.fap))
        rows.append(("min FAP", "typically >= 0.05", _g(fmin, 4), "info"))
    return rows


def _fmt_vec(v) -> str:
    return "(" + ", ".join(_g(float(x), 8) for x in v) + ")"
