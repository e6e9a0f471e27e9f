"""CSV and config-file formats.

Sample CSV
    header ``t1,...,tm,value``; one sample per row; ``nan`` (any case) is
    allowed in the value column only and marks a missing sample.

Spectrum CSV
    optional ``# key=value`` metadata lines, then the header
    ``f1,...,fm,tau_star,a,b,amplitude,phase,psd,prob,fap``. Numbers are
    written with 17 significant digits; an empty prob/fap cell means the
    statistic was not evaluated. Frequencies are in the convention named by
    the ``# convention=`` line (``ordinary`` when absent).

Gridded-field CSV
    ``# shape=n1,...,nm``, ``# origin=x1,...,xm`` and
    ``# spacing=d1,...,dm`` lines, then the header ``i1,...,im,value`` with
    integer cell indices. Cells without a row, or with ``nan``, are missing.

Config files
    flat ``key = value`` lines, ``#`` starts a comment.
"""

from __future__ import annotations

import csv
import io as _io
import math
from pathlib import Path
from typing import Optional, TextIO, Union

import numpy as np

from .baselines import GriddedField
from .errors import BadInput, FormatError
from .types import SPECTRUM_COLUMNS, FrequencyGrid, NoiseSpec, SampleSet, Spectrum

PathLike = Union[str, Path]


def fmt(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _parse(cell: str, where: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise FormatError(f"{where}: not a number: {cell!r}") from None


def _split_meta(lines: list[str]) -> tuple[dict, list[str]]:
    meta = {}
    body = []
    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            key, sep, value = stripped[1:].partition("=")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        body.append(line)
    return meta, body


def _open_text(source) -> list[str]:
    if hasattr(source, "read"):
        return source.read().splitlines()
    return Path(source).read_text().splitlines()


# --- samples ---------------------------------------------------------------

def write_samples(samples: SampleSet, dest: Union[PathLike, TextIO]) -> None:
    header = [f"t{d + 1}" for d in range(samples.dims)] + ["value"]
    out = _io.StringIO()
    out.write(",".join(header) + "\n")
    for coord, value in zip(samples.coords, samples.values):
        out.write(",".join(fmt(c) for c in coord) + "," + fmt(value) + "\n")
    _emit(out.getvalue(), dest)


def read_samples(source, label: Optional[str] = None) -> SampleSet:
    _, body = _split_meta(_open_text(source))
    rows = list(csv.reader(body))
    if not rows:
        raise FormatError("sample file has no header")
    header = [h.strip() for h in rows[0]]
    m = len(header) - 1
    if m < 1 or header != [f"t{d + 1}" for d in range(m)] + ["value"]:
        raise FormatError(f"sample header must be t1,...,tm,value, got {','.join(header)}")
    coords = np.empty((len(rows) - 1, m))
    values = np.empty(len(rows) - 1)
    for i, row in enumerate(rows[1:]):
        if len(row) != m + 1:
            raise FormatError(f"row {i + 2}: expected {m + 1} fields, got {len(row)}")
        for d in range(m):
            coords[i, d] = _parse(row[d], f"row {i + 2}")
        values[i] = _parse(row[m], f"row {i + 2}")
    if not np.all(np.isfinite(coords)):
        raise FormatError("non-finite coordinate; only the value column may be nan")
    return SampleSet.from_arrays(coords, values, label)


# --- spectra ---------------------------------------------------------------

def write_spectrum(spectrum: Spectrum, dest: Union[PathLike, TextIO]) -> None:
    grid = spectrum.grid
    out = _io.StringIO()
    out.write(f"# method={spectrum.method}\n")
    out.write(f"# convention={grid.convention}\n")
    out.write(f"# n_samples={spectrum.n_samples}\n")
    out.write(f"# m_indep={fmt(spectrum.m_indep)}\n")
    if grid.axes is not None:
        out.write("# shape=" + ",".join(str(s) for s in grid.shape) + "\n")
    if grid.spacing is not None:
        out.write("# spacing=" + ",".join(fmt(s) for s in grid.spacing) + "\n")
    if spectrum.noise is not None:
        out.write(f"# sigma={fmt(spectrum.noise.sigma)}\n# alpha={fmt(spectrum.noise.alpha)}\n")
    deg = np.flatnonzero(spectrum.degenerate)
    if deg.size:
        out.write("# degenerate=" + ";".join(
            f"{i}:{spectrum.degenerate[i]}" for i in deg) + "\n")
    header = [f"f{d + 1}" for d in range(grid.dims)] + list(SPECTRUM_COLUMNS)
    out.write(",".join(header) + "\n")
    cols = [getattr(spectrum, name) for name in SPECTRUM_COLUMNS]
    for i in range(len(grid)):
        cells = [fmt(v) for v in grid.freqs[i]]
        for name, col in zip(SPECTRUM_COLUMNS, cols):
            v = col[i]
            cells.append("" if name in ("prob", "fap") and math.isnan(v) else fmt(v))
        out.write(",".join(cells) + "\n")
    _emit(out.getvalue(), dest)


def read_spectrum(source) -> Spectrum:
    meta, body = _split_meta(_open_text(source))
    rows = list(csv.reader(body))
    if not rows:
        raise FormatError("spectrum file has no header")
    header = [h.strip() for h in rows[0]]
    m = len(header) - len(SPECTRUM_COLUMNS)
    expected = [f"f{d + 1}" for d in range(m)] + list(SPECTRUM_COLUMNS)
    if m < 1 or header != expected:
        raise FormatError(f"spectrum header must be {','.join(expected)}")
    data = np.empty((len(rows) - 1, len(header)))
    for i, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise FormatError(f"row {i + 2}: expected {len(header)} fields")
        for j, cell in enumerate(row):
            data[i, j] = math.nan if cell.strip() == "" else _parse(cell, f"row {i + 2}")
    freqs = data[:, :m]
    spacing = None
    if "spacing" in meta:
        spacing = np.array([float(v) for v in meta["spacing"].split(",")])
    convention = meta.get("convention", "ordinary")
    grid = None
    if "shape" in meta:
        shape = tuple(int(v) for v in meta["shape"].split(","))
        grid = _product_grid(freqs, shape, convention, spacing)
    if grid is None:
        grid = FrequencyGrid(freqs, convention, spacing)
    deg = np.zeros(len(grid), dtype=np.int8)
    for item in filter(None, meta.get("degenerate", "").split(";")):
        idx, flag = item.split(":")
        deg[int(idx)] = int(flag)
    noise = None
    if "sigma" in meta:
        noise = NoiseSpec(float(meta["sigma"]), float(meta.get("alpha", 0.05)))
    cols = {name: data[:, m + k] for k, name in enumerate(SPECTRUM_COLUMNS)}
    return Spectrum(grid, **cols, degenerate=deg,
                    n_samples=int(meta.get("n_samples", 0)),
                    m_indep=float(meta.get("m_indep", "nan")),
                    method=meta.get("method", "lsm"), noise=noise)


def _product_grid(freqs, shape, convention, spacing) -> Optional[FrequencyGrid]:
    if int(np.prod(shape)) != freqs.shape[0] or len(shape) != freqs.shape[1]:
        return None
    cube = freqs.reshape(*shape, len(shape))
    axes = []
    for d in range(len(shape)):
        index = [0] * len(shape)
        index[d] = slice(None)
        axes.append(cube[tuple(index) + (d,)].copy())
    grid = FrequencyGrid.from_axes(axes, convention, spacing)
    if not np.array_equal(grid.freqs, freqs):
        return None
    return grid


# --- gridded fields -----------------------------------------------------------

def write_field(field: GriddedField, dest: Union[PathLike, TextIO]) -> None:
    out = _io.StringIO()
    out.write("# shape=" + ",".join(str(s) for s in field.shape) + "\n")
    out.write("# origin=" + ",".join(fmt(v) for v in field.origin) + "\n")
    out.write("# spacing=" + ",".join(fmt(v) for v in field.spacing) + "\n")
    out.write(",".join([f"i{d + 1}" for d in range(field.dims)] + ["value"]) + "\n")
    for idx in np.ndindex(*field.shape):
        out.write(",".join(str(i) for i in idx) + "," + fmt(field.values[idx]) + "\n")
    _emit(out.getvalue(), dest)


def read_field(source) -> GriddedField:
    meta, body = _split_meta(_open_text(source))
    try:
        shape = tuple(int(v) for v in meta["shape"].split(","))
        origin = [float(v) for v in meta["origin"].split(",")]
        spacing = [float(v) for v in meta["spacing"].split(",")]
    except KeyError as exc:
        raise FormatError(f"gridded field lacks the '# {exc.args[0]}=' line") from None
    rows = list(csv.reader(body))
    m = len(shape)
    if not rows or [h.strip() for h in rows[0]] != [f"i{d + 1}" for d in range(m)] + ["value"]:
        raise FormatError("gridded field header must be i1,...,im,value")
    values = np.full(shape, np.nan)
    for r, row in enumerate(rows[1:]):
        if len(row) != m + 1:
            raise FormatError(f"row {r + 2}: expected {m + 1} fields")
        idx = tuple(int(c) for c in row[:m])
        if any(not 0 <= i < n for i, n in zip(idx, shape)):
            raise FormatError(f"row {r + 2}: index {idx} outside shape {shape}")
        values[idx] = _parse(row[m], f"row {r + 2}")
    return GriddedField(values, origin, spacing)


# --- key/value config ---------------------------------------------------------

def read_config(source) -> dict:
    conf = {}
    for n, line in enumerate(_open_text(source), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError(f"config line {n}: expected key = value")
        conf[key.strip()] = value.strip()
    return conf


def write_config(conf: dict, dest: Union[PathLike, TextIO]) -> None:
    text = "".join(f"{k} = {v}\n" for k, v in conf.items())
    _emit(text, dest)


def _emit(text: str, dest) -> None:
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)


def parse_grid(text: str) -> tuple[list, list]:
    """``min:step:max[,min:step:max...]`` into (ranges, steps)."""
    ranges, steps = [], []
    for part in text.split(","):
        bits = part.strip().split(":")
        if len(bits) != 3:
            raise BadInput(f"grid axis {part!r} is not min:step:max")
        lo, step, hi = (float(b) for b in bits)
        ranges.append((lo, hi))
        steps.append(step)
    return ranges, steps
