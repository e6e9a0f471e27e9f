"""Command-line interface: ``ndlomb <command> [options]``."""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import _backend
from .baselines import (GriddedField, emax_scan, omd_error_budget, quadrature_demod,
                        zero_padded_dft_psd)
from .errors import EXIT_CODES, BadInput, FormatError, NdlombError
from .experiments import SINUS_WINDOW, SinusSetup, consistency_sweep, loglog_slope, rms_by_n
from .io import (fmt, parse_grid, read_config, read_field, read_samples, read_spectrum,
                 write_config, write_field, write_samples, write_spectrum)
from .lsm import analyze, lsq_fit_oracle
from .report import preset_checks, render, write_columns
from .synth import PRESETS, SamplingSpec, SignalSpec, generate, simple_wave_specs
from .types import NoiseSpec, build_regular_grid

EXIT_USAGE = 2
EXIT_IO = 20

GENERATE_KEYS = ("preset", "pattern", "ranges", "steps", "n", "jitter", "gaps",
                 "missing_fraction", "components", "sigma", "seed", "label")


def _exit_code_table() -> str:
    lines = ["exit codes:", "  0   success", f"  {EXIT_USAGE}   usage error"]
    for name, code in sorted(EXIT_CODES.items(), key=lambda kv: kv[1]):
        lines.append(f"  {code:<3} {name}")
    lines.append(f"  {EXIT_IO}  file could not be read or written")
    return "\n".join(lines)


def _resolve_seed(value, default: int = 0) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("NDLOMB_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise BadInput(f"NDLOMB_SEED must be an integer, got {env!r}") from None
    return default


def _noise(args) -> NoiseSpec | None:
    if args.sigma is None:
        return None
    return NoiseSpec(args.sigma, args.alpha)


def _threads(n: int) -> int:
    return os.cpu_count() or 1 if n == 0 else n


def _out_stream(path):
    return sys.stdout if path in (None, "-") else path


# --- config parsing ---------------------------------------------------------

def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ranges(text: str) -> list[tuple]:
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        lo, hi = part.split(":")
        out.append((float(lo), float(hi)))
    return out


def _gaps(text: str) -> list[tuple]:
    out = []
    for part in filter(None, (p.strip() for p in text.split(";"))):
        axis, lo, hi = part.split(":")
        out.append((int(axis), float(lo), float(hi)))
    return out


def parse_components(text: str) -> list[tuple]:
    """``f1:f2/A/phi;...`` into (freq, amplitude, phase) triples."""
    comps = []
    for part in filter(None, (p.strip() for p in text.split(";"))):
        bits = part.split("/")
        if len(bits) != 3:
            raise BadInput(f"component {part!r} is not freq/amplitude/phase")
        freq = tuple(float(v) for v in bits[0].split(":"))
        comps.append((freq, float(bits[1]), float(bits[2])))
    return comps


def specs_from_config(conf: dict):
    try:
        signal = SignalSpec(tuple(parse_components(conf.get("components", ""))))
        sampling = SamplingSpec(
            pattern=conf.get("pattern", "regular"),
            ranges=tuple(_ranges(conf.get("ranges", ""))),
            steps=tuple(_floats(conf.get("steps", ""))),
            n=int(conf.get("n", 0)),
            jitter=float(conf.get("jitter", 0.0)),
            gaps=tuple(_gaps(conf.get("gaps", ""))),
            missing_fraction=float(conf.get("missing_fraction", 0.0)),
        )
        sigma = float(conf.get("sigma", 0.0))
    except ValueError as exc:
        raise FormatError(f"bad generate setting: {exc}") from None
    return signal, sampling, sigma


# --- datasets -----------------------------------------------------------------

def _preset(name: str, seed):
    return PRESETS[name](seed=_resolve_seed(seed, 1))


def _load_samples(args):
    """Samples and (optionally) the preset they came from."""
    if args.input:
        return read_samples(args.input), None
    if args.preset:
        preset = _preset(args.preset, args.seed)
        return preset.samples, preset
    raise BadInput("give --input or --preset")


def _grid(args, preset):
    if args.grid:
        ranges, steps = parse_grid(args.grid)
        return build_regular_grid(ranges, steps, "ordinary")
    if preset is not None:
        return preset.grid
    raise BadInput("give --grid min:step:max[,...]")


def _lattice(args, samples, preset) -> GriddedField:
    if args.lattice:
        ranges, steps = parse_grid(args.lattice)
        shape = [int(math.floor((hi - lo) / st + 0.5)) + 1 for (lo, hi), st in zip(ranges, steps)]
        return GriddedField.from_samples(samples, [lo for lo, _ in ranges], steps, shape)
    if preset is not None:
        if preset.name != "simple-wave":
            raise BadInput(f"preset {preset.name} is not sampled on a lattice")
        _, sampling = simple_wave_specs()
        shape = [int(math.floor((hi - lo) / st + 0.5)) + 1
                 for (lo, hi), st in zip(sampling.ranges, sampling.steps)]
        return GriddedField.from_samples(samples, [lo for lo, _ in sampling.ranges],
                                         sampling.steps, shape)
    return GriddedField.from_samples(samples)


def _is_field_file(path) -> bool:
    with open(path) as fh:
        for line in fh:
            if line.strip():
                return line.lstrip().startswith("# shape=")
    return False


def _spectrum_summary(spec) -> str:
    p = spec.peak()
    f = ", ".join("%.10g" % v for v in p.freq)
    fap = "n/a" if math.isnan(p.fap) else "%.6g" % p.fap
    m = "n/a" if math.isnan(spec.m_indep) else "%.6g" % spec.m_indep
    return f"peak f=({f}) psd={p.psd:.6g} fap={fap} N={spec.n_samples} M={m}"


# --- commands -----------------------------------------------------------------

def cmd_generate(args) -> int:
    conf = read_config(args.config) if args.config else {}
    overrides = {
        "preset": args.preset, "pattern": args.pattern, "ranges": args.ranges,
        "steps": args.steps, "n": args.n, "jitter": args.jitter, "gaps": args.gaps,
        "missing_fraction": args.missing_fraction, "components": args.components,
        "sigma": args.sigma, "label": args.label,
    }
    for key, value in overrides.items():
        if value is not None:
            conf[key] = str(value)
    preset = conf.get("preset")
    seed_value = args.seed if args.seed is not None else conf.get("seed")
    seed = _resolve_seed(seed_value, 1 if preset else 0)
    if preset:
        if preset not in PRESETS:
            raise BadInput(f"unknown preset {preset!r}")
        extra = set(conf) - {"preset", "seed"}
        if extra:
            raise BadInput(f"preset {preset} does not take {', '.join(sorted(extra))}")
        samples = PRESETS[preset](seed=seed).samples
        resolved = {"preset": preset, "seed": seed}
    else:
        unknown = set(conf) - set(GENERATE_KEYS)
        if unknown:
            raise FormatError(f"unknown config keys: {', '.join(sorted(unknown))}")
        signal, sampling, sigma = specs_from_config(conf)
        samples = generate(signal, sampling, sigma, seed, conf.get("label"))
        resolved = {k: conf[k] for k in GENERATE_KEYS if k in conf}
        resolved["seed"] = seed
    write_samples(samples, _out_stream(args.output))
    if args.output and args.output != "-":
        write_config(resolved, str(args.output) + ".cfg")
    else:
        write_config(resolved, sys.stderr)
    return 0


def cmd_analyze(args) -> int:
    samples, preset = _load_samples(args)
    grid = _grid(args, preset)
    spec = analyze(samples, grid, noise=_noise(args), m_indep=args.m_indep,
                   threads=_threads(args.threads), backend=args.backend)
    write_spectrum(spec, _out_stream(args.output))
    print(_spectrum_summary(spec), file=sys.stdout if args.output else sys.stderr)
    return 0


def cmd_baseline(args) -> int:
    if args.method == "omd":
        return _baseline_omd(args)
    if args.input and _is_field_file(args.input):
        field = read_field(args.input)
    else:
        samples, preset = _load_samples(args)
        field = _lattice(args, samples, preset)
    if args.field_output:
        write_field(field, args.field_output)
    spec = zero_padded_dft_psd(field, m_indep=args.m_indep)
    write_spectrum(spec, _out_stream(args.output))
    print(_spectrum_summary(spec), file=sys.stdout if args.output else sys.stderr)
    return 0


def _baseline_omd(args) -> int:
    if args.input:
        samples = read_samples(args.input)
        if samples.dims != 1:
            raise BadInput("OMD is one-dimensional")
        t = samples.coords[:, 0]
        window = args.window
        if window is None:
            window = float(np.ptp(t)) * samples.n / max(samples.n - 1, 1)
        freq = args.freq
        if freq is None:
            raise BadInput("give --freq with --input")
        omega = 2.0 * math.pi * freq
    else:
        setup = SinusSetup(window=args.window or SINUS_WINDOW,
                           omega=2.0 * math.pi * args.freq if args.freq else 1.0)
        samples = setup.samples(args.n)
        window, omega = setup.window, setup.omega
    a_omd, b_omd = quadrature_demod(samples, [omega])
    a_ref, b_ref = lsq_fit_oracle(samples, [omega])
    amp = math.hypot(a_ref, b_ref)
    est = math.hypot(a_omd - a_ref, b_omd - b_ref) / amp if amp > 0 else math.nan
    budget = omd_error_budget(window, omega, samples.n, NoiseSpec(args.sigma or 0.0, args.alpha))
    rows = [("window", window), ("omega", omega), ("n", samples.n),
            ("omd_a", a_omd), ("omd_b", b_omd), ("lsm_a", a_ref), ("lsm_b", b_ref),
            ("eps_T_estimate", est), ("eps_T_bound", budget.eps_T),
            ("eps_FS", budget.eps_FS), ("eps_LS", budget.eps_LS)]
    text = "quantity,value\n" + "".join(f"{k},{fmt(float(v))}\n" for k, v in rows)
    _write_text(text, args.output)
    return 0


def cmd_compare(args) -> int:
    samples, preset = _load_samples(args)
    grid = _grid(args, preset)
    lsm = analyze(samples, grid, m_indep=args.m_indep, threads=_threads(args.threads),
                  backend=args.backend)
    dft = zero_padded_dft_psd(_lattice(args, samples, preset), m_indep=args.m_indep)
    pl, pd = lsm.peak(), dft.peak()
    ref = np.array(pl.freq)
    # distance to whichever of the conjugate pair is closer
    dist = min(np.linalg.norm(np.array(pd.freq) - ref), np.linalg.norm(np.array(pd.freq) + ref))
    rows = [("lsm_peak", " ".join(fmt(v) for v in pl.freq)), ("lsm_amplitude", fmt(pl.amplitude)),
            ("lsm_psd", fmt(pl.psd)),
            ("dft_peak", " ".join(fmt(v) for v in pd.freq)), ("dft_amplitude", fmt(pd.amplitude)),
            ("dft_psd", fmt(pd.psd)),
            ("psd_ratio", fmt(pd.psd / pl.psd)),
            ("amplitude_ratio", fmt(pd.amplitude / pl.amplitude)),
            ("peak_distance", fmt(float(dist)))]
    _write_text("quantity,value\n" + "".join(f"{k},{v}\n" for k, v in rows), args.output)
    return 0


def cmd_sweep(args) -> int:
    ns = [int(v) for v in args.ns.split(",") if v.strip()]
    setup = SinusSetup(window=args.window or SINUS_WINDOW, omega=args.omega)
    seed = _resolve_seed(args.seed)
    rows = consistency_sweep(ns, args.sigma or 0.0, args.replicates, seed, setup)
    text = "N,method,replicate,error\n" + "".join(
        f"{r.n},{r.method},{r.replicate},{fmt(r.error)}\n" for r in rows)
    _write_text(text, args.output)
    summary = sys.stdout if args.output else sys.stderr
    for method in ("lsm", "omd"):
        n_arr, rms = rms_by_n(rows, method)
        slope = loglog_slope(n_arr, rms)
        per_n = " ".join(f"{int(n)}:{v:.4g}" for n, v in zip(n_arr, rms))
        print(f"{method} rms {per_n} slope={slope:.4f}", file=summary)
    return 0


def cmd_emax(args) -> int:
    beta, emax = emax_scan(args.resolution)
    print(f"beta_star={beta:.15g} e_max={emax:.15g} 4/pi={4 / math.pi:.15g} "
          f"diff={emax - 4 / math.pi:.3g}")
    return 0


def cmd_report(args) -> int:
    checks = []
    if args.input:
        spec = read_spectrum(args.input)
        title = f"Spectrum report: {Path(args.input).name}"
    elif args.preset:
        samples, preset = _load_samples(args)
        if args.sigma is None:
            args.sigma = preset.config.get("sigma")
        if args.window is None:
            args.window = preset.config.get("window")
        spec = analyze(samples, _grid(args, preset), noise=_noise(args), m_indep=args.m_indep,
                       threads=_threads(args.threads), backend=args.backend)
        title = f"Spectrum report: {preset.name} preset"
        checks = preset_checks(preset.name, spec)
    else:
        raise BadInput("give --input or --preset")
    if args.columns:
        write_columns(spec, args.columns)
    text = render(spec, title, noise=_noise(args), window=args.window, top=args.top,
                  checks=checks, columns_path=args.columns)
    _write_text(text, args.output)
    return 0


def _write_text(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ndlomb",
        description="Multivariate Lomb-Scargle spectra of irregularly sampled data.",
        epilog=_exit_code_table(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid=True, data=True, input_help="sample CSV"):
        p.add_argument("--output", "-o", help="output file (default: standard output)")
        p.add_argument("--format", choices=["csv"], default="csv")
        p.add_argument("--seed", type=int, help="seed (fallback: NDLOMB_SEED)")
        p.add_argument("--sigma", type=float, help="noise standard deviation")
        p.add_argument("--alpha", type=float, default=0.05, help="1 - confidence level")
        if data:
            p.add_argument("--input", "-i", help=input_help)
            p.add_argument("--preset", choices=sorted(PRESETS))
        if grid:
            p.add_argument("--grid", help="ordinary frequencies, min:step:max[,...]")
            p.add_argument("--m-indep", type=float, help="override the independent-frequency count")
            p.add_argument("--threads", type=int, default=1, help="worker threads (0: all cores)")
            p.add_argument("--backend", choices=sorted(_backend.BACKENDS),
                           help=f"kernel backend (default: {_backend.DEFAULT})")

    p = sub.add_parser("generate", help="write a synthetic sample CSV")
    common(p, grid=False, data=False)
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--components", help="f1:f2/A/phi;... (ordinary frequencies)")
    p.add_argument("--pattern", choices=["regular", "uniform", "jittered"])
    p.add_argument("--ranges", help="lo:hi,lo:hi,...")
    p.add_argument("--steps", help="s1,s2,...")
    p.add_argument("--n", type=int, help="point count for the uniform pattern")
    p.add_argument("--jitter", type=float, help="jitter as a fraction of the step")
    p.add_argument("--gaps", help="axis:lo:hi;...")
    p.add_argument("--missing-fraction", type=float)
    p.add_argument("--label")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="LSM spectrum of a sample CSV")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("baseline", help="zero-padded DFT spectrum or OMD coefficients")
    common(p)
    p.add_argument("--method", choices=["dft", "omd"], default="dft")
    p.add_argument("--lattice", help="DFT lattice min:step:max[,...] (default: inferred)")
    p.add_argument("--field-output", help="also write the gridded field CSV")
    p.add_argument("--freq", type=float, help="OMD frequency (ordinary)")
    p.add_argument("--window", type=float, help="OMD observation length T")
    p.add_argument("--n", type=int, default=200, help="sample count of the built-in OMD setup")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("compare", help="LSM and DFT peaks side by side")
    common(p)
    p.add_argument("--lattice", help="DFT lattice min:step:max[,...] (default: inferred)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="consistency Monte Carlo: error against N")
    common(p, grid=False, data=False)
    p.add_argument("--ns", default="50,100,200,400,800", help="comma-separated sample counts")
    p.add_argument("--replicates", type=int, default=500)
    p.add_argument("--window", type=float, help=f"window length T (default {SINUS_WINDOW:.6g})")
    p.add_argument("--omega", type=float, default=1.0, help="angular frequency")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("emax", help="numerical maximum of the LSM error factor")
    p.add_argument("--resolution", type=int, default=1_000_000)
    p.set_defaults(func=cmd_emax)

    p = sub.add_parser("report", help="markdown summary of a spectrum")
    common(p, input_help="spectrum CSV written by analyze")
    p.add_argument("--window", type=float, help="window length for the OMD bound (1-D)")
    p.add_argument("--top", type=int, default=5, help="number of peaks listed")
    p.add_argument("--columns", help="also write gnuplot-ready columns to this file")
    p.set_defaults(func=cmd_report)
    return parser


# options whose values routinely start with a minus sign
_SIGNED = ("--grid", "--lattice", "--ranges", "--gaps", "--components")


def _glue_signed(argv: list) -> list:
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _SIGNED:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_signed(list(sys.argv[1:] if argv is None else argv)))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            code = args.func(args)
        except NdlombError as exc:
            print(f"ndlomb: error: {type(exc).__name__}: {exc}", file=sys.stderr)
            code = exc.exit_code
        except OSError as exc:
            print(f"ndlomb: error: {exc}", file=sys.stderr)
            code = EXIT_IO
    for w in caught:
        print(f"ndlomb: warning: {w.message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
