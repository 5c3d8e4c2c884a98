"""Command line interface: coverage sweeps, presets, simulation, reports.

Sweep specs accept `start:stop:step` (arithmetic), `start:stop:xF`
(geometric with factor F), a comma list, or a single value, all inclusive
of the stop point up to rounding.  Thresholds are given in dB and converted
as tau = 10^(dB/10); the intercept and noise flags mirror that convention.
Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from .adhoc import asymptotic_outage_adhoc, coverage_adhoc
from .antenna import ArrayGeometry, PatternKind, gain_array
from .cellular import (
    asymptotic_outage_cellular,
    coverage_cellular,
    coverage_cellular_lower,
)
from .config import AdHocConfig, CellularConfig, SystemParams
from .curves import CoverageCurve, CurvePoint, METHODS, emit_curves
from .errors import ConfigurationError
from .montecarlo import (
    Metric,
    SimControl,
    simulate_density_sweep,
    simulate_metric,
    simulate_threshold_sweep,
)
from .presets import PRESETS, get_preset, tau_db_of

__all__ = ["run", "main", "build_curve", "parse_sweep"]

_MC_PATTERNS = {
    "mc_actual": PatternKind.Actual,
    "mc_sinc": PatternKind.Sinc,
    "mc_cos": PatternKind.Cosine,
    "mc_flattop": PatternKind.FlatTop,
}
_PATTERN_FLAGS = {
    "actual": PatternKind.Actual,
    "sinc": PatternKind.Sinc,
    "cos": PatternKind.Cosine,
    "flattop": PatternKind.FlatTop,
}
_ANALYTIC_DEFAULT = {"adhoc": "analytic_prop1", "cellular": "analytic_prop2"}
# the ad hoc analytic value is a lower bound; accept that spelling too
_METHOD_ALIASES = {"analytic_lb": "analytic_prop1"}


def parse_sweep(text: str) -> np.ndarray:
    """Grid values from a sweep spec; see the module docstring."""
    if "," in text:
        return np.array([float(v) for v in text.split(",")])
    parts = text.split(":")
    if len(parts) == 1:
        return np.array([float(text)])
    if len(parts) != 3:
        raise ConfigurationError(f"bad sweep spec {text!r}")
    start, stop, last = float(parts[0]), float(parts[1]), parts[2]
    if stop < start:
        raise ConfigurationError("sweep stop must not precede start")
    if last.startswith("x"):
        factor = float(last[1:])
        if factor <= 1.0 or start <= 0.0:
            raise ConfigurationError("geometric sweeps need start > 0 and factor > 1")
        n = int(math.log(stop / start) / math.log(factor) + 1e-9) + 1
        return start * float(factor) ** np.arange(n)
    step = float(last)
    if step <= 0.0:
        raise ConfigurationError("sweep step must be positive")
    n = int((stop - start) / step + 1e-9) + 1
    return start + step * np.arange(n)


def _db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _swept_config(cfg: SystemParams, sweep_name: str, x: float) -> SystemParams:
    if sweep_name == "tau_db":
        return dataclasses.replace(cfg, tau=_db_to_linear(x))
    if sweep_name == "n_t":
        n = int(round(x))
        if abs(n - x) > 1e-9:
            raise ConfigurationError(f"array size {x} is not an integer")
        return dataclasses.replace(cfg, n_t=n)
    return dataclasses.replace(cfg, lambda_b=float(x))


def _echo_meta(cfg: SystemParams, network: str, sweep_name: str, method: str):
    meta = {"method": method, "network": network}
    fmt = lambda v: "%.10g" % v
    meta["big_r"] = fmt(cfg.big_r)
    if sweep_name != "lambda_b":
        meta["lambda_b"] = fmt(cfg.lambda_b)
    if sweep_name != "n_t":
        meta["n_t"] = str(cfg.n_t)
    if sweep_name != "tau_db":
        meta["tau_db"] = fmt(tau_db_of(cfg))
    meta["m"] = str(cfg.m)
    meta["alpha"] = fmt(cfg.alpha)
    meta["spacing_ratio"] = fmt(cfg.spacing_ratio)
    meta["p_t"] = fmt(cfg.p_t)
    meta["beta_db"] = fmt(10.0 * math.log10(cfg.beta_intercept))
    meta["sigma2_dbm"] = (
        fmt(10.0 * math.log10(cfg.sigma2) + 30.0) if cfg.sigma2 > 0.0 else "-inf"
    )
    if isinstance(cfg, AdHocConfig):
        meta["r_0"] = fmt(cfg.r_0)
    return meta


def _analytic_value(method: str, network: str, cfg: SystemParams) -> float:
    if method == "analytic_prop1":
        if network != "adhoc":
            raise ConfigurationError("analytic_prop1 applies to ad hoc networks")
        return coverage_adhoc(cfg)
    if method == "analytic_prop2":
        if network != "cellular":
            raise ConfigurationError("analytic_prop2 applies to cellular networks")
        return coverage_cellular(cfg)
    if method == "analytic_cor2":
        if network != "cellular":
            raise ConfigurationError("analytic_cor2 applies to cellular networks")
        return coverage_cellular_lower(cfg)
    if method == "asymptotic":
        if network == "adhoc":
            outage = asymptotic_outage_adhoc(cfg)
        else:
            outage = asymptotic_outage_cellular(cfg)
        # the large-array expansion can exceed the unit interval at small
        # n_t; clip so the curve stays a probability
        return min(1.0, max(0.0, 1.0 - outage))
    raise ConfigurationError(f"unknown method {method!r}")


def build_curve(
    network: str,
    sweep_name: str,
    xs,
    cfg: SystemParams,
    method: str,
    *,
    ctl: SimControl | None = None,
    workers: int = 1,
    metric: Metric = Metric.SINR,
) -> CoverageCurve:
    """Evaluate one method along the sweep and package it as a curve."""
    xs = np.asarray(xs, dtype=float)
    meta = _echo_meta(cfg, network, sweep_name, method)
    if method in _MC_PATTERNS:
        if ctl is None:
            raise ConfigurationError("Monte Carlo methods need trials and a seed")
        pattern = _MC_PATTERNS[method]
        if sweep_name == "tau_db":
            ests = simulate_threshold_sweep(
                cfg, _db_to_linear(xs), pattern, ctl, metric, workers
            )
        elif sweep_name == "lambda_b":
            ests = simulate_density_sweep(cfg, xs, pattern, ctl, metric, workers)
        else:
            ests = [
                simulate_metric(
                    metric, _swept_config(cfg, "n_t", x), pattern, ctl, workers
                )
                for x in xs
            ]
        points = [
            CurvePoint(float(x), e.p_hat, e.stderr) for x, e in zip(xs, ests)
        ]
        meta["trials"] = str(ctl.trials)
        meta["seed"] = str(ctl.seed)
        if ctl.include_nlos:
            meta["include_nlos"] = "1"
        if metric is not Metric.SINR:
            meta["metric"] = metric.value
    else:
        points = []
        for x in xs:
            p = _analytic_value(method, network, _swept_config(cfg, sweep_name, x))
            points.append(CurvePoint(float(x), min(1.0, max(0.0, p)), None))
    return CoverageCurve(sweep_name=sweep_name, points=tuple(points), meta=meta)


def _resolve_methods(raw: list[str] | None, network: str) -> list[str]:
    if not raw:
        return [_ANALYTIC_DEFAULT[network]]
    seen: list[str] = []
    for name in raw:
        canon = _METHOD_ALIASES.get(name, name)
        if canon not in METHODS:
            raise ConfigurationError(f"unknown method {name!r}")
        if canon not in seen:
            seen.append(canon)
    return seen


def _config_from(
    args, network: str, tau: float, *, n_t: int | None = None, lambda_b: float | None = None
) -> SystemParams:
    alpha = args.alpha if args.alpha is not None else (2.2 if network == "adhoc" else 2.1)
    if n_t is None:
        n_t = args.n_t
    if n_t is None:
        n_t = 64 if network == "adhoc" else 128
    if lambda_b is None:
        lambda_b = args.lambda_b
    common = dict(
        big_r=args.big_r,
        lambda_b=lambda_b,
        n_t=n_t,
        tau=tau,
        m=args.m,
        alpha=alpha,
        spacing_ratio=args.spacing_ratio,
        p_t=args.p_t,
        beta_intercept=_db_to_linear(args.beta_db),
        sigma2=_db_to_linear(args.sigma2_dbm - 30.0),
    )
    if network == "adhoc":
        return AdHocConfig(**common, r_0=args.r0)
    return CellularConfig(**common)


def _ctl_from(args) -> SimControl:
    return SimControl(
        trials=args.trials,
        seed=args.seed,
        include_nlos=args.include_nlos,
        nlos_alpha=args.nlos_alpha,
        nlos_beta=_db_to_linear(args.nlos_beta_db),
        nlos_outer_radius=args.nlos_outer_radius,
    )


def _needs_mc(methods: list[str]) -> bool:
    return any(m in _MC_PATTERNS for m in methods)


def _cmd_threshold_curve(args, network: str) -> bytes:
    xs = parse_sweep(args.tau_db)
    cfg = _config_from(args, network, tau=1.0)
    methods = _resolve_methods(args.method, network)
    ctl = _ctl_from(args) if _needs_mc(methods) else None
    curves = [
        build_curve(network, "tau_db", xs, cfg, m, ctl=ctl, workers=args.workers)
        for m in methods
    ]
    return emit_curves(curves, args.format)


def _cmd_nt_sweep(args) -> bytes:
    network = args.network
    xs = parse_sweep(args.n_t)
    cfg = _config_from(args, network, tau=_db_to_linear(args.tau_db), n_t=64)
    methods = _resolve_methods(args.method, network)
    ctl = _ctl_from(args) if _needs_mc(methods) else None
    curves = [
        build_curve(network, "n_t", xs, cfg, m, ctl=ctl, workers=args.workers)
        for m in methods
    ]
    return emit_curves(curves, args.format)


def _cmd_density_sweep(args) -> bytes:
    network = args.network
    xs = parse_sweep(args.lambda_b)
    tau_db = args.tau_db if args.tau_db is not None else (5.0 if network == "adhoc" else 10.0)
    cfg = _config_from(args, network, tau=_db_to_linear(tau_db), lambda_b=float(xs[0]))
    methods = _resolve_methods(args.method, network)
    ctl = _ctl_from(args) if _needs_mc(methods) else None
    metric = Metric(args.metric)
    curves = [
        build_curve(
            network, "lambda_b", xs, cfg, m, ctl=ctl, workers=args.workers, metric=metric
        )
        for m in methods
    ]
    return emit_curves(curves, args.format)


def _cmd_simulate(args) -> bytes:
    network = args.network
    cfg = _config_from(args, network, tau=_db_to_linear(args.tau_db))
    method = "mc_" + args.pattern
    curve = build_curve(
        network,
        "tau_db",
        [args.tau_db],
        cfg,
        method,
        ctl=_ctl_from(args),
        workers=args.workers,
        metric=Metric(args.metric),
    )
    return emit_curves([curve], args.format)


def _cmd_pattern_dump(args) -> bytes:
    geom = ArrayGeometry(n_t=args.n_t, spacing_ratio=args.spacing_ratio)
    x_max = args.x_max if args.x_max is not None else min(0.5, 6.0 / args.n_t)
    xs = np.linspace(0.0, x_max, args.points)
    lines = ["x,gain,pattern"]
    gains = gain_array(_PATTERN_FLAGS[args.pattern], geom, xs)
    for x, g in zip(xs, gains):
        lines.append("%.10g,%.10g,%s" % (x, g, args.pattern))
    return ("\n".join(lines) + "\n").encode()


def _preset_curves(args) -> tuple:
    preset = get_preset(args.name)
    cfg = preset.config
    if args.m is not None:
        cfg = dataclasses.replace(cfg, m=args.m)
    methods = _resolve_methods(args.method, preset.network)
    ctl = (
        SimControl(trials=args.trials, seed=args.seed) if _needs_mc(methods) else None
    )
    curves = [
        build_curve(
            preset.network,
            preset.sweep_name,
            preset.xs,
            cfg,
            m,
            ctl=ctl,
            workers=args.workers,
        )
        for m in methods
    ]
    return preset, curves


def _cmd_preset(args) -> bytes:
    _, curves = _preset_curves(args)
    return emit_curves(curves, args.format)


def _cmd_report(args) -> bytes:
    from . import plots

    preset, curves = _preset_curves(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{preset.name}.csv"
    png_path = out_dir / f"{preset.name}.png"
    csv_path.write_bytes(emit_curves(curves, "csv"))
    plots.render_curves(curves, png_path, title=preset.note)
    return f"wrote {csv_path}\nwrote {png_path}\n".encode()


def _add_output_flags(p) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")


def _add_config_flags(p, *, with_nt: bool = True, with_lambda: bool = True) -> None:
    p.add_argument("--big-r", type=float, default=200.0, help="LOS ball radius, meters")
    if with_lambda:
        p.add_argument("--lambda-b", type=float, default=1e-3, help="density per square meter")
    if with_nt:
        p.add_argument("--n-t", type=int, default=None, help="array size (64 ad hoc, 128 cellular)")
    p.add_argument("--m", type=int, default=3, help="Nakagami fading parameter")
    p.add_argument("--alpha", type=float, default=None, help="path loss exponent (2.2 ad hoc, 2.1 cellular)")
    p.add_argument("--r0", type=float, default=25.0, help="ad hoc link distance, meters")
    p.add_argument("--spacing-ratio", type=float, default=0.25, help="element spacing over wavelength")
    p.add_argument("--p-t", type=float, default=1.0, help="transmit power, watts")
    p.add_argument("--beta-db", type=float, default=-61.4, help="path loss intercept, dB")
    p.add_argument("--sigma2-dbm", type=float, default=-74.0, help="noise power, dBm")


def _add_mc_flags(p) -> None:
    p.add_argument("--trials", type=int, default=500_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=int, default=1, help="simulation worker threads")
    p.add_argument("--include-nlos", action="store_true")
    p.add_argument("--nlos-alpha", type=float, default=4.0)
    p.add_argument("--nlos-beta-db", type=float, default=-72.0)
    p.add_argument("--nlos-outer-radius", type=float, default=None)


def _add_method_flag(p) -> None:
    p.add_argument(
        "--method",
        action="append",
        help="repeatable; analytic_prop1/analytic_lb, analytic_prop2, "
        "analytic_cor2, asymptotic, mc_actual, mc_sinc, mc_cos, mc_flattop",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmwcov",
        description="Coverage analysis for mm-wave networks with large antenna arrays",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, network in (("adhoc-curve", "adhoc"), ("cellular-curve", "cellular")):
        p = sub.add_parser(name, help=f"{network} coverage against the threshold")
        p.add_argument("--tau-db", default="-10:30:2", help="threshold sweep spec, dB")
        _add_config_flags(p)
        _add_method_flag(p)
        _add_mc_flags(p)
        _add_output_flags(p)
        p.set_defaults(handler=lambda a, n=network: _cmd_threshold_curve(a, n))

    p = sub.add_parser("nt-sweep", help="coverage against the array size")
    p.add_argument("--network", choices=("adhoc", "cellular"), required=True)
    p.add_argument("--n-t", default="4:256:x2", help="array size sweep spec")
    p.add_argument("--tau-db", type=float, default=5.0)
    _add_config_flags(p, with_nt=False)
    _add_method_flag(p)
    _add_mc_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_nt_sweep)

    p = sub.add_parser("density-sweep", help="coverage against the density")
    p.add_argument("--network", choices=("adhoc", "cellular"), required=True)
    p.add_argument(
        "--lambda-b", default="1e-6:1e-2:x2.15443469", help="density sweep spec"
    )
    p.add_argument("--tau-db", type=float, default=None, help="threshold, dB")
    p.add_argument("--metric", choices=("sinr", "sir", "snr"), default="sinr")
    _add_config_flags(p, with_lambda=False)
    _add_method_flag(p)
    _add_mc_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_density_sweep)

    p = sub.add_parser("simulate", help="one Monte Carlo coverage estimate")
    p.add_argument("--network", choices=("adhoc", "cellular"), required=True)
    p.add_argument("--tau-db", type=float, default=5.0)
    p.add_argument("--pattern", choices=tuple(_PATTERN_FLAGS), default="actual")
    p.add_argument("--metric", choices=("sinr", "sir", "snr"), default="sinr")
    _add_config_flags(p)
    _add_mc_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("pattern-dump", help="beam pattern samples as CSV")
    p.add_argument("--pattern", choices=tuple(_PATTERN_FLAGS), default="actual")
    p.add_argument("--n-t", type=int, default=64)
    p.add_argument("--spacing-ratio", type=float, default=0.25)
    p.add_argument("--points", type=int, default=513)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(handler=_cmd_pattern_dump)

    p = sub.add_parser("preset", help="run a named figure preset")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--m", type=int, default=None, help="override the fading parameter")
    _add_method_flag(p)
    p.add_argument("--trials", type=int, default=500_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_preset)

    p = sub.add_parser("report", help="render a preset to CSV plus a figure")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--m", type=int, default=None)
    _add_method_flag(p)
    p.add_argument("--trials", type=int, default=500_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(handler=_cmd_report, out=None)

    return parser


# flags whose values may start with a minus sign (sweep specs like
# -10:30:2); argparse only tolerates bare negative numbers, so glue the
# value onto the flag before parsing
_DASH_VALUE_FLAGS = ("--tau-db", "--n-t", "--lambda-b", "--sigma2-dbm", "--beta-db", "--nlos-beta-db")


def _merge_dash_values(argv: list[str]) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if (
            tok in _DASH_VALUE_FLAGS
            and len(nxt) > 1
            and nxt[0] == "-"
            and (nxt[1].isdigit() or nxt[1] == ".")
        ):
            out.append(tok + "=" + nxt)
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _merge_dash_values(list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        payload = args.handler(args)
        if args.out is None:
            sys.stdout.buffer.write(payload)
            sys.stdout.buffer.flush()
        else:
            Path(args.out).write_bytes(payload)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 3
    return 0


def main() -> None:
    sys.exit(run())
