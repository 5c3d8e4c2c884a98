"""Coverage curve container and CSV/JSON serialization.

A curve stream serializes as UTF-8 text: leading comment lines carry each
curve's meta entries as `# <method>.<key>=<value>` (the method tag is
unique within a stream), then the fixed header `sweep,x,p,stderr,method,
seed` and one row per point with `%.10g` numerics.  Parsing an emitted
stream reproduces the curves exactly provided their floats survive the
10-significant-digit formatting; stderr and seed stay empty on analytic
rows.  JSON mirrors the same fields verbatim.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .errors import ConfigurationError

__all__ = [
    "METHODS",
    "SWEEPS",
    "CurvePoint",
    "CoverageCurve",
    "emit_curve",
    "emit_curves",
    "parse_curve",
    "parse_curves",
]

METHODS = (
    "analytic_prop1",
    "analytic_prop2",
    "analytic_cor2",
    "asymptotic",
    "mc_actual",
    "mc_sinc",
    "mc_cos",
    "mc_flattop",
)
SWEEPS = ("tau_db", "n_t", "lambda_b")
_HEADER = ("sweep", "x", "p", "stderr", "method", "seed")


def _fmt(value: float) -> str:
    return "%.10g" % value


@dataclass(frozen=True)
class CurvePoint:
    x: float
    p: float
    stderr: float | None = None


@dataclass(frozen=True)
class CoverageCurve:
    """One method's coverage values along a single sweep variable."""

    sweep_name: str
    points: tuple[CurvePoint, ...]
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.sweep_name not in SWEEPS:
            raise ConfigurationError(f"unknown sweep variable {self.sweep_name!r}")
        object.__setattr__(self, "points", tuple(self.points))
        method = self.meta.get("method")
        if method not in METHODS:
            raise ConfigurationError(f"meta must carry a known method tag, got {method!r}")
        xs = [pt.x for pt in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ConfigurationError("sweep values must be strictly increasing")
        for pt in self.points:
            if not 0.0 <= pt.p <= 1.0:
                raise ConfigurationError(f"coverage {pt.p} outside [0, 1]")
            if pt.stderr is not None and pt.stderr < 0.0:
                raise ConfigurationError("stderr must be nonnegative")
        for key, value in self.meta.items():
            if any(c in key for c in "=\n\r.") or any(c in value for c in "\n\r"):
                raise ConfigurationError(f"meta entry {key!r} not serializable")

    @property
    def method(self) -> str:
        return self.meta["method"]


def emit_curves(curves: list[CoverageCurve], fmt: str = "csv") -> bytes:
    """Serialize curves; method tags must be unique within the stream."""
    methods = [c.method for c in curves]
    if len(set(methods)) != len(methods):
        raise ConfigurationError("curves in one stream need distinct method tags")
    if fmt == "json":
        payload = [
            {
                "sweep_name": c.sweep_name,
                "meta": c.meta,
                "points": [
                    {"x": pt.x, "p": pt.p, "stderr": pt.stderr} for pt in c.points
                ],
            }
            for c in curves
        ]
        return (json.dumps({"curves": payload}, indent=2) + "\n").encode()
    if fmt != "csv":
        raise ConfigurationError(f"unknown output format {fmt!r}")

    buf = io.StringIO()
    for curve in curves:
        buf.write(f"# {curve.method}.sweep_name={curve.sweep_name}\n")
        for key in sorted(k for k in curve.meta if k != "method"):
            buf.write(f"# {curve.method}.{key}={curve.meta[key]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_HEADER)
    for curve in curves:
        seed = curve.meta.get("seed", "")
        for pt in curve.points:
            err = "" if pt.stderr is None else _fmt(pt.stderr)
            writer.writerow(
                [curve.sweep_name, _fmt(pt.x), _fmt(pt.p), err, curve.method, seed]
            )
    return buf.getvalue().encode()


def emit_curve(curve: CoverageCurve, fmt: str = "csv") -> bytes:
    return emit_curves([curve], fmt)


def parse_curves(data: bytes, fmt: str | None = None) -> list[CoverageCurve]:
    """Inverse of emit_curves for both serialization formats.

    With fmt=None the format is sniffed: a stream opening with "{" is JSON,
    anything else CSV.
    """
    text = data.decode()
    if fmt is None:
        fmt = "json" if text.lstrip()[:1] == "{" else "csv"
    if fmt == "json":
        raw = json.loads(text)["curves"]
        return [
            CoverageCurve(
                sweep_name=c["sweep_name"],
                points=tuple(
                    CurvePoint(x=p["x"], p=p["p"], stderr=p["stderr"])
                    for p in c["points"]
                ),
                meta=dict(c["meta"]),
            )
            for c in raw
        ]
    if fmt != "csv":
        raise ConfigurationError(f"unknown input format {fmt!r}")

    metas: dict[str, dict[str, str]] = {}
    sweeps: dict[str, str] = {}
    order: list[str] = []
    rows: dict[str, list[CurvePoint]] = {}
    header_seen = False
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            tagged, _, value = line[1:].strip().partition("=")
            method, _, key = tagged.partition(".")
            if method not in order:
                order.append(method)
                metas[method] = {"method": method}
            if key == "sweep_name":
                sweeps[method] = value
            else:
                metas[method][key] = value
            continue
        cells = next(csv.reader([line]))
        if not header_seen:
            if tuple(cells) != _HEADER:
                raise ConfigurationError("unrecognized curve header")
            header_seen = True
            continue
        sweep, x, p, err, method, seed = cells
        if method not in order:
            order.append(method)
            metas[method] = {"method": method}
        sweeps.setdefault(method, sweep)
        if seed:
            metas[method].setdefault("seed", seed)
        rows.setdefault(method, []).append(
            CurvePoint(x=float(x), p=float(p), stderr=float(err) if err else None)
        )
    if not header_seen:
        raise ConfigurationError("no curve header found")
    return [
        CoverageCurve(
            sweep_name=sweeps[m], points=tuple(rows.get(m, ())), meta=metas[m]
        )
        for m in order
    ]


def parse_curve(data: bytes, fmt: str | None = None) -> CoverageCurve:
    curves = parse_curves(data, fmt)
    if len(curves) != 1:
        raise ConfigurationError(f"expected one curve, found {len(curves)}")
    return curves[0]
