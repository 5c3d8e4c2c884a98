"""Uniform linear array gain patterns and interferer-gain sampling.

The normalized power patterns are parameterized by the beam-domain variable
x; a sampled interferer at uniform angle-cosine u in [-1, 1] sees the gain at
x = spacing_ratio * u.  All patterns peak at 1 on boresight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "PatternKind",
    "ArrayGeometry",
    "gain",
    "gain_array",
    "flat_top_params",
    "sample_interferer_gain",
]

_SING_TOL = 1e-9


class PatternKind(Enum):
    Actual = "actual"
    Sinc = "sinc"
    Cosine = "cos"
    FlatTop = "flattop"


@dataclass(frozen=True)
class ArrayGeometry:
    """Transmit array size and element spacing in wavelengths."""

    n_t: int
    spacing_ratio: float = 0.25

    def __post_init__(self) -> None:
        if self.n_t < 1:
            raise ConfigurationError("n_t must be >= 1")
        if not 0.0 < self.spacing_ratio <= 0.5:
            raise ConfigurationError(
                "spacing_ratio must lie in (0, 0.5]; larger spacing creates grating lobes"
            )


def _actual(n_t: int, x: float) -> float:
    s = math.sin(math.pi * x)
    if abs(s) < _SING_TOL:
        return 1.0
    num = math.sin(math.pi * n_t * x)
    return (num * num) / (n_t * n_t * s * s)


def gain(kind: PatternKind, geometry: ArrayGeometry, x: float) -> float:
    """Normalized power gain of the chosen pattern at beam coordinate x."""
    n_t = geometry.n_t
    if kind is PatternKind.Actual:
        return _actual(n_t, x)
    if kind is PatternKind.Sinc:
        t = math.pi * n_t * x
        if abs(t) < _SING_TOL:
            return 1.0
        s = math.sin(t) / t
        return s * s
    if kind is PatternKind.Cosine:
        if abs(x) <= 1.0 / n_t:
            c = math.cos(math.pi * n_t * x / 2.0)
            return c * c
        return 0.0
    hpbw, side = flat_top_params(geometry)
    return 1.0 if abs(x) <= hpbw / 2.0 else side


def gain_array(kind: PatternKind, geometry: ArrayGeometry, x: np.ndarray) -> np.ndarray:
    """Vectorized gain; identical semantics to gain()."""
    x = np.asarray(x, dtype=float)
    n_t = geometry.n_t
    if kind is PatternKind.Actual:
        s = np.sin(np.pi * x)
        safe = np.abs(s) >= _SING_TOL
        num = np.sin(np.pi * n_t * x)
        out = np.ones_like(x)
        np.divide(num * num, (n_t * s) ** 2, out=out, where=safe)
        return out
    if kind is PatternKind.Sinc:
        return np.square(np.sinc(n_t * x))
    if kind is PatternKind.Cosine:
        inside = np.abs(x) <= 1.0 / n_t
        return np.where(inside, np.cos(np.pi * n_t * x / 2.0) ** 2, 0.0)
    hpbw, side = flat_top_params(geometry)
    return np.where(np.abs(x) <= hpbw / 2.0, 1.0, side)


@lru_cache(maxsize=512)
def _flat_top_cached(n_t: int) -> tuple[float, float]:
    # half-power point: the main lobe of the Fejer-normalized pattern is
    # strictly decreasing on (0, 1/n_t), so bisection is safe
    lo, hi = 0.0, 1.0 / n_t
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _actual(n_t, mid) > 0.5:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 / n_t:
            break
    hpbw = lo + hi

    # first side lobe: maximize on (1/n_t, 2/n_t) by golden section
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = 1.0 / n_t, 2.0 / n_t
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = _actual(n_t, c), _actual(n_t, d)
    for _ in range(120):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = _actual(n_t, c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = _actual(n_t, d)
        if b - a < 1e-13 / n_t:
            break
    side = _actual(n_t, 0.5 * (a + b))
    return hpbw, side


def flat_top_params(geometry: ArrayGeometry) -> tuple[float, float]:
    """(half-power beamwidth, side-lobe level) of the flat-top approximation."""
    if geometry.n_t < 2:
        raise ConfigurationError("flat-top parameters need n_t >= 2")
    return _flat_top_cached(geometry.n_t)


def sample_interferer_gain(kind: PatternKind, geometry: ArrayGeometry, u: float) -> float:
    """Gain seen from a uniform angle variate u in [-1, 1]."""
    return gain(kind, geometry, geometry.spacing_ratio * u)
