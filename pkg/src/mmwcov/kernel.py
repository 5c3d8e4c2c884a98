"""Coverage kernel: coefficient vectors, the lower-triangular Toeplitz
matrix exponential, and coefficients for an arbitrary interferer gain
distribution.

Coverage with Nakagami-M fading reduces to the first column of exp(C_M)
where C_M is the M x M lower-triangular Toeplitz matrix with first column
(c_0, ..., c_{M-1}).  The recursion

    x_0 = exp(c_0),   x_n = sum_{i<n} ((n-i)/n) c_{n-i} x_i

produces that column in O(M^2) without forming the matrix.  The general
coefficients come from mixed moments of the composite interferer gain
g = rho^2 * G(pattern), rho^2 ~ Gamma(M, 1/M), against generalized
exponential integrals.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special

from .antenna import ArrayGeometry, PatternKind, flat_top_params, gain_array
from .errors import ConfigurationError, ValidityError
from .specfun import _ep_batch

__all__ = [
    "CoeffVector",
    "GainDistribution",
    "zero_gain_distribution",
    "ltt_exp_first_column",
    "coverage_from_coeffs",
    "nilpotent_norm_coeffs",
    "coeffs_general",
]

_NEG_TOL = 1e-9


@dataclass(frozen=True)
class CoeffVector:
    """First column (c_0 ... c_{M-1}) of the Toeplitz exponent matrix."""

    c: np.ndarray
    s: float
    m: int

    def __post_init__(self) -> None:
        c = np.asarray(self.c, dtype=float)
        object.__setattr__(self, "c", c)
        if self.m < 1:
            raise ConfigurationError("m must be >= 1")
        if c.shape != (self.m,):
            raise ConfigurationError("coefficient vector must have length m")
        if not np.all(np.isfinite(c)):
            raise ConfigurationError("coefficients must be finite")
        if self.s < 0.0:
            raise ConfigurationError("s must be >= 0")
        if c[0] > 0.0:
            raise ConfigurationError("c_0 is a log-Laplace value and must be <= 0")
        if self.m > 1 and np.min(c[1:]) < -_NEG_TOL:
            raise ConfigurationError("c_k for k >= 1 must be nonnegative")


def ltt_exp_first_column(cv: CoeffVector) -> np.ndarray:
    """First column of exp(C_M) by the exact recursion."""
    c = cv.c
    x = np.empty(cv.m)
    x[0] = math.exp(c[0])
    for n in range(1, cv.m):
        acc = 0.0
        for i in range(n):
            acc += (n - i) * c[n - i] * x[i]
        x[n] = acc / n
    return x


def coverage_from_coeffs(cv: CoeffVector) -> float:
    """Coverage probability ||exp(C_M)||_1 = sum of the first column."""
    x = ltt_exp_first_column(cv)
    p = float(np.sum(np.abs(x)))
    if p > 1.0:
        overshoot = p - 1.0
        if overshoot > 1e-6:
            raise ValidityError(
                f"coverage overshoots 1 by {overshoot:.3e}; coefficient series truncated too early"
            )
        warnings.warn(
            f"coverage clamped from 1 + {overshoot:.3e}", RuntimeWarning, stacklevel=2
        )
        return 1.0
    return max(p, 0.0)


def nilpotent_norm_coeffs(cv: CoeffVector) -> np.ndarray:
    """beta_n = ||(C_M - c_0 I)^n||_1 / n! for n = 1 ... M-1.

    The strictly lower part is Toeplitz with first column (0, c_1, ...);
    its n-th power is the n-fold truncated self-convolution, nilpotent at
    n = M by construction.
    """
    if cv.m < 2:
        raise ConfigurationError("nilpotent coefficients need m >= 2")
    v = np.concatenate(([0.0], cv.c[1:]))
    col = np.zeros(cv.m)
    col[0] = 1.0
    betas = np.empty(cv.m - 1)
    fact = 1.0
    for n in range(1, cv.m):
        col = np.convolve(col, v)[: cv.m]
        fact *= n
        betas[n - 1] = np.sum(np.abs(col)) / fact
    return betas


class GainDistribution:
    """Moment provider for the composite interferer gain.

    g = rho^2 * G(kind, spacing_ratio * theta) with rho^2 ~ Gamma(m, 1/m)
    and theta ~ U[-1, 1] (only [0, 1] is integrated; every pattern is even).
    The angle rule is composite Gauss-Legendre split at the pattern nulls;
    the fading rule is generalized Gauss-Laguerre, exact against the gamma
    weight for polynomial integrands up to degree 2*order - 1.  The cosine
    pattern's dead zone beyond the main lobe enters as an exact point mass
    at g = 0.
    """

    def __init__(
        self,
        kind: PatternKind,
        geometry: ArrayGeometry,
        m: int,
        fading_order: int = 40,
        angle_nodes: int = 16,
    ) -> None:
        if m < 1:
            raise ConfigurationError("m must be >= 1")
        self.kind = kind
        self.geometry = geometry
        self.m = m

        edges = self._segment_edges()
        nodes, wts = special.roots_legendre(angle_nodes)
        theta = []
        weight = []
        for a, b in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            theta.append(mid + half * nodes)
            weight.append(half * wts)
        theta = np.concatenate(theta)
        self._angle_w = np.concatenate(weight)
        self._gain = gain_array(kind, geometry, geometry.spacing_ratio * theta)
        self.zero_mass = 1.0 - edges[-1]

        xg, wg = special.roots_genlaguerre(fading_order, m - 1)
        self._rho2 = xg / m
        self._fade_w = wg / special.gamma(m)
        # composite gain values and joint weights, flattened
        self._g = np.outer(self._rho2, self._gain).ravel()
        self._w = np.outer(self._fade_w, self._angle_w).ravel()

    def _segment_edges(self) -> np.ndarray:
        g = self.geometry
        span = g.n_t * g.spacing_ratio
        if self.kind is PatternKind.Cosine:
            return np.array([0.0, min(1.0, 1.0 / span)])
        if self.kind is PatternKind.FlatTop:
            hpbw, _ = flat_top_params(g)
            b = hpbw / 2.0 / g.spacing_ratio
            return np.array([0.0, b, 1.0]) if b < 1.0 else np.array([0.0, 1.0])
        # actual / sinc: break at the nulls theta = j / span
        step = 1.0 / span
        edges = list(np.arange(0.0, 1.0, step))
        if 1.0 - edges[-1] > 1e-12:
            edges.append(1.0)
        else:
            edges[-1] = 1.0
        return np.array(edges)

    def plain_moment(self, p: float) -> float:
        """E[g^p]; the fading factor is Gamma(m+p) / (Gamma(m) m^p)."""
        if p < 0.0:
            raise ConfigurationError("plain_moment requires p >= 0")
        if p == 0.0:
            return 1.0
        fade = special.gamma(self.m + p) / (special.gamma(self.m) * self.m**p)
        return float(fade * (self._angle_w @ self._gain**p))

    def mixed_moment(self, k: int, q: float, a: float) -> float:
        """E[g^k E_q(a g)] for integer k >= 0 and a >= 0."""
        if k < 0:
            raise ConfigurationError("mixed_moment requires k >= 0")
        if a < 0.0:
            raise ConfigurationError("mixed_moment requires a >= 0")
        if a == 0.0:
            if q <= 1.0:
                raise ValidityError("E_q(0) diverges for q <= 1")
            return self.plain_moment(float(k)) / (q - 1.0)
        vals = self._w * self._g**k * _ep_batch(q, a * self._g)
        total = float(np.sum(vals))
        if self.zero_mass > 0.0 and k == 0:
            if q <= 1.0:
                raise ValidityError("E_q(0) diverges for q <= 1")
            total += self.zero_mass / (q - 1.0)
        return total


class _ZeroGain:
    """Degenerate distribution g = 0: no interference."""

    zero_mass = 1.0

    def plain_moment(self, p: float) -> float:
        return 1.0 if p == 0.0 else 0.0

    def mixed_moment(self, k: int, q: float, a: float) -> float:
        if k >= 1:
            return 0.0
        if q <= 1.0:
            raise ValidityError("E_q(0) diverges for q <= 1")
        return 1.0 / (q - 1.0)


def zero_gain_distribution(m: int) -> _ZeroGain:
    return _ZeroGain()


def coeffs_general(
    gd,
    s: float,
    kappa: float,
    big_r: float,
    lambda_b: float,
    sigma_n2: float,
    alpha: float,
    m: int,
) -> CoeffVector:
    """Coefficients c_0 ... c_{m-1} for an arbitrary gain distribution.

    c_0 is the log-Laplace value of noise plus ring interference between
    radii kappa and big_r; higher coefficients are its scaled derivatives,
    expressed through the mixed moments E[g^k E_q(a g)].  The kappa -> 0
    limit of each kappa term is exactly 0 and is hard-coded to avoid a
    0 * inf evaluation.
    """
    if not 0.0 <= kappa < big_r:
        raise ConfigurationError("need 0 <= kappa < big_r")
    if not 2.0 < alpha < 3.0:
        raise ConfigurationError("alpha must lie in (2, 3)")
    if lambda_b <= 0.0:
        raise ConfigurationError("lambda_b must be positive")
    if sigma_n2 < 0.0:
        raise ConfigurationError("sigma_n2 must be nonnegative")
    if m < 1:
        raise ConfigurationError("m must be >= 1")
    if s < 0.0:
        raise ConfigurationError("s must be >= 0")
    if s == 0.0:
        return CoeffVector(c=np.zeros(m), s=0.0, m=m)

    delta = 2.0 / alpha
    a_r = s * big_r ** (-alpha)
    a_k = s * kappa ** (-alpha) if kappa > 0.0 else None

    # c_0: noise part plus the ring log-Laplace value
    ring = big_r**2 - kappa**2
    ring -= delta * big_r**2 * gd.mixed_moment(0, 1.0 + delta, a_r)
    if a_k is not None:
        ring += delta * kappa**2 * gd.mixed_moment(0, 1.0 + delta, a_k)
    c = np.empty(m)
    c[0] = -s * sigma_n2 - math.pi * lambda_b * ring

    s_pow = 1.0
    kfact = 1.0
    for k in range(1, m):
        s_pow *= s
        kfact *= k
        term = big_r ** (2.0 - alpha * k) * gd.mixed_moment(k, 1.0 + delta - k, a_r)
        if a_k is not None:
            term -= kappa ** (2.0 - alpha * k) * gd.mixed_moment(
                k, 1.0 + delta - k, a_k
            )
        c[k] = math.pi * delta * lambda_b * s_pow / kfact * term
        if k == 1:
            c[1] += s * sigma_n2
    return CoeffVector(c=c, s=s, m=m)
