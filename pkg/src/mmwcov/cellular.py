"""Cellular coverage with the half-cosine beam approximation.

The typical user attaches to the nearest transmitter inside the
line-of-sight disk of radius R; coverage averages a matrix-exponential
norm over the serving-distance distribution.  A Jensen-type bound removes
the outer integral, giving a closed form whose first-order behavior is the
array-size law.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .config import CellularConfig
from .errors import ConfigurationError, ConvergenceError, ValidityError
from .kernel import CoeffVector, coverage_from_coeffs
from .specfun import hyp3f2_J, lower_incomplete_gamma

__all__ = [
    "CellularConfig",
    "coeffs_cellular_cos",
    "coverage_cellular",
    "coeffs_jensen",
    "coverage_cellular_lower",
    "asymptotic_outage_cellular",
]

QUAD_TOL = 1e-7
# e^-60 ~ 9e-27: truncating the exponential weight there is far below the
# quadrature tolerance, and keeps the node budget on dense deployments sane.
EXP_CUTOFF = 60.0


def _prefactor(cfg: CellularConfig, k: int) -> float:
    """Radial-series prefactor; negative at k=0 where alpha*k - 2 < 0."""
    log_mag = (
        math.log(2.0)
        + 0.5 * math.log(math.pi)
        + gammaln(k + 0.5)
        + gammaln(cfg.m + k)
        - 2.0 * gammaln(k + 1.0)
        - gammaln(cfg.m)
    )
    mag = math.exp(log_mag) * cfg.lambda_b * cfg.tau**k / cfg.spacing_ratio
    return mag / (cfg.alpha * k - 2.0)


def coeffs_cellular_cos(cfg: CellularConfig, r: float) -> CoeffVector:
    """Coefficient vector at squared serving distance r (per-antenna scale x n_t).

    The two beam-average terms share an indicator correction at k=0 so that
    the bracket vanishes at both endpoints: at r=0 the serving link is
    interference-free, at r=R^2 the interference terms cancel and only the
    noise part survives.
    """
    if not 0.0 <= r <= cfg.big_r**2:
        raise ConfigurationError(
            f"squared serving distance {r} outside [0, R^2={cfg.big_r**2}]"
        )
    half_alpha = 0.5 * cfg.alpha
    s = cfg.m * cfg.tau * r**half_alpha
    if cfg.tau == 0.0 or r == 0.0:
        return CoeffVector(c=np.zeros(cfg.m), s=s, m=cfg.m)

    delta = cfg.delta
    x_r = -cfg.tau * r**half_alpha / cfg.big_r**cfg.alpha
    noise = cfg.m * cfg.tau * cfg.noise_scale * r**half_alpha
    c = np.zeros(cfg.m)
    for k in range(cfg.m):
        ind = 1.0 if k == 0 else 0.0
        bracket = (hyp3f2_J(k, cfg.m, delta, -cfg.tau) - ind) * r - (
            hyp3f2_J(k, cfg.m, delta, x_r) - ind
        ) * cfg.big_r ** (2.0 - cfg.alpha * k) * r ** (half_alpha * k)
        c[k] = _prefactor(cfg, k) * bracket
        if k <= 1:
            c[k] += (-1.0) ** (k + 1) * noise
    return CoeffVector(c=c, s=s, m=cfg.m)


def coverage_cellular(cfg: CellularConfig) -> float:
    """Serving-distance average of the coefficient-matrix exponential norm.

    Integrates on v = pi*lambda_b*r so the exponential weight is unit-rate;
    the missing mass beyond r = R^2 is the probability of having no
    line-of-sight transmitter at all.
    """
    a = math.pi * cfg.lambda_b * cfg.big_r**2
    upper = min(a, EXP_CUTOFF)
    scale = 1.0 / (math.pi * cfg.lambda_b)

    def integrand(v: float) -> float:
        cv = coeffs_cellular_cos(cfg, v * scale)
        return math.exp(-v) * coverage_from_coeffs(
            CoeffVector(c=cv.c / cfg.n_t, s=cv.s, m=cfg.m)
        )

    pts = [1.0] if upper > 1.0 else None
    val, err = quad(
        integrand, 0.0, upper, points=pts, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200
    )
    if err > 1e-5 * max(1.0, abs(val)):
        raise ConvergenceError(
            f"serving-distance quadrature error estimate {err:.2e} too large"
        )
    return val


def coeffs_jensen(cfg: CellularConfig) -> np.ndarray:
    """Serving-distance-averaged coefficients d_k (closed y-part + one quadrature).

    Identity behind the closed part: averaging the bracket of
    coeffs_cellular_cos against the nearest-distance density folds both
    indicator corrections into the k=0 term of y.
    """
    a = math.pi * cfg.lambda_b * cfg.big_r**2
    ea = math.exp(-a)
    d = np.zeros(cfg.m)
    if cfg.tau == 0.0:
        return d
    delta = cfg.delta
    half_alpha = 0.5 * cfg.alpha
    upper = min(a, EXP_CUTOFF)
    pts = [1.0] if upper > 1.0 else None
    pi_lam = math.pi * cfg.lambda_b
    noise = (
        cfg.m
        * cfg.tau
        * cfg.noise_scale
        * lower_incomplete_gamma(1.0 + half_alpha, a)
        / pi_lam**half_alpha
    )
    for k in range(cfg.m):
        y = hyp3f2_J(k, cfg.m, delta, -cfg.tau) * (1.0 - ea * (1.0 + a))
        if k == 0:
            y += a - 1.0 + ea

        def f(v: float, k: int = k) -> float:
            x = -cfg.tau * (v / a) ** half_alpha
            return math.exp(-v) * v ** (half_alpha * k) * hyp3f2_J(k, cfg.m, delta, x)

        integral, err = quad(
            f, 0.0, upper, points=pts, epsabs=1e-12, epsrel=1e-10, limit=200
        )
        if err > 1e-6 * max(1.0, abs(integral)):
            raise ConvergenceError(
                f"averaged-coefficient quadrature error estimate {err:.2e} too large"
            )
        term = pi_lam ** (1.0 - half_alpha * k) * cfg.big_r ** (
            2.0 - cfg.alpha * k
        ) * integral
        d[k] = _prefactor(cfg, k) / pi_lam * (y - term)
        if k <= 1:
            d[k] += (-1.0) ** (k + 1) * noise
    return d


def coverage_cellular_lower(cfg: CellularConfig) -> float:
    """Jensen lower bound: closed in the averaged coefficients."""
    a = math.pi * cfg.lambda_b * cfg.big_r**2
    q = -math.expm1(-a)
    d = coeffs_jensen(cfg)
    return q * coverage_from_coeffs(CoeffVector(c=d / (cfg.n_t * q), s=0.0, m=cfg.m))


def asymptotic_outage_cellular(cfg: CellularConfig) -> float:
    """Large-array outage mu/n_t plus the no-LOS floor e^{-pi lambda_b R^2}."""
    d = coeffs_jensen(cfg)
    mu = -float(d.sum())
    if mu <= 0.0:
        raise ValidityError(f"asymptotic outage slope must be positive, got {mu}")
    return mu / cfg.n_t + math.exp(-math.pi * cfg.lambda_b * cfg.big_r**2)
