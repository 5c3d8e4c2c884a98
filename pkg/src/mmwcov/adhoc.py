"""Ad hoc network coverage with the sinc antenna pattern.

The coefficient vector combines an Eulerian-number series in the threshold,
a fractional-moment term built on the sinc-power constant xi, and a noise
term.  Coverage is the Toeplitz-exponential norm evaluated at matrix
argument C_M / N_t; the 1/N_t scaling is applied here, while the stored
coefficients keep the array-size-free normalization so that the array-size
law can reuse them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special

from .config import AdHocConfig
from .errors import ConfigurationError, ConvergenceError, ValidityError
from .kernel import CoeffVector, coverage_from_coeffs, nilpotent_norm_coeffs
from .specfun import eulerian, falling_factorial, xi

__all__ = [
    "AdHocConfig",
    "SeriesControl",
    "coeffs_adhoc_sinc",
    "coverage_adhoc",
    "coverage_poly_form",
    "asymptotic_outage_adhoc",
]


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the threshold series."""

    max_terms: int = 40
    stop_rel: float = 1e-12

    def __post_init__(self) -> None:
        if self.max_terms < 5:
            raise ConfigurationError("max_terms must be >= 5")
        if self.stop_rel <= 0.0:
            raise ConfigurationError("stop_rel must be positive")


def _series_term_rational(p: int, k: int, m: int) -> float:
    # <2p-1, p-1> Gamma(M+p) / ((2p-1)! (p-k)! Gamma(M)), exact then floated
    num = eulerian(2 * p - 1, p - 1) * math.factorial(m + p - 1)
    den = math.factorial(2 * p - 1) * math.factorial(p - k) * math.factorial(m - 1)
    return float(Fraction(num, den))


def coeffs_adhoc_sinc(cfg: AdHocConfig, ctl: SeriesControl = SeriesControl()) -> CoeffVector:
    """Coefficient vector c_0 ... c_{M-1}; matrix argument is C_M / N_t.

    The p-series has term ratio tau (r_0/R)^alpha, which must be < 1.
    """
    ratio = cfg.tau * (cfg.r_0 / cfg.big_r) ** cfg.alpha
    if ratio >= 1.0:
        raise ConfigurationError(
            f"threshold series diverges: tau (r_0/R)^alpha = {ratio:.4g} >= 1"
        )
    m = cfg.m
    s = m * cfg.tau * cfg.r_0**cfg.alpha
    if cfg.tau == 0.0:
        return CoeffVector(c=np.zeros(m), s=0.0, m=m)

    delta = cfg.delta
    lam_over_d = 1.0 / cfg.spacing_ratio
    series_pref = math.pi * cfg.big_r**2 * cfg.lambda_b * lam_over_d / cfg.alpha
    frac_term = (
        delta
        * cfg.lambda_b
        * lam_over_d
        * special.gamma(-delta)
        * special.gamma(m + delta)
        / special.gamma(m)
        * cfg.tau**delta
        * cfg.r_0**2
        * xi(cfg.alpha)
    )
    noise = cfg.tau * m * cfg.r_0**cfg.alpha * cfg.noise_scale

    c = np.empty(m)
    for k in range(m):
        acc = 0.0
        converged = False
        sign_pow = (-ratio) ** max(1, k)
        for p in range(max(1, k), max(1, k) + ctl.max_terms):
            term = sign_pow * _series_term_rational(p, k, m) / (p - delta)
            acc += term
            sign_pow *= -ratio
            if abs(term) < ctl.stop_rel * max(abs(acc), 1e-300):
                converged = True
                break
        if not converged:
            raise ConvergenceError(
                f"threshold series for c_{k} did not converge within {ctl.max_terms} terms"
            )
        bracket = series_pref * acc
        bracket -= frac_term * falling_factorial(delta, k)
        if k <= 1:
            bracket += noise
        c[k] = bracket * (-1.0) ** (k + 1) / math.factorial(k)
    return CoeffVector(c=c, s=s, m=m)


def _scaled(cv: CoeffVector, n_t: int) -> CoeffVector:
    return CoeffVector(c=cv.c / n_t, s=cv.s, m=cv.m)


def coverage_adhoc(cfg: AdHocConfig, ctl: SeriesControl = SeriesControl()) -> float:
    """Analytic coverage (tight lower bound): ||exp(C_M / N_t)||_1."""
    cv = coeffs_adhoc_sinc(cfg, ctl)
    return coverage_from_coeffs(_scaled(cv, cfg.n_t))


def coverage_poly_form(
    cfg: AdHocConfig, ctl: SeriesControl = SeriesControl()
) -> tuple[float, np.ndarray]:
    """(c_0, betas) of the factored form e^(c_0 t) (1 + sum_n beta_n t^n).

    Evaluated at t = 1/N_t this reproduces coverage_adhoc exactly; it exposes
    coverage as a product of an exponential and a polynomial in the inverse
    array size.
    """
    cv = coeffs_adhoc_sinc(cfg, ctl)
    if cv.m == 1:
        return float(cv.c[0]), np.empty(0)
    return float(cv.c[0]), nilpotent_norm_coeffs(cv)


def asymptotic_outage_adhoc(cfg: AdHocConfig, ctl: SeriesControl = SeriesControl()) -> float:
    """Leading outage term mu / N_t for large arrays, mu = -sum_k c_k."""
    cv = coeffs_adhoc_sinc(cfg, ctl)
    mu = -float(np.sum(cv.c))
    if mu <= 0.0:
        raise ValidityError(f"asymptotic slope mu = {mu:.4g} must be positive")
    return mu / cfg.n_t
