"""Independent reference implementations used only by the test suite.

Production code never imports this module.  Everything here either runs at
high precision (mpmath) or follows a derivation route different from the
production one, so agreement is meaningful.
"""
from __future__ import annotations

import math

import mpmath as mp
import numpy as np
from scipy import integrate
from scipy.linalg import expm
from scipy.special import gamma as _gamma
from scipy.special import roots_jacobi, roots_legendre, zeta

mp.mp.dps = 30


def ref_expint(p: float, z: float) -> float:
    """E_p(z) at 30 digits via mpmath."""
    return float(mp.expint(mp.mpf(p), mp.mpf(z)))


def ref_lower_gamma_series(s: float, x: float, terms: int = 200) -> float:
    """gamma(s, x) = x^s e^-x sum_n x^n / (s (s+1) ... (s+n))."""
    s_, x_ = mp.mpf(s), mp.mpf(x)
    if x_ == 0:
        return 0.0
    acc = mp.mpf(0)
    den = s_
    term = mp.mpf(1) / den
    for n in range(terms):
        acc += term
        den += 1
        term = term * x_ / den
    return float(x_**s_ * mp.e ** (-x_) * acc)


def ref_hyp2f1(a: float, b: float, c: float, z: float) -> float:
    return float(mp.hyp2f1(mp.mpf(a), mp.mpf(b), mp.mpf(c), mp.mpf(z)))


def eulerian_recurrence(n_max: int) -> list[list[int]]:
    """Triangle of Eulerian numbers from <n,k> = (k+1)<n-1,k> + (n-k)<n-1,k-1>."""
    rows = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        row = []
        for k in range(n):
            a = (k + 1) * (prev[k] if k < len(prev) else 0)
            b = (n - k) * (prev[k - 1] if 0 <= k - 1 < len(prev) else 0)
            row.append(a + b)
        rows.append(row)
    return rows


def sinc_power_quadrature(p: int, periods: int = 64) -> float:
    """int_0^inf (sin x / x)^(2p) dx by per-period quadrature + zeta tail."""
    q = 2 * p
    head = 0.0
    for n in range(periods):
        v, _ = integrate.quad(
            lambda x: (math.sin(x) / x) ** q if x > 0 else 1.0,
            n * math.pi,
            (n + 1) * math.pi,
            epsabs=1e-13,
        )
        head += v
    c0 = math.sqrt(math.pi) * _gamma((q + 1) / 2.0) / _gamma(q / 2.0 + 1.0)
    c2, _ = integrate.quad(
        lambda u: u * u * math.cos(u) ** q, -math.pi / 2.0, math.pi / 2.0
    )
    n0 = periods + 0.5
    tail = c0 * math.pi ** (-q) * zeta(q, n0)
    tail += 0.5 * q * (q + 1.0) * c2 * math.pi ** (-q - 2.0) * zeta(q + 2.0, n0)
    return head + tail


def xi_mp(alpha: float, periods: int = 128) -> float:
    """High-precision xi(alpha) with a three-term midpoint tail expansion."""
    q = mp.mpf(4) / mp.mpf(alpha)
    head = mp.mpf(0)
    for n in range(periods):
        head += mp.quad(
            lambda x: (abs(mp.sin(x)) / x) ** q if x > 0 else mp.mpf(1),
            [n * mp.pi, (n + 1) * mp.pi],
        )
    half = mp.pi / 2
    c0 = mp.quad(lambda u: mp.cos(u) ** q, [-half, half])
    c2 = mp.quad(lambda u: u**2 * mp.cos(u) ** q, [-half, half])
    c4 = mp.quad(lambda u: u**4 * mp.cos(u) ** q, [-half, half])
    n0 = periods + mp.mpf(1) / 2
    tail = c0 * mp.pi ** (-q) * mp.zeta(q, n0)
    tail += q * (q + 1) / 2 * c2 * mp.pi ** (-q - 2) * mp.zeta(q + 2, n0)
    tail += (
        q * (q + 1) * (q + 2) * (q + 3) / 24 * c4 * mp.pi ** (-q - 4) * mp.zeta(q + 4, n0)
    )
    return float(head + tail)


def j_series_mp(k: int, big_m: int, delta: float, x: float, terms: int = 600) -> float:
    """Direct 3F2 partial sums at high precision; converges for |x| < 1."""
    d = mp.mpf(delta)
    a1, a2, a3 = k + mp.mpf(1) / 2, k - d, k + big_m
    b1, b2 = mp.mpf(k + 1), k + 1 - d
    s = mp.mpf(0)
    t = mp.mpf(1)
    for n in range(terms):
        s += t
        t *= (a1 + n) * (a2 + n) * (a3 + n) / ((b1 + n) * (b2 + n) * (n + 1)) * x
    return float(s)


def j_quadrature_2d(
    k: int, big_m: int, delta: float, x: float, nw: int = 240, nu: int = 240
) -> float:
    """J_k(x) from the gamma-fading x angle expectation it encodes.

    Interchanging the defining Euler integral with the fading expectation
    reduces J_k to an elementary double integral over the unit square (w) and
    the half-period angle (u):

      k >= 1: J_k = (k-delta)/Z_k *
                    int w^(k-delta-1) cos^(2k)(u/2) (1 - x w cos^2(u/2))^-(M+k)
      k == 0: J_0 = 1 - delta/pi *
                    int w^(-delta-1) [(1 - x w cos^2(u/2))^-M - 1]

    with Z_k = sqrt(pi) Gamma(k+1/2) / Gamma(k+1).  Gauss-Jacobi absorbs the
    w-weight; Gauss-Legendre handles u.  Valid for every x <= 0.
    """
    uu, wu = roots_legendre(nu)
    u = 0.5 * math.pi * (uu + 1.0)
    wu = wu * 0.5 * math.pi
    c2 = np.cos(u / 2.0) ** 2
    if k >= 1:
        uj, wj = roots_jacobi(nw, 0.0, k - delta - 1.0)
        w = 0.5 * (uj + 1.0)
        wj = wj * 2.0 ** (-(k - delta))
        a = (1.0 - x * np.outer(w, c2)) ** (-(big_m + k)) * (c2**k)[None, :]
        inner = wj @ (a @ wu)
        zk = math.sqrt(math.pi) * _gamma(k + 0.5) / _gamma(k + 1.0)
        return float((k - delta) / zk * inner)
    uj, wj = roots_jacobi(nw, 0.0, -delta)
    w = 0.5 * (uj + 1.0)
    wj = wj * 2.0 ** (-(1.0 - delta))
    a = ((1.0 - x * np.outer(w, c2)) ** (-big_m) - 1.0) / w[:, None]
    inner = wj @ (a @ wu)
    return float(1.0 - delta / math.pi * inner)


def expm_first_column(c: np.ndarray) -> np.ndarray:
    """First column of exp(C) for the lower-triangular Toeplitz C built from c."""
    m = len(c)
    mat = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1):
            mat[i, j] = c[i - j]
    return expm(mat)[:, 0]


def truncated_sinc_moment(p2: float, upper: float) -> float:
    """Integral of |sin x / x|^p2 over [0, upper], summed per half-period."""
    total = 0.0
    n_per = int(math.ceil(upper / math.pi))
    for j in range(n_per):
        a, b = j * math.pi, min((j + 1) * math.pi, upper)
        if a >= b:
            break
        val, _ = integrate.quad(lambda x: abs(np.sinc(x / math.pi)) ** p2, a, b, limit=200)
        total += val
    return total


def adhoc_series_truncated(cfg, max_p: int = 120) -> np.ndarray:
    """Ad hoc coefficient series rebuilt with finite-support angular moments.

    Identical algebra to the production series except that every angular
    moment keeps its exact finite support [0, pi*n_t*spacing]: the closed-form
    sinc-power integrals (infinite support) are replaced by truncated
    quadratures.  The result must match the general-route coefficients to
    quadrature accuracy; the production series then differs from both by
    exactly the support-extension slack, which shrinks like 1/(n_t*spacing).
    Returns coefficients on the same scale as the production series (the
    per-antenna division is left to the caller).
    """
    alpha = cfg.alpha
    delta = 2.0 / alpha
    sr = cfg.spacing_ratio
    upper = math.pi * cfg.n_t * sr
    big_m = cfg.m
    ratio = cfg.tau * (cfg.r_0 / cfg.big_r) ** alpha
    moments = {}

    def sinc_mom(p2: float) -> float:
        if p2 not in moments:
            moments[p2] = truncated_sinc_moment(p2, upper)
        return moments[p2]

    out = np.zeros(big_m)
    for k in range(big_m):
        acc = 0.0
        for p in range(max(1, k), max_p):
            term = (
                (-ratio) ** p
                * (2.0 / math.pi)
                * sinc_mom(2 * p)
                * _gamma(big_m + p)
                / (math.factorial(p - k) * _gamma(big_m))
                / (p - delta)
            )
            acc += term
            if p > max(1, k) + 3 and abs(term) < 1e-15 * abs(acc):
                break
        a_k = (math.pi * cfg.big_r**2 * cfg.lambda_b / (alpha * sr)) * acc
        fall = 1.0
        for i in range(k):
            fall *= delta - i
        b_k = (
            (delta * cfg.lambda_b / sr)
            * fall
            * _gamma(-delta)
            * (_gamma(big_m + delta) / _gamma(big_m))
            * cfg.tau**delta
            * cfg.r_0**2
            * sinc_mom(2 * delta)
        )
        noise = cfg.tau * big_m * cfg.r_0**alpha * cfg.noise_scale if k <= 1 else 0.0
        out[k] = (a_k - b_k + noise) * (-1.0) ** (k + 1) / math.factorial(k)
    return out
