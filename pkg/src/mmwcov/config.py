"""Network configuration objects shared by the analytic and simulation paths.

Units: distances in meters, density per square meter, powers in watts,
thresholds and the path-loss intercept on linear scale.
"""
from __future__ import annotations

from dataclasses import dataclass

from .antenna import ArrayGeometry
from .errors import ConfigurationError

__all__ = ["SystemParams", "AdHocConfig", "CellularConfig"]

# -61.4 dB path loss intercept at mm-wave carrier, unit reference distance
DEFAULT_BETA = 10.0 ** (-6.14)
# thermal noise over 1 GHz plus a 10 dB receiver noise figure: -74 dBm
DEFAULT_SIGMA2 = 10.0 ** (-10.4)


@dataclass(frozen=True, kw_only=True)
class SystemParams:
    """Physical-layer constants shared by both network types."""

    big_r: float
    lambda_b: float
    n_t: int
    tau: float
    m: int = 3
    alpha: float = 2.1
    spacing_ratio: float = 0.25
    p_t: float = 1.0
    beta_intercept: float = DEFAULT_BETA
    sigma2: float = DEFAULT_SIGMA2

    def __post_init__(self) -> None:
        if self.big_r <= 0.0:
            raise ConfigurationError("big_r must be positive")
        if self.lambda_b <= 0.0:
            raise ConfigurationError("lambda_b must be positive")
        if self.n_t < 1:
            raise ConfigurationError("n_t must be >= 1")
        if self.m < 1:
            raise ConfigurationError("m must be >= 1")
        if not 2.0 < self.alpha < 3.0:
            raise ConfigurationError("alpha must lie in (2, 3)")
        if not 0.0 < self.spacing_ratio <= 0.5:
            raise ConfigurationError("spacing_ratio must lie in (0, 0.5]")
        if self.p_t <= 0.0 or self.beta_intercept <= 0.0:
            raise ConfigurationError("p_t and beta_intercept must be positive")
        if self.sigma2 < 0.0:
            raise ConfigurationError("sigma2 must be nonnegative")
        if self.tau < 0.0:
            raise ConfigurationError("tau must be nonnegative")

    @property
    def delta(self) -> float:
        return 2.0 / self.alpha

    @property
    def geometry(self) -> ArrayGeometry:
        return ArrayGeometry(n_t=self.n_t, spacing_ratio=self.spacing_ratio)

    @property
    def noise_scale(self) -> float:
        """sigma^2 / (beta P_t): the noise power before array normalization."""
        return self.sigma2 / (self.beta_intercept * self.p_t)

    @property
    def sigma_n2(self) -> float:
        """Normalized noise power sigma^2 / (beta P_t N_t)."""
        return self.noise_scale / self.n_t


@dataclass(frozen=True, kw_only=True)
class AdHocConfig(SystemParams):
    """Dipole link of fixed length r_0 inside the LOS ball."""

    r_0: float

    def __post_init__(self) -> None:
        super().__post_init__()
        if not 0.0 < self.r_0 <= self.big_r:
            raise ConfigurationError("need 0 < r_0 <= big_r for a LOS dipole")


@dataclass(frozen=True, kw_only=True)
class CellularConfig(SystemParams):
    """Nearest-transmitter association within the LOS ball."""
