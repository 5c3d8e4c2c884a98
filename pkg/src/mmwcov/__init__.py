"""Coverage probability analysis for dense mm-wave networks.

Analytic coverage for ad hoc and cellular deployments with large transmit
arrays, matched Monte Carlo simulation, and curve serialization helpers.
"""

from .adhoc import (
    SeriesControl,
    asymptotic_outage_adhoc,
    coeffs_adhoc_sinc,
    coverage_adhoc,
    coverage_poly_form,
)
from .antenna import ArrayGeometry, PatternKind, flat_top_params, gain, gain_array
from .cellular import (
    asymptotic_outage_cellular,
    coeffs_cellular_cos,
    coeffs_jensen,
    coverage_cellular,
    coverage_cellular_lower,
)
from .config import AdHocConfig, CellularConfig, SystemParams
from .curves import CoverageCurve, CurvePoint, emit_curves, parse_curves
from .errors import ConfigurationError, ConvergenceError, ValidityError
from .kernel import CoeffVector, GainDistribution, coeffs_general, coverage_from_coeffs
from .montecarlo import (
    McEstimate,
    Metric,
    SimControl,
    simulate_adhoc,
    simulate_cellular,
    simulate_density_sweep,
    simulate_metric,
    simulate_threshold_sweep,
)
from .presets import PRESETS, Preset, get_preset

__version__ = "0.1.0"

__all__ = [
    "AdHocConfig",
    "ArrayGeometry",
    "CellularConfig",
    "CoeffVector",
    "ConfigurationError",
    "ConvergenceError",
    "CoverageCurve",
    "CurvePoint",
    "GainDistribution",
    "McEstimate",
    "Metric",
    "PRESETS",
    "PatternKind",
    "Preset",
    "SeriesControl",
    "SimControl",
    "SystemParams",
    "ValidityError",
    "asymptotic_outage_adhoc",
    "asymptotic_outage_cellular",
    "coeffs_adhoc_sinc",
    "coeffs_cellular_cos",
    "coeffs_general",
    "coeffs_jensen",
    "coverage_adhoc",
    "coverage_cellular",
    "coverage_cellular_lower",
    "coverage_from_coeffs",
    "coverage_poly_form",
    "emit_curves",
    "flat_top_params",
    "gain",
    "gain_array",
    "get_preset",
    "parse_curves",
    "simulate_adhoc",
    "simulate_cellular",
    "simulate_density_sweep",
    "simulate_metric",
    "simulate_threshold_sweep",
    "__version__",
]
