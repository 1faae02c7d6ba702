"""Key-rate analysis for phase-matching quantum conference key agreement.

Configurations are dictionaries with the same keys as the JSON run
configuration accepted by the command-line tool.
"""

import json

from . import _pmqcc
from ._pmqcc import (
    ConfigError,
    DegenerateGeometryError,
    DomainError,
    InsufficientDataError,
    InsufficientDecoysError,
    ResourceError,
)

__all__ = [
    "ConfigError",
    "DegenerateGeometryError",
    "DomainError",
    "InsufficientDataError",
    "InsufficientDecoysError",
    "ResourceError",
    "curve",
    "curve_csv",
    "optimize",
    "rate",
    "scaling_exponent",
    "simulate",
]


def _encode(config):
    return json.dumps(config)


def rate(config, protocol="pmqcc"):
    """Single-point rate report; protocol is pmqcc, pmqcc-star, reduced or decoy-lower."""
    return json.loads(_pmqcc.rate(_encode(config), protocol))


def curve(config, l_min, l_max, l_step=10.0, protocol="pmqcc", optimize="none"):
    """Rate-versus-distance rows; optimize is none, signal or signal+decoys."""
    return json.loads(_pmqcc.curve(_encode(config), l_min, l_max, l_step, protocol, optimize))


def curve_csv(rows):
    """Renders rows returned by curve() in the command-line CSV format."""
    return _pmqcc.curve_csv(json.dumps(rows))


def simulate(config, workers=1):
    """Monte Carlo tally, empirical estimates and analytic comparison."""
    return json.loads(_pmqcc.simulate(_encode(config), workers))


def optimize(config, target="signal", protocol="pmqcc", trace=False):
    """Rate-maximizing signal (mu, M) or decoy intensities."""
    return json.loads(_pmqcc.optimize(_encode(config), target, protocol, trace))


def scaling_exponent(points):
    """Least-squares slope of log10(rate) against distance for (L, rate) pairs."""
    return _pmqcc.scaling_exponent([(float(l), float(r)) for l, r in points])
