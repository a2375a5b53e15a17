"""Max-stable random fields on Z^d: spectral samplers, extremal index
estimators and Monte Carlo checks of the shift and tilt identities."""

import json as _json

from ._core import (  # noqa: F401
    Model,
    ModelError,
    ParseError,
    UsageError,
    alternating,
    anti_clustering_probe,
    br_lower_bound,
    brown_resnick,
    fidi_neglog,
    fidi_neglog_anchored,
    identity_suite,
    independent,
    mixture,
    product,
    sample_theta,
    sample_y,
    sequence,
    simulate,
    theta_anchor,
    theta_block,
    theta_difference,
    theta_exceed,
    theta_pickands,
    theta_pickands_sweep,
    theta_ratio,
    y_fidi_cdf,
)
from ._core import run_config as _run_config


def run_config(text, **overrides):
    """Run an experiment file's text; keyword overrides replace top-level keys."""
    return _json.loads(_run_config(text, {k: str(v) for k, v in overrides.items()}))


__version__ = "0.1.0"
