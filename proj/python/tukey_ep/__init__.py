"""Evolutionary programming with Tukey-Lambda mutation, Dragonian antenna geometry."""

import json
import sys

from ._core import (
    ConfigError,
    Derived,
    EvolutionConfig,
    EvolutionResult,
    FeedSign,
    FitnessConfig,
    Givens,
    Scheme,
    SchemeConfig,
    TukeyLambdaParams,
    Vars,
    __version__,
    ackley,
    cauchy_samples,
    cross_section,
    derive_geometry,
    design_condition_residuals,
    dragonian_fitness,
    evolve,
    gaussian_samples,
    grid_search_oracle,
    rosenbrock,
    sphere,
    tukey_cdf,
    tukey_quantile,
    tukey_samples,
)
from . import _core


def run_experiment(config, workers=0, out_dir=None):
    """Run a multi-trial experiment described by a config dict.

    Returns a dict with ``manifest``, ``aggregate`` rows
    ``(generation, evaluations, overall_best, mean_best, std_best)`` and
    per-trial ``trajectories``. Files are written when ``out_dir`` is given.
    """
    return json.loads(_core.run_experiment_json(json.dumps(config), workers, out_dir or ""))


def main(argv=None):
    """Console entry point mirroring the ``tukey-ep`` executable."""
    return _core.cli_main(list(sys.argv[1:] if argv is None else argv))


__all__ = [name for name in dir() if not name.startswith("_")]
