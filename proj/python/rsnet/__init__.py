"""Random resistive-switch networks: generation, time-stepped simulation, and
PCA-entropy / energy analysis.

Experiment functions accept a config mapping in the same schema as the
``rsnet`` command-line tool (interface posts numbered from 1).
"""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    DataError,
    DeviceParams,
    DeviceState,
    Error,
    GenerationError,
    Grid,
    IoError,
    NumericalError,
    ParameterError,
    Topology,
    Trace,
    apply_hysteresis,
    build_grid,
    conductance,
    current,
    differential_readout,
    energy,
    entropy,
    generate_network,
    simulate,
    step_internal_state,
)

__version__ = _core.__version__


def _doc(config):
    if config is None:
        return ""
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def run_single(alpha, beta, xi, amplitude, seed=1, config=None):
    """One network: entropy over all interface posts and drive energy."""
    return _core.run_single(alpha, beta, xi, amplitude, seed, _doc(config))


def run_hierarchy(alpha, beta, xi, amplitude, seed=1, config=None, workers=1):
    """K independent networks with differential readouts (``hierarchy`` block)."""
    return _core.run_hierarchy(alpha, beta, xi, amplitude, seed, _doc(config), workers)


def run_sweep(config=None, hierarchy=False):
    """Full (alpha, beta, xi, v, trial) sweep. Returns records, aggregates and CSV text."""
    return _core.run_sweep(_doc(config), hierarchy)


__all__ = [name for name in dir() if not name.startswith("_")]
