"""Positivity-preserving fractal interpolation.

Thin wrapper over the compiled core: configs are plain dicts using the same
schema as the CLI's JSON files, results come back as dicts.
"""

import json
import math

from . import _core

__all__ = [
    "PosifractError",
    "fit",
    "validate",
    "contraction_factor",
    "attractor",
    "verify",
    "metric",
    "suite_names",
]


class PosifractError(ValueError):
    """Raised for every library error; `kind` names the error category."""

    def __init__(self, payload):
        self.payload = payload
        self.kind = payload.get("error", "unknown")
        super().__init__(payload.get("message", ""))


def _call(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _core.CoreError as e:
        try:
            payload = json.loads(str(e))
        except ValueError:
            payload = {"error": "unknown", "message": str(e)}
        raise PosifractError(payload) from None


def _dump(config):
    if isinstance(config, str):
        return config
    return json.dumps(config, allow_nan=False)


def fit(config):
    """Fixed point of the RB operator described by `config`."""
    return json.loads(_call(_core.fit, _dump(config)))


def validate(config):
    """Positivity, endpoint, join-up and contraction checks."""
    return json.loads(_call(_core.validate, _dump(config)))


def contraction_factor(config):
    return _call(_core.contraction_factor, _dump(config))


def attractor(config, k=30, resolution=None):
    """Deterministic attractor of the graph IFS and its distance to the fixed point's graph."""
    return json.loads(_call(_core.attractor, _dump(config), k, resolution))


def verify(suite, seed=20240607, config=None):
    """Runs one property suite and returns its report."""
    text = "" if config is None else _dump(config)
    return json.loads(_call(_core.verify, suite, seed, text))


def metric(f, g, p=math.inf, lo=0.0, hi=1.0):
    """Sup metric (p = inf) or rooted L_p metric between two sample arrays on [lo, hi]."""
    return _call(_core.metric, list(f), list(g), float(p), lo, hi)


def suite_names():
    return list(_core.suite_names())
