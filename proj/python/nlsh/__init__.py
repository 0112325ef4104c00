"""Python access to the nlsh library."""

import json

from ._core import (
    NlshError,
    ScenarioError,
    __version__,
    bundled_scenario,
    bundled_scenarios,
    list_checks,
    matrix_rep,
    mixed_power,
    pair_action,
    pair_bracket,
    pair_product,
)
from ._core import run_scenario as _run_scenario

E = (1, 1)
B = (1, -1)
I = (1j, 1j)
J = (1j, -1j)


def run_scenario(text, *, seed=None, tol=None, hbar=None):
    """Runs a scenario given as JSON text and returns the parsed report."""
    return json.loads(_run_scenario(text, seed=seed, tol=tol, hbar=hbar))


def run_bundled(name, **overrides):
    text = bundled_scenario(name)
    if text is None:
        raise KeyError(name)
    return run_scenario(text, **overrides)


__all__ = [
    "B", "E", "I", "J", "NlshError", "ScenarioError", "__version__", "bundled_scenario", "bundled_scenarios",
    "list_checks", "matrix_rep", "mixed_power", "pair_action", "pair_bracket", "pair_product", "run_bundled",
    "run_scenario",
]
