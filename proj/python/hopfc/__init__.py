"""Lyapunov coefficients l1..l4 at Hopf equilibria of smooth vector fields.

Thin wrapper over the C++ core: problems go in as dicts (or JSON strings /
file paths), reports come back as dicts mirroring the CLI's JSON output.
"""

import json as _json

from hopfc._core import (  # noqa: F401
    HopfError,
    analyze_file as _analyze_file,
    analyze_json as _analyze_json,
    check_json as _check_json,
    sweep_json as _sweep_json,
    transversality_json as _transversality_json,
)

__all__ = ["HopfError", "analyze", "sweep", "transversality", "check"]


def _problem_text(problem):
    if isinstance(problem, dict):
        return _json.dumps(problem)
    if isinstance(problem, str):
        return problem
    raise TypeError("problem must be a dict or a JSON string")


def analyze(problem, order=0):
    """Full coefficient analysis; returns the report as a dict."""
    return _json.loads(_analyze_json(_problem_text(problem), order))


def analyze_path(path, order=0):
    """Full coefficient analysis of a problem file; returns the report dict."""
    return _json.loads(_analyze_file(path, order))


def sweep(problem, parameter, from_value, to_value, steps, locate="", independent=False, order=0):
    """Parameter sweep; returns a list of row/locate dicts."""
    lines = _sweep_json(
        _problem_text(problem), parameter, from_value, to_value, steps, locate, independent, order
    )
    return [_json.loads(line) for line in lines.splitlines() if line.strip()]


def transversality(problem, order=0):
    """Finite-difference rank report of mu -> (eta, l1, ...); returns a dict."""
    return _json.loads(_transversality_json(_problem_text(problem), order))


def check(problem, order=0):
    """Analysis plus the invariant suite; returns the transcript text."""
    return _check_json(_problem_text(problem), order)
