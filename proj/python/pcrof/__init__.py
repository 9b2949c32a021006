"""Denoising of piecewise-constant-on-rectilinear-grid functions.

Thin wrapper over the C++ extension: instances and reports are JSON on
the C++ side; this module accepts and returns plain dicts.
"""

import json

from . import _core

__all__ = [
    "solve",
    "energy",
    "grid",
    "verify_theorem",
    "verify_theorem_batch",
    "verify_properties",
    "gen_random",
    "instance_digest",
    "canonicalize",
]


def _as_text(instance):
    if isinstance(instance, str):
        return instance
    return json.dumps(instance)


def solve(instance, alpha=0.0, tol_gap=0.0, max_iters=200000):
    """Minimize the ROF energy for an instance dict (or JSON string)."""
    return json.loads(_core.solve(_as_text(instance), alpha, tol_gap, max_iters))


def energy(instance, alpha=0.0):
    return json.loads(_core.energy(_as_text(instance), alpha))


def grid(instance):
    return json.loads(_core.grid(_as_text(instance)))


def verify_theorem(instance, alpha=0.0, splits=2, tol=1e-5):
    return json.loads(_core.verify_theorem(_as_text(instance), alpha, splits, tol))


def verify_theorem_batch(seed=7, count=20, splits=2, tol=1e-5):
    return json.loads(_core.verify_theorem_batch(seed, count, splits, tol))


def verify_properties(seed=42, count=10, quadrature_depth=6):
    return json.loads(_core.verify_properties(seed, count, quadrature_depth))


def gen_random(seed, index=0):
    return json.loads(_core.gen_random(seed, index))


def instance_digest(instance):
    return _core.instance_digest(_as_text(instance))


def canonicalize(instance):
    return json.loads(_core.canonicalize(_as_text(instance)))
