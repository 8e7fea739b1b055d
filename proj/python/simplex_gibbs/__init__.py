"""Gibbs sampler on the simplex: proportional and subset couplings, the
two-stage coupling experiment and perfect sampling by coupling from the past.

Coordinates are 1-based. Experiment runners return the same summary
dictionaries the ``simplex-gibbs`` command prints with ``--json``.
"""

import json

from . import _core
from ._core import (
    ArgumentError,
    IntegrityError,
    PreconditionError,
    TerminationError,
    cftp,
    contraction_factor,
    lower_bound_formula,
    sample_stationary,
    step,
    success_probability,
)

__all__ = [
    "ArgumentError",
    "IntegrityError",
    "PreconditionError",
    "TerminationError",
    "build_partitions",
    "cftp",
    "contraction_factor",
    "lower_bound_formula",
    "run_cftp",
    "run_connectivity",
    "run_contraction",
    "run_couple",
    "run_lower_bound",
    "sample_stationary",
    "step",
    "success_probability",
]


def build_partitions(schedule):
    """Nested partitions of a schedule {"n": n, "edges": [[i, j], ...]}."""
    return json.loads(_core.partitions_json(json.dumps(schedule)))


def run_contraction(n, replicas, seed, law="uniform"):
    return json.loads(_core.run_contraction_json(n, replicas, seed, law))


def run_connectivity(n, epsilon, trials, seed):
    return json.loads(_core.run_connectivity_json(n, epsilon, trials, seed))


def run_couple(n, C, replicas, seed, law="uniform"):
    return json.loads(_core.run_couple_json(n, C, replicas, seed, law))


def run_cftp(n, samples, seed, law="uniform"):
    return json.loads(_core.run_cftp_json(n, samples, seed, law))


def run_lower_bound(n, trials, seed):
    return json.loads(_core.run_lower_bound_json(n, trials, seed))
