"""Global numeric tolerances, default RNG seed, and thread limits.

Every tolerance used for equality decisions, solver pivoting, or kernel
validation lives here so the whole library can be tightened or loosened
in one place (the CLI exposes --tolerance for the same purpose).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

#: Seed used for every randomized algorithm (ball solver shuffles,
#: multistart minimization) unless the caller supplies one.
DEFAULT_SEED = 0x5EED

#: Environment variable capping worker threads for parallel subset searches.
THREADS_ENV_VAR = "CIRCUMDIV_THREADS"


@dataclass
class Tolerances:
    #: absolute tolerance for coordinate / value comparisons
    abs_tol: float = 1e-7
    #: relative tolerance for coordinate / value comparisons
    rel_tol: float = 1e-9
    #: minimum magnitude of a usable simplex pivot element
    pivot_tol: float = 1e-10
    #: phase-1 optimum above this value means the program is infeasible
    phase1_tol: float = 1e-8
    #: degeneracy threshold for affine maps and polytope interiors
    degeneracy_tol: float = 1e-9
    #: slack allowed in optimality / duality certification
    optimality_tol: float = 1e-6


#: Mutable global tolerance settings.
TOLS = Tolerances()


def set_tolerances(**kwargs: float) -> None:
    """Override one or more global tolerances by field name."""
    for name, value in kwargs.items():
        if not hasattr(TOLS, name):
            raise AttributeError(f"unknown tolerance {name!r}")
        setattr(TOLS, name, float(value))


def close(a: float, b: float) -> bool:
    """Equality under the global absolute + relative tolerances."""
    return abs(a - b) <= TOLS.abs_tol + TOLS.rel_tol * max(abs(a), abs(b))


def thread_count() -> int:
    """Worker thread cap from CIRCUMDIV_THREADS (default 1, minimum 1)."""
    raw = os.environ.get(THREADS_ENV_VAR, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
