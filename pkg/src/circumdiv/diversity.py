"""Finite diversities: set functions generalizing metrics to all subsets.

A diversity assigns a nonnegative value to every finite subset of a
ground set, vanishing exactly on singletons and the empty set, and
satisfying a triangle inequality over unions through any nonempty pivot
set.  Dropping the "only if" part of the vanishing condition gives a
semidiversity.  Tables here store all ``2**n`` values for a ground set
of up to 16 labels, indexed by subset bitmask.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .config import TOLS
from .errors import (
    LabelMismatchError,
    NotSemimetricError,
    NotSymmetricError,
)
from .circumradius import circumradius
from .geometry import Kernel, PointSet

MAX_GROUND_SET = 16

#: maps a set of points to a nonnegative spread value
DiversityOracle = Callable[[np.ndarray], float]


def _mask_iter(n: int):
    return range(1, 1 << n)


def _popcount_table(n: int) -> np.ndarray:
    masks = np.arange(1 << n)
    counts = np.zeros(1 << n, dtype=int)
    while masks.any():
        counts += masks & 1
        masks >>= 1
    return counts


@dataclass(frozen=True, eq=False)
class FiniteDiversity:
    """Dense table of subset values, indexed by label bitmask.

    ``values[mask]`` is the value of the subset whose members are the
    labels at the set bit positions.  The empty set and all singletons
    must be zero; everything else must be finite and nonnegative.
    """

    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        labels = tuple(str(s) for s in self.labels)
        if not labels:
            raise ValueError("need at least one label")
        if len(labels) > MAX_GROUND_SET:
            raise ValueError(f"at most {MAX_GROUND_SET} labels supported")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (1 << len(labels),):
            raise ValueError(
                f"need {1 << len(labels)} values for {len(labels)} labels, "
                f"got {vals.shape}"
            )
        if not np.isfinite(vals).all():
            raise ValueError("values must be finite")
        if vals.min() < 0:
            raise ValueError("values must be nonnegative")
        if vals[0] != 0.0:
            raise ValueError("empty set must have value zero")
        for i in range(len(labels)):
            if vals[1 << i] != 0.0:
                raise ValueError(f"singleton {labels[i]!r} must have value zero")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.labels)

    def mask_of(self, subset: Iterable[str]) -> int:
        mask = 0
        for label in subset:
            try:
                mask |= 1 << self.labels.index(label)
            except ValueError:
                raise KeyError(f"unknown label {label!r}") from None
        return mask

    def members(self, mask: int) -> tuple[str, ...]:
        return tuple(s for i, s in enumerate(self.labels) if mask >> i & 1)

    def value(self, subset) -> float:
        """Value of a subset given as labels or as a bitmask."""
        mask = subset if isinstance(subset, int) else self.mask_of(subset)
        return float(self.values[mask])

    def relabel(self, labels: Sequence[str]) -> "FiniteDiversity":
        if len(labels) != len(self.labels):
            raise ValueError("label count mismatch")
        return FiniteDiversity(tuple(labels), self.values)


# ---------------------------------------------------------------------------
# axioms


@dataclass(frozen=True)
class AxiomViolation:
    kind: str  # "vanishing" | "monotone" | "triangle"
    subsets: tuple[tuple[str, ...], ...]
    deficit: float


@dataclass(frozen=True)
class AxiomReport:
    is_semidiversity: bool
    is_diversity: bool
    is_monotone: bool
    violations: tuple[AxiomViolation, ...]


def check_axioms(
    d: FiniteDiversity, *, tol: float = 1e-9, max_violations: int = 16
) -> AxiomReport:
    """Check the diversity axioms over the whole table.

    The union triangle inequality is checked in its pairwise form: for
    any two subsets sharing an element, the value of their union is at
    most the sum of their values.  This is equivalent to the pivot form
    (pick the pivot to be the intersection) and avoids enumerating all
    ordered triples.  Monotonicity, itself a consequence of the axioms
    for exact tables, is reported separately so near-miss numeric tables
    can be diagnosed.
    """
    n = len(d)
    vals = d.values
    recorded: list[AxiomViolation] = []
    pop = _popcount_table(n)

    def record(kind, subsets, deficit):
        if len(recorded) < max_violations:
            recorded.append(AxiomViolation(kind, subsets, float(deficit)))

    # vanishing beyond singletons breaks the "only if" direction
    vanishing_ok = True
    for mask in _mask_iter(n):
        if pop[mask] >= 2 and vals[mask] <= tol:
            vanishing_ok = False
            record("vanishing", (d.members(mask),), vals[mask])
            if len(recorded) >= max_violations:
                break

    monotone = True
    for mask in _mask_iter(n):
        if not monotone and len(recorded) >= max_violations:
            break
        for bit in range(n):
            if mask >> bit & 1:
                continue
            bigger = mask | (1 << bit)
            if vals[mask] > vals[bigger] + tol:
                monotone = False
                record(
                    "monotone",
                    (d.members(mask), d.members(bigger)),
                    vals[mask] - vals[bigger],
                )
                break

    triangle_ok = True
    all_masks = np.arange(1 << n)
    for u in _mask_iter(n):
        if not triangle_ok and len(recorded) >= max_violations:
            break
        others = all_masks[(all_masks & u) != 0]
        unions = np.bitwise_or(u, others)
        deficit = vals[unions] - (vals[u] + vals[others])
        bad = np.flatnonzero(deficit > tol)
        for k in bad[:2]:
            triangle_ok = False
            w = int(others[k])
            record(
                "triangle",
                (d.members(u), d.members(u & w), d.members(w)),
                deficit[k],
            )

    is_semi = monotone and triangle_ok
    return AxiomReport(
        is_semidiversity=is_semi,
        is_diversity=is_semi and vanishing_ok,
        is_monotone=monotone,
        violations=tuple(recorded),
    )


def induced_metric(d: FiniteDiversity) -> np.ndarray:
    """Pairwise values as a symmetric distance matrix."""
    n = len(d)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = d.values[(1 << i) | (1 << j)]
    return out


# ---------------------------------------------------------------------------
# constructions


def _check_labels(labels, count) -> tuple[str, ...]:
    if labels is None:
        if count > MAX_GROUND_SET:
            raise ValueError(f"at most {MAX_GROUND_SET} labels supported")
        return tuple(f"p{i}" for i in range(count))
    labels = tuple(str(s) for s in labels)
    if len(labels) != count:
        raise ValueError("label count mismatch")
    return labels


def diameter_diversity(dist, labels=None) -> FiniteDiversity:
    """Diversity assigning each subset the max pairwise distance in it.

    The input must be a semimetric matrix: symmetric, zero diagonal,
    nonnegative, triangle inequality within tolerance.
    """
    D = np.asarray(dist, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise NotSemimetricError("distance matrix must be square")
    n = D.shape[0]
    if not np.isfinite(D).all():
        raise NotSemimetricError("distances must be finite")
    if np.abs(np.diag(D)).max(initial=0.0) > 0:
        raise NotSemimetricError("diagonal must be zero")
    if np.abs(D - D.T).max(initial=0.0) > TOLS.abs_tol:
        raise NotSemimetricError("matrix must be symmetric")
    if D.min() < 0:
        raise NotSemimetricError("distances must be nonnegative")
    slack = TOLS.abs_tol * (1.0 + D.max(initial=0.0))
    for k in range(n):
        if (D > D[:, [k]] + D[[k], :] + slack).any():
            raise NotSemimetricError(f"triangle inequality fails through point {k}")
    labels = _check_labels(labels, n)
    vals = np.zeros(1 << n)
    for mask in _mask_iter(n):
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        if rest:
            best = vals[rest]
            j = rest
            while j:
                b = j & -j
                best = max(best, D[i, b.bit_length() - 1])
                j ^= b
            vals[mask] = best
    return FiniteDiversity(labels, vals)


def is_diameter(d: FiniteDiversity, tol: float = 1e-9) -> bool:
    """Whether the table equals the diameter diversity of its own
    induced metric."""
    try:
        rebuilt = diameter_diversity(induced_metric(d), d.labels)
    except NotSemimetricError:
        return False
    return bool(np.abs(rebuilt.values - d.values).max() <= tol)


def l1_value(points) -> float:
    """Sum over coordinates of the coordinate range; zero for one point."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    return float((pts.max(axis=0) - pts.min(axis=0)).sum())


def l1_diversity(points: PointSet) -> FiniteDiversity:
    """Table of coordinate-range sums over every subset of the points."""
    pts = points.points
    n = pts.shape[0]
    labels = _check_labels(points.labels, n)
    idx = [np.flatnonzero([(m >> i) & 1 for i in range(n)]) for m in range(1 << n)]
    vals = np.zeros(1 << n)
    for mask in _mask_iter(n):
        sel = pts[idx[mask]]
        vals[mask] = (sel.max(axis=0) - sel.min(axis=0)).sum()
    return FiniteDiversity(labels, vals)


def kernel_diversity(
    points: PointSet, kernel: Kernel, *, seed: Optional[int] = None
) -> FiniteDiversity:
    """Table of circumradius values of every subset of the points."""
    pts = points.points
    n = pts.shape[0]
    labels = _check_labels(points.labels, n)
    vals = np.zeros(1 << n)
    for mask in _mask_iter(n):
        rows = [i for i in range(n) if mask >> i & 1]
        if len(rows) < 2:
            continue
        sol = circumradius(pts[rows], kernel, seed=seed, check=False)
        vals[mask] = max(sol.radius, 0.0)
    return FiniteDiversity(labels, vals)


def kernel_radius_oracle(kernel: Kernel, *, seed: Optional[int] = None) -> DiversityOracle:
    """Oracle form of the circumradius diversity for translation searches."""

    def oracle(points: np.ndarray) -> float:
        return circumradius(points, kernel, seed=seed, check=False).radius

    return oracle


def max_combine(a: FiniteDiversity, b: FiniteDiversity) -> FiniteDiversity:
    """Pointwise max of two tables over the same labels.

    The semidiversity axioms are closed under pointwise max, a fact the
    property suite exercises directly.
    """
    if a.labels != b.labels:
        raise LabelMismatchError("tables must share the same labels in order")
    return FiniteDiversity(a.labels, np.maximum(a.values, b.values))


def scale(factor: float, d: FiniteDiversity) -> FiniteDiversity:
    """Table scaled by a positive factor."""
    if not factor > 0:
        raise ValueError("scale factor must be positive")
    return FiniteDiversity(d.labels, d.values * float(factor))


# ---------------------------------------------------------------------------
# symmetry


@dataclass(frozen=True)
class SymmetricProfile:
    """Cardinality profile of a symmetric diversity.

    ``f[k]`` is the common value on subsets of size ``k + 1``; ``f[0]``
    is always zero.  Valid profiles are nondecreasing.
    """

    f: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        if f.ndim != 1 or f.shape[0] < 1:
            raise ValueError("profile must be a nonempty vector")
        if f[0] != 0.0:
            raise ValueError("profile must start at zero")
        if (np.diff(f) < -TOLS.abs_tol).any():
            raise ValueError("profile must be nondecreasing")
        f = f.copy()
        f.flags.writeable = False
        object.__setattr__(self, "f", f)

    @property
    def ground_size(self) -> int:
        return self.f.shape[0]

    def value_for_size(self, size: int) -> float:
        if size <= 0:
            return 0.0
        return float(self.f[size - 1])


def symmetric_profile(d: FiniteDiversity, tol: float = 1e-9) -> SymmetricProfile:
    """Extract the cardinality profile, or raise NotSymmetricError with a
    witness pair of same-size subsets taking different values."""
    n = len(d)
    pop = _popcount_table(n)
    f = np.zeros(n)
    canonical = [0] * (n + 1)
    for mask in _mask_iter(n):
        k = int(pop[mask])
        if canonical[k] == 0:
            canonical[k] = mask
            f[k - 1] = d.values[mask]
        elif abs(d.values[mask] - f[k - 1]) > tol:
            raise NotSymmetricError(
                f"subsets {d.members(canonical[k])} and {d.members(mask)} "
                f"have different values {f[k - 1]:.9g} and {d.values[mask]:.9g}",
                subset_a=d.members(canonical[k]),
                subset_b=d.members(mask),
            )
    return SymmetricProfile(f)


def symmetric_diversity(profile, labels=None) -> FiniteDiversity:
    """Build the symmetric table with the given cardinality profile."""
    prof = profile if isinstance(profile, SymmetricProfile) else SymmetricProfile(profile)
    n = prof.ground_size
    labels = _check_labels(labels, n)
    pop = _popcount_table(n)
    vals = np.zeros(1 << n)
    for mask in _mask_iter(n):
        vals[mask] = prof.value_for_size(int(pop[mask]))
    return FiniteDiversity(labels, vals)
