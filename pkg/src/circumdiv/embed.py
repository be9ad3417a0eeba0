"""Embedding finite diversities into circumradius diversities.

An embedding here is an assignment of a point to each label together
with a kernel, such that the circumradius table of the assigned points
reproduces the source diversity exactly (within verification
tolerance).  The constructions implemented:

* symmetric diversities: inductive product construction, with the
  cross-multiplied cardinality criterion deciding embeddability;
* arbitrary three-point diversities: two-block product construction;
* diameter diversities: coordinate map through the induced metric with
  a unit-cube kernel;
* negative-type test over all nonempty subsets, with a violating
  vector as witness;
* Euclidean ball embeddings decided by a Gram factorization plus
  exhaustive small-subset verification.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import TOLS
from .errors import (
    BudgetExceededError,
    EmbeddingVerificationError,
    NotDiameterError,
    NotEmbeddableError,
    PreconditionUnmetError,
    SolverMismatchError,
)
from .circumradius import circumradius, min_enclosing_ball
from .diversity import (
    FiniteDiversity,
    SymmetricProfile,
    _mask_iter,
    _popcount_table,
    induced_metric,
    is_diameter,
    kernel_diversity,
    symmetric_profile,
)
from .geometry import (
    AffineMap,
    Ball,
    Kernel,
    Parallelotope,
    PointSet,
    Product,
    SimplexNeg,
    SimplexPos,
    to_hpolytope,
)

#: embeddings refuse to materialize above this ambient dimension
DIMENSION_BUDGET = 64


@dataclass(frozen=True, eq=False)
class Embedding:
    """Point assignment plus kernel realizing a diversity."""

    labels: tuple[str, ...]
    points: np.ndarray
    kernel: Kernel

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] != len(self.labels):
            raise ValueError("need one point row per label")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def assignment(self) -> dict[str, np.ndarray]:
        return {s: self.points[i] for i, s in enumerate(self.labels)}

    def as_point_set(self) -> PointSet:
        return PointSet(self.points, self.labels)

    def realized_diversity(self, *, seed: Optional[int] = None) -> FiniteDiversity:
        return kernel_diversity(self.as_point_set(), self.kernel, seed=seed)


def verified_embedding(
    source: FiniteDiversity,
    points,
    kernel: Kernel,
    *,
    tol: float = 1e-6,
    seed: Optional[int] = None,
) -> Embedding:
    """Build an embedding, re-verifying every subset value first.

    Point rows follow the source label order.
    """
    emb = Embedding(source.labels, np.asarray(points, dtype=float), kernel)
    realized = emb.realized_diversity(seed=seed)
    err = np.abs(realized.values - source.values)
    bound = tol * (1.0 + np.abs(source.values))
    if (err > bound).any():
        mask = int(np.argmax(err - bound))
        raise EmbeddingVerificationError(
            f"subset {source.members(mask)} realizes {realized.values[mask]:.9g} "
            f"but the table says {source.values[mask]:.9g}"
        )
    return emb


# ---------------------------------------------------------------------------
# symmetric diversities


@dataclass(frozen=True)
class SymmetricCriterionWitness:
    """Cardinality at which the embeddability criterion fails."""

    cardinality: int
    ratio: float
    bound: float


def symmetric_embeddable(
    d: FiniteDiversity, tol: float = 1e-9
) -> tuple[bool, Optional[SymmetricCriterionWitness]]:
    """Decide embeddability of a symmetric diversity.

    The criterion is ``f(k-2) / f(k-1) >= (k-2) / (k-1)`` for every
    cardinality ``k`` up to the ground set size, checked in
    cross-multiplied form so zero values need no special casing.
    """
    prof = symmetric_profile(d, tol=tol)
    return profile_embeddable(prof, tol=tol)


def profile_embeddable(
    prof: SymmetricProfile, tol: float = 1e-9
) -> tuple[bool, Optional[SymmetricCriterionWitness]]:
    f = prof.f
    scale = 1.0 + float(np.abs(f).max())
    for k in range(2, prof.ground_size + 1):
        lhs = (k - 1) * f[k - 2]
        rhs = (k - 2) * f[k - 1]
        if lhs < rhs - tol * scale:
            ratio = f[k - 2] / f[k - 1] if f[k - 1] > 0 else np.inf
            return False, SymmetricCriterionWitness(k, float(ratio), (k - 2) / (k - 1))
    return True, None


def symmetric_embed(
    d: FiniteDiversity, *, tol: float = 1e-6, seed: Optional[int] = None
) -> Embedding:
    """Embed a symmetric diversity, inductively over the ground set.

    Base case: two labels are placed on a segment with a 1-simplex
    kernel.  Step: an embedding of the first ``m - 1`` labels is cloned
    ``m - 1`` times, each clone assigning label ``m`` the position of a
    distinct earlier label; one extra block realizes the scaled counting
    diversity pinning the full-set value.  The blocks combine as a
    coordinate product, and the max rule for product kernels makes the
    combined table the max of the block tables, which equals the source.
    """
    prof = symmetric_profile(d)
    ok, witness = profile_embeddable(prof)
    if not ok:
        raise NotEmbeddableError(
            f"cardinality profile fails the embeddability criterion at "
            f"size {witness.cardinality}: ratio {witness.ratio:.6g} < "
            f"bound {witness.bound:.6g}",
            witness=witness,
        )
    n = len(d)
    f = prof.f
    if n == 1:
        emb = Embedding(d.labels, np.zeros((1, 1)), SimplexPos(1))
        return emb

    # base: two points at distance f[1] on a line
    points = np.array([[-f[1]], [0.0]])
    kernel: Kernel = SimplexPos(1)

    for m in range(3, n + 1):
        prev = points  # (m-1, D)
        D = prev.shape[1]
        blocks = []
        for i in range(m - 1):
            block = np.vstack([prev, prev[i]])
            blocks.append((block, kernel))
        # counting block pins the value of the full m-element set
        c = f[m - 1] / (m - 1)
        count_pts = np.zeros((m, m - 1))
        for j in range(m - 1):
            count_pts[j, j] = -c
        blocks.append((count_pts, SimplexPos(m - 1)))

        width = sum(b.shape[1] for b, _ in blocks)
        if width > DIMENSION_BUDGET:
            raise BudgetExceededError(
                f"embedding needs {width} dimensions for {m} labels, "
                f"budget is {DIMENSION_BUDGET}"
            )
        combined = np.zeros((m, width))
        col = 0
        for b, _ in blocks:
            combined[:, col : col + b.shape[1]] = b
            col += b.shape[1]
        kernel = functools.reduce(Product, [k for _, k in blocks])
        points = combined

    return verified_embedding(d, points, kernel, tol=tol, seed=seed)


# ---------------------------------------------------------------------------
# three-point diversities


def three_point_embed(
    d: FiniteDiversity, *, tol: float = 1e-6, seed: Optional[int] = None
) -> Embedding:
    """Embed any three-point diversity whose pairs are all equal.

    With pairs scaled to 1 the triple value x lies in [1, 2]; the table
    is the max of the constant-1 diversity and (x/2) times the counting
    diversity, each of which has a corner-simplex embedding, and the
    product construction combines them.
    """
    if len(d) != 3:
        raise PreconditionUnmetError("construction needs exactly three labels")
    pairs = [d.values[m] for m in (0b011, 0b101, 0b110)]
    p = pairs[0]
    if max(pairs) - min(pairs) > 1e-9 * (1.0 + max(pairs)):
        raise PreconditionUnmetError(
            f"pair values must all be equal, got {pairs}"
        )
    full = float(d.values[0b111])
    if p <= 0:
        # vanishing pairs force a vanishing triple
        points = np.zeros((3, 2))
        return verified_embedding(d, points, SimplexPos(2), tol=tol, seed=seed)
    x = full / p
    slack = 1e-9 * (1.0 + x)
    if not (1.0 - slack <= x <= 2.0 + slack):
        raise PreconditionUnmetError(
            f"triple/pair ratio {x:.9g} falls outside [1, 2]; "
            "the table is not a diversity"
        )
    c = p * x / 2.0
    points = np.array(
        [
            [0.0, 0.0, 0.0, 0.0],
            [p, 0.0, -c, 0.0],
            [0.0, p, 0.0, -c],
        ]
    )
    kernel = Product(SimplexPos(2), SimplexPos(2))
    return verified_embedding(d, points, kernel, tol=tol, seed=seed)


# ---------------------------------------------------------------------------
# diameter diversities


def diameter_embed(
    d: FiniteDiversity, *, tol: float = 1e-6, seed: Optional[int] = None
) -> Embedding:
    """Embed a diameter diversity with a unit-cube kernel.

    Each label maps to its vector of induced distances to all labels.
    Coordinate ranges of a subset then reproduce pairwise distances
    without overshooting the subset diameter, so the sup-range value of
    the image equals the diameter.
    """
    if not is_diameter(d):
        raise NotDiameterError(
            "table is not the diameter diversity of its induced metric"
        )
    dist = induced_metric(d)
    points = dist.copy()  # row i = distances from label i
    kernel = Parallelotope(AffineMap.identity(len(d)))
    return verified_embedding(d, points, kernel, tol=tol, seed=seed)


# ---------------------------------------------------------------------------
# negative type


@dataclass(frozen=True)
class NegativeTypeReport:
    is_negative_type: bool
    max_eigenvalue: float
    #: coefficient per nonempty subset (zero-sum), present when violated
    witness: Optional[dict[tuple[str, ...], float]]
    #: value of the quadratic form at the witness
    witness_value: Optional[float]


def negative_type_check(d: FiniteDiversity, *, tol: float = 1e-8) -> NegativeTypeReport:
    """Test whether the union-value matrix is of negative type.

    Builds the matrix ``M[A, B] = d(A | B)`` over all nonempty subsets
    and checks that the associated quadratic form is nonpositive on
    zero-sum coefficient vectors, via the eigenvalues of the form
    restricted to a basis of differences.  A positive eigendirection is
    mapped back to subset coefficients and re-evaluated directly.
    """
    n = len(d)
    if n > 6:
        raise BudgetExceededError(
            "negative-type check enumerates all nonempty subsets; "
            "ground sets above 6 labels are refused"
        )
    masks = list(_mask_iter(n))
    N = len(masks)
    M = np.empty((N, N))
    for i, u in enumerate(masks):
        row = [d.values[u | w] for w in masks]
        M[i] = row
    # restrict to zero-sum vectors through the basis e_j - e_0
    Q = M[1:, 1:] - M[0, 1:][None, :] - M[1:, 0][:, None] + M[0, 0]
    Q = 0.5 * (Q + Q.T)
    eigvals, eigvecs = np.linalg.eigh(Q)
    top = float(eigvals[-1])
    threshold = tol * (1.0 + float(np.abs(M).max()))
    if top <= threshold:
        return NegativeTypeReport(True, top, None, None)
    v = eigvecs[:, -1]
    x = np.zeros(N)
    x[1:] = v
    x[0] = -v.sum()
    x /= np.abs(x).max()
    value = float(x @ M @ x)
    if value <= 0:  # pragma: no cover - contradicts the eigen computation
        raise SolverMismatchError("witness failed direct re-evaluation")
    witness = {
        d.members(mask): float(x[i])
        for i, mask in enumerate(masks)
        if abs(x[i]) > 1e-12
    }
    return NegativeTypeReport(False, top, witness, value)


# ---------------------------------------------------------------------------
# simplex route cross-check


def simplex_embed_verify(
    points: PointSet, *, tol: float = 1e-6, seed: Optional[int] = None
) -> FiniteDiversity:
    """Reflected-simplex diversity of a point set, checked two ways.

    Every subset value is computed both by the closed form (sum of
    coordinate maxima minus the smallest coordinate sum) and by the LP
    route on the half-space form of the kernel; any disagreement beyond
    tolerance raises, since it can only come from a solver bug.
    """
    pts = points.points
    n, dim = pts.shape
    labels = points.labels or tuple(f"p{i}" for i in range(n))
    kernel = SimplexNeg(dim)
    hp = to_hpolytope(kernel)
    vals = np.zeros(1 << n)
    for mask in _mask_iter(n):
        rows = [i for i in range(n) if mask >> i & 1]
        if len(rows) < 2:
            continue
        sel = pts[rows]
        closed = float(sel.max(axis=0).sum() - sel.sum(axis=1).min())
        via_lp = circumradius(sel, hp, seed=seed, check=False).radius
        if abs(closed - via_lp) > tol * (1.0 + abs(closed)):
            raise SolverMismatchError(
                f"closed form {closed:.9g} and LP route {via_lp:.9g} disagree "
                f"on subset {tuple(labels[i] for i in rows)}"
            )
        vals[mask] = max(closed, 0.0)
    return FiniteDiversity(labels, vals)


# ---------------------------------------------------------------------------
# Euclidean ball embeddings


@dataclass(frozen=True)
class BallDecision:
    embeddable: bool
    #: "ok" | "metric_not_euclidean" | "rank_exceeds_dim" | "subset_mismatch"
    reason: str
    detail: str
    embedding: Optional[Embedding]
    #: offending subset with (expected from geometry, got from table)
    mismatch: Optional[tuple[tuple[str, ...], float, float]]
    #: eigenvalues in the ambiguous band, recorded for auditability
    ambiguous_eigenvalues: tuple[float, ...]


def ball_embed_decide(
    d: FiniteDiversity, dim: int, *, tol: float = 1e-6, seed: Optional[int] = None
) -> BallDecision:
    """Decide embeddability into the ball diversity on R^dim.

    Requires the table to be determined by its small subsets: every
    value must equal the max over its subsets of at most ``dim + 1``
    elements (the support size of a minimum enclosing ball).  Then the
    pair values force candidate coordinates through a Gram
    factorization of twice the induced metric, and all small subsets
    are verified against minimum enclosing ball radii.
    """
    n = len(d)
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    _require_small_subset_determined(d, dim)

    dist = 2.0 * induced_metric(d)  # ball diversity of a pair is half the distance
    anchor = min(range(n), key=lambda i: d.labels[i])
    others = [i for i in range(n) if i != anchor]
    sq = dist**2
    G = np.empty((n - 1, n - 1))
    for a, i in enumerate(others):
        for b, j in enumerate(others):
            G[a, b] = 0.5 * (sq[anchor, i] + sq[anchor, j] - sq[i, j])
    G = 0.5 * (G + G.T)
    eigvals, eigvecs = np.linalg.eigh(G)
    scale = max(float(np.trace(G)), 1.0)

    ambiguous = tuple(
        float(v) for v in eigvals if 1e-10 * scale < abs(v) < 1e-6 * scale
    )
    if eigvals.min(initial=0.0) < -1e-8 * scale:
        return BallDecision(
            False,
            "metric_not_euclidean",
            f"Gram matrix of the induced metric has eigenvalue "
            f"{eigvals.min():.6g}; the pair values cannot come from "
            f"Euclidean distances",
            None,
            None,
            ambiguous,
        )
    positive = eigvals > 1e-8 * scale
    rank = int(positive.sum())
    if rank > dim:
        return BallDecision(
            False,
            "rank_exceeds_dim",
            f"induced metric needs {rank} dimensions, only {dim} available",
            None,
            None,
            ambiguous,
        )

    coords = np.zeros((n, dim))
    if rank:
        factors = eigvecs[:, positive] * np.sqrt(eigvals[positive])
        for a, i in enumerate(others):
            coords[i, :rank] = factors[a]

    pop = _popcount_table(n)
    for mask in _mask_iter(n):
        size = int(pop[mask])
        if size < 2 or size > dim + 1:
            continue
        rows = [i for i in range(n) if mask >> i & 1]
        _, radius = min_enclosing_ball(coords[rows], seed=seed)
        got = float(d.values[mask])
        if abs(radius - got) > tol * (1.0 + abs(got)):
            return BallDecision(
                False,
                "subset_mismatch",
                f"subset {d.members(mask)} would need ball radius "
                f"{radius:.9g} but the table says {got:.9g}",
                None,
                (d.members(mask), float(radius), got),
                ambiguous,
            )

    embedding = verified_embedding(d, coords, Ball(dim), tol=tol, seed=seed)
    return BallDecision(True, "ok", "embedding verified on all subsets",
                        embedding, None, ambiguous)


def _require_small_subset_determined(d: FiniteDiversity, dim: int) -> None:
    """Every value must be attained by a subset of at most dim+1 points."""
    n = len(d)
    pop = _popcount_table(n)
    best = np.zeros(1 << n)
    for mask in _mask_iter(n):
        if pop[mask] <= dim + 1:
            best[mask] = d.values[mask]
        m = mask
        while m:
            low = m & -m
            best[mask] = max(best[mask], best[mask ^ low])
            m ^= low
    gap = d.values - best
    worst = int(np.argmax(gap))
    if gap[worst] > 1e-9 * (1.0 + d.values[worst]):
        raise PreconditionUnmetError(
            f"value of {d.members(worst)} exceeds every subset of size "
            f"{dim + 1} by {gap[worst]:.6g}; a ball diversity is determined "
            f"by its small subsets"
        )
