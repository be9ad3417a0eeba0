"""Generalized circumradius solvers.

The circumradius of a finite set A with respect to a kernel K is the
least ``lam >= 0`` such that some translate of ``lam * K`` covers A.
Each kernel variant gets the cheapest exact route available:

* half-space kernels solve one LP in the variables (lam, center);
* balls use a randomized move-to-front minimum enclosing ball;
* corner simplices and parallelotopes have closed forms;
* products take the max over factors; affine images pull back.

Also provided: epsilon core-set searches, translation witnesses showing
union subadditivity for convex kernels, and a multistart minimizer for
the best union translate under an arbitrary diversity oracle.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import linprog
from .config import DEFAULT_SEED, TOLS, thread_count
from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    SolverFailureError,
)
from .geometry import (
    AffineImage,
    Ball,
    HPolytope,
    Kernel,
    Parallelotope,
    PointSet,
    Product,
    SimplexNeg,
    SimplexPos,
)


@dataclass(frozen=True)
class Circumsolution:
    """Optimal scale and a translation achieving it: A is contained in
    ``radius * K + center``."""

    radius: float
    center: np.ndarray


def _points_of(A) -> np.ndarray:
    if isinstance(A, PointSet):
        return A.points
    return PointSet(A).points


def circumradius(
    A, kernel: Kernel, *, seed: Optional[int] = None, check: bool = True
) -> Circumsolution:
    """Smallest scaling of the kernel whose translate covers A."""
    pts = _points_of(A)
    if pts.shape[1] != kernel.dim:
        raise DimensionMismatchError(
            f"points have dimension {pts.shape[1]}, kernel has {kernel.dim}"
        )
    kernel.validate()
    sol = _dispatch(pts, kernel, seed)
    radius = max(float(sol.radius), 0.0)
    sol = Circumsolution(radius, sol.center)
    if check:
        _verify_containment(pts, kernel, sol)
    return sol


def _verify_containment(pts, kernel, sol) -> None:
    scale = 1.0 + np.abs(pts).max(initial=0.0)
    tol = TOLS.abs_tol * scale + 10 * TOLS.rel_tol * scale
    for p in pts:
        if not kernel.contains(p - sol.center, sol.radius, tol=tol):
            raise SolverFailureError(
                f"claimed cover misses a point (radius {sol.radius:.6g})"
            )


def _dispatch(pts: np.ndarray, kernel: Kernel, seed) -> Circumsolution:
    if isinstance(kernel, HPolytope):
        return _solve_hpolytope(pts, kernel)
    if isinstance(kernel, Ball):
        center, radius = min_enclosing_ball(pts, seed=seed)
        return Circumsolution(radius, center)
    if isinstance(kernel, SimplexPos):
        top = pts.sum(axis=1).max()
        lows = pts.min(axis=0)
        return Circumsolution(top - lows.sum(), lows)
    if isinstance(kernel, SimplexNeg):
        highs = pts.max(axis=0)
        bottom = pts.sum(axis=1).min()
        return Circumsolution(highs.sum() - bottom, highs)
    if isinstance(kernel, Parallelotope):
        return _solve_pulled_back(pts, kernel.transform, _cube_solution)
    if isinstance(kernel, Product):
        p = kernel.left.dim
        lhs = _dispatch(pts[:, :p], kernel.left, seed)
        rhs = _dispatch(pts[:, p:], kernel.right, seed)
        return Circumsolution(
            max(lhs.radius, rhs.radius), np.concatenate([lhs.center, rhs.center])
        )
    if isinstance(kernel, AffineImage):
        return _solve_pulled_back(
            pts, kernel.transform, lambda q: _dispatch(q, kernel.base, seed)
        )
    raise NotImplementedError(f"no solver for {type(kernel).__name__}")


def _cube_solution(pts: np.ndarray) -> Circumsolution:
    lows = pts.min(axis=0)
    highs = pts.max(axis=0)
    return Circumsolution(float((highs - lows).max()), lows)


def _solve_pulled_back(pts, transform, base_solver) -> Circumsolution:
    """Solve in preimage coordinates, then push the center forward.

    If (lam, y) covers the pulled-back points with the base kernel, the
    original points lie in ``lam * T(base) + x`` for
    ``x = M y + (1 - lam) t``.
    """
    inv = transform.inverse()
    sol = base_solver(inv(pts))
    center = transform.matrix @ sol.center + (1.0 - sol.radius) * transform.offset
    return Circumsolution(sol.radius, center)


def _solve_hpolytope(pts: np.ndarray, kernel: HPolytope) -> Circumsolution:
    n, d = pts.shape
    N, c = kernel.normals, kernel.offsets
    m = N.shape[0]
    # variables (lam, x): minimize lam subject to
    #   N_i . a - N_i . x <= lam * c_i   for every point a and row i
    G = np.zeros((n * m, d + 1))
    h = np.empty(n * m)
    for k, a in enumerate(pts):
        block = slice(k * m, (k + 1) * m)
        G[block, 0] = -c
        G[block, 1:] = -N
        h[block] = -(N @ a)
    obj = np.zeros(d + 1)
    obj[0] = 1.0
    lower = np.full(d + 1, -np.inf)
    lower[0] = 0.0
    result = linprog.solve(linprog.LinearProgram(obj, G, h, lower=lower))
    if not result.optimal:
        raise SolverFailureError(f"circumradius LP ended {result.status.value}")
    return Circumsolution(float(result.value), result.x[1:])


# ---------------------------------------------------------------------------
# minimum enclosing ball


def min_enclosing_ball(
    points, *, seed: Optional[int] = None
) -> tuple[np.ndarray, float]:
    """Center and radius of the smallest ball containing the points.

    Randomized move-to-front recursion; expected linear time in the
    number of points for fixed dimension.  The shuffle is seeded for
    reproducibility.
    """
    pts = _points_of(points)
    n, d = pts.shape
    if n == 0:
        raise ValueError("need at least one point")
    if d > 16:
        raise BudgetExceededError("ball solver supports dimension at most 16")
    rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)
    work = pts[rng.permutation(n)].copy()
    center, radius = _welzl(work, n, [], d)
    # support sets can be degenerate in rare near-cospherical inputs;
    # grow minimally so the cover is honest
    dist = np.linalg.norm(pts - center, axis=1).max()
    return center, float(max(radius, dist))


def _welzl(pts, n, support, d):
    center, radius = _ball_of_support(support)
    if len(support) == d + 1:
        return center, radius
    for i in range(n):
        p = pts[i].copy()
        if center is None or np.dot(p - center, p - center) > radius * radius * (
            1 + 1e-12
        ) + 1e-24:
            center, radius = _welzl(pts, i, support + [p], d)
            pts[1 : i + 1] = pts[0:i].copy()
            pts[0] = p
    return center, radius


def _ball_of_support(support):
    if not support:
        return None, -1.0
    base = support[0]
    if len(support) == 1:
        return base.copy(), 0.0
    V = np.array(support[1:]) - base
    gram = 2.0 * (V @ V.T)
    rhs = np.einsum("ij,ij->i", V, V)
    try:
        w = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        w = np.linalg.lstsq(gram, rhs, rcond=None)[0]
    center = base + V.T @ w
    return center, float(np.linalg.norm(center - base))


# ---------------------------------------------------------------------------
# core sets


@dataclass(frozen=True)
class CoreSetResult:
    """Subset whose circumradius (1 + eps)-approximates the full one."""

    subset: PointSet
    indices: tuple[int, ...]
    epsilon: float
    subset_radius: float
    full_radius: float

    @property
    def radius_ratio(self) -> float:
        if self.subset_radius == 0.0:
            return 1.0
        return self.full_radius / self.subset_radius


#: subsets examined before the exhaustive search refuses to run
SEARCH_BUDGET = 10**6


def core_set(
    A, kernel: Kernel, epsilon: float, *, seed: Optional[int] = None
) -> CoreSetResult:
    """Best subset of the guaranteed size ``ceil(d / (1 + eps)) + 1``.

    Exhaustive search over subsets of exactly that size (capped at |A|),
    keeping the one with the largest circumradius.  The returned subset
    always satisfies ``R(A) <= (1 + eps) R(subset)``.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    pts = _points_of(A)
    size = math.ceil(pts.shape[1] / (1.0 + epsilon)) + 1
    return _subset_search(A, pts, kernel, epsilon, size, seed)


def ball_core_set(A, epsilon: float, *, seed: Optional[int] = None) -> CoreSetResult:
    """Core set for the Euclidean ball kernel, using the sharper
    dimension-free size ``ceil(1 / (2 eps + eps^2)) + 1``."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive for the ball bound")
    pts = _points_of(A)
    size = math.ceil(1.0 / (2.0 * epsilon + epsilon * epsilon)) + 1
    return _subset_search(A, pts, Ball(pts.shape[1]), epsilon, size, seed)


def _subset_search(A, pts, kernel, epsilon, size, seed) -> CoreSetResult:
    n = pts.shape[0]
    if n == 0:
        raise ValueError("need at least one point")
    size = min(size, n)
    if math.comb(n, size) > SEARCH_BUDGET:
        raise BudgetExceededError(
            f"{math.comb(n, size)} subsets of size {size} exceed the "
            f"search budget of {SEARCH_BUDGET}"
        )
    full = circumradius(pts, kernel, seed=seed)
    combos = list(itertools.combinations(range(n), size))

    def radius_of(combo) -> float:
        return circumradius(pts[list(combo)], kernel, seed=seed, check=False).radius

    workers = thread_count()
    if workers > 1 and len(combos) > 64:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            radii = list(pool.map(radius_of, combos, chunksize=64))
    else:
        radii = [radius_of(c) for c in combos]

    # deterministic argmax: largest radius, ties broken by smallest
    # index bitmask so thread scheduling cannot change the answer
    best_idx = 0
    best_key = (-np.inf, 0)
    for i, (combo, r) in enumerate(zip(combos, radii)):
        key = (r, -sum(1 << j for j in combo))
        if key > best_key:
            best_key = key
            best_idx = i
    combo = combos[best_idx]
    sub_radius = radii[best_idx]

    slack = TOLS.optimality_tol * (1.0 + full.radius)
    if full.radius > (1.0 + epsilon) * sub_radius + slack:
        raise SolverFailureError(
            f"core-set guarantee failed: {full.radius:.8g} > "
            f"(1 + {epsilon}) * {sub_radius:.8g}"
        )
    subset = A.subset(combo) if isinstance(A, PointSet) else PointSet(pts[list(combo)])
    return CoreSetResult(subset, tuple(combo), epsilon, sub_radius, full.radius)


# ---------------------------------------------------------------------------
# union translations


@dataclass(frozen=True)
class UnionTranslation:
    """Translations (a, b) with R((A + a) | (B + b), K) = value."""

    offset_a: np.ndarray
    offset_b: np.ndarray
    value: float
    radius_a: float
    radius_b: float

    @property
    def bound(self) -> float:
        return max(self.radius_a, self.radius_b)


def union_translation_witness(
    A, B, kernel: Kernel, *, seed: Optional[int] = None
) -> UnionTranslation:
    """Translations placing both sets inside one optimally scaled kernel.

    With ``lam = max(R(A,K), R(B,K))`` the shifted copies both fit in
    ``lam * K``, so the union circumradius cannot exceed the max.  The
    shifts recenter each set and nudge it toward an interior point of K
    by the leftover scale, which keeps the smaller set strictly inside.
    """
    pts_a = _points_of(A)
    pts_b = _points_of(B)
    sol_a = circumradius(pts_a, kernel, seed=seed)
    sol_b = circumradius(pts_b, kernel, seed=seed)
    lam = max(sol_a.radius, sol_b.radius)
    k0 = kernel.interior_point()
    offset_a = -sol_a.center + (lam - sol_a.radius) * k0
    offset_b = -sol_b.center + (lam - sol_b.radius) * k0
    union = np.vstack([pts_a + offset_a, pts_b + offset_b])
    achieved = circumradius(union, kernel, seed=seed).radius
    if achieved > lam + TOLS.optimality_tol * (1.0 + lam):
        raise SolverFailureError(
            f"union witness failed: {achieved:.8g} > max radius {lam:.8g}"
        )
    return UnionTranslation(offset_a, offset_b, achieved, sol_a.radius, sol_b.radius)


def check_union_translation(
    A, B, kernel: Kernel, *, seed: Optional[int] = None
) -> bool:
    """True when some translations achieve the max-of-radii bound."""
    witness = union_translation_witness(A, B, kernel, seed=seed)
    return witness.value <= witness.bound + TOLS.optimality_tol * (1.0 + witness.bound)


def min_union_translation(
    A,
    B,
    oracle: Callable[[np.ndarray], float],
    *,
    starts: int = 5,
    max_line_searches: int = 200,
    seed: Optional[int] = None,
    return_offset: bool = False,
):
    """Approximate ``min over b of oracle(A | (B + b))``.

    One set may be pinned in place, so only B is translated.  Cyclic
    coordinate descent with golden-section line searches from several
    seeded starting offsets.  Exact for oracles separable across
    coordinates; otherwise a certified upper bound on the minimum.
    """
    pts_a = _points_of(A)
    pts_b = _points_of(B)
    if pts_a.shape[1] != pts_b.shape[1]:
        raise DimensionMismatchError("point sets have different dimensions")
    d = pts_a.shape[1]
    rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)

    def value_at(offset: np.ndarray) -> float:
        return float(oracle(np.vstack([pts_a, pts_b + offset])))

    span_a = pts_a.max(axis=0) - pts_a.min(axis=0)
    span_b = pts_b.max(axis=0) - pts_b.min(axis=0)
    width = 1.5 * (span_a + span_b + 1.0)
    center = pts_a.mean(axis=0) - pts_b.mean(axis=0)
    lo, hi = center - width, center + width

    start_list = [center.copy(), np.clip(np.zeros(d), lo, hi)]
    while len(start_list) < starts:
        start_list.append(rng.uniform(lo, hi))

    best_val = np.inf
    best_off = start_list[0]
    for start in start_list[:starts]:
        off = start.copy()
        val = value_at(off)
        searches = 0
        improved = True
        while improved and searches < max_line_searches:
            improved = False
            for j in range(d):
                if searches >= max_line_searches:
                    break
                t, vt = _golden_section(
                    lambda s: value_at(_with_coord(off, j, s)), lo[j], hi[j]
                )
                searches += 1
                if vt < val - 1e-12 * (1.0 + abs(val)):
                    if abs(t - off[j]) > 1e-10:
                        improved = True
                    off[j] = t
                    val = vt
        if val < best_val:
            best_val = val
            best_off = off
    if return_offset:
        return best_val, best_off
    return best_val


def _with_coord(vec: np.ndarray, j: int, value: float) -> np.ndarray:
    out = vec.copy()
    out[j] = value
    return out


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section(f, lo, hi, tol=1e-9):
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d_ = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d_)
    while (b - a) > tol * (1.0 + abs(a) + abs(b)):
        if fc <= fd:
            b, d_, fd = d_, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d_, fd
            d_ = a + _INVPHI * (b - a)
            fd = f(d_)
    mid = 0.5 * (a + b)
    return mid, f(mid)
