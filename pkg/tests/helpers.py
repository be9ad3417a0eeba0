"""Shared random-instance generators and slow reference oracles.

The oracles here are deliberately naive (exhaustive enumeration, direct
linear algebra) so they stay independent of the library's solvers.
"""

from __future__ import annotations

import itertools

import numpy as np

from circumdiv.geometry import (
    AffineImage,
    AffineMap,
    Ball,
    HPolytope,
    Parallelotope,
    PointSet,
    Product,
    SimplexNeg,
    SimplexPos,
)

KERNEL_VARIANTS = (
    "hpolytope",
    "ball",
    "simplex_pos",
    "simplex_neg",
    "parallelotope",
    "product",
    "affine_image",
)

#: variants with a dedicated closed-form radius path
CLOSED_FORM_VARIANTS = ("simplex_pos", "simplex_neg", "parallelotope")


def labels_for(n: int) -> tuple[str, ...]:
    return tuple(f"p{i}" for i in range(n))


def random_points(rng, n: int, d: int, spread: float = 2.0) -> np.ndarray:
    return spread * rng.standard_normal((n, d))


def random_labeled_points(rng, n: int, d: int, spread: float = 2.0) -> PointSet:
    return PointSet(random_points(rng, n, d, spread), labels_for(n))


def random_invertible_map(rng, d: int, min_det: float = 0.2) -> AffineMap:
    while True:
        matrix = rng.standard_normal((d, d))
        if abs(np.linalg.det(matrix)) > min_det:
            return AffineMap(matrix, rng.standard_normal(d))


def random_hpolytope(rng, d: int, extra: int = 3) -> HPolytope:
    """Bounded polytope with 0 in its interior: a box plus random cuts."""
    rows = [np.eye(d), -np.eye(d)]
    if extra:
        cuts = rng.standard_normal((extra, d))
        cuts /= np.linalg.norm(cuts, axis=1, keepdims=True)
        rows.append(cuts)
    normals = np.vstack(rows)
    offsets = rng.uniform(0.5, 2.0, size=len(normals))
    return HPolytope(normals, offsets)


def simple_kernel(rng, d: int):
    """A random leaf kernel (no product/affine wrapper)."""
    pick = int(rng.integers(0, 4))
    if pick == 0:
        return Ball(d)
    if pick == 1:
        return SimplexPos(d)
    if pick == 2:
        return SimplexNeg(d)
    return random_hpolytope(rng, d, extra=2)


def random_kernel(rng, d: int, variant: str):
    if variant == "hpolytope":
        return random_hpolytope(rng, d)
    if variant == "ball":
        return Ball(d)
    if variant == "simplex_pos":
        return SimplexPos(d)
    if variant == "simplex_neg":
        return SimplexNeg(d)
    if variant == "parallelotope":
        return Parallelotope(random_invertible_map(rng, d))
    if variant == "product":
        if d < 2:
            raise ValueError("product kernels need d >= 2")
        d_left = int(rng.integers(1, d))
        return Product(simple_kernel(rng, d_left), simple_kernel(rng, d - d_left))
    if variant == "affine_image":
        return AffineImage(random_invertible_map(rng, d), simple_kernel(rng, d))
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# minimum-enclosing-ball oracle


def circumsphere_in_affine_hull(pts: np.ndarray):
    """Center/radius of the sphere through all of ``pts`` with center in
    their affine hull, or None when they are affinely dependent."""
    base = pts[0]
    V = pts[1:] - base
    if len(V) == 0:
        return base.copy(), 0.0
    gram = V @ V.T
    rhs = 0.5 * np.einsum("ij,ij->i", V, V)
    try:
        weights = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.isfinite(weights).all():
        return None
    center = base + weights @ V
    radius = float(np.linalg.norm(center - base))
    return center, radius


def brute_force_meb(points) -> tuple[np.ndarray, float]:
    """Minimum enclosing ball by enumerating candidate support sets."""
    pts = np.asarray(points, dtype=float)
    n, d = pts.shape
    best = None
    for size in range(1, min(n, d + 1) + 1):
        for subset in itertools.combinations(range(n), size):
            result = circumsphere_in_affine_hull(pts[list(subset)])
            if result is None:
                continue
            center, radius = result
            reach = np.linalg.norm(pts - center, axis=1).max()
            if reach <= radius + 1e-9 * (1.0 + radius):
                if best is None or radius < best[1]:
                    best = (center, radius)
    assert best is not None, "every finite set has an enclosing ball"
    return best


# ---------------------------------------------------------------------------
# linear-programming oracle


def lp_min_by_vertices(c, G, h) -> float:
    """min c.x over Gx <= h by enumerating basic feasible points.

    Requires the feasible region to be bounded with at least one vertex.
    """
    c = np.asarray(c, dtype=float)
    G = np.asarray(G, dtype=float)
    h = np.asarray(h, dtype=float)
    m, n = G.shape
    best = None
    for rows in itertools.combinations(range(m), n):
        sub = G[list(rows)]
        if abs(np.linalg.det(sub)) < 1e-9:
            continue
        x = np.linalg.solve(sub, h[list(rows)])
        if (G @ x <= h + 1e-7).all():
            value = float(c @ x)
            if best is None or value < best:
                best = value
    assert best is not None, "no vertex found; generator produced a bad LP"
    return best


def random_bounded_lp(rng, n: int, m_extra: int):
    """Random feasible bounded LP: a box plus extra rows through a known
    interior point, with a random objective."""
    box = np.vstack([np.eye(n), -np.eye(n)])
    box_h = np.full(2 * n, 3.0)
    interior = rng.uniform(-1.0, 1.0, size=n)
    extra = rng.standard_normal((m_extra, n))
    extra_h = extra @ interior + rng.uniform(0.3, 1.5, size=m_extra)
    G = np.vstack([box, extra])
    h = np.concatenate([box_h, extra_h])
    c = rng.standard_normal(n)
    return c, G, h


# ---------------------------------------------------------------------------
# random diversities and metrics


def random_euclidean_metric(rng, n: int, d: int = 3) -> np.ndarray:
    pts = random_points(rng, n, d)
    diff = pts[:, None, :] - pts[None, :, :]
    return np.linalg.norm(diff, axis=2)


def random_three_label_diversity(rng):
    """Uniformly sampled valid diversity on three labels."""
    from circumdiv.diversity import FiniteDiversity

    labels = ("a", "b", "c")
    while True:
        pairs = rng.uniform(0.2, 2.0, size=3)  # ab, ac, bc
        ab, ac, bc = pairs
        # triangle inequality for the induced metric
        if ab > ac + bc or ac > ab + bc or bc > ab + ac:
            continue
        lo = max(pairs)
        hi = min(ab + bc, ab + ac, ac + bc)
        triple = rng.uniform(lo, hi)
        values = np.zeros(8)
        la, lb, lc = 1, 2, 4
        values[la | lb] = ab
        values[la | lc] = ac
        values[lb | lc] = bc
        values[la | lb | lc] = triple
        return FiniteDiversity(labels, values)
