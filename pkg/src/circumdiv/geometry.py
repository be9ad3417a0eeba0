"""Point sets, affine maps, and the convex bodies used as scaling kernels.

A kernel is a convex body (compact with nonempty interior) represented by
one of the variants below.  Kernels support containment queries against a
scaled copy, report an interior point, and can be validated once and
cached.  Conversions to half-space form are provided for every
polyhedral variant so polyhedral results can be cross-checked against a
generic LP route.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import TOLS
from .errors import (
    DimensionMismatchError,
    InvalidKernelError,
    UnsupportedKernelError,
)
from . import linprog


def as_points(value, dim: Optional[int] = None) -> np.ndarray:
    """Coerce to an (n, d) float array of point rows."""
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array of points, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("points must be finite")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionMismatchError(
            f"points have dimension {arr.shape[1]}, expected {dim}"
        )
    return arr


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class PointSet:
    """Finite list of points in a common ambient dimension.

    Labels are optional; when present they must be distinct and are used
    to key diversity tables built from the set.
    """

    points: np.ndarray
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        pts = _readonly(as_points(self.points))
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != pts.shape[0]:
                raise ValueError("label count does not match point count")
            if len(set(labels)) != len(labels):
                raise ValueError("labels must be distinct")
            object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def __iter__(self):
        return iter(self.points)

    def subset(self, indices: Sequence[int]) -> "PointSet":
        idx = list(indices)
        labels = tuple(self.labels[i] for i in idx) if self.labels else None
        return PointSet(self.points[idx], labels)

    def translate(self, offset) -> "PointSet":
        off = np.asarray(offset, dtype=float)
        return PointSet(self.points + off, self.labels)


@dataclass(frozen=True, eq=False)
class AffineMap:
    """x -> matrix @ x + offset."""

    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=float)
        t = np.asarray(self.offset, dtype=float)
        if M.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        if t.shape != (M.shape[0],):
            raise ValueError("offset length must match matrix rows")
        if not (np.isfinite(M).all() and np.isfinite(t).all()):
            raise ValueError("affine map must be finite")
        object.__setattr__(self, "matrix", _readonly(M))
        object.__setattr__(self, "offset", _readonly(t))

    @classmethod
    def identity(cls, dim: int) -> "AffineMap":
        return cls(np.eye(dim), np.zeros(dim))

    @property
    def dim_in(self) -> int:
        return self.matrix.shape[1]

    @property
    def dim_out(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_square(self) -> bool:
        return self.matrix.shape[0] == self.matrix.shape[1]

    def __call__(self, points) -> np.ndarray:
        pts = as_points(points, self.dim_in)
        return pts @ self.matrix.T + self.offset

    def inverse(self) -> "AffineMap":
        if not self.is_square:
            raise ValueError("only square maps are invertible")
        inv = np.linalg.inv(self.matrix)
        return AffineMap(inv, -inv @ self.offset)


def apply_map(transform: AffineMap, point_set: PointSet) -> PointSet:
    """Image of a point set under an affine map, labels preserved."""
    return PointSet(transform(point_set.points), point_set.labels)


# ---------------------------------------------------------------------------
# kernels


class Kernel:
    """Base class for scaling kernels.  Subclasses are immutable."""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def contains(self, point, scale: float = 1.0, tol: Optional[float] = None) -> bool:
        """Whether ``point`` lies in ``scale * K`` within tolerance."""
        raise NotImplementedError

    def interior_point(self) -> np.ndarray:
        """Some point in the interior of the kernel."""
        raise NotImplementedError

    def validate(self) -> None:
        """Raise InvalidKernelError unless this is a convex body."""
        _validated(self)

    def _check(self) -> None:
        raise NotImplementedError


@functools.lru_cache(maxsize=256)
def _validated_cached(kernel: "Kernel") -> bool:
    kernel._check()
    return True


def _validated(kernel: "Kernel") -> None:
    # kernels hash by identity, so the cache amortizes repeat validation
    _validated_cached(kernel)


@dataclass(frozen=True, eq=False)
class HPolytope(Kernel):
    """Intersection of half-spaces ``normals @ x <= offsets``.

    Validation checks boundedness (via 2d support LPs) and a strictly
    positive inscribed ball radius, so the body is full-dimensional.
    """

    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        N = np.asarray(self.normals, dtype=float)
        c = np.asarray(self.offsets, dtype=float)
        if N.ndim != 2 or c.shape != (N.shape[0],):
            raise ValueError("normals must be (m, d) with matching offsets (m,)")
        if not (np.isfinite(N).all() and np.isfinite(c).all()):
            raise ValueError("half-space data must be finite")
        if N.shape[0] == 0:
            raise InvalidKernelError("half-space list is empty")
        norms = np.linalg.norm(N, axis=1)
        if (norms <= TOLS.degeneracy_tol).any():
            raise InvalidKernelError("zero normal vector")
        object.__setattr__(self, "normals", _readonly(N))
        object.__setattr__(self, "offsets", _readonly(c))

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    def contains(self, point, scale=1.0, tol=None):
        tol = TOLS.abs_tol if tol is None else tol
        z = np.asarray(point, dtype=float)
        return bool((self.normals @ z - scale * self.offsets).max() <= tol)

    def interior_point(self) -> np.ndarray:
        return self._deepest_point()[0]

    def _deepest_point(self) -> tuple[np.ndarray, float]:
        """Center and radius of a largest inscribed ball."""
        d = self.dim
        norms = np.linalg.norm(self.normals, axis=1)
        # variables (x, s): maximize s with n_i.x + s|n_i| <= c_i
        G = np.hstack([self.normals, norms[:, None]])
        obj = np.zeros(d + 1)
        obj[-1] = -1.0
        lower = np.full(d + 1, -np.inf)
        lower[-1] = 0.0
        result = linprog.solve(linprog.LinearProgram(obj, G, self.offsets, lower=lower))
        if not result.optimal:
            raise InvalidKernelError("polytope admits no inscribed ball")
        return result.x[:d], float(result.x[d])

    def _check(self) -> None:
        d = self.dim
        for j in range(d):
            for sign in (1.0, -1.0):
                obj = np.zeros(d)
                obj[j] = sign
                res = linprog.solve(linprog.LinearProgram(obj, self.normals, self.offsets))
                if res.status is linprog.LpStatus.UNBOUNDED:
                    raise InvalidKernelError(f"polytope unbounded along axis {j}")
                if res.status is linprog.LpStatus.INFEASIBLE:
                    raise InvalidKernelError("polytope is empty")
        _, radius = self._deepest_point()
        if radius <= TOLS.degeneracy_tol:
            raise InvalidKernelError(
                f"polytope interior is degenerate (inscribed radius {radius:.2e})"
            )


@dataclass(frozen=True, eq=False)
class Ball(Kernel):
    """Closed Euclidean unit ball."""

    ndim: int

    @property
    def dim(self) -> int:
        return self.ndim

    def contains(self, point, scale=1.0, tol=None):
        tol = TOLS.abs_tol if tol is None else tol
        z = np.asarray(point, dtype=float)
        return bool(np.linalg.norm(z) <= scale + tol)

    def interior_point(self) -> np.ndarray:
        return np.zeros(self.dim)

    def _check(self) -> None:
        if self.ndim < 1:
            raise InvalidKernelError("ball dimension must be at least 1")


@dataclass(frozen=True, eq=False)
class SimplexPos(Kernel):
    """conv(0, e_1, ..., e_d): the standard corner simplex."""

    ndim: int

    @property
    def dim(self) -> int:
        return self.ndim

    def contains(self, point, scale=1.0, tol=None):
        tol = TOLS.abs_tol if tol is None else tol
        z = np.asarray(point, dtype=float)
        return bool(z.min() >= -tol and z.sum() <= scale + tol)

    def interior_point(self) -> np.ndarray:
        return np.full(self.dim, 1.0 / (self.dim + 1))

    def _check(self) -> None:
        if self.ndim < 1:
            raise InvalidKernelError("simplex dimension must be at least 1")


@dataclass(frozen=True, eq=False)
class SimplexNeg(Kernel):
    """conv(0, -e_1, ..., -e_d): the reflected corner simplex."""

    ndim: int

    @property
    def dim(self) -> int:
        return self.ndim

    def contains(self, point, scale=1.0, tol=None):
        tol = TOLS.abs_tol if tol is None else tol
        z = np.asarray(point, dtype=float)
        return bool(z.max() <= tol and z.sum() >= -scale - tol)

    def interior_point(self) -> np.ndarray:
        return np.full(self.dim, -1.0 / (self.dim + 1))

    def _check(self) -> None:
        if self.ndim < 1:
            raise InvalidKernelError("simplex dimension must be at least 1")


@dataclass(frozen=True, eq=False)
class Parallelotope(Kernel):
    """Affine image of the unit cube [0, 1]^d under a nondegenerate map."""

    transform: AffineMap

    def __post_init__(self):
        if not self.transform.is_square:
            raise InvalidKernelError("parallelotope transform must be square")

    @property
    def dim(self) -> int:
        return self.transform.dim_out

    def contains(self, point, scale=1.0, tol=None):
        tol = TOLS.abs_tol if tol is None else tol
        z = np.asarray(point, dtype=float)
        # pull back into cube coordinates: z in s*T([0,1]^d) iff
        # Minv(z - s*t) in s*[0,1]^d
        inv = np.linalg.inv(self.transform.matrix)
        y = inv @ (z - scale * self.transform.offset)
        return bool(y.min() >= -tol and y.max() <= scale + tol)

    def interior_point(self) -> np.ndarray:
        return self.transform(np.full(self.dim, 0.5))[0]

    def _check(self) -> None:
        d = self.dim
        det = abs(np.linalg.det(self.transform.matrix))
        if det <= TOLS.degeneracy_tol:
            raise InvalidKernelError(f"parallelotope is degenerate (|det| = {det:.2e})")


@dataclass(frozen=True, eq=False)
class Product(Kernel):
    """Cartesian product of two kernels on consecutive coordinate blocks."""

    left: Kernel
    right: Kernel

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim

    def contains(self, point, scale=1.0, tol=None):
        z = np.asarray(point, dtype=float)
        p = self.left.dim
        return self.left.contains(z[:p], scale, tol) and self.right.contains(
            z[p:], scale, tol
        )

    def interior_point(self) -> np.ndarray:
        return np.concatenate([self.left.interior_point(), self.right.interior_point()])

    def _check(self) -> None:
        self.left.validate()
        self.right.validate()


@dataclass(frozen=True, eq=False)
class AffineImage(Kernel):
    """Nondegenerate affine image of another kernel."""

    transform: AffineMap
    base: Kernel

    def __post_init__(self):
        if not self.transform.is_square:
            raise InvalidKernelError("affine image transform must be square")
        if self.transform.dim_in != self.base.dim:
            raise DimensionMismatchError(
                f"transform expects dimension {self.transform.dim_in}, "
                f"base kernel has {self.base.dim}"
            )

    @property
    def dim(self) -> int:
        return self.transform.dim_out

    def contains(self, point, scale=1.0, tol=None):
        z = np.asarray(point, dtype=float)
        inv = np.linalg.inv(self.transform.matrix)
        y = inv @ (z - scale * self.transform.offset)
        return self.base.contains(y, scale, tol)

    def interior_point(self) -> np.ndarray:
        return self.transform(self.base.interior_point())[0]

    def _check(self) -> None:
        det = abs(np.linalg.det(self.transform.matrix))
        if det <= TOLS.degeneracy_tol:
            raise InvalidKernelError(f"affine image is degenerate (|det| = {det:.2e})")
        self.base.validate()


# ---------------------------------------------------------------------------
# conversions and closed-form vertex data


def to_hpolytope(kernel: Kernel) -> HPolytope:
    """Half-space representation of a polyhedral kernel.

    Raises UnsupportedKernelError for kernels with a Ball factor, which
    have no finite half-space description.
    """
    if isinstance(kernel, HPolytope):
        return kernel
    if isinstance(kernel, SimplexPos):
        d = kernel.dim
        normals = np.vstack([-np.eye(d), np.ones((1, d))])
        offsets = np.concatenate([np.zeros(d), [1.0]])
        return HPolytope(normals, offsets)
    if isinstance(kernel, SimplexNeg):
        d = kernel.dim
        normals = np.vstack([np.eye(d), -np.ones((1, d))])
        offsets = np.concatenate([np.zeros(d), [1.0]])
        return HPolytope(normals, offsets)
    if isinstance(kernel, Parallelotope):
        d = kernel.dim
        inv = np.linalg.inv(kernel.transform.matrix)
        shift = inv @ kernel.transform.offset
        # 0 <= Minv x - Minv t <= 1
        normals = np.vstack([inv, -inv])
        offsets = np.concatenate([1.0 + shift, -shift])
        return HPolytope(normals, offsets)
    if isinstance(kernel, Product):
        lhs = to_hpolytope(kernel.left)
        rhs = to_hpolytope(kernel.right)
        p, q = lhs.dim, rhs.dim
        normals = np.zeros((lhs.normals.shape[0] + rhs.normals.shape[0], p + q))
        normals[: lhs.normals.shape[0], :p] = lhs.normals
        normals[lhs.normals.shape[0] :, p:] = rhs.normals
        offsets = np.concatenate([lhs.offsets, rhs.offsets])
        return HPolytope(normals, offsets)
    if isinstance(kernel, AffineImage):
        base = to_hpolytope(kernel.base)
        inv = np.linalg.inv(kernel.transform.matrix)
        normals = base.normals @ inv
        offsets = base.offsets + normals @ kernel.transform.offset
        return HPolytope(normals, offsets)
    raise UnsupportedKernelError(
        f"{type(kernel).__name__} has no half-space representation"
    )


def kernel_vertices(kernel: Kernel) -> np.ndarray:
    """Vertex list for polyhedral kernels (rows).  2-d only for HPolytope.

    A 1-d ball is the interval [-1, 1] and counts as polyhedral.
    """
    if isinstance(kernel, Ball) and kernel.dim == 1:
        return np.array([[-1.0], [1.0]])
    if isinstance(kernel, SimplexPos):
        return np.vstack([np.zeros(kernel.dim), np.eye(kernel.dim)])
    if isinstance(kernel, SimplexNeg):
        return np.vstack([np.zeros(kernel.dim), -np.eye(kernel.dim)])
    if isinstance(kernel, Parallelotope):
        d = kernel.dim
        corners = np.array(
            [[(i >> j) & 1 for j in range(d)] for i in range(2**d)], dtype=float
        )
        return kernel.transform(corners)
    if isinstance(kernel, Product):
        lv = kernel_vertices(kernel.left)
        rv = kernel_vertices(kernel.right)
        out = np.empty((lv.shape[0] * rv.shape[0], kernel.dim))
        k = 0
        for a in lv:
            for b in rv:
                out[k, : lv.shape[1]] = a
                out[k, lv.shape[1] :] = b
                k += 1
        return out
    if isinstance(kernel, AffineImage):
        return kernel.transform(kernel_vertices(kernel.base))
    if isinstance(kernel, HPolytope):
        if kernel.dim != 2:
            raise UnsupportedKernelError("vertex enumeration only supported in 2-d")
        return _hpolytope_vertices_2d(kernel)
    raise UnsupportedKernelError(f"{type(kernel).__name__} has no vertex list")


def _hpolytope_vertices_2d(kernel: HPolytope) -> np.ndarray:
    N, c = kernel.normals, kernel.offsets
    m = N.shape[0]
    cands = []
    for i in range(m):
        for j in range(i + 1, m):
            A = N[[i, j]]
            if abs(np.linalg.det(A)) <= 1e-12:
                continue
            v = np.linalg.solve(A, c[[i, j]])
            if (N @ v - c).max() <= 1e-8 * (1.0 + np.abs(c).max()):
                cands.append(v)
    if not cands:
        raise InvalidKernelError("no vertices found; polytope may be unbounded")
    pts = np.array(cands)
    # deduplicate and sort counterclockwise around the centroid
    pts = np.unique(np.round(pts, 9), axis=0)
    center = pts.mean(axis=0)
    order = np.argsort(np.arctan2(pts[:, 1] - center[1], pts[:, 0] - center[0]))
    return pts[order]


# ---------------------------------------------------------------------------
# hull and set operations


def convex_hull_2d(points) -> np.ndarray:
    """Counterclockwise hull vertices via the monotone chain algorithm."""
    pts = np.unique(as_points(points, 2), axis=0)
    if pts.shape[0] <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def hpolytope_from_points_2d(points) -> HPolytope:
    """Half-space form of the convex hull of 2-d points."""
    hull = convex_hull_2d(points)
    if hull.shape[0] < 3:
        raise InvalidKernelError("hull is degenerate; need full-dimensional input")
    normals = []
    offsets = []
    n = hull.shape[0]
    for i in range(n):
        a, b = hull[i], hull[(i + 1) % n]
        edge = b - a
        normal = np.array([edge[1], -edge[0]])  # outward for a ccw loop
        normals.append(normal)
        offsets.append(normal @ a)
    return HPolytope(np.array(normals), np.array(offsets))


def in_hull(point, points, tol: Optional[float] = None) -> bool:
    """Whether ``point`` is a convex combination of the given points.

    Decided by LP feasibility on the combination weights.
    """
    pts = as_points(points)
    p = np.asarray(point, dtype=float)
    if p.shape != (pts.shape[1],):
        raise DimensionMismatchError("point dimension does not match point set")
    tol = TOLS.abs_tol if tol is None else tol
    n, d = pts.shape
    # weights w >= 0, sum w = 1, pts.T w = p; as inequalities within tol
    G = np.vstack(
        [
            pts.T,
            -pts.T,
            np.ones((1, n)),
            -np.ones((1, n)),
        ]
    )
    h = np.concatenate([p + tol, -p + tol, [1.0 + tol], [-1.0 + tol]])
    return linprog.feasible_point(G, h, lower=np.zeros(n)) is not None


def minkowski_sum(a_points, b_points) -> np.ndarray:
    """Pairwise sums {a + b}; the hull of the result is the hull sum.

    Exact duplicates are removed (bitwise float equality, keeping the
    operation deterministic).
    """
    A = as_points(a_points)
    B = as_points(b_points)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatchError("point sets have different dimensions")
    sums = (A[:, None, :] + B[None, :, :]).reshape(-1, A.shape[1])
    return np.unique(sums, axis=0)


def hausdorff_distance(a_points, b_points) -> float:
    """Hausdorff distance between two finite point sets."""
    A = as_points(a_points)
    B = as_points(b_points)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatchError("point sets have different dimensions")
    diff = np.linalg.norm(A[:, None, :] - B[None, :, :], axis=2)
    return float(max(diff.min(axis=1).max(), diff.min(axis=0).max()))
