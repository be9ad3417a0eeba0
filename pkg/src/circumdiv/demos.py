"""Built-in demonstrations with fixed, reproducible geometry.

Three demos ship with the CLI:

* ``l1-counterexample``: translating two segments can never bring
  their sup-range union value down to the max of the individual
  values, while the unit-cube kernel (a convex body) always admits
  such translations.
* ``nonconvex``: averaging two polytope circumradius diversities gives
  a diversity that no convex kernel reproduces; the union bound fails
  strictly at every translation.
* ``scene``: a gallery point set with one kernel and three highlighted
  groups whose circumradii are strictly ordered.

Each demo returns a JSON-ready report dict; the scene demo also exposes
its raw geometry for rendering.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .circumradius import circumradius, min_union_translation, union_translation_witness
from .config import TOLS
from .diversity import l1_value
from .geometry import (
    AffineMap,
    HPolytope,
    Parallelotope,
    PointSet,
    hpolytope_from_points_2d,
)
from .serialize import encode_kernel, encode_point_set

# two unit segments along different axes; the sup-range value of any
# union of translates stays at 2, twice the individual value
L1_SET_A = np.array([[0.0, 0.0], [1.0, 0.0]])
L1_SET_B = np.array([[0.0, 0.0], [0.0, 1.0]])

# triangle pairs whose hulls build the two reference kernels
NONCONVEX_A = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
NONCONVEX_B = np.array([[1.0, 0.0], [2.0, 0.0], [1.0, 1.0]])
NONCONVEX_B_ALT = np.array([[0.0, 1.0], [1.0, 1.0], [0.0, 2.0]])

SCENE_KERNEL_HULL = np.array(
    [
        [1.2, 0.0],
        [0.6, 1.0],
        [-0.6, 1.0],
        [-1.2, 0.0],
        [-0.6, -1.0],
        [0.6, -1.0],
    ]
)

SCENE_POINTS = {
    "a": (-2.1, 1.4),
    "b": (2.3, 1.1),
    "c": (-0.9, -0.3),
    "d": (0.4, -1.9),
    "e": (-0.55, -0.05),
    "f": (-0.75, -0.55),
    "g": (-1.7, -1.2),
    "h": (-0.3, 0.9),
    "i": (0.9, 0.3),
    "j": (1.4, 1.7),
    "k": (2.0, -0.6),
}

SCENE_GROUPS = {
    "wide": ("a", "b", "d", "g", "k"),
    "pair": ("h", "i"),
    "tight": ("c", "e", "f"),
}


def l1_report(*, seed: Optional[int] = None) -> dict:
    """Union translations under the sup-range value vs the cube kernel."""
    a_val = l1_value(L1_SET_A)
    b_val = l1_value(L1_SET_B)
    bound = max(a_val, b_val)
    best, offset = min_union_translation(
        L1_SET_A, L1_SET_B, l1_value, seed=seed, return_offset=True
    )

    cube = Parallelotope(AffineMap.identity(2))

    def cube_radius(arr: np.ndarray) -> float:
        return circumradius(arr, cube, check=False).radius

    cube_best, cube_offset = min_union_translation(
        L1_SET_A, L1_SET_B, cube_radius, seed=seed, return_offset=True
    )
    witness = union_translation_witness(L1_SET_A, L1_SET_B, cube, seed=seed)

    return {
        "demo": "l1-counterexample",
        "set_a": encode_point_set(PointSet(L1_SET_A)),
        "set_b": encode_point_set(PointSet(L1_SET_B)),
        "individual_values": {"a": a_val, "b": b_val},
        "max_individual": bound,
        "min_union_value": best,
        "argmin_offset": offset.tolist(),
        "violates_condition": bool(best > bound + TOLS.optimality_tol),
        "cube_kernel": {
            "min_union_value": cube_best,
            "argmin_offset": cube_offset.tolist(),
            "witness_offsets": {
                "a": witness.offset_a.tolist(),
                "b": witness.offset_b.tolist(),
            },
            "achieves_bound": bool(
                cube_best <= bound + TOLS.optimality_tol * (1.0 + bound)
            ),
        },
    }


def nonconvex_kernels() -> tuple[HPolytope, HPolytope]:
    first = hpolytope_from_points_2d(np.vstack([NONCONVEX_A, NONCONVEX_B]))
    second = hpolytope_from_points_2d(np.vstack([NONCONVEX_A, NONCONVEX_B_ALT]))
    return first, second


def nonconvex_report(*, seed: Optional[int] = None) -> dict:
    """Averaged two-kernel diversity breaking the union translation bound.

    The average of two circumradius diversities is again a diversity,
    and both reference sets get value 1.  If a single convex kernel
    realized the average, some translation would bring the union value
    down to 1; the multistart search shows it stays above 4/3.
    """
    first, second = nonconvex_kernels()

    def terms(arr: np.ndarray) -> tuple[float, float]:
        return (
            circumradius(arr, first, check=False).radius,
            circumradius(arr, second, check=False).radius,
        )

    def averaged(arr: np.ndarray) -> float:
        r1, r2 = terms(arr)
        return 0.5 * (r1 + r2)

    def anchor(offset: tuple[float, float]) -> dict:
        r1, r2 = terms(np.vstack([NONCONVEX_A, NONCONVEX_B + list(offset)]))
        return {
            "offset": list(offset),
            "first_kernel": r1,
            "second_kernel": r2,
            "average": 0.5 * (r1 + r2),
        }

    a_val = averaged(NONCONVEX_A)
    b_val = averaged(NONCONVEX_B)
    bound = max(a_val, b_val)
    best, offset = min_union_translation(
        NONCONVEX_A, NONCONVEX_B, averaged, seed=seed, return_offset=True
    )
    return {
        "demo": "nonconvex",
        "set_a": encode_point_set(PointSet(NONCONVEX_A)),
        "set_b": encode_point_set(PointSet(NONCONVEX_B)),
        "kernels": [encode_kernel(first), encode_kernel(second)],
        "individual_values": {"a": a_val, "b": b_val},
        "max_individual": bound,
        "anchors": {
            "zero": anchor((0.0, 0.0)),
            "mirror": anchor((-1.0, 1.0)),
        },
        "min_union_value": best,
        "argmin_offset": offset.tolist(),
        "violates_condition": bool(best > bound + TOLS.optimality_tol),
    }


def scene_geometry() -> tuple[PointSet, HPolytope, dict[str, tuple[str, ...]]]:
    labels = tuple(sorted(SCENE_POINTS))
    pts = np.array([SCENE_POINTS[s] for s in labels])
    kernel = hpolytope_from_points_2d(SCENE_KERNEL_HULL)
    return PointSet(pts, labels), kernel, dict(SCENE_GROUPS)


def scene_report(*, seed: Optional[int] = None) -> dict:
    """Three point groups with strictly ordered circumradii."""
    points, kernel, groups = scene_geometry()
    index = {s: i for i, s in enumerate(points.labels)}
    solved = {}
    for name, members in groups.items():
        arr = points.points[[index[s] for s in members]]
        sol = circumradius(arr, kernel, seed=seed)
        solved[name] = {
            "members": list(members),
            "radius": sol.radius,
            "center": sol.center.tolist(),
        }
    radii = {name: solved[name]["radius"] for name in groups}
    ordering = sorted(radii, key=radii.get, reverse=True)
    return {
        "demo": "scene",
        "points": encode_point_set(points),
        "kernel": encode_kernel(kernel),
        "groups": solved,
        "radius_ordering": ordering,
        "strictly_ordered": bool(
            all(
                radii[ordering[i]] > radii[ordering[i + 1]] + TOLS.optimality_tol
                for i in range(len(ordering) - 1)
            )
        ),
    }


DEMOS = {
    "l1-counterexample": l1_report,
    "nonconvex": nonconvex_report,
    "scene": scene_report,
}
