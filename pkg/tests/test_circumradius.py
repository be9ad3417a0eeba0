import itertools

import numpy as np
import pytest

from circumdiv.circumradius import (
    check_union_translation,
    circumradius,
    min_enclosing_ball,
    min_union_translation,
    union_translation_witness,
)
from circumdiv.diversity import l1_value
from circumdiv.errors import DimensionMismatchError
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
    kernel_vertices,
    to_hpolytope,
)

from helpers import (
    CLOSED_FORM_VARIANTS,
    KERNEL_VARIANTS,
    brute_force_meb,
    random_hpolytope,
    random_kernel,
    random_points,
)

UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])


def radius_of(points, kernel, **kw) -> float:
    return circumradius(points, kernel, **kw).radius


def shrink_toward(kernel, z, alpha):
    """The body z + alpha (K - z), a subset of K for alpha in [0, 1]."""
    d = kernel.dim
    return AffineImage(AffineMap(alpha * np.eye(d), (1.0 - alpha) * np.asarray(z)), kernel)


# ---------------------------------------------------------------------------
# dispatch examples


def test_singleton_radius_zero():
    for kernel in (Ball(2), SimplexPos(2), SimplexNeg(2), random_hpolytope(np.random.default_rng(1), 2)):
        sol = circumradius(np.array([[0.3, 0.7]]), kernel)
        assert sol.radius == 0.0
        assert np.allclose(sol.center, [0.3, 0.7], atol=1e-9)


def test_repeated_point_radius_zero():
    sol = circumradius(np.array([[1.0, -2.0], [1.0, -2.0]]), Ball(2))
    assert sol.radius == 0.0


def test_unit_square_in_unit_cube():
    sol = circumradius(UNIT_SQUARE, Parallelotope(AffineMap.identity(2)))
    assert sol.radius == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(sol.center, [0.0, 0.0], atol=1e-9)


def test_negative_corner_in_simplex_pos():
    sol = circumradius(np.array([[0.0, 0.0], [-1.0, 0.0], [0.0, -1.0]]), SimplexPos(2))
    assert sol.radius == pytest.approx(2.0, abs=1e-9)


def test_unit_square_in_simplex_neg():
    sol = circumradius(UNIT_SQUARE, SimplexNeg(2))
    assert sol.radius == pytest.approx(2.0, abs=1e-9)
    # cross-check against the explicit half-space body
    hp = HPolytope(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]]),
                   np.array([0.0, 0.0, 1.0]))
    assert radius_of(UNIT_SQUARE, hp) == pytest.approx(2.0, abs=1e-6)


def test_unit_square_in_ball():
    sol = circumradius(UNIT_SQUARE, Ball(2))
    assert sol.radius == pytest.approx(np.sqrt(0.5), abs=1e-9)
    assert np.allclose(sol.center, [0.5, 0.5], atol=1e-9)


def test_dimension_mismatch_rejected():
    with pytest.raises(DimensionMismatchError):
        circumradius(np.array([[0.0, 0.0, 0.0]]), Ball(2))


def test_solution_contains_all_points(rng):
    for variant in KERNEL_VARIANTS:
        d = 2 if variant == "product" else int(rng.integers(2, 4))
        kernel = random_kernel(rng, d, variant)
        pts = random_points(rng, 6, d)
        sol = circumradius(pts, kernel, check=False)
        assert sol.radius > 0.0
        for a in pts:
            assert kernel.contains((a - sol.center) / sol.radius, tol=1e-6)


# ---------------------------------------------------------------------------
# closed forms vs the LP on the same body


def test_closed_forms_match_lp(rng):
    for _ in range(30):
        variant = CLOSED_FORM_VARIANTS[int(rng.integers(0, 3))]
        d = int(rng.integers(1, 5))
        kernel = random_kernel(rng, d, variant)
        pts = random_points(rng, int(rng.integers(2, 9)), d)
        closed = radius_of(pts, kernel)
        via_lp = radius_of(pts, to_hpolytope(kernel))
        assert via_lp == pytest.approx(closed, rel=1e-6, abs=1e-9)


def test_simplex_closed_form_values(rng):
    for _ in range(20):
        d = int(rng.integers(1, 5))
        pts = random_points(rng, int(rng.integers(2, 7)), d)
        neg = radius_of(pts, SimplexNeg(d))
        assert neg == pytest.approx(pts.max(axis=0).sum() - pts.sum(axis=1).min(), abs=1e-12)
        pos = radius_of(pts, SimplexPos(d))
        assert pos == pytest.approx(pts.sum(axis=1).max() - pts.min(axis=0).sum(), abs=1e-12)
        cube = radius_of(pts, Parallelotope(AffineMap.identity(d)))
        assert cube == pytest.approx((pts.max(axis=0) - pts.min(axis=0)).max(), abs=1e-12)


# ---------------------------------------------------------------------------
# minimum enclosing ball


def test_equilateral_triangle_meb():
    triangle = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
    center, radius = min_enclosing_ball(triangle)
    assert radius == pytest.approx(1 / np.sqrt(3), abs=1e-9)
    assert np.allclose(center, triangle.mean(axis=0), atol=1e-9)


def test_meb_matches_brute_force(rng):
    for _ in range(40):
        d = int(rng.integers(1, 4))
        pts = random_points(rng, int(rng.integers(2, 9)), d)
        _, fast = min_enclosing_ball(pts, seed=int(rng.integers(0, 1 << 31)))
        _, slow = brute_force_meb(pts)
        assert fast == pytest.approx(slow, abs=1e-9, rel=1e-9)


def test_meb_is_ball_kernel_radius(rng):
    pts = random_points(rng, 7, 3)
    assert radius_of(pts, Ball(3)) == pytest.approx(min_enclosing_ball(pts)[1], abs=1e-12)


def test_meb_seed_determinism(rng):
    pts = random_points(rng, 30, 3)
    a = min_enclosing_ball(pts, seed=7)
    b = min_enclosing_ball(pts, seed=7)
    assert a[1] == b[1] and np.array_equal(a[0], b[0])


# ---------------------------------------------------------------------------
# radius properties on random instances


def test_monotone_in_points_and_kernel(rng):
    for _ in range(25):
        variant = KERNEL_VARIANTS[int(rng.integers(0, len(KERNEL_VARIANTS)))]
        d = 2 if variant == "product" else int(rng.integers(2, 4))
        kernel = random_kernel(rng, d, variant)
        big = random_points(rng, 7, d)
        small = big[: int(rng.integers(1, 7))]
        shrunk = shrink_toward(kernel, kernel.interior_point(), float(rng.uniform(0.4, 1.0)))
        assert radius_of(small, kernel, check=False) <= radius_of(big, shrunk, check=False) + 1e-7


def test_hull_points_do_not_change_radius(rng):
    for _ in range(15):
        variant = KERNEL_VARIANTS[int(rng.integers(0, len(KERNEL_VARIANTS)))]
        d = 2 if variant == "product" else int(rng.integers(2, 4))
        kernel = random_kernel(rng, d, variant)
        pts = random_points(rng, 5, d)
        weights = rng.uniform(0.0, 1.0, size=(3, len(pts)))
        weights /= weights.sum(axis=1, keepdims=True)
        padded = np.vstack([pts, weights @ pts])
        assert radius_of(padded, kernel, check=False) == pytest.approx(
            radius_of(pts, kernel, check=False), abs=1e-7, rel=1e-9
        )


def test_minkowski_sublinearity(rng):
    from circumdiv.geometry import minkowski_sum

    for _ in range(15):
        variant = KERNEL_VARIANTS[int(rng.integers(0, len(KERNEL_VARIANTS)))]
        d = 2 if variant == "product" else int(rng.integers(2, 4))
        kernel = random_kernel(rng, d, variant)
        a = random_points(rng, 4, d)
        b = random_points(rng, 4, d)
        lhs = radius_of(minkowski_sum(a, b), kernel, check=False)
        rhs = radius_of(a, kernel, check=False) + radius_of(b, kernel, check=False)
        assert lhs <= rhs + 1e-6


def test_minkowski_equality_with_scaled_kernel_vertices(rng):
    for variant in CLOSED_FORM_VARIANTS:
        for _ in range(8):
            d = int(rng.integers(1, 4))
            kernel = random_kernel(rng, d, variant)
            a = random_points(rng, 5, d)
            alpha = float(rng.uniform(0.3, 2.0))
            from circumdiv.geometry import minkowski_sum

            summed = minkowski_sum(a, alpha * kernel_vertices(kernel))
            assert radius_of(summed, kernel) == pytest.approx(
                radius_of(a, kernel) + alpha, abs=1e-6, rel=1e-9
            )


def test_translation_invariance(rng):
    for _ in range(20):
        variant = KERNEL_VARIANTS[int(rng.integers(0, len(KERNEL_VARIANTS)))]
        d = 2 if variant == "product" else int(rng.integers(2, 4))
        kernel = random_kernel(rng, d, variant)
        pts = random_points(rng, 5, d)
        base = radius_of(pts, kernel, check=False)
        x = rng.standard_normal(d)
        assert radius_of(pts + x, kernel, check=False) == pytest.approx(base, abs=1e-7, rel=1e-9)
        y = rng.standard_normal(d)
        moved_kernel = AffineImage(AffineMap(np.eye(d), y), kernel)
        assert radius_of(pts, moved_kernel, check=False) == pytest.approx(base, abs=1e-7, rel=1e-9)


def test_scaling_identity(rng):
    for _ in range(20):
        variant = KERNEL_VARIANTS[int(rng.integers(0, len(KERNEL_VARIANTS)))]
        d = 2 if variant == "product" else int(rng.integers(2, 4))
        kernel = random_kernel(rng, d, variant)
        pts = random_points(rng, 5, d)
        base = radius_of(pts, kernel, check=False)
        alpha = float(rng.uniform(0.3, 3.0))
        beta = float(rng.uniform(0.3, 3.0))
        scaled_kernel = AffineImage(AffineMap(beta * np.eye(d), np.zeros(d)), kernel)
        assert radius_of(alpha * pts, scaled_kernel, check=False) == pytest.approx(
            (alpha / beta) * base, rel=1e-6
        )


def test_leave_one_out_bound(rng):
    for _ in range(20):
        k = int(rng.integers(2, 5))
        variant = KERNEL_VARIANTS[int(rng.integers(0, len(KERNEL_VARIANTS)))]
        d = 2 if variant == "product" else int(rng.integers(2, 4))
        kernel = random_kernel(rng, d, variant)
        pts = random_points(rng, k + 1, d)
        total = sum(
            radius_of(np.delete(pts, i, axis=0), kernel, check=False)
            for i in range(k + 1)
        )
        factor = k / ((k + 1) * (k - 1))
        assert radius_of(pts, kernel, check=False) <= factor * total + 1e-6


def test_product_radius_is_max_of_factors(rng):
    for _ in range(15):
        d1 = int(rng.integers(1, 3))
        d2 = int(rng.integers(1, 3))
        k1 = random_hpolytope(rng, d1, extra=2)
        k2 = random_hpolytope(rng, d2, extra=2)
        product = Product(k1, k2)
        pts = random_points(rng, 5, d1 + d2)
        sol = circumradius(pts, product)
        left = radius_of(pts[:, :d1], k1)
        right = radius_of(pts[:, d1:], k2)
        assert sol.radius == max(left, right)  # computed exactly this way
        materialized = radius_of(pts, to_hpolytope(product))
        assert materialized == pytest.approx(sol.radius, abs=1e-6, rel=1e-6)


def test_sampled_triangle_axiom(rng):
    for _ in range(20):
        variant = KERNEL_VARIANTS[int(rng.integers(0, len(KERNEL_VARIANTS)))]
        d = 2 if variant == "product" else int(rng.integers(2, 4))
        kernel = random_kernel(rng, d, variant)
        a = random_points(rng, int(rng.integers(1, 4)), d)
        b = random_points(rng, int(rng.integers(1, 4)), d)
        c = random_points(rng, int(rng.integers(1, 4)), d)
        r_ac = radius_of(np.vstack([a, c]), kernel, check=False)
        r_ab = radius_of(np.vstack([a, b]), kernel, check=False)
        r_bc = radius_of(np.vstack([b, c]), kernel, check=False)
        assert r_ac <= r_ab + r_bc + 1e-6


def test_lipschitz_in_hausdorff_distance(rng):
    from circumdiv.geometry import hausdorff_distance

    for _ in range(15):
        variant = KERNEL_VARIANTS[int(rng.integers(0, len(KERNEL_VARIANTS)))]
        d = 2 if variant == "product" else int(rng.integers(2, 4))
        kernel = random_kernel(rng, d, variant)
        corners = np.array(list(itertools.product([-1.0, 1.0], repeat=d)))
        kappa = radius_of(corners, kernel, check=False)
        pts = random_points(rng, 6, d)
        moved = pts + 0.05 * rng.standard_normal(pts.shape)
        gap = abs(radius_of(pts, kernel, check=False) - radius_of(moved, kernel, check=False))
        assert gap <= kappa * hausdorff_distance(pts, moved) + 1e-7


def test_affine_image_matches_mapped_lp(rng):
    # R(T(A), T(K)) = R(A, K) for invertible T (the pull-back path)
    from helpers import random_invertible_map

    for _ in range(10):
        d = int(rng.integers(1, 4))
        kernel = random_hpolytope(rng, d)
        pts = random_points(rng, 5, d)
        t = random_invertible_map(rng, d)
        base = radius_of(pts, kernel)
        mapped = radius_of(t(pts), AffineImage(t, kernel))
        assert mapped == pytest.approx(base, rel=1e-6, abs=1e-9)


# ---------------------------------------------------------------------------
# union translations


def test_union_translation_witness_properties(rng):
    for _ in range(12):
        variant = KERNEL_VARIANTS[int(rng.integers(0, len(KERNEL_VARIANTS)))]
        d = 2 if variant == "product" else int(rng.integers(2, 4))
        kernel = random_kernel(rng, d, variant)
        a = random_points(rng, 4, d)
        b = random_points(rng, 4, d)
        witness = union_translation_witness(a, b, kernel)
        assert witness.value <= max(witness.radius_a, witness.radius_b) + 1e-6
        assert check_union_translation(a, b, kernel)


def test_union_translation_same_set():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]])
    witness = union_translation_witness(pts, pts, Ball(2))
    assert witness.value == pytest.approx(radius_of(pts, Ball(2)), abs=1e-9)
    assert np.allclose(witness.offset_a, witness.offset_b, atol=1e-9)


def test_union_translation_segments_into_cube():
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    b = np.array([[0.0, 0.0], [0.0, 1.0]])
    witness = union_translation_witness(a, b, Parallelotope(AffineMap.identity(2)))
    assert witness.value == pytest.approx(1.0, abs=1e-9)


def test_min_union_translation_l1_counterexample():
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    b = np.array([[0.0, 0.0], [0.0, 1.0]])
    best = min_union_translation(a, b, l1_value, seed=3)
    assert best == pytest.approx(2.0, abs=1e-6)


def test_min_union_translation_cube_oracle():
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    b = np.array([[0.0, 0.0], [0.0, 1.0]])
    cube = Parallelotope(AffineMap.identity(2))

    def oracle(arr):
        return radius_of(arr, cube, check=False)

    assert min_union_translation(a, b, oracle, seed=3) == pytest.approx(1.0, abs=1e-6)


def test_min_union_translation_same_set(rng):
    pts = random_points(rng, 4, 2)
    best, offset = min_union_translation(pts, pts, l1_value, seed=5, return_offset=True)
    assert best == pytest.approx(l1_value(pts), abs=1e-6)
    assert np.linalg.norm(offset) < 1e-3
