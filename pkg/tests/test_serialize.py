import json

import numpy as np
import pytest

from circumdiv.diversity import FiniteDiversity, l1_diversity, symmetric_diversity
from circumdiv.embed import Embedding
from circumdiv.errors import InputFormatError
from circumdiv.geometry import AffineMap, Ball, PointSet
from circumdiv.serialize import (
    decode_affine_map,
    decode_diversity,
    decode_embedding,
    decode_kernel,
    decode_point_set,
    encode_affine_map,
    encode_diversity,
    encode_embedding,
    encode_kernel,
    encode_point_set,
    subset_key,
)

from helpers import (
    KERNEL_VARIANTS,
    labels_for,
    random_invertible_map,
    random_kernel,
    random_labeled_points,
)


def json_round(doc):
    """Force a pass through actual JSON text so types stay JSON-native."""
    return json.loads(json.dumps(doc))


# ---------------------------------------------------------------------------
# point sets and affine maps


def test_point_set_round_trip(rng):
    ps = random_labeled_points(rng, 5, 3)
    back = decode_point_set(json_round(encode_point_set(ps)))
    assert back.labels == ps.labels
    assert np.array_equal(back.points, ps.points)


def test_point_set_missing_key():
    with pytest.raises(InputFormatError, match="missing required key"):
        decode_point_set({"labels": ["a"]})


def test_point_set_ragged_rows():
    with pytest.raises(InputFormatError, match="bad point set"):
        decode_point_set({"labels": ["a", "b"], "points": [[0.0], [0.0, 1.0]]})


def test_affine_map_round_trip(rng):
    t = random_invertible_map(rng, 3)
    back = decode_affine_map(json_round(encode_affine_map(t)))
    assert np.array_equal(back.matrix, t.matrix)
    assert np.array_equal(back.offset, t.offset)


def test_affine_map_shape_mismatch():
    with pytest.raises(InputFormatError, match="bad affine map"):
        decode_affine_map({"matrix": [[1.0, 0.0]], "offset": [0.0, 0.0]})


# ---------------------------------------------------------------------------
# kernels


@pytest.mark.parametrize("variant", KERNEL_VARIANTS)
def test_kernel_round_trip(rng, variant):
    kernel = random_kernel(rng, 3, variant)
    doc = json_round(encode_kernel(kernel))
    back = decode_kernel(doc)
    assert back.dim == kernel.dim
    # identical re-encoding implies the structure survived intact
    assert json_round(encode_kernel(back)) == doc
    # behavioral check on sampled probes
    z = kernel.interior_point()
    assert back.contains(z, tol=1e-9)
    for _ in range(20):
        p = z + rng.normal(size=kernel.dim)
        assert back.contains(p, tol=1e-9) == kernel.contains(p, tol=1e-9)


def test_unknown_kernel_type():
    with pytest.raises(InputFormatError, match="unknown kernel type"):
        decode_kernel({"type": "octagon"})


def test_kernel_bad_payload():
    doc = {"type": "hpolytope", "normals": [[1.0, 0.0]], "offsets": [1.0, 2.0]}
    with pytest.raises(InputFormatError, match="bad kernel"):
        decode_kernel(doc)


# ---------------------------------------------------------------------------
# diversities


def test_diversity_round_trip(rng):
    d = l1_diversity(random_labeled_points(rng, 4, 2))
    back = decode_diversity(json_round(encode_diversity(d)))
    assert back.labels == d.labels
    assert np.allclose(back.values, d.values, atol=0.0)


def test_encoded_table_omits_singletons(rng):
    doc = encode_diversity(l1_diversity(random_labeled_points(rng, 3, 2)))
    assert all("," in key for key in doc["values"])


def test_strict_mode_requires_every_subset():
    doc = {"labels": ["a", "b", "c"], "values": {"a,b": 1.0, "a,c": 1.0, "b,c": 1.0}}
    with pytest.raises(InputFormatError, match="completion"):
        decode_diversity(doc)


def test_strict_error_names_missing_subset():
    doc = {"labels": ["a", "b"], "values": {}}
    with pytest.raises(InputFormatError, match="'a,b'"):
        decode_diversity(doc)


def test_completion_fills_monotone_envelope():
    doc = {
        "labels": ["a", "b", "c"],
        "mode": "completion",
        "values": {"a,b": 1.0, "a,c": 2.0},
    }
    d = decode_diversity(doc)
    assert d.value(("b", "c")) == 0.0
    assert d.value(("a", "b", "c")) == 2.0


def test_completion_respects_entered_full_set():
    doc = {
        "labels": ["a", "b", "c"],
        "mode": "completion",
        "values": {"a,b": 1.0, "a,b,c": 5.0},
    }
    d = decode_diversity(doc)
    assert d.value(("a", "b", "c")) == 5.0


def test_unknown_mode_rejected():
    doc = {"labels": ["a", "b"], "mode": "guess", "values": {"a,b": 1.0}}
    with pytest.raises(InputFormatError, match="unknown diversity mode"):
        decode_diversity(doc)


def test_key_order_and_spaces_normalized():
    doc = {"labels": ["a", "b"], "values": {" b , a ": 2.5}}
    assert decode_diversity(doc).value(("a", "b")) == 2.5


def test_duplicate_subset_rejected():
    doc = {"labels": ["a", "b"], "values": {"a,b": 1.0, "b,a": 1.0}}
    with pytest.raises(InputFormatError, match="entered twice"):
        decode_diversity(doc)


def test_unknown_label_in_key():
    doc = {"labels": ["a", "b"], "values": {"a,q": 1.0, "a,b": 1.0}}
    with pytest.raises(InputFormatError, match="unknown label 'q'"):
        decode_diversity(doc)


def test_repeated_label_in_key():
    doc = {"labels": ["a", "b"], "values": {"a,a": 1.0, "a,b": 1.0}}
    with pytest.raises(InputFormatError, match="repeated label 'a'"):
        decode_diversity(doc)


def test_nonzero_singleton_rejected():
    doc = {"labels": ["a", "b"], "values": {"a": 0.5, "a,b": 1.0}}
    with pytest.raises(InputFormatError, match="singleton"):
        decode_diversity(doc)


def test_explicit_zero_singleton_allowed():
    doc = {"labels": ["a", "b"], "values": {"a": 0.0, "a,b": 1.0}}
    assert decode_diversity(doc).value(("a", "b")) == 1.0


def test_non_numeric_value():
    doc = {"labels": ["a", "b"], "values": {"a,b": "wide"}}
    with pytest.raises(InputFormatError, match="not a number"):
        decode_diversity(doc)


def test_duplicate_labels_rejected():
    with pytest.raises(InputFormatError, match="distinct"):
        decode_diversity({"labels": ["a", "a"], "values": {}})


def test_label_count_cap():
    labels = [f"x{i}" for i in range(17)]
    with pytest.raises(InputFormatError, match="at most 16"):
        decode_diversity({"labels": labels, "values": {}})


def test_negative_value_rejected():
    doc = {"labels": ["a", "b"], "values": {"a,b": -1.0}}
    with pytest.raises(InputFormatError, match="bad diversity table"):
        decode_diversity(doc)


def test_subset_key_sorts_labels():
    assert subset_key(("c", "a", "b")) == "a,b,c"


def test_symmetric_table_survives_round_trip():
    d = symmetric_diversity(np.array([0.0, 1.0, 1.5, 1.8]), labels_for(4))
    back = decode_diversity(encode_diversity(d))
    assert np.allclose(back.values, d.values, atol=0.0)


# ---------------------------------------------------------------------------
# embeddings


def test_embedding_round_trip(rng):
    pts = random_labeled_points(rng, 4, 2)
    emb = Embedding(pts.labels, pts.points, Ball(2))
    back = decode_embedding(json_round(encode_embedding(emb)))
    assert back.labels == emb.labels
    assert np.array_equal(back.points, emb.points)
    assert isinstance(back.kernel, Ball) and back.kernel.dim == 2
    assert np.allclose(
        back.realized_diversity().values, emb.realized_diversity().values, atol=1e-9
    )


def test_embedding_empty_assignment():
    with pytest.raises(InputFormatError, match="nonempty"):
        decode_embedding({"assignment": {}, "kernel": {"type": "ball", "dim": 2}})


def test_embedding_ragged_points():
    doc = {
        "assignment": {"a": [0.0, 0.0], "b": [1.0]},
        "kernel": {"type": "ball", "dim": 2},
    }
    with pytest.raises(InputFormatError, match="bad embedding"):
        decode_embedding(doc)
