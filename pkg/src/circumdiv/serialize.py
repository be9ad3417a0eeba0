"""JSON codecs for the library's value types.

Documents are plain dicts ready for ``json.dumps``.  Formats:

* point: array of numbers
* point set: ``{"points": [[...], ...], "labels": [...]?}``
* affine map: ``{"matrix": [[...], ...], "offset": [...]}``
* kernel: tagged by ``"type"``, one of ``hpolytope | ball |
  simplex_pos | simplex_neg | parallelotope | product | affine_image``
* diversity: ``{"labels": [...], "values": {"a,b": 1.0, ...}}`` where
  keys are comma-joined label subsets (order inside a key is
  irrelevant; canonical form sorts).  By default every subset of two
  or more labels must be entered; with ``"mode": "completion"`` the
  missing subsets complete to the max over their entered subsets, so
  partial tables stay monotone.
* embedding: ``{"assignment": {label: point}, "kernel": {...}}``
"""

from __future__ import annotations

import itertools
from typing import Any, Optional

import numpy as np

from .diversity import FiniteDiversity
from .embed import Embedding
from .errors import InputFormatError
from .geometry import (
    AffineImage,
    AffineMap,
    Ball,
    HPolytope,
    Kernel,
    Parallelotope,
    PointSet,
    Product,
    SimplexNeg,
    SimplexPos,
)


def _listify(arr) -> list:
    return np.asarray(arr, dtype=float).tolist()


def _need(doc: dict, key: str, context: str):
    if not isinstance(doc, dict):
        raise InputFormatError(f"{context} must be an object, got {type(doc).__name__}")
    if key not in doc:
        raise InputFormatError(f"{context} is missing required key {key!r}")
    return doc[key]


# ---------------------------------------------------------------------------
# point sets


def encode_point_set(ps: PointSet) -> dict:
    doc: dict[str, Any] = {"points": _listify(ps.points)}
    if ps.labels is not None:
        doc["labels"] = list(ps.labels)
    return doc


def decode_point_set(doc: dict) -> PointSet:
    points = _need(doc, "points", "point set")
    labels = doc.get("labels")
    try:
        return PointSet(points, tuple(labels) if labels is not None else None)
    except (ValueError, TypeError) as exc:
        raise InputFormatError(f"bad point set: {exc}") from exc


# ---------------------------------------------------------------------------
# affine maps and kernels


def encode_affine_map(t: AffineMap) -> dict:
    return {"matrix": _listify(t.matrix), "offset": _listify(t.offset)}


def decode_affine_map(doc: dict) -> AffineMap:
    try:
        return AffineMap(_need(doc, "matrix", "affine map"),
                         _need(doc, "offset", "affine map"))
    except (ValueError, TypeError) as exc:
        raise InputFormatError(f"bad affine map: {exc}") from exc


def encode_kernel(kernel: Kernel) -> dict:
    if isinstance(kernel, HPolytope):
        return {
            "type": "hpolytope",
            "normals": _listify(kernel.normals),
            "offsets": _listify(kernel.offsets),
        }
    if isinstance(kernel, Ball):
        return {"type": "ball", "dim": kernel.dim}
    if isinstance(kernel, SimplexPos):
        return {"type": "simplex_pos", "dim": kernel.dim}
    if isinstance(kernel, SimplexNeg):
        return {"type": "simplex_neg", "dim": kernel.dim}
    if isinstance(kernel, Parallelotope):
        return {"type": "parallelotope", **encode_affine_map(kernel.transform)}
    if isinstance(kernel, Product):
        return {
            "type": "product",
            "left": encode_kernel(kernel.left),
            "right": encode_kernel(kernel.right),
        }
    if isinstance(kernel, AffineImage):
        return {
            "type": "affine_image",
            **encode_affine_map(kernel.transform),
            "base": encode_kernel(kernel.base),
        }
    raise InputFormatError(f"cannot encode kernel type {type(kernel).__name__}")


def decode_kernel(doc: dict) -> Kernel:
    tag = _need(doc, "type", "kernel")
    try:
        if tag == "hpolytope":
            return HPolytope(
                np.asarray(_need(doc, "normals", "hpolytope"), dtype=float),
                np.asarray(_need(doc, "offsets", "hpolytope"), dtype=float),
            )
        if tag == "ball":
            return Ball(int(_need(doc, "dim", "ball")))
        if tag == "simplex_pos":
            return SimplexPos(int(_need(doc, "dim", "simplex")))
        if tag == "simplex_neg":
            return SimplexNeg(int(_need(doc, "dim", "simplex")))
        if tag == "parallelotope":
            return Parallelotope(decode_affine_map(doc))
        if tag == "product":
            return Product(
                decode_kernel(_need(doc, "left", "product")),
                decode_kernel(_need(doc, "right", "product")),
            )
        if tag == "affine_image":
            return AffineImage(
                decode_affine_map(doc), decode_kernel(_need(doc, "base", "affine image"))
            )
    except InputFormatError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputFormatError(f"bad kernel: {exc}") from exc
    raise InputFormatError(f"unknown kernel type {tag!r}")


# ---------------------------------------------------------------------------
# diversities


def subset_key(labels) -> str:
    return ",".join(sorted(str(s) for s in labels))


def encode_diversity(d: FiniteDiversity) -> dict:
    values = {}
    n = len(d)
    for mask in range(1, 1 << n):
        members = d.members(mask)
        if len(members) >= 2:
            values[subset_key(members)] = float(d.values[mask])
    return {"labels": list(d.labels), "values": values}


def decode_diversity(doc: dict) -> FiniteDiversity:
    labels = _need(doc, "labels", "diversity")
    if not isinstance(labels, (list, tuple)) or not labels:
        raise InputFormatError("diversity labels must be a nonempty list")
    labels = tuple(str(s) for s in labels)
    if len(set(labels)) != len(labels):
        raise InputFormatError("diversity labels must be distinct")
    n = len(labels)
    if n > 16:
        raise InputFormatError("at most 16 labels supported")
    raw = _need(doc, "values", "diversity")
    if not isinstance(raw, dict):
        raise InputFormatError("diversity values must be an object")
    mode = doc.get("mode", "strict")
    if mode not in ("strict", "completion"):
        raise InputFormatError(f"unknown diversity mode {mode!r}")
    index = {s: i for i, s in enumerate(labels)}
    entered = np.full(1 << n, np.nan)
    entered[0] = 0.0
    for i in range(n):
        entered[1 << i] = 0.0
    for key, value in raw.items():
        parts = [p.strip() for p in str(key).split(",") if p.strip()]
        if not parts:
            raise InputFormatError(f"empty subset key {key!r}")
        mask = 0
        for part in parts:
            if part not in index:
                raise InputFormatError(f"unknown label {part!r} in key {key!r}")
            bit = 1 << index[part]
            if mask & bit:
                raise InputFormatError(f"repeated label {part!r} in key {key!r}")
            mask |= bit
        try:
            fval = float(value)
        except (TypeError, ValueError):
            raise InputFormatError(f"value for {key!r} is not a number") from None
        if bin(mask).count("1") < 2:
            if fval != 0.0:
                raise InputFormatError(
                    f"singleton {key!r} must have value 0, got {fval}"
                )
            continue
        if not np.isnan(entered[mask]):
            raise InputFormatError(f"subset {key!r} entered twice")
        entered[mask] = fval
    values = np.zeros(1 << n)
    if mode == "strict":
        missing = [mask for mask in range(1, 1 << n) if np.isnan(entered[mask])]
        if missing:
            members = sorted(labels[i] for i in range(n) if missing[0] >> i & 1)
            raise InputFormatError(
                f"diversity table omits subset {','.join(members)!r} "
                "(use \"mode\": \"completion\" to fill gaps)"
            )
        values[:] = entered
    else:
        # monotone completion: missing subsets take the max over entered
        # subsets they contain
        for mask in range(1, 1 << n):
            if not np.isnan(entered[mask]):
                values[mask] = entered[mask]
                continue
            best = 0.0
            m = mask
            while m:
                low = m & -m
                best = max(best, values[mask ^ low])
                m ^= low
            values[mask] = best
    try:
        return FiniteDiversity(labels, values)
    except ValueError as exc:
        raise InputFormatError(f"bad diversity table: {exc}") from exc


# ---------------------------------------------------------------------------
# embeddings


def encode_embedding(emb: Embedding) -> dict:
    return {
        "assignment": {s: _listify(p) for s, p in emb.assignment.items()},
        "kernel": encode_kernel(emb.kernel),
    }


def decode_embedding(doc: dict) -> Embedding:
    assignment = _need(doc, "assignment", "embedding")
    if not isinstance(assignment, dict) or not assignment:
        raise InputFormatError("embedding assignment must be a nonempty object")
    kernel = decode_kernel(_need(doc, "kernel", "embedding"))
    labels = tuple(sorted(assignment))
    try:
        points = np.array([assignment[s] for s in labels], dtype=float)
        return Embedding(labels, points, kernel)
    except (ValueError, TypeError) as exc:
        raise InputFormatError(f"bad embedding: {exc}") from exc
