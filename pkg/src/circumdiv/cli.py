"""Command line interface.

Exit codes: 0 for success, 2 for a well-formed negative decision (table
fails the axioms, diversity not embeddable, not negative type), 1 for
any error.  Every JSON document echoes the seed in effect so runs can
be reproduced exactly.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import demos, serialize
from .circumradius import (
    ball_core_set,
    circumradius,
    core_set,
)
from .config import DEFAULT_SEED, set_tolerances
from .diversity import check_axioms
from .embed import (
    ball_embed_decide,
    diameter_embed,
    negative_type_check,
    symmetric_embed,
)
from .errors import (
    CircumdivError,
    InputFormatError,
    NotDiameterError,
    NotEmbeddableError,
)
from .geometry import Ball
from .render import render_scene_svg, render_solution_svg

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


def _load_json(path: str, what: str) -> dict:
    try:
        with open(path) as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise InputFormatError(f"{what} file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{what} file is not valid JSON: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _as_text(doc, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for key in sorted(doc):
            value = doc[key]
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.append(_as_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
    elif isinstance(doc, list):
        for value in doc:
            if isinstance(value, (dict, list)):
                lines.append(_as_text(value, indent))
            else:
                lines.append(f"{pad}- {value}")
    else:
        lines.append(f"{pad}{doc}")
    return "\n".join(lines)


def _emit_doc(doc: dict, args) -> None:
    if args.format == "text":
        _emit(_as_text(doc) + "\n", args.out)
    else:
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)


def _round_trip(value):
    """Make numpy values JSON-encodable."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def _cmd_radius(args) -> int:
    points = serialize.decode_point_set(_load_json(args.points, "points"))
    kernel = serialize.decode_kernel(_load_json(args.kernel, "kernel"))
    sol = circumradius(points, kernel, seed=args.seed)
    if args.format == "svg":
        _emit(render_solution_svg(points, kernel, sol), args.out)
        return EXIT_OK
    doc = {
        "command": "radius",
        "seed": args.seed,
        "radius": sol.radius,
        "center": sol.center.tolist(),
        "num_points": len(points),
        "dim": points.dim,
    }
    _emit_doc(doc, args)
    return EXIT_OK


def _cmd_coreset(args) -> int:
    points = serialize.decode_point_set(_load_json(args.points, "points"))
    kernel = serialize.decode_kernel(_load_json(args.kernel, "kernel"))
    if isinstance(kernel, Ball):
        if kernel.dim != points.dim:
            raise InputFormatError("kernel and points dimension differ")
        result = ball_core_set(points, args.epsilon, seed=args.seed)
        bound_rule = "ball"
    else:
        result = core_set(points, kernel, args.epsilon, seed=args.seed)
        bound_rule = "general"
    doc = {
        "command": "coreset",
        "seed": args.seed,
        "epsilon": result.epsilon,
        "bound_rule": bound_rule,
        "core_size": len(result.subset),
        "indices": list(result.indices),
        "subset": serialize.encode_point_set(result.subset),
        "subset_radius": result.subset_radius,
        "full_radius": result.full_radius,
        "radius_ratio": result.radius_ratio,
    }
    _emit_doc(doc, args)
    return EXIT_OK


def _cmd_axioms(args) -> int:
    table = serialize.decode_diversity(_load_json(args.diversity, "diversity"))
    tol = args.tolerance if args.tolerance is not None else 1e-9
    report = check_axioms(table, tol=tol)
    doc = {
        "command": "axioms",
        "seed": args.seed,
        "labels": list(table.labels),
        "is_diversity": report.is_diversity,
        "is_semidiversity": report.is_semidiversity,
        "is_monotone": report.is_monotone,
        "violations": [
            {
                "kind": v.kind,
                "subsets": [list(s) for s in v.subsets],
                "deficit": v.deficit,
            }
            for v in report.violations
        ],
    }
    _emit_doc(doc, args)
    return EXIT_OK if report.is_diversity else EXIT_NEGATIVE


def _cmd_embed_symmetric(args) -> int:
    table = serialize.decode_diversity(_load_json(args.diversity, "diversity"))
    tol = args.tolerance if args.tolerance is not None else 1e-6
    base = {"command": "embed-symmetric", "seed": args.seed}
    try:
        emb = symmetric_embed(table, tol=tol, seed=args.seed)
    except NotEmbeddableError as exc:
        doc = dict(base, embeddable=False, reason=str(exc))
        if exc.witness is not None:
            doc["witness"] = {
                "k": exc.witness.cardinality,
                "ratio": _round_trip(exc.witness.ratio),
                "bound": exc.witness.bound,
            }
        _emit_doc(doc, args)
        return EXIT_NEGATIVE
    doc = dict(
        base,
        embeddable=True,
        dim=emb.dim,
        embedding=serialize.encode_embedding(emb),
    )
    _emit_doc(doc, args)
    return EXIT_OK


def _cmd_embed_diameter(args) -> int:
    table = serialize.decode_diversity(_load_json(args.diversity, "diversity"))
    tol = args.tolerance if args.tolerance is not None else 1e-6
    base = {"command": "embed-diameter", "seed": args.seed}
    try:
        emb = diameter_embed(table, tol=tol, seed=args.seed)
    except NotDiameterError as exc:
        _emit_doc(dict(base, embeddable=False, reason=str(exc)), args)
        return EXIT_NEGATIVE
    doc = dict(
        base,
        embeddable=True,
        dim=emb.dim,
        embedding=serialize.encode_embedding(emb),
    )
    _emit_doc(doc, args)
    return EXIT_OK


def _cmd_embed_ball(args) -> int:
    table = serialize.decode_diversity(_load_json(args.diversity, "diversity"))
    tol = args.tolerance if args.tolerance is not None else 1e-6
    decision = ball_embed_decide(table, args.dim, tol=tol, seed=args.seed)
    doc = {
        "command": "embed-ball",
        "seed": args.seed,
        "dim": args.dim,
        "embeddable": decision.embeddable,
        "reason": decision.reason,
        "detail": decision.detail,
    }
    if decision.mismatch is not None:
        subset, expected, got = decision.mismatch
        doc["mismatch"] = {
            "subset": list(subset),
            "expected": expected,
            "got": got,
        }
    if decision.ambiguous_eigenvalues:
        doc["ambiguous_eigenvalues"] = list(decision.ambiguous_eigenvalues)
    if decision.embedding is not None:
        doc["embedding"] = serialize.encode_embedding(decision.embedding)
    _emit_doc(doc, args)
    return EXIT_OK if decision.embeddable else EXIT_NEGATIVE


def _cmd_negtype(args) -> int:
    table = serialize.decode_diversity(_load_json(args.diversity, "diversity"))
    tol = args.tolerance if args.tolerance is not None else 1e-8
    report = negative_type_check(table, tol=tol)
    doc = {
        "command": "negtype",
        "seed": args.seed,
        "is_negative_type": report.is_negative_type,
        "max_eigenvalue": report.max_eigenvalue,
    }
    if report.witness is not None:
        doc["witness"] = {
            "coefficients": {",".join(k): v for k, v in sorted(report.witness.items())},
            "quadratic_form_value": report.witness_value,
        }
    _emit_doc(doc, args)
    return EXIT_OK if report.is_negative_type else EXIT_NEGATIVE


def _cmd_demo(args) -> int:
    runner = demos.DEMOS.get(args.name)
    if runner is None:
        raise InputFormatError(
            f"unknown demo {args.name!r}; choose from {sorted(demos.DEMOS)}"
        )
    report = runner(seed=args.seed)
    report["seed"] = args.seed

    if args.name == "scene" and args.format == "svg":
        points, kernel, _ = demos.scene_geometry()
        _emit(render_scene_svg(points, kernel, report["groups"]), args.out)
        return EXIT_OK

    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        artifacts = _demo_artifacts(args.name, report, out_dir)
        report_path = out_dir / "report.json"
        report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        artifacts["report_json"] = str(report_path)
        report["artifacts"] = artifacts
    _emit_doc(report, args)
    return EXIT_OK


def _demo_artifacts(name: str, report: dict, out_dir: Path) -> dict:
    from . import figures  # deferred: pulls in matplotlib

    if name == "l1-counterexample":
        from .diversity import l1_value

        return figures.save_union_scan(
            out_dir,
            "l1",
            demos.L1_SET_A,
            demos.L1_SET_B,
            l1_value,
            bound=report["max_individual"],
            best_offset=np.asarray(report["argmin_offset"]),
        )
    if name == "nonconvex":
        first, second = demos.nonconvex_kernels()

        def averaged(arr):
            r1 = circumradius(arr, first, check=False).radius
            r2 = circumradius(arr, second, check=False).radius
            return 0.5 * (r1 + r2)

        return figures.save_union_scan(
            out_dir,
            "nonconvex",
            demos.NONCONVEX_A,
            demos.NONCONVEX_B,
            averaged,
            bound=report["max_individual"],
            best_offset=np.asarray(report["argmin_offset"]),
            grid_size=25,
        )
    points, kernel, _ = demos.scene_geometry()
    artifacts = figures.save_scene_artifacts(out_dir, points, kernel, report["groups"])
    svg_path = out_dir / "scene.svg"
    svg_path.write_text(render_scene_svg(points, kernel, report["groups"]))
    artifacts["scene_svg"] = str(svg_path)
    return artifacts


def _cmd_render(args) -> int:
    points = serialize.decode_point_set(_load_json(args.points, "points"))
    kernel = serialize.decode_kernel(_load_json(args.kernel, "kernel"))
    sol = circumradius(points, kernel, seed=args.seed)
    if args.format == "json":
        doc = {
            "command": "render",
            "seed": args.seed,
            "radius": sol.radius,
            "center": sol.center.tolist(),
        }
        _emit_doc(doc, args)
        return EXIT_OK
    _emit(render_solution_svg(points, kernel, sol), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circumdiv",
        description="Generalized circumradius and diversity embedding toolkit",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, *, fmt_default="json"):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                       help="seed for randomized internals (echoed in output)")
        p.add_argument("--tolerance", type=float, default=None,
                       help="override the command's main comparison tolerance")
        p.add_argument("--out", default=None, help="write output to this file")
        p.add_argument("--format", choices=("json", "text", "svg"),
                       default=fmt_default)

    p = sub.add_parser("radius", help="circumradius of a point set")
    p.add_argument("--points", required=True)
    p.add_argument("--kernel", required=True)
    common(p)
    p.set_defaults(func=_cmd_radius)

    p = sub.add_parser("coreset", help="epsilon core set search")
    p.add_argument("--points", required=True)
    p.add_argument("--kernel", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    common(p)
    p.set_defaults(func=_cmd_coreset)

    p = sub.add_parser("axioms", help="check diversity axioms on a table")
    p.add_argument("--diversity", required=True)
    common(p)
    p.set_defaults(func=_cmd_axioms)

    p = sub.add_parser("embed-symmetric", help="embed a symmetric diversity")
    p.add_argument("--diversity", required=True)
    common(p)
    p.set_defaults(func=_cmd_embed_symmetric)

    p = sub.add_parser("embed-diameter", help="embed a diameter diversity")
    p.add_argument("--diversity", required=True)
    common(p)
    p.set_defaults(func=_cmd_embed_diameter)

    p = sub.add_parser("embed-ball", help="decide Euclidean ball embeddability")
    p.add_argument("--diversity", required=True)
    p.add_argument("--dim", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_embed_ball)

    p = sub.add_parser("negtype", help="negative type check")
    p.add_argument("--diversity", required=True)
    common(p)
    p.set_defaults(func=_cmd_negtype)

    p = sub.add_parser("demo", help="run a built-in demonstration")
    p.add_argument("name", choices=sorted(demos.DEMOS))
    p.add_argument("--out-dir", default=None,
                   help="directory for report.json, scan CSV and figures")
    common(p)
    p.set_defaults(func=_cmd_demo)

    p = sub.add_parser("render", help="render a solved instance as SVG")
    p.add_argument("--points", required=True)
    p.add_argument("--kernel", required=True)
    common(p, fmt_default="svg")
    p.set_defaults(func=_cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tolerance is not None and args.tolerance <= 0:
        args.tolerance = None
    try:
        return args.func(args)
    except CircumdivError as exc:
        doc = {
            "error": {"code": exc.code, "message": str(exc)},
            "seed": getattr(args, "seed", DEFAULT_SEED),
        }
        sys.stderr.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return EXIT_ERROR
    except (ValueError, OSError) as exc:
        doc = {
            "error": {"code": "bad_input", "message": str(exc)},
            "seed": getattr(args, "seed", DEFAULT_SEED),
        }
        sys.stderr.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
