"""Deterministic SVG rendering of 2-d scenes.

Output is a 600 x 600 viewport with 5 percent padding on every side.
All coordinates are written with three fixed decimals and colors come
from a fixed palette, so rendering the same scene twice produces
byte-identical files.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .circumradius import Circumsolution
from .errors import DimensionMismatchError, UnsupportedKernelError
from .geometry import (
    AffineImage,
    Ball,
    Kernel,
    PointSet,
    Product,
    convex_hull_2d,
    kernel_vertices,
)

VIEWPORT = 600.0
PADDING_FRACTION = 0.05

BACKGROUND = "#ffffff"
REFERENCE_STROKE = "#888888"
POINT_FILL = "#d1242f"
LABEL_FILL = "#1f2328"
COVER_COLORS = ("#1f6feb", "#2da44e", "#bf3989", "#fb8f44", "#8250df")

_CIRCLE_SEGMENTS = 64


def _fmt(value: float) -> str:
    v = float(value)
    if abs(v) < 5e-4:
        v = 0.0  # avoid "-0.000"
    return f"{v:.3f}"


def boundary_points_2d(kernel: Kernel, segments: int = _CIRCLE_SEGMENTS) -> np.ndarray:
    """Convex-position sample of the kernel boundary, hull-ordered."""
    if kernel.dim != 2:
        raise DimensionMismatchError("can only draw 2-d kernels")
    pts = _raw_boundary(kernel, segments)
    return convex_hull_2d(pts)


def _raw_boundary(kernel: Kernel, segments: int) -> np.ndarray:
    if isinstance(kernel, Ball) and kernel.dim == 2:
        angles = np.linspace(0.0, 2.0 * np.pi, segments, endpoint=False)
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    if isinstance(kernel, AffineImage):
        return kernel.transform(_raw_boundary(kernel.base, segments))
    if isinstance(kernel, Product):
        # 2-d products decompose into two interval factors
        return kernel_vertices(kernel)
    return kernel_vertices(kernel)


class _Canvas:
    """World-to-viewport transform with a flipped y axis."""

    def __init__(self, world_points: np.ndarray):
        lo = world_points.min(axis=0)
        hi = world_points.max(axis=0)
        extent = float(max((hi - lo).max(), 1e-9))
        inner = VIEWPORT * (1.0 - 2.0 * PADDING_FRACTION)
        self.scale = inner / extent
        self.center = 0.5 * (lo + hi)

    def x(self, wx: float) -> float:
        return VIEWPORT / 2.0 + (wx - self.center[0]) * self.scale

    def y(self, wy: float) -> float:
        return VIEWPORT / 2.0 - (wy - self.center[1]) * self.scale

    def point(self, p) -> tuple[float, float]:
        return self.x(p[0]), self.y(p[1])


def _polygon_element(canvas, pts, stroke, fill, extra="") -> str:
    coords = " ".join(f"{_fmt(canvas.x(p[0]))},{_fmt(canvas.y(p[1]))}" for p in pts)
    return f'<polygon points="{coords}" stroke="{stroke}" fill="{fill}"{extra} />'


def _circle_element(canvas, center, radius, stroke, fill, extra="") -> str:
    cx, cy = canvas.point(center)
    r = radius * canvas.scale
    return (
        f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" '
        f'stroke="{stroke}" fill="{fill}"{extra} />'
    )


def _cover_outline(kernel: Kernel, scale: float, center: np.ndarray):
    """Boundary of ``scale * kernel + center`` as drawable data.

    A scale of (numerically) zero collapses the cover to its center;
    that degenerate cover is drawn as a fixed-size cross marker so
    singleton scenes stay visible.
    """
    if scale <= 1e-9:
        return ("marker", np.asarray(center, dtype=float))
    if isinstance(kernel, Ball) and kernel.dim == 2:
        return ("circle", np.asarray(center, dtype=float), scale)
    pts = boundary_points_2d(kernel)
    return ("polygon", pts * scale + np.asarray(center, dtype=float))


def render_svg(
    points: Optional[PointSet] = None,
    kernel: Optional[Kernel] = None,
    covers: Sequence[tuple[float, np.ndarray]] = (),
    *,
    cover_labels: Sequence[str] = (),
    show_reference: bool = True,
    show_labels: bool = True,
) -> str:
    """Render points, the unit reference kernel, and scaled covers.

    ``covers`` holds (scale, center) pairs drawn with palette colors in
    order.  The world window is fitted to everything drawn.
    """
    if points is None and kernel is None:
        raise ValueError("nothing to render")
    world = []
    if points is not None:
        if points.dim != 2:
            raise DimensionMismatchError("can only render 2-d point sets")
        world.append(points.points)

    reference_outline = None
    cover_outlines = []
    if kernel is not None:
        if show_reference:
            reference_outline = _cover_outline(kernel, 1.0, np.zeros(2))
            world.append(_outline_extent(reference_outline))
        for scale, center in covers:
            outline = _cover_outline(kernel, float(scale), center)
            cover_outlines.append(outline)
            world.append(_outline_extent(outline))

    canvas = _Canvas(np.vstack(world))
    size = _fmt(VIEWPORT)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="{BACKGROUND}" />',
    ]
    if reference_outline is not None:
        parts.append(
            _draw_outline(
                canvas,
                reference_outline,
                stroke=REFERENCE_STROKE,
                fill="none",
                extra=' stroke-dasharray="6 4" stroke-width="1.5"',
            )
        )
    for i, outline in enumerate(cover_outlines):
        color = COVER_COLORS[i % len(COVER_COLORS)]
        parts.append(
            _draw_outline(
                canvas,
                outline,
                stroke=color,
                fill=color,
                extra=' fill-opacity="0.12" stroke-width="2"',
            )
        )
        if i < len(cover_labels):
            scale, center = covers[i]
            cx, cy = canvas.point(center)
            parts.append(
                f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" fill="{color}" '
                f'font-family="monospace" font-size="13">{cover_labels[i]}</text>'
            )
    if points is not None:
        for i, p in enumerate(points.points):
            cx, cy = canvas.point(p)
            parts.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" '
                f'fill="{POINT_FILL}" stroke="none" />'
            )
            if show_labels and points.labels is not None:
                parts.append(
                    f'<text x="{_fmt(cx + 6)}" y="{_fmt(cy - 6)}" fill="{LABEL_FILL}" '
                    f'font-family="monospace" font-size="14">{points.labels[i]}</text>'
                )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _outline_extent(outline) -> np.ndarray:
    kind = outline[0]
    if kind == "circle":
        _, center, radius = outline
        return np.array(
            [
                [center[0] - radius, center[1] - radius],
                [center[0] + radius, center[1] + radius],
            ]
        )
    if kind == "marker":
        return outline[1][None, :]
    return outline[1]


def _draw_outline(canvas, outline, stroke, fill, extra="") -> str:
    kind = outline[0]
    if kind == "circle":
        _, center, radius = outline
        return _circle_element(canvas, center, radius, stroke, fill, extra)
    if kind == "marker":
        cx, cy = canvas.point(outline[1])
        arm = 8.0
        return (
            f'<path d="M {_fmt(cx - arm)} {_fmt(cy)} L {_fmt(cx + arm)} {_fmt(cy)} '
            f'M {_fmt(cx)} {_fmt(cy - arm)} L {_fmt(cx)} {_fmt(cy + arm)}" '
            f'stroke="{stroke}" stroke-width="2" fill="none" />'
        )
    return _polygon_element(canvas, outline[1], stroke, fill, extra)


def render_solution_svg(
    points: PointSet, kernel: Kernel, solution: Circumsolution
) -> str:
    """Points plus the reference kernel and the optimal cover."""
    return render_svg(
        points,
        kernel,
        covers=[(solution.radius, solution.center)],
        cover_labels=[f"r={solution.radius:.4g}"],
    )


def render_scene_svg(points: PointSet, kernel: Kernel, groups: dict) -> str:
    """Scene with one cover per named group.

    ``groups`` maps a name to a dict with ``radius`` and ``center``
    entries, as produced by the scene demo report.
    """
    names = sorted(groups)
    covers = [
        (float(groups[name]["radius"]), np.asarray(groups[name]["center"], dtype=float))
        for name in names
    ]
    return render_svg(
        points,
        kernel,
        covers=covers,
        cover_labels=[f"{name} r={groups[name]['radius']:.3g}" for name in names],
        show_reference=True,
    )
