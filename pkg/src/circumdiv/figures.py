"""Report artifacts: delimited scan data plus matplotlib figures.

The demo report path writes, next to the JSON report, a CSV of the
quantities plotted and a PNG rendering of them.  Figures use the Agg
backend with fixed sizes and no software metadata, keeping repeated
runs as close to identical as the PNG encoder allows.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Callable, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .geometry import PointSet  # noqa: E402
from .render import boundary_points_2d  # noqa: E402

_SAVE_OPTS = dict(dpi=110, metadata={"Software": None})


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def union_objective_scan(
    set_a: np.ndarray,
    set_b: np.ndarray,
    oracle: Callable[[np.ndarray], float],
    *,
    window: float = 2.0,
    grid_size: int = 41,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Objective values of the translated union over a 2-d offset grid."""
    ticks = np.linspace(-window, window, grid_size)
    Z = np.empty((grid_size, grid_size))
    for iy, dy in enumerate(ticks):
        for ix, dx in enumerate(ticks):
            Z[iy, ix] = oracle(np.vstack([set_a, set_b + [dx, dy]]))
    return ticks, ticks, Z


def save_union_scan(
    out_dir: Path,
    stem: str,
    set_a: np.ndarray,
    set_b: np.ndarray,
    oracle: Callable[[np.ndarray], float],
    *,
    bound: float,
    best_offset: Optional[np.ndarray] = None,
    window: float = 2.0,
    grid_size: int = 41,
) -> dict[str, str]:
    """Scan the union objective, then write scan.csv and figure.png."""
    xs, ys, Z = union_objective_scan(
        set_a, set_b, oracle, window=window, grid_size=grid_size
    )
    csv_path = out_dir / f"{stem}_scan.csv"
    rows = [
        [f"{xs[ix]:.6f}", f"{ys[iy]:.6f}", f"{Z[iy, ix]:.9f}"]
        for iy in range(len(ys))
        for ix in range(len(xs))
    ]
    write_csv(csv_path, ["offset_x", "offset_y", "union_value"], rows)

    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    mesh = ax.contourf(xs, ys, Z, levels=24, cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="union value")
    contour = ax.contour(xs, ys, Z, levels=[bound], colors="white", linewidths=1.2)
    ax.clabel(contour, fmt=lambda _: f"bound {bound:g}")
    if best_offset is not None:
        ax.plot(*best_offset, "r*", markersize=12, label="best offset")
        ax.legend(loc="upper right")
    ax.set_xlabel("offset x")
    ax.set_ylabel("offset y")
    ax.set_title(f"{stem}: union value over translations")
    fig.tight_layout()
    png_path = out_dir / f"{stem}_figure.png"
    fig.savefig(png_path, **_SAVE_OPTS)
    plt.close(fig)
    return {"scan_csv": str(csv_path), "figure_png": str(png_path)}


def save_scene_artifacts(
    out_dir: Path,
    points: PointSet,
    kernel,
    groups: dict[str, dict],
) -> dict[str, str]:
    """Write the scene radii table and a figure of covers and points."""
    csv_path = out_dir / "scene_scan.csv"
    rows = [
        [
            name,
            ";".join(info["members"]),
            f"{info['radius']:.9f}",
            f"{info['center'][0]:.9f}",
            f"{info['center'][1]:.9f}",
        ]
        for name, info in sorted(groups.items())
    ]
    write_csv(csv_path, ["group", "members", "radius", "center_x", "center_y"], rows)

    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    outline = boundary_points_2d(kernel)
    ax.fill(
        outline[:, 0], outline[:, 1], facecolor="0.92", edgecolor="0.5",
        linestyle="--", label="kernel",
    )
    colors = ("tab:blue", "tab:green", "tab:purple", "tab:orange")
    for i, (name, info) in enumerate(sorted(groups.items())):
        scaled = outline * info["radius"] + np.asarray(info["center"])
        ax.fill(
            scaled[:, 0], scaled[:, 1], facecolor="none",
            edgecolor=colors[i % len(colors)], linewidth=1.8,
            label=f"{name} (r={info['radius']:.3g})",
        )
    ax.plot(points.points[:, 0], points.points[:, 1], "o", color="tab:red", ms=5)
    if points.labels:
        for label, p in zip(points.labels, points.points):
            ax.annotate(label, p, textcoords="offset points", xytext=(5, 4))
    ax.set_aspect("equal")
    ax.legend(loc="upper left", fontsize=8)
    ax.set_title("scene: smallest kernel covers per group")
    fig.tight_layout()
    png_path = out_dir / "scene_figure.png"
    fig.savefig(png_path, **_SAVE_OPTS)
    plt.close(fig)
    return {"scan_csv": str(csv_path), "figure_png": str(png_path)}
