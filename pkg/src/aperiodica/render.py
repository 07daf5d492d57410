"""Deterministic SVG and CSV writers for clouds and polygon patches."""

from __future__ import annotations

import numpy as np

SCATTER_COLORS = {
    "S": "#000000",  # the smallest window type is drawn black
    "M": "#d95f02",
    "L": "#7570b3",
}
FALLBACK_COLORS = ["#1b9e77", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"]

PATCH_SHADES = {
    "S": ("#000000", "#1a1a1a"),
    "M": ("#d95f02", "#f08c42"),
    "L": ("#7570b3", "#9e99d6"),
}


def _fmt(x: float) -> str:
    return f"{x:.8g}"


def type_color(name: str, index: int) -> str:
    return SCATTER_COLORS.get(str(name), FALLBACK_COLORS[index % len(FALLBACK_COLORS)])


def svg_scatter(points: np.ndarray, types: np.ndarray, type_names, path: str,
                size: int = 600):
    """Scatter plot of a 2D cloud, one fill color per tile type."""
    pts = np.asarray(points)
    if pts.shape[1] != 2:
        raise ValueError("scatter rendering needs two-dimensional points")
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    pad = 0.03 * span
    scale = size / (span + 2 * pad)
    radius = max(0.4, size / max(len(pts), 1) ** 0.5 / 4)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="#ffffff"/>',
    ]
    for ti, name in enumerate(type_names):
        sel = pts[types == ti]
        if not len(sel):
            continue
        color = type_color(name, ti)
        lines.append(f'<g fill="{color}">')
        for x, y in sel:
            cx = (x - lo[0] + pad) * scale
            cy = size - (y - lo[1] + pad) * scale
            lines.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(radius)}"/>')
        lines.append("</g>")
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def svg_patch(placements, prototiles, path: str, size: int = 600):
    """Polygon patch rendering with per-type alternating shades."""
    polys = []
    counters: dict = {}
    for pl in placements:
        shade_pair = PATCH_SHADES.get(str(pl.name), ("#888888", "#aaaaaa"))
        k = counters.get(pl.name, 0)
        counters[pl.name] = k + 1
        fill = shade_pair[k % 2]
        polys.append((prototiles[pl.name].boundary.vertices + pl.xy, fill))
    allpts = np.vstack([p for p, _ in polys])
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    pad = 0.02 * span
    scale = size / (span + 2 * pad)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="#ffffff"/>',
    ]
    for verts, fill in polys:
        coords = " ".join(
            f"{_fmt((x - lo[0] + pad) * scale)},{_fmt(size - (y - lo[1] + pad) * scale)}"
            for x, y in verts
        )
        lines.append(f'<polygon points="{coords}" fill="{fill}" stroke="#ffffff" '
                     f'stroke-width="0.5"/>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_cloud_csv(path: str, type_names, types: np.ndarray, points: np.ndarray):
    dim = points.shape[1]
    header = "type," + ",".join("xyz"[:dim]) if dim <= 3 else \
        "type," + ",".join(f"c{i}" for i in range(dim))
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for t, row in zip(types, points):
            fh.write(str(type_names[t]) + "," + ",".join(_fmt(v) for v in row) + "\n")


def write_dual_points_csv(path: str, type_names, types: np.ndarray,
                          coords: np.ndarray, xy: np.ndarray):
    m = coords.shape[1]
    header = "type," + ",".join("abcdefg"[:m]) + "," + ",".join("xyz"[: xy.shape[1]])
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for t, c, p in zip(types, coords, xy):
            fh.write(
                str(type_names[t]) + ","
                + ",".join(str(int(v)) for v in c) + ","
                + ",".join(_fmt(v) for v in p) + "\n"
            )


def write_placements_csv(path: str, placements):
    with open(path, "w") as fh:
        fh.write("type,tx,ty\n")
        for pl in placements:
            fh.write(f"{pl.name},{_fmt(pl.xy[0])},{_fmt(pl.xy[1])}\n")


def write_scan_csv(path: str, rows):
    with open(path, "w") as fh:
        fh.write("n,pf_value,pisot_class,degree,minimal_polynomial\n")
        for r in rows:
            poly = " ".join(str(c) for c in r.minimal_polynomial)
            fh.write(f"{r.n},{_fmt(r.pf_value)},{r.pisot_class},{r.degree},{poly}\n")
