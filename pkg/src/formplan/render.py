"""SVG rendering of maps, roadmaps, and planned path sets."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET

from .model import PolygonMap, Roadmap
from .planner import PathSet

_PALETTE = ("#2e7d32", "#1565c0", "#c62828", "#6a1b9a", "#ef6c00",
            "#00838f", "#4e342e", "#9e9d24")
_PAD = 4.0


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_svg(pmap: PolygonMap, roadmap: Roadmap,
               pathset: PathSet | None = None, scale: float = 8.0) -> str:
    """Draw border, obstacles, roadmap, robot paths, and occupancy labels.

    Each robot path is a colored polyline; every used edge gets its robot
    count and a direction arrow at the midpoint. The start vertex is a blue
    disc, the goal a red disc. Returns a well-formed SVG document.
    """
    if pathset is not None:
        for i, path in enumerate(pathset.paths):
            for vid in path:
                if vid not in roadmap.vertices:
                    raise ValueError(
                        f"path {i} references unknown vertex {vid}")
    xmin, ymin, xmax, ymax = pmap.border
    w, h = xmax - xmin + 2 * _PAD, ymax - ymin + 2 * _PAD

    def sx(x: float) -> float:
        return x - xmin + _PAD

    def sy(y: float) -> float:
        return ymax - y + _PAD   # flip: world y up, SVG y down

    svg = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "viewBox": f"0 0 {_fmt(w)} {_fmt(h)}",
        "width": _fmt(w * scale), "height": _fmt(h * scale),
    })
    ET.SubElement(svg, "rect", {
        "x": _fmt(sx(xmin)), "y": _fmt(sy(ymax)),
        "width": _fmt(xmax - xmin), "height": _fmt(ymax - ymin),
        "fill": "white", "stroke": "black", "stroke-width": "0.4"})
    for poly in pmap.obstacles:
        pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in poly)
        ET.SubElement(svg, "polygon", {
            "points": pts, "fill": "#e4d5b0", "stroke": "#8c7a50",
            "stroke-width": "0.25"})
    for e in roadmap.edges.values():
        if e.virtual:
            continue
        a = roadmap.vertices[e.u]
        b = roadmap.vertices[e.v]
        ET.SubElement(svg, "line", {
            "x1": _fmt(sx(a.x)), "y1": _fmt(sy(a.y)),
            "x2": _fmt(sx(b.x)), "y2": _fmt(sy(b.y)),
            "stroke": "#a9cce3", "stroke-width": "0.3"})

    if pathset is not None:
        for i, path in enumerate(pathset.paths):
            color = _PALETTE[i % len(_PALETTE)]
            pts = " ".join(
                f"{_fmt(sx(roadmap.vertices[v].x))},{_fmt(sy(roadmap.vertices[v].y))}"
                for v in path)
            ET.SubElement(svg, "polyline", {
                "points": pts, "fill": "none", "stroke": color,
                "stroke-width": "0.6", "stroke-opacity": "0.8"})
        for eid, (count, (du, dv)) in sorted(pathset.occupancy.items()):
            e = roadmap.edges[eid]
            if e.virtual:
                continue
            a = roadmap.vertices[du]
            b = roadmap.vertices[dv]
            mx, my = (a.x + b.x) / 2.0, (a.y + b.y) / 2.0
            _arrow(svg, sx(mx), sy(my),
                   math.atan2(-(b.y - a.y), b.x - a.x))
            ET.SubElement(svg, "text", {
                "x": _fmt(sx(mx) + 0.8), "y": _fmt(sy(my) - 0.8),
                "font-size": "2.2", "fill": "#1b1b1b",
            }).text = str(count)
        if pathset.paths:
            start = roadmap.vertices[pathset.paths[0][0]]
            goal = roadmap.vertices[pathset.paths[0][-1]]
            ET.SubElement(svg, "circle", {
                "cx": _fmt(sx(start.x)), "cy": _fmt(sy(start.y)), "r": "1.4",
                "fill": "#1565c0"})
            ET.SubElement(svg, "circle", {
                "cx": _fmt(sx(goal.x)), "cy": _fmt(sy(goal.y)), "r": "1.4",
                "fill": "#c62828"})
    return ET.tostring(svg, encoding="unicode", xml_declaration=True)


def _arrow(svg: ET.Element, x: float, y: float, angle: float) -> None:
    """Small triangle at (x, y) pointing along angle (SVG coordinates)."""
    size = 1.1
    tip = (x + size * math.cos(angle), y + size * math.sin(angle))
    left = (x + size * math.cos(angle + 2.5), y + size * math.sin(angle + 2.5))
    right = (x + size * math.cos(angle - 2.5), y + size * math.sin(angle - 2.5))
    pts = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in (tip, left, right))
    ET.SubElement(svg, "polygon", {"points": pts, "fill": "#424242"})
