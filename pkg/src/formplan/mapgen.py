"""Deterministic synthetic map generators for benchmarks and tests."""

from __future__ import annotations

import random
from typing import Mapping

from .errors import PlacementError
from .model import PolygonMap

KINDS = ("grid-blocks", "staggered-bricks", "variable-density", "random-rects")

_DEFAULTS: dict[str, dict] = {
    "grid-blocks": {"width": 100.0, "height": 100.0, "rows": 3, "cols": 3,
                    "fill": 0.5},
    "staggered-bricks": {"width": 100.0, "height": 100.0, "rows": 4, "cols": 4,
                         "gap": 0.35, "margin": 4.0},
    "variable-density": {"width": 100.0, "height": 100.0, "rows": 4, "cols": 5,
                         "fill_min": 0.25, "fill_max": 0.65, "jitter": 0.15},
    "random-rects": {"width": 100.0, "height": 100.0, "count": 8,
                     "min_size": 6.0, "max_size": 18.0, "margin": 3.0,
                     "tries": 200},
}


def _rect(x0: float, y0: float, x1: float, y1: float):
    return ((x0, y0), (x1, y0), (x1, y1), (x0, y1))


def default_params(kind: str) -> dict:
    """Copy of the default parameter set for a map kind."""
    if kind not in _DEFAULTS:
        raise ValueError(f"unknown map kind {kind!r}; choose from {KINDS}")
    return dict(_DEFAULTS[kind])


def generate_map(kind: str, params: Mapping | None = None,
                 seed: int = 0) -> PolygonMap:
    """Build a validated map; identical (kind, params, seed) gives identical maps."""
    if kind not in KINDS:
        raise ValueError(f"unknown map kind {kind!r}; choose from {KINDS}")
    cfg = dict(_DEFAULTS[kind])
    if params:
        unknown = set(params) - set(cfg)
        if unknown:
            raise ValueError(f"unknown parameters for {kind}: {sorted(unknown)}")
        cfg.update({k: v for k, v in params.items() if v is not None})
    builder = {
        "grid-blocks": _grid_blocks,
        "staggered-bricks": _staggered_bricks,
        "variable-density": _variable_density,
        "random-rects": _random_rects,
    }[kind]
    obstacles = builder(cfg, random.Random(seed))
    name = f"{kind}-{seed}"
    return PolygonMap(border=(0.0, 0.0, cfg["width"], cfg["height"]),
                      obstacles=tuple(obstacles), name=name)


def _grid_blocks(cfg: Mapping, rng: random.Random) -> list:
    w, h = cfg["width"], cfg["height"]
    rows, cols, fill = int(cfg["rows"]), int(cfg["cols"]), float(cfg["fill"])
    if not 0.0 < fill < 1.0:
        raise PlacementError("fill must be in (0, 1)")
    cw, ch = w / cols, h / rows
    bw, bh = cw * fill, ch * fill
    obstacles = []
    for r in range(rows):
        for c in range(cols):
            cx = (c + 0.5) * cw
            cy = (r + 0.5) * ch
            obstacles.append(_rect(cx - bw / 2, cy - bh / 2,
                                   cx + bw / 2, cy + bh / 2))
    return obstacles


def _staggered_bricks(cfg: Mapping, rng: random.Random) -> list:
    w, h = cfg["width"], cfg["height"]
    rows, cols = int(cfg["rows"]), int(cfg["cols"])
    gap, margin = float(cfg["gap"]), float(cfg["margin"])
    bw = (w - 2 * margin) / cols
    bh = (h - 2 * margin) / rows
    gx, gy = bw * gap, bh * gap
    obstacles = []
    for r in range(rows):
        offset = (bw / 2) if r % 2 else 0.0
        x = margin + offset
        while x + gx < w - margin:
            x0 = x + gx / 2
            x1 = min(x + bw - gx / 2, w - margin)
            y0 = margin + r * bh + gy / 2
            y1 = margin + (r + 1) * bh - gy / 2
            if x1 - x0 > gx and y1 - y0 > gy:
                obstacles.append(_rect(x0, y0, x1, y1))
            x += bw
    return obstacles


def _variable_density(cfg: Mapping, rng: random.Random) -> list:
    w, h = cfg["width"], cfg["height"]
    rows, cols = int(cfg["rows"]), int(cfg["cols"])
    fill_min, fill_max = float(cfg["fill_min"]), float(cfg["fill_max"])
    jitter = float(cfg["jitter"])
    cw, ch = w / cols, h / rows
    obstacles = []
    for r in range(rows):
        for c in range(cols):
            frac = c / (cols - 1) if cols > 1 else 0.0
            fill = fill_min + (fill_max - fill_min) * frac
            bw, bh = cw * fill, ch * fill
            slack_x = (cw - bw) / 2
            slack_y = (ch - bh) / 2
            jx = rng.uniform(-jitter, jitter) * slack_x
            jy = rng.uniform(-jitter, jitter) * slack_y
            cx = (c + 0.5) * cw + jx
            cy = (r + 0.5) * ch + jy
            obstacles.append(_rect(cx - bw / 2, cy - bh / 2,
                                   cx + bw / 2, cy + bh / 2))
    return obstacles


def _random_rects(cfg: Mapping, rng: random.Random) -> list:
    w, h = cfg["width"], cfg["height"]
    count = int(cfg["count"])
    min_size, max_size = float(cfg["min_size"]), float(cfg["max_size"])
    margin, tries = float(cfg["margin"]), int(cfg["tries"])
    if max_size > min(w, h) - 2 * margin:
        raise PlacementError("max_size does not fit inside the border margin")
    placed: list[tuple[float, float, float, float]] = []
    for i in range(count):
        for _ in range(tries):
            bw = rng.uniform(min_size, max_size)
            bh = rng.uniform(min_size, max_size)
            x0 = rng.uniform(margin, w - margin - bw)
            y0 = rng.uniform(margin, h - margin - bh)
            box = (x0, y0, x0 + bw, y0 + bh)
            if all(box[2] + margin <= p[0] or p[2] + margin <= box[0]
                   or box[3] + margin <= p[1] or p[3] + margin <= box[1]
                   for p in placed):
                placed.append(box)
                break
        else:
            raise PlacementError(
                f"could not place obstacle {i + 1}/{count} after {tries} tries; "
                "density too high")
    return [_rect(*box) for box in placed]
