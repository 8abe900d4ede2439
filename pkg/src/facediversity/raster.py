"""Polygon helpers: even-odd fill evaluated at pixel centres (x=j, y=i)."""
from __future__ import annotations

import numpy as np


def polygon_area(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2.0)


def polygon_centroid(vertices) -> np.ndarray:
    """Area centroid; falls back to the vertex mean for zero-area polygons."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    a = cross.sum() / 2.0
    if abs(a) < 1e-12:
        return v.mean(axis=0)
    return np.array([((x + xn) * cross).sum(), ((y + yn) * cross).sum()]) / (6.0 * a)


def scale_polygon(vertices, factor: float, center=None) -> np.ndarray:
    v = np.asarray(vertices, dtype=float)
    c = polygon_centroid(v) if center is None else np.asarray(center, dtype=float)
    return c + factor * (v - c)


def polygon_mask(shape, vertices) -> np.ndarray:
    """Boolean mask of pixels whose centre is inside the polygon (even-odd rule)."""
    h, w = shape[:2]
    v = np.asarray(vertices, dtype=float)
    mask = np.zeros((h, w), dtype=bool)
    if len(v) < 3:
        return mask
    x0 = max(int(np.floor(v[:, 0].min())), 0)
    x1 = min(int(np.ceil(v[:, 0].max())), w - 1)
    y0 = max(int(np.floor(v[:, 1].min())), 0)
    y1 = min(int(np.ceil(v[:, 1].max())), h - 1)
    if x1 < x0 or y1 < y0:
        return mask
    px, py = np.meshgrid(np.arange(x0, x1 + 1, dtype=float), np.arange(y0, y1 + 1, dtype=float))
    inside = np.zeros(px.shape, dtype=bool)
    xa, ya = v[:, 0], v[:, 1]
    xb, yb = np.roll(xa, -1), np.roll(ya, -1)
    for ax, ay, bx, by in zip(xa, ya, xb, yb):
        crosses = (ay > py) != (by > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xi = ax + (py - ay) * (bx - ax) / (by - ay)
        inside ^= crosses & (px < xi)
    mask[y0:y1 + 1, x0:x1 + 1] = inside
    return mask
