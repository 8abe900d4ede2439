"""Left/right facial symmetry on a mid-line-centred 128x128 face.

Anchor coordinates treat pixel column j as the unit interval [j, j+1), so
the mid-line x = 64 falls exactly between columns 63 and 64 and a plain
left-right flip of the raster is the mirror about the mid-line.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import NoEdges
from .geometry import Point2, as_keypoints
from .preprocess import RectifiedFace, affine_from_triples, apply_affine, warp_affine

C1 = Point2(40.0, 48.0)
C2 = Point2(88.0, 48.0)
C3 = Point2(64.0, 84.0)
SYMMETRY_SIZE = 128
INNER_CANTHI = (39, 42)
PHILTRUM = 33
EDGE_THRESHOLD = 1.0 / 255.0
BT601 = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class SymmetryScores:
    density_difference: float
    edge_orientation_similarity: float


def to_gray(image) -> np.ndarray:
    """BT.601 luma in [0, 1] for 8-bit RGB; 2-D input is only rescaled."""
    img = np.asarray(image, dtype=np.float64)
    if img.ndim == 3:
        img = img[..., :3] @ BT601
    return img / 255.0


def symmetry_transform(k) -> np.ndarray:
    k = as_keypoints(k)
    src = k[[INNER_CANTHI[0], INNER_CANTHI[1], PHILTRUM]]
    return affine_from_triples(src, [C1, C2, C3])


def rectify_for_symmetry(image, k) -> RectifiedFace:
    """Affine-normalize so inner canthi hit C1, C2 and the philtrum hits C3.

    Returns a 128x128 grayscale raster in [0, 1]; ``points_after`` holds the
    three transformed source points in anchor coordinates.
    """
    k = as_keypoints(k)
    m = symmetry_transform(k)
    # anchor coordinate x sits at raster position x - 0.5
    to_raster = m.copy()
    to_raster[:, 2] -= 0.5
    gray = to_gray(image)
    out = warp_affine(gray, to_raster, (SYMMETRY_SIZE, SYMMETRY_SIZE))
    src = k[[INNER_CANTHI[0], INNER_CANTHI[1], PHILTRUM]]
    after = tuple(Point2(*p) for p in apply_affine(m, src))
    return RectifiedFace(out, m, after)


def density_difference(img) -> float:
    """Mean absolute intensity difference between the left half and its mirror."""
    img = np.asarray(img, dtype=np.float64)
    half = img.shape[1] // 2
    mirrored = img[:, ::-1]
    return float(np.mean(np.abs(img[:, :half] - mirrored[:, :half])))


def sobel_gradients(img):
    """Sobel derivatives scaled to intensity units per pixel.

    Only the interior (where the 3x3 stencil fits) is meaningful; the one-pixel
    border is returned as NaN.
    """
    img = np.asarray(img, dtype=np.float64)
    gx = ndimage.sobel(img, axis=1, mode="nearest") / 8.0
    gy = ndimage.sobel(img, axis=0, mode="nearest") / 8.0
    for g in (gx, gy):
        g[0, :] = g[-1, :] = np.nan
        g[:, 0] = g[:, -1] = np.nan
    return gx, gy


def edge_orientation_similarity(img, threshold=EDGE_THRESHOLD, mode="vector") -> float:
    """Mean cosine of the angle between gradient orientations of the face and its mirror.

    ``mode="vector"`` compares gradient directions (range [-1, 1]);
    ``mode="axial"`` compares undirected edge lines via the doubled angle.
    Pixels where either gradient magnitude is below ``threshold`` are skipped.
    """
    if mode not in ("vector", "axial"):
        raise ValueError(f"unknown orientation mode {mode!r}")
    img = np.asarray(img, dtype=np.float64)
    half = img.shape[1] // 2
    gx, gy = sobel_gradients(img)
    mx, my = sobel_gradients(img[:, ::-1])
    gx, gy, mx, my = (a[:, :half] for a in (gx, gy, mx, my))
    mag = np.hypot(gx, gy)
    mmag = np.hypot(mx, my)
    keep = (mag >= threshold) & (mmag >= threshold)
    if not np.any(keep):
        raise NoEdges("no pixel pair exceeds the edge threshold")
    cos = (gx[keep] * mx[keep] + gy[keep] * my[keep]) / (mag[keep] * mmag[keep])
    cos = np.clip(cos, -1.0, 1.0)
    if mode == "axial":
        cos = 2.0 * cos * cos - 1.0
    return float(np.mean(cos))


def symmetry_scores(image, k, threshold=EDGE_THRESHOLD, mode="vector") -> SymmetryScores:
    face = rectify_for_symmetry(image, k).image
    return SymmetryScores(density_difference(face), edge_orientation_similarity(face, threshold, mode))
