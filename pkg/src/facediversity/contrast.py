"""Facial-region contrast for lips, eyes and eyebrows in each CIE-Lab channel.

Lab channels are re-encoded to non-negative ranges before the ratio is
taken: L in [0, 100] is scaled to [0, 255] and a, b are offset by +128.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometry, EmptyRegion, FaceMetricError, NumericDegenerate
from .geometry import BROW_L, BROW_R, EYE_L, EYE_R, MOUTH_OUTER, as_keypoints
from .raster import polygon_area, polygon_mask, scale_polygon
from .skin_color import rgb_to_lab

PARTS = ("lips", "eyes", "eyebrows")
CHANNELS = ("L", "a", "b")
OUTER_SCALE = 1.5
MIN_POLYGON_AREA = 4.0
CONTRAST_EPS = 1e-9

_PART_INDICES = {
    "lips": (MOUTH_OUTER,),
    "eyes": (EYE_L, EYE_R),
    "eyebrows": (BROW_L, BROW_R),
}


@dataclass(frozen=True)
class RegionRings:
    inner: np.ndarray
    outer: np.ndarray


def encode_lab(lab) -> np.ndarray:
    lab = np.asarray(lab, dtype=np.float64)
    out = np.empty_like(lab)
    out[..., 0] = lab[..., 0] * (255.0 / 100.0)
    out[..., 1] = lab[..., 1] + 128.0
    out[..., 2] = lab[..., 2] + 128.0
    return out


def rings_from_polygon(inner, scale: float = OUTER_SCALE) -> RegionRings:
    inner = np.asarray(inner, dtype=float)
    if polygon_area(inner) < MIN_POLYGON_AREA:
        raise DegenerateGeometry(f"region polygon area below {MIN_POLYGON_AREA} px^2")
    return RegionRings(inner, scale_polygon(inner, scale))


def region_rings(k, part: str, scale: float = OUTER_SCALE) -> tuple[RegionRings, ...]:
    """Inner/outer rings for a facial part; eyes and eyebrows give (left, right)."""
    k = as_keypoints(k)
    if part not in _PART_INDICES:
        raise ValueError(f"unknown part {part!r}")
    return tuple(rings_from_polygon(k[list(idx)], scale) for idx in _PART_INDICES[part])


def region_contrast(image_lab, rings: RegionRings, channel: str, mode: str = "mean",
                    encoded: bool = False) -> float:
    """(outer - inner) / (outer + inner) over the annulus and the inner polygon.

    ``image_lab`` holds raw Lab values unless ``encoded`` is set. ``mode="sum"``
    uses channel sums instead of means.
    """
    c = CHANNELS.index(channel)
    lab = np.asarray(image_lab, dtype=np.float64)
    plane = (lab if encoded else encode_lab(lab))[..., c]
    inner = polygon_mask(plane.shape, rings.inner)
    annulus = polygon_mask(plane.shape, rings.outer) & ~inner
    if not inner.any() or not annulus.any():
        raise EmptyRegion("inner or outer region has no pixels")
    if mode == "mean":
        # shifted means: equal-valued regions cancel exactly
        s = plane[inner][0]
        o, i = s + (plane[annulus] - s).mean(), s + (plane[inner] - s).mean()
    elif mode == "sum":
        o, i = plane[annulus].sum(), plane[inner].sum()
    else:
        raise ValueError(f"unknown contrast mode {mode!r}")
    if o + i < CONTRAST_EPS:
        raise NumericDegenerate("contrast denominator vanishes")
    return float((o - i) / (o + i))


def contrast_vector(image, k, mode: str = "mean", scale: float = OUTER_SCALE):
    """All nine contrasts for an 8-bit RGB image.

    Returns ``(values, invalid)`` where ``values`` maps ``"<part>_<channel>"``
    to a float (NaN when invalid) and ``invalid`` maps failed names to the
    error class name.
    """
    lab = encode_lab(rgb_to_lab(np.asarray(image)[..., :3]))
    values, invalid = {}, {}
    for part in PARTS:
        try:
            rings = region_rings(k, part, scale)
        except FaceMetricError as exc:
            for ch in CHANNELS:
                values[f"{part}_{ch}"] = float("nan")
                invalid[f"{part}_{ch}"] = type(exc).__name__
            continue
        for ch in CHANNELS:
            name = f"{part}_{ch}"
            try:
                per_side = [region_contrast(lab, r, ch, mode, encoded=True) for r in rings]
            except FaceMetricError as exc:
                values[name] = float("nan")
                invalid[name] = type(exc).__name__
                continue
            values[name] = float(np.mean(per_side))
    return values, invalid
