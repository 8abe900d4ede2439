"""Skin colour as Individual Typology Angle (ITA) in CIE-Lab."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from .errors import EmptyRegion
from .geometry import as_keypoints
from .raster import polygon_mask

# IEC 61966-2-1 linear sRGB -> XYZ
SRGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
# reference white taken from the matrix itself so RGB white maps to a = b = 0
WHITE_D65 = SRGB_TO_XYZ.sum(axis=1)
_EPSILON = 216.0 / 24389.0
_KAPPA = 24389.0 / 27.0

SMOOTHING_WINDOW = 5
ITA_BIN_WIDTH = 1.0
MIN_REGION_PIXELS = 25
REGIONS = ("chin", "cheek_l", "cheek_r", "forehead")

# polygon rings (keypoint indices) for the landmark fallback regions
CHEEK_L = (41, 40, 31, 48, 4, 3, 2, 1)
CHEEK_R = (46, 47, 35, 54, 12, 13, 14, 15)
CHIN = (59, 58, 57, 56, 55, 11, 10, 9, 8, 7, 6, 5)
BROWS = tuple(range(17, 27))


def srgb_to_linear(c):
    c = np.asarray(c, dtype=np.float64)
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def rgb_to_lab(rgb) -> np.ndarray:
    """8-bit sRGB (..., 3) to CIE-Lab (D65), returning float (..., 3)."""
    rgb = np.asarray(rgb, dtype=np.float64)
    lin = srgb_to_linear(rgb / 255.0)
    xyz = lin @ SRGB_TO_XYZ.T / WHITE_D65
    f = np.where(xyz > _EPSILON, np.cbrt(xyz), (_KAPPA * xyz + 16.0) / 116.0)
    L = 116.0 * f[..., 1] - 16.0
    a = 500.0 * (f[..., 0] - f[..., 1])
    b = 200.0 * (f[..., 1] - f[..., 2])
    return np.stack([L, a, b], axis=-1)


def ita(L, b):
    """ITA in degrees; NaN where b == 0 and L == 50.

    For b == 0 the limit of the arctangent is used: +90 above L = 50 and
    -90 below it.
    """
    L = np.asarray(L, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.degrees(np.arctan((L - 50.0) / b))
    zero = b == 0
    out = np.where(zero & (L > 50), 90.0, out)
    out = np.where(zero & (L < 50), -90.0, out)
    out = np.where(zero & (L == 50), np.nan, out)
    return out if out.ndim else float(out)


def ita_pixel(lab) -> float:
    L, _, b = lab
    return ita(L, b)


@dataclass
class ItaResult:
    region_peaks: dict
    face_ita: float
    histogram: object
    invalid: dict


def ita_peak(values, bin_width: float = ITA_BIN_WIDTH) -> float:
    """Mode of ``values`` on bins centred at integer multiples of ``bin_width``."""
    v = np.asarray(values, dtype=np.float64)
    v = v[np.isfinite(v)]
    if v.size == 0:
        raise EmptyRegion("no finite ITA values")
    idx = np.floor(v / bin_width + 0.5).astype(np.int64)
    keys, counts = np.unique(idx, return_counts=True)
    return float(keys[np.argmax(counts)] * bin_width)


def smooth_within(values, region, window: int = SMOOTHING_WINDOW) -> np.ndarray:
    """Mean filter restricted to ``region``: each output averages only region pixels."""
    valid = region & np.isfinite(values)
    filled = np.where(valid, values, 0.0)
    total = ndimage.uniform_filter(filled, size=window, mode="constant") * window * window
    count = ndimage.uniform_filter(valid.astype(np.float64), size=window, mode="constant") * window * window
    count = np.rint(count)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = total / count
    return np.where(valid & (count > 0), out, np.nan)


def region_polygons(k, top: float = 0.0) -> dict:
    """Chin, cheek and forehead polygons from keypoints (landmark fallback mask)."""
    k = as_keypoints(k)
    brow = k[list(BROWS)]
    forehead = np.vstack([brow, [[brow[-1, 0], top], [brow[0, 0], top]]])
    return {
        "chin": k[list(CHIN)],
        "cheek_l": k[list(CHEEK_L)],
        "cheek_r": k[list(CHEEK_R)],
        "forehead": forehead,
    }


def face_ita(image, k, mask: Optional[np.ndarray] = None, top: float = 0.0,
             window: int = SMOOTHING_WINDOW, bin_width: float = ITA_BIN_WIDTH,
             min_pixels: int = MIN_REGION_PIXELS) -> ItaResult:
    """Per-face ITA: mean of the per-region peaks of the smoothed ITA map.

    ``image`` is 8-bit RGB. ``mask`` is an optional boolean skin map of the
    same height and width; without it the landmark regions alone are used.
    """
    lab = rgb_to_lab(np.asarray(image)[..., :3])
    return face_ita_lab(lab, k, mask, top, window, bin_width, min_pixels)


def face_ita_lab(lab, k, mask: Optional[np.ndarray] = None, top: float = 0.0,
                 window: int = SMOOTHING_WINDOW, bin_width: float = ITA_BIN_WIDTH,
                 min_pixels: int = MIN_REGION_PIXELS) -> ItaResult:
    """:func:`face_ita` on an image already converted to CIE-Lab."""
    from .diversity import Histogram

    lab = np.asarray(lab, dtype=np.float64)
    ita_map = ita(lab[..., 0], lab[..., 2])
    shape = lab.shape[:2]
    if mask is None:
        skin = np.ones(shape, dtype=bool)
    else:
        skin = np.asarray(mask, dtype=bool)
        if skin.shape != shape:
            raise ValueError(f"skin mask shape {skin.shape} does not match image {shape}")

    peaks, invalid = {}, {}
    masked = np.zeros(shape, dtype=bool)
    for name, poly in region_polygons(k, top).items():
        region = polygon_mask(shape, poly) & skin & np.isfinite(ita_map)
        masked |= region
        if region.sum() < min_pixels:
            peaks[name] = None
            invalid[name] = "EmptyRegion"
            continue
        smoothed = smooth_within(ita_map, region, window)
        peaks[name] = ita_peak(smoothed[region], bin_width)

    found = [p for p in peaks.values() if p is not None]
    if not found:
        raise EmptyRegion("all ITA regions are empty")
    values = ita_map[masked]
    lo = math.floor(values.min() / bin_width - 0.5) + 0.5
    hi = math.ceil(values.max() / bin_width + 0.5) - 0.5
    edges = np.arange(lo, hi + 0.5, 1.0) * bin_width
    if len(edges) < 2:
        edges = np.array([lo, lo + 1.0]) * bin_width
    counts, _ = np.histogram(values, bins=edges)
    return ItaResult(peaks, float(np.mean(found)), Histogram(edges, counts), invalid)
