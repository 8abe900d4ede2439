"""Landmark data model and the 68-keypoint to anatomical-landmark mapping.

Coordinates are image pixels with x rightward and y downward. "Left" and
"right" (``_l`` / ``_r`` suffixes) always mean image-left and image-right,
so ``en_l.x < en_r.x`` on an upright face.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import NamedTuple, Optional

import numpy as np

from .errors import DegenerateGeometry

MAPPING_VERSION = "1"

# Index groups of the standard 68-point annotation.
JAW = tuple(range(0, 17))
BROW_L = tuple(range(17, 22))
BROW_R = tuple(range(22, 27))
NOSE_BRIDGE = tuple(range(27, 31))
NOSE_BASE = tuple(range(31, 36))
EYE_L = tuple(range(36, 42))
EYE_R = tuple(range(42, 48))
MOUTH_OUTER = tuple(range(48, 60))
MOUTH_INNER = tuple(range(60, 68))

# Landmark name -> keypoint indices; multi-index entries use the mean.
KEYPOINT_MAP: dict[str, tuple[int, ...]] = {
    "n": (27,),
    "c_prime": (30,),
    "sn": (33,),
    "sbal_l": (32,),
    "sbal_r": (34,),
    "al_l": (31,),
    "al_r": (35,),
    "cph_l": (50,),
    "cph_r": (52,),
    "ls": (51,),
    "li": (57,),
    "ch_l": (48,),
    "ch_r": (54,),
    "gn": (8,),
    "go_l": (4,),
    "go_r": (12,),
    "zy_l": (1,),
    "zy_r": (15,),
    "en_l": (39,),
    "en_r": (42,),
    "ex_l": (36,),
    "ex_r": (45,),
    "ps_l": (37, 38),
    "ps_r": (43, 44),
    "pi_l": (40, 41),
    "pi_r": (46, 47),
    "or_l": (19,),
    "or_r": (24,),
}


def _mirror_permutation() -> tuple[int, ...]:
    pairs = [(i, 16 - i) for i in range(8)]
    pairs += [(17, 26), (18, 25), (19, 24), (20, 23), (21, 22)]
    pairs += [(31, 35), (32, 34)]
    pairs += [(36, 45), (37, 44), (38, 43), (39, 42), (40, 47), (41, 46)]
    pairs += [(48, 54), (49, 53), (50, 52), (55, 59), (56, 58)]
    pairs += [(60, 64), (61, 63), (65, 67)]
    perm = list(range(68))
    for a, b in pairs:
        perm[a], perm[b] = b, a
    return tuple(perm)


# perm[i] is the index of the keypoint that lands on slot i after a mirror.
MIRROR_PERMUTATION = _mirror_permutation()


class Point2(NamedTuple):
    x: float
    y: float


def distance(p: Point2, q: Point2) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def as_keypoints(points) -> np.ndarray:
    """Validate and return a ``(68, 2)`` float array."""
    k = np.asarray(points, dtype=float)
    if k.shape != (68, 2):
        raise ValueError(f"expected 68 keypoints of shape (68, 2), got {k.shape}")
    if not np.all(np.isfinite(k)):
        raise ValueError("keypoints must be finite")
    return k


def mirror_keypoints(k, axis_x: float) -> np.ndarray:
    """Mirror a keypoint set about the vertical line ``x = axis_x``.

    Slots are permuted so the result is again in canonical 68-point order.
    """
    k = as_keypoints(k)
    out = k[list(MIRROR_PERMUTATION)].copy()
    out[:, 0] = 2.0 * axis_x - out[:, 0]
    return out


@dataclass(frozen=True)
class AnatomicalLandmarks:
    n: Point2
    tn: Point2
    c_prime: Point2
    sn: Point2
    sbal_l: Point2
    sbal_r: Point2
    al_l: Point2
    al_r: Point2
    cph_l: Point2
    cph_r: Point2
    ls: Point2
    sto: Point2
    li: Point2
    ch_l: Point2
    ch_r: Point2
    gn: Point2
    go_l: Point2
    go_r: Point2
    zy_l: Point2
    zy_r: Point2
    en_l: Point2
    en_r: Point2
    ex_l: Point2
    ex_r: Point2
    ps_l: Point2
    ps_r: Point2
    pi_l: Point2
    pi_r: Point2
    or_l: Point2
    or_r: Point2

    def as_dict(self) -> dict[str, Point2]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def transformed(self, fn) -> "AnatomicalLandmarks":
        """Apply ``fn(Point2) -> Point2`` to every landmark."""
        return AnatomicalLandmarks(**{k: Point2(*fn(v)) for k, v in self.as_dict().items()})


@dataclass
class FaceRecord:
    face_id: str
    image_path: str
    bbox: tuple[float, float, float, float]
    keypoints: np.ndarray
    pose_class: int
    aux: Optional[object] = None
    mask_path: Optional[str] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.keypoints = as_keypoints(self.keypoints)
        x, y, w, h = (float(v) for v in self.bbox)
        if not (w > 0 and h > 0):
            raise ValueError(f"{self.face_id}: bbox width and height must be positive")
        self.bbox = (x, y, w, h)
        if self.pose_class not in (0, 1, 2, 3, 4):
            raise ValueError(f"{self.face_id}: pose_class must be in 0..4, got {self.pose_class!r}")


def derive_tn(n: Point2, top: float) -> Point2:
    """Top of the face region straight above the nasion."""
    return Point2(float(n[0]), float(top))


def derive_sto(ls: Point2, li: Point2) -> Point2:
    """Stomion as the midpoint of the upper and lower lip landmarks."""
    if ls[1] > li[1]:
        raise DegenerateGeometry(f"labiale superius below labiale inferius ({ls[1]} > {li[1]})")
    return Point2((ls[0] + li[0]) / 2.0, (ls[1] + li[1]) / 2.0)


def map_keypoints(k, top: float = 0.0) -> AnatomicalLandmarks:
    """Localize the anatomical landmarks from 68 keypoints.

    ``top`` is the y coordinate of the top of the (rectified) face region and
    fixes the derived tragion-like ``tn`` point.
    """
    k = as_keypoints(k)
    pts = {}
    for name, idx in KEYPOINT_MAP.items():
        if len(idx) == 1:
            x, y = k[idx[0]]
        else:
            x, y = k[list(idx)].mean(axis=0)
        pts[name] = Point2(float(x), float(y))
    for left, right in (("en_l", "en_r"), ("ex_l", "ex_r")):
        if not pts[left].x < pts[right].x:
            raise DegenerateGeometry(f"{left} is not left of {right}; keypoints mirrored or collapsed")
    pts["tn"] = derive_tn(pts["n"], top)
    pts["sto"] = derive_sto(pts["ls"], pts["li"])
    return AnatomicalLandmarks(**pts)
