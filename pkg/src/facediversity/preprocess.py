"""Quality gate and geometric normalization of detected faces."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy import ndimage

from .errors import DegenerateGeometry
from .geometry import EYE_L, EYE_R, FaceRecord, Point2, as_keypoints

DEFAULT_EYE_ANCHORS = (Point2(40.0, 48.0), Point2(88.0, 48.0))
DEFAULT_FRAME = (128, 128)  # (height, width)


@dataclass(frozen=True)
class QualityPolicy:
    min_face_side: float = 50.0
    min_iod: float = 30.0
    allowed_poses: frozenset = field(default_factory=lambda: frozenset({0, 3, 4}))

    def __post_init__(self):
        if not self.min_face_side > 0 or not self.min_iod > 0:
            raise ValueError("policy thresholds must be positive")
        object.__setattr__(self, "allowed_poses", frozenset(self.allowed_poses))


class Verdict(NamedTuple):
    accepted: bool
    reason: Optional[str] = None


@dataclass
class RectifiedFace:
    image: np.ndarray
    transform: np.ndarray  # 2x3, maps source (x, y) to output (x, y)
    points_after: tuple

    @property
    def eye_centers_after(self):
        return self.points_after[:2]


def eye_centers(k) -> tuple[Point2, Point2]:
    """Centroids of the six contour keypoints of each eye, image-left first."""
    k = as_keypoints(k)
    a = k[list(EYE_L)].mean(axis=0)
    b = k[list(EYE_R)].mean(axis=0)
    if np.allclose(a, b, atol=1e-9, rtol=0):
        raise DegenerateGeometry("eye centres coincide")
    if a[0] > b[0]:
        a, b = b, a
    return Point2(float(a[0]), float(a[1])), Point2(float(b[0]), float(b[1]))


def interocular_distance(k) -> float:
    a, b = eye_centers(k)
    return math.hypot(b.x - a.x, b.y - a.y)


def quality_filter(record: FaceRecord, policy: QualityPolicy = QualityPolicy()) -> Verdict:
    """Accept or reject a detected face; the reason names the first failing rule."""
    _, _, w, h = record.bbox
    if w < policy.min_face_side or h < policy.min_face_side:
        return Verdict(False, "size")
    try:
        iod = interocular_distance(record.keypoints)
    except DegenerateGeometry:
        iod = 0.0
    if iod < policy.min_iod:
        return Verdict(False, "iod")
    if record.pose_class not in policy.allowed_poses:
        return Verdict(False, "pose")
    return Verdict(True)


def similarity_from_pairs(src, dst) -> np.ndarray:
    """Rotation + uniform scale + translation taking two source points onto two targets."""
    s1, s2 = (complex(*p) for p in src)
    d1, d2 = (complex(*p) for p in dst)
    if abs(s2 - s1) < 1e-9:
        raise DegenerateGeometry("source points coincide")
    a = (d2 - d1) / (s2 - s1)
    b = d1 - a * s1
    return np.array([[a.real, -a.imag, b.real], [a.imag, a.real, b.imag]])


def affine_from_triples(src, dst) -> np.ndarray:
    """Exact affine map from three point pairs."""
    src = np.asarray(src, dtype=float)
    dst = np.asarray(dst, dtype=float)
    a = np.hstack([src, np.ones((3, 1))])
    # twice the signed triangle area, relative to its squared extent
    area2 = abs(np.linalg.det(a))
    extent = max(np.ptp(src[:, 0]), np.ptp(src[:, 1]), 1e-12)
    if area2 < 1e-9 * extent ** 2:
        raise DegenerateGeometry("source points are collinear")
    return np.linalg.solve(a, dst).T


def apply_affine(m, points) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    return p @ np.asarray(m)[:, :2].T + np.asarray(m)[:, 2]


def warp_affine(image, m, out_shape, order=1, cval=0.0) -> np.ndarray:
    """Resample ``image`` so that output pixel (x, y) shows source ``m^-1 (x, y)``.

    Pixel (row i, column j) has its centre at (x=j, y=i). Bilinear for
    ``order=1``; samples outside the source read as ``cval``.
    """
    image = np.asarray(image)
    full = np.vstack([np.asarray(m, dtype=float), [0.0, 0.0, 1.0]])
    inv = np.linalg.inv(full)
    # (row, col) coordinates: swap x/y in the inverse map
    rc = np.array([[inv[1, 1], inv[1, 0]], [inv[0, 1], inv[0, 0]]])
    off = np.array([inv[1, 2], inv[0, 2]])
    src = image.astype(np.float64)
    if src.ndim == 2:
        return ndimage.affine_transform(src, rc, off, output_shape=out_shape,
                                        order=order, mode="constant", cval=cval)
    chans = [ndimage.affine_transform(src[..., c], rc, off, output_shape=out_shape,
                                      order=order, mode="constant", cval=cval)
             for c in range(src.shape[2])]
    return np.stack(chans, axis=-1)


def rectify(image, k, anchors=DEFAULT_EYE_ANCHORS, out_shape=DEFAULT_FRAME) -> RectifiedFace:
    """Map the eye centres onto ``anchors`` with a similarity transform."""
    centres = eye_centers(k)
    m = similarity_from_pairs(centres, anchors)
    out = warp_affine(image, m, out_shape)
    after = tuple(Point2(*p) for p in apply_affine(m, centres))
    return RectifiedFace(out, m, after)


def expanded_box(bbox, expand: float = 0.5) -> tuple[int, int, int, int]:
    """Integer box grown by ``expand`` in width and height about the bbox centre."""
    x, y, w, h = (float(v) for v in bbox)
    cx, cy = x + w / 2.0, y + h / 2.0
    nw, nh = w * (1.0 + expand), h * (1.0 + expand)
    x0 = int(math.floor(cx - nw / 2.0 + 0.5))
    y0 = int(math.floor(cy - nh / 2.0 + 0.5))
    return x0, y0, int(round(nw)), int(round(nh))


def context_crop(image, bbox, expand: float = 0.5) -> np.ndarray:
    """Crop the bbox grown by ``expand``; parts outside the image are zero-filled."""
    image = np.asarray(image)
    x0, y0, w, h = expanded_box(bbox, expand)
    out = np.zeros((h, w) + image.shape[2:], dtype=image.dtype)
    H, W = image.shape[:2]
    sx0, sy0 = max(x0, 0), max(y0, 0)
    sx1, sy1 = min(x0 + w, W), min(y0 + h, H)
    if sx1 > sx0 and sy1 > sy0:
        out[sy0 - y0:sy1 - y0, sx0 - x0:sx1 - x0] = image[sy0:sy1, sx0:sx1]
    return out
