"""Hand-placed synthetic face and the small rendered corpus shipped with the package.

The reference face lives in a 128x128 frame and is mirror-symmetric about
``x = 64``. Eye centres sit at (44, 48) and (84, 48), so the inter-ocular
distance is 40 px.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from .annotations import age_group_of
from .geometry import BROW_L, BROW_R, EYE_L, EYE_R, JAW, MOUTH_INNER, MOUTH_OUTER, as_keypoints

_LEFT_HALF = {
    # jaw 0..8 (8 is the chin point, on the axis)
    0: (20, 50), 1: (21, 62), 2: (23, 74), 3: (26, 86), 4: (31, 97),
    5: (38, 106), 6: (46, 113), 7: (55, 118), 8: (64, 120),
    # left brow
    17: (30, 36), 18: (36, 32), 19: (43, 31), 20: (50, 32), 21: (56, 35),
    # nose bridge and base
    27: (64, 48), 28: (64, 57), 29: (64, 66), 30: (64, 75),
    31: (56, 80), 32: (60, 82), 33: (64, 83),
    # left eye: outer corner, upper lid, inner corner, lower lid
    36: (36, 48), 37: (41, 45), 38: (47, 45), 39: (52, 48), 40: (47, 51), 41: (41, 51),
    # outer lip
    48: (50, 98), 49: (54, 94), 50: (59, 92), 51: (64, 93),
    57: (64, 107), 58: (59, 106), 59: (54, 103),
    # inner lip
    60: (53, 98), 61: (59, 96), 62: (64, 96), 66: (64, 102), 67: (59, 101),
}

SYNTHETIC_AXIS_X = 64.0
SYNTHETIC_FRAME = (128, 128)


def _reference_face() -> np.ndarray:
    from .geometry import MIRROR_PERMUTATION

    k = np.full((68, 2), np.nan)
    for i, xy in _LEFT_HALF.items():
        k[i] = xy
    for i in range(68):
        j = MIRROR_PERMUTATION[i]
        if np.isnan(k[i, 0]) and not np.isnan(k[j, 0]):
            k[i] = (2 * SYNTHETIC_AXIS_X - k[j, 0], k[j, 1])
    return as_keypoints(k)


REFERENCE_KEYPOINTS = _reference_face()
REFERENCE_KEYPOINTS.setflags(write=False)


def similarity_matrix(scale=1.0, angle_deg=0.0, offset=(0.0, 0.0), center=(0.0, 0.0)) -> np.ndarray:
    """2x3 matrix: rotate/scale about ``center`` then translate by ``offset``."""
    t = math.radians(angle_deg)
    c, s = scale * math.cos(t), scale * math.sin(t)
    cx, cy = center
    return np.array([
        [c, -s, cx - c * cx + s * cy + offset[0]],
        [s, c, cy - s * cx - c * cy + offset[1]],
    ])


def synthetic_keypoints(scale=1.0, angle_deg=0.0, offset=(0.0, 0.0), center=(0.0, 0.0)) -> np.ndarray:
    """Reference keypoints under a similarity transform."""
    m = similarity_matrix(scale, angle_deg, offset, center)
    k = REFERENCE_KEYPOINTS
    return k @ m[:, :2].T + m[:, 2]


def vary_shape(k, rng) -> np.ndarray:
    """Deterministic per-face shape change of reference-frame keypoints.

    Stretches the lower face vertically, widens or narrows the jaw and adds
    small independent jitter, so faces differ after rectification.
    """
    k = np.array(k, dtype=float)
    lower = k[:, 1] > 83.0
    k[lower, 1] = 83.0 + (k[lower, 1] - 83.0) * rng.uniform(0.88, 1.12)
    jaw = list(JAW)
    k[jaw, 0] = SYNTHETIC_AXIS_X + (k[jaw, 0] - SYNTHETIC_AXIS_X) * rng.uniform(0.92, 1.08)
    k += rng.normal(0.0, 0.7, k.shape)
    return k


def _face_outline(k: np.ndarray) -> list[tuple[float, float]]:
    # jawline plus an elliptical cap over the forehead
    jaw = [tuple(k[i]) for i in JAW]
    left, right = k[0], k[16]
    centre = (left + right) / 2
    half_w = np.linalg.norm(right - left) / 2
    up = np.array([(right - left)[1], -(right - left)[0]]) / (2 * half_w)
    rx = (right - left) / (2 * half_w)
    cap = []
    for t in np.linspace(0, math.pi, 24)[1:-1]:
        p = centre + rx * half_w * math.cos(t) + up * half_w * 1.0 * math.sin(t)
        cap.append(tuple(p))
    return jaw + cap


def render_face(k, size=(256, 256), skin=(200, 160, 130), lips=(170, 80, 80),
                brows=(70, 50, 40), eyes=(40, 30, 30), background=(40, 60, 90),
                noise=0.0, seed=0) -> np.ndarray:
    """Draw a flat-shaded face for the given keypoints; returns uint8 RGB."""
    k = as_keypoints(k)
    img = Image.new("RGB", size, background)
    draw = ImageDraw.Draw(img)
    draw.polygon(_face_outline(k), fill=skin)
    for idx in (BROW_L, BROW_R):
        draw.line([tuple(k[i]) for i in idx], fill=brows, width=max(2, int(round(np.linalg.norm(k[16] - k[0]) / 30))))
    for idx in (EYE_L, EYE_R):
        draw.polygon([tuple(k[i]) for i in idx], fill=eyes)
    draw.polygon([tuple(k[i]) for i in MOUTH_OUTER], fill=lips)
    draw.polygon([tuple(k[i]) for i in MOUTH_INNER], fill=tuple(int(c * 0.6) for c in lips))
    arr = np.asarray(img, dtype=np.float64)
    if noise > 0:
        rng = np.random.default_rng(seed)
        arr = arr + rng.normal(0.0, noise, arr.shape)
    return np.clip(np.rint(arr), 0, 255).astype(np.uint8)


# (scale, angle, dx, dy, skin RGB) for the 12 corpus faces
_CORPUS_PARAMS = [
    (1.00, 0.0, 64, 64, (224, 188, 160)),
    (1.10, 4.0, 50, 60, (205, 160, 125)),
    (0.95, -6.0, 70, 58, (180, 130, 95)),
    (1.20, 2.0, 40, 40, (150, 105, 75)),
    (0.90, 8.0, 72, 70, (120, 80, 55)),
    (1.05, -3.0, 60, 66, (95, 62, 45)),
    (1.15, 0.0, 46, 52, (235, 200, 175)),
    (1.00, -9.0, 66, 62, (196, 150, 118)),
    (0.85, 5.0, 80, 76, (165, 118, 88)),
    (1.25, -1.0, 36, 36, (138, 95, 70)),
    (0.98, 7.0, 62, 54, (110, 74, 52)),
    (1.08, -5.0, 56, 64, (214, 172, 140)),
]


def corpus_records(seed: int = 0) -> list[tuple[dict, np.ndarray]]:
    """Build the 12 synthetic manifest records with their rendered images."""
    rng = np.random.default_rng(seed)
    shape_rng = np.random.default_rng(seed + 1)
    out = []
    for i, (scale, angle, dx, dy, skin) in enumerate(_CORPUS_PARAMS):
        base = vary_shape(REFERENCE_KEYPOINTS, shape_rng)
        m = similarity_matrix(scale, angle, (dx, dy), center=(64.0, 64.0))
        k = base @ m[:, :2].T + m[:, 2]
        lips = (min(255, skin[0] - 20), max(0, skin[1] - 70), max(0, skin[2] - 50))
        image = render_face(k, skin=skin, lips=lips, noise=3.0, seed=seed * 1000 + i)
        x0, y0 = k[:, 0].min(), k[:, 1].min() - 0.3 * (k[:, 1].max() - k[:, 1].min())
        x1, y1 = k[:, 0].max(), k[:, 1].max()
        bbox = [round(float(v), 3) for v in (x0, y0, x1 - x0, y1 - y0)]
        age = rng.integers(2, 90)
        softmax = np.exp(-0.5 * ((np.arange(101) - age) / 4.0) ** 2)
        softmax /= softmax.sum()
        votes = []
        for a in range(3):
            gender = "male" if rng.random() < 0.5 else "female"
            value = float(max(0, age + rng.integers(-5, 6)))
            votes.append({
                "annotator_id": f"a{a}",
                "gender": gender,
                "age_group": age_group_of(value),
                "age_value": value,
                "weight": round(float(rng.uniform(0.3, 1.0)), 3),
            })
        record = {
            "face_id": f"synthetic-{i:02d}",
            "image_path": f"face_{i:02d}.png",
            "bbox": bbox,
            "keypoints": [[round(float(x), 4), round(float(y), 4)] for x, y in k],
            "pose_class": [0, 0, 3, 0, 4, 0, 0, 3, 0, 4, 0, 0][i],
            "age_softmax": [round(float(p), 10) for p in softmax / softmax.sum()],
            "gender_score": round(float(rng.uniform(0, 1)), 4),
            "votes": votes,
        }
        out.append((record, image))
    return out


def write_corpus(directory, seed: int = 0) -> Path:
    """Write the synthetic corpus (PNG images + ``manifest.jsonl``) to ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lines = []
    for record, image in corpus_records(seed):
        Image.fromarray(image).save(directory / record["image_path"])
        lines.append(json.dumps(record, sort_keys=True))
    manifest = directory / "manifest.jsonl"
    manifest.write_text("\n".join(lines) + "\n")
    return manifest


def bundled_corpus() -> Path:
    """Path to the manifest of the corpus shipped inside the package."""
    return Path(__file__).parent / "data" / "synthetic_corpus" / "manifest.jsonl"
