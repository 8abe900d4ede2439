"""
Landmarks and craniofacial measures
===================================

Map 68 keypoints to named anatomical landmarks, then compute the 8
distances, 12 areas and 8 ratios on an eye-rectified face.
"""
import numpy as np

from facediversity.craniofacial import areas, distances, ratios
from facediversity.geometry import KEYPOINT_MAP, map_keypoints
from facediversity.preprocess import apply_affine, rectify
from facediversity.synthetic import REFERENCE_KEYPOINTS, synthetic_keypoints

# The hand-placed reference face is mirror-symmetric about x = 64.
lm = map_keypoints(REFERENCE_KEYPOINTS)
print("keypoint indices per landmark:")
for name, idx in KEYPOINT_MAP.items():
    print(f"  {name:8s} <- {idx}")
print("inner eye corners:", lm.en_l, lm.en_r)
print("stomion (lip midpoint):", lm.sto)

# A detected face is rarely upright or at a fixed scale, so measures are
# taken after the eye centres are moved onto fixed anchors.
k = synthetic_keypoints(scale=1.7, angle_deg=-8.0, offset=(40, 25), center=(64, 64))
rect = rectify(np.zeros((256, 256, 3), np.uint8), k)
k_rect = apply_affine(rect.transform, k)
lm = map_keypoints(k_rect, top=0.0)

for title, group in (("distances", distances(lm)), ("areas", areas(lm))):
    print(f"\n{title} (rectified px)")
    for name, value in group.as_dict().items():
        print(f"  {name:10s} {value:8.3f}")

r = ratios(lm)
print("\nratios")
for name, value in r.as_dict().items():
    print(f"  {name:24s} {value:.4f}")
# sto is the exact midpoint of ls and li, so this index is always 1.
print("invalid ratios:", r.invalid or "none")
