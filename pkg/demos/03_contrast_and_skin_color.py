"""
Regional contrast and skin colour
=================================

Contrast compares each facial part with a ring of skin around it in
CIE-Lab. Skin colour is the Individual Typology Angle, read as the peak of
smoothed per-pixel ITA values in the chin, cheeks and forehead.
"""
import numpy as np

from facediversity.contrast import contrast_vector
from facediversity.preprocess import apply_affine, rectify
from facediversity.skin_color import face_ita, ita, rgb_to_lab
from facediversity.synthetic import render_face, synthetic_keypoints

for skin in ((230, 195, 170), (190, 140, 105), (120, 80, 55)):
    k = synthetic_keypoints(scale=1.6, offset=(25, 20), center=(64, 64))
    image = render_face(k, skin=skin, lips=(skin[0] - 30, skin[1] - 60, skin[2] - 40), noise=2.0)
    rect = rectify(image, k)
    kr = apply_affine(rect.transform, k)
    face = np.clip(np.rint(rect.image), 0, 255).astype(np.uint8)

    values, _ = contrast_vector(face, kr)
    res = face_ita(face, kr)
    L, _, b = rgb_to_lab(skin)
    print(f"skin RGB {skin}: pixel ITA {ita(L, b):6.2f}, face ITA {res.face_ita:6.2f}, "
          f"region peaks {res.region_peaks}")
    print("  contrast " + " ".join(f"{n}={v:+.3f}" for n, v in values.items()))
