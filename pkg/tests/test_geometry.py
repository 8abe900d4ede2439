import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from facediversity.errors import DegenerateGeometry
from facediversity.geometry import (KEYPOINT_MAP, MIRROR_PERMUTATION, FaceRecord, Point2, derive_sto,
                                    derive_tn, map_keypoints, mirror_keypoints)
from facediversity.synthetic import REFERENCE_KEYPOINTS


def test_mapping_covers_every_landmark_once():
    lm = map_keypoints(REFERENCE_KEYPOINTS)
    assert set(lm.as_dict()) == set(KEYPOINT_MAP) | {"tn", "sto"}
    assert len(lm.as_dict()) == 30


def test_eye_corners_on_reference_face():
    lm = map_keypoints(REFERENCE_KEYPOINTS)
    assert lm.en_l == (52.0, 48.0)
    assert lm.ex_l == (36.0, 48.0)
    assert lm.en_r == (76.0, 48.0)
    assert lm.ex_r == (92.0, 48.0)


def test_symmetric_face_landmarks_mirror_about_64():
    lm = map_keypoints(REFERENCE_KEYPOINTS)
    for name in ("en", "ex", "al", "ch", "zy", "go", "sbal", "cph", "ps", "pi", "or"):
        left, right = getattr(lm, name + "_l"), getattr(lm, name + "_r")
        assert left.x + right.x == pytest.approx(128.0, abs=1e-12)
        assert left.y == pytest.approx(right.y, abs=1e-12)


def test_mirror_permutation_is_an_involution():
    perm = np.array(MIRROR_PERMUTATION)
    assert np.array_equal(perm[perm], np.arange(68))


def test_mirror_keypoints_of_symmetric_face_is_identity():
    np.testing.assert_array_equal(mirror_keypoints(REFERENCE_KEYPOINTS, 64.0), REFERENCE_KEYPOINTS)


def test_derive_tn():
    assert derive_tn(Point2(64, 48), 0) == (64, 0)
    assert derive_tn(Point2(60, 50), 4) == (60, 4)


def test_tn_mirrors_with_n(ref_k):
    k = ref_k.copy()
    k[27] = (60.0, 48.0)
    lm = map_keypoints(k)
    mlm = map_keypoints(mirror_keypoints(k, 64.0))
    assert mlm.tn.x == 128.0 - lm.tn.x


def test_derive_sto_examples():
    assert derive_sto(Point2(64, 90), Point2(64, 100)) == (64, 95)
    assert derive_sto(Point2(62, 90), Point2(66, 98)) == (64, 94)
    assert derive_sto(Point2(64, 95), Point2(64, 95)) == (64, 95)


def test_derive_sto_rejects_inverted_lips():
    with pytest.raises(DegenerateGeometry):
        derive_sto(Point2(64, 101), Point2(64, 100))


def test_swapped_eyes_are_degenerate(ref_k):
    k = ref_k.copy()
    k[[39, 42]] = k[[42, 39]]
    with pytest.raises(DegenerateGeometry):
        map_keypoints(k)


def test_keypoint_count_enforced():
    with pytest.raises(ValueError):
        map_keypoints(np.zeros((67, 2)))
    k = np.array(REFERENCE_KEYPOINTS)
    k[3, 0] = np.nan
    with pytest.raises(ValueError):
        map_keypoints(k)


def test_face_record_validation(ref_k):
    FaceRecord("a", "x.png", (0, 0, 10, 10), ref_k, 0)
    with pytest.raises(ValueError):
        FaceRecord("a", "x.png", (0, 0, 0, 10), ref_k, 0)
    with pytest.raises(ValueError):
        FaceRecord("a", "x.png", (0, 0, 10, 10), ref_k, 5)


def test_mapping_is_bit_exact_repeatable(ref_k, rng):
    k = ref_k + rng.normal(0, 1, ref_k.shape)
    assert map_keypoints(k) == map_keypoints(k.copy())


jitter = st.lists(st.floats(-3, 3, allow_nan=False), min_size=136, max_size=136)


@settings(max_examples=60, deadline=None)
@given(jitter, st.floats(-50, 200))
def test_sto_is_vertical_average(noise, dx):
    k = np.array(REFERENCE_KEYPOINTS) + np.reshape(noise, (68, 2)) + [dx, 0]
    lm = map_keypoints(k)
    assert lm.sto.y == (lm.ls.y + lm.li.y) / 2.0


@settings(max_examples=60, deadline=None)
@given(jitter, st.floats(0, 200))
def test_mirror_equivariance(noise, axis):
    # dyadic jitter keeps every mirrored coordinate exactly representable
    k = np.array(REFERENCE_KEYPOINTS) + np.round(np.reshape(noise, (68, 2)) * 64) / 64
    axis = round(axis * 4) / 4
    lm = map_keypoints(k)
    mlm = map_keypoints(mirror_keypoints(k, axis))
    for name, p in lm.as_dict().items():
        if name.endswith("_l"):
            twin = name[:-2] + "_r"
        elif name.endswith("_r"):
            twin = name[:-2] + "_l"
        else:
            twin = name
        q = getattr(mlm, twin)
        assert q.x == 2 * axis - p.x
        assert q.y == p.y
