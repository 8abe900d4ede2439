import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from facediversity.contrast import (CHANNELS, PARTS, contrast_vector, encode_lab, region_contrast,
                                    region_rings, rings_from_polygon)
from facediversity.errors import DegenerateGeometry, EmptyRegion, NumericDegenerate
from facediversity.raster import polygon_area, polygon_mask
from facediversity.synthetic import REFERENCE_KEYPOINTS

SQUARE = np.array([[20.0, 20.0], [30.0, 20.0], [30.0, 30.0], [20.0, 30.0]])


def test_square_scales_about_centre():
    rings = rings_from_polygon(SQUARE)
    np.testing.assert_allclose(rings.outer, [[17.5, 17.5], [32.5, 17.5], [32.5, 32.5], [17.5, 32.5]])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3)), min_size=6, max_size=6))
def test_outer_area_is_225_percent(noise):
    ang = np.linspace(0, 2 * np.pi, 7)[:-1]
    poly = np.c_[50 + 10 * np.cos(ang), 50 + 8 * np.sin(ang)] + np.array(noise)
    rings = rings_from_polygon(poly)
    assert polygon_area(rings.outer) == pytest.approx(2.25 * polygon_area(poly), rel=1e-12)


def test_reference_eye_rings_hand_scaled():
    # the left eye hexagon is point-symmetric about (44, 48)
    left, right = region_rings(REFERENCE_KEYPOINTS, "eyes")
    np.testing.assert_allclose(left.inner, [[36, 48], [41, 45], [47, 45], [52, 48], [47, 51], [41, 51]])
    np.testing.assert_allclose(left.outer, [[32, 48], [39.5, 43.5], [48.5, 43.5], [56, 48],
                                            [48.5, 52.5], [39.5, 52.5]], atol=1e-12)
    np.testing.assert_allclose(right.outer[:, 0], 128.0 - left.outer[[3, 2, 1, 0, 5, 4], 0], atol=1e-12)


def test_part_ring_counts():
    assert len(region_rings(REFERENCE_KEYPOINTS, "lips")) == 1
    assert len(region_rings(REFERENCE_KEYPOINTS, "eyes")) == 2
    assert len(region_rings(REFERENCE_KEYPOINTS, "eyebrows")) == 2


def test_tiny_polygon_is_degenerate():
    with pytest.raises(DegenerateGeometry):
        rings_from_polygon([[0, 0], [1, 0], [1, 1], [0, 1]])


def two_tone(outer_value, inner_value, rings, shape=(64, 64)):
    img = np.zeros(shape + (3,))
    outer = polygon_mask(shape, rings.outer)
    inner = polygon_mask(shape, rings.inner)
    img[outer] = outer_value
    img[inner] = inner_value
    return img


@pytest.mark.parametrize("o,i", [(30.0, 10.0), (10.0, 30.0), (200.0, 200.0), (7.0, 1.0)])
def test_two_tone_formula(o, i):
    rings = rings_from_polygon(SQUARE)
    img = two_tone(o, i, rings)
    for ch in CHANNELS:
        assert region_contrast(img, rings, ch, encoded=True) == pytest.approx((o - i) / (o + i), abs=1e-15)


def test_sum_mode_weights_by_area():
    rings = rings_from_polygon(SQUARE)
    img = two_tone(30.0, 10.0, rings)
    n_in = polygon_mask(img.shape[:2], rings.inner).sum()
    n_out = (polygon_mask(img.shape[:2], rings.outer) & ~polygon_mask(img.shape[:2], rings.inner)).sum()
    want = (30.0 * n_out - 10.0 * n_in) / (30.0 * n_out + 10.0 * n_in)
    assert region_contrast(img, rings, "L", mode="sum", encoded=True) == pytest.approx(want, abs=1e-15)


def test_empty_and_zero_regions():
    rings = rings_from_polygon(SQUARE + 500)
    with pytest.raises(EmptyRegion):
        region_contrast(np.zeros((64, 64, 3)), rings, "L", encoded=True)
    with pytest.raises(NumericDegenerate):
        region_contrast(np.zeros((64, 64, 3)), rings_from_polygon(SQUARE), "L", encoded=True)


def test_uniform_image_all_nine_zero():
    img = np.full((128, 128, 3), (180, 120, 90), dtype=np.uint8)
    values, invalid = contrast_vector(img, REFERENCE_KEYPOINTS)
    assert invalid == {}
    assert sorted(values) == sorted(f"{p}_{c}" for p in PARTS for c in CHANNELS)
    assert all(v == 0.0 for v in values.values())


def test_random_images_stay_in_range():
    rng = np.random.default_rng(7)
    for _ in range(100):
        img = rng.integers(0, 256, (128, 128, 3)).astype(np.uint8)
        values, invalid = contrast_vector(img, REFERENCE_KEYPOINTS)
        assert not invalid
        assert all(-1.0 <= v <= 1.0 for v in values.values())


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 100.0))
def test_channel_scale_invariance(c):
    rng = np.random.default_rng(1)
    rings = rings_from_polygon(SQUARE)
    img = rng.uniform(0, 255, (64, 64, 3))
    base = region_contrast(img, rings, "b", encoded=True)
    assert region_contrast(img * c, rings, "b", encoded=True) == pytest.approx(base, rel=1e-12, abs=1e-15)


def test_encode_lab():
    np.testing.assert_allclose(encode_lab([100.0, -128.0, 127.0]), [255.0, 0.0, 255.0])
