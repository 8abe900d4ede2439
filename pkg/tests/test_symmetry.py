import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from facediversity.errors import DegenerateGeometry, NoEdges
from facediversity.symmetry import (C1, C2, C3, INNER_CANTHI, PHILTRUM, density_difference,
                                    edge_orientation_similarity, rectify_for_symmetry, to_gray)
from facediversity.synthetic import REFERENCE_KEYPOINTS, render_face, synthetic_keypoints


def symmetric(img):
    # a + b and b + a are the same float, so the result equals its own mirror bit for bit
    return (img + img[:, ::-1]) / 2.0


def blobs(seed=0, size=128):
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[:size, :size].astype(float)
    img = np.zeros((size, size))
    for _ in range(12):
        cx, cy, r = rng.uniform(10, size - 10), rng.uniform(10, size - 10), rng.uniform(4, 20)
        img += rng.uniform(0.1, 0.4) * (np.hypot(x - cx, y - cy) < r)
    return np.clip(img, 0, 1)


def test_dd_zero_for_mirror_symmetric_image():
    assert density_difference(symmetric(blobs())) == 0.0


def test_dd_left_white_right_black():
    img = np.zeros((128, 128))
    img[:, :64] = 1.0
    assert density_difference(img) == 1.0


def dd_oracle(img):
    h, w = len(img), len(img[0])
    total = 0.0
    for i in range(h):
        for j in range(w // 2):
            total += abs(img[i][j] - img[i][w - 1 - j])
    return total / (h * (w // 2))


@pytest.mark.parametrize("cell", [1, 3, 5, 8, 13])
def test_dd_checkerboard_against_pixel_oracle(cell):
    y, x = np.mgrid[:128, :128]
    board = (((x // cell) + (y // cell)) % 2).astype(float)
    mismatch = board[:, :64] != board[:, ::-1][:, :64]
    assert density_difference(board) == pytest.approx(mismatch.mean(), abs=1e-15)
    assert density_difference(board) == pytest.approx(dd_oracle(board.tolist()), abs=1e-12)


def test_eos_one_for_symmetric_image():
    assert edge_orientation_similarity(symmetric(blobs(1))) == pytest.approx(1.0, abs=1e-6)


def test_eos_symmetric_independent_of_threshold():
    img = symmetric(blobs(2))
    for tau in (1e-6, 1 / 255, 0.02, 0.05):
        assert edge_orientation_similarity(img, threshold=tau) == pytest.approx(1.0, abs=1e-6)


def test_eos_zero_for_perpendicular_gradients():
    # I = c (x + y): grad I = (c, c) and its mirror has grad (-c, c), orthogonal everywhere
    y, x = np.mgrid[:128, :128].astype(float)
    img = 0.004 * (x + y)
    assert edge_orientation_similarity(img) == pytest.approx(0.0, abs=1e-12)
    # as undirected lines they are also 90 degrees apart
    assert edge_orientation_similarity(img, mode="axial") == pytest.approx(-1.0, abs=1e-12)


def test_eos_vertical_ramp_is_antisymmetric():
    # I = c x mirrors to a ramp running the other way: opposite vectors, same line
    x = np.tile(np.arange(128, dtype=float), (128, 1))
    assert edge_orientation_similarity(0.005 * x) == pytest.approx(-1.0, abs=1e-12)
    assert edge_orientation_similarity(0.005 * x, mode="axial") == pytest.approx(1.0, abs=1e-12)


def test_uniform_image_has_no_edges():
    with pytest.raises(NoEdges):
        edge_orientation_similarity(np.full((128, 128), 0.5))


def test_unknown_mode():
    with pytest.raises(ValueError):
        edge_orientation_similarity(blobs(), mode="doubled")


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (32, 32), elements=st.floats(0, 1)))
def test_mirror_invariance_exact(img):
    assert density_difference(img[:, ::-1]) == density_difference(img)
    try:
        e = edge_orientation_similarity(img)
    except NoEdges:
        with pytest.raises(NoEdges):
            edge_orientation_similarity(img[:, ::-1])
        return
    assert edge_orientation_similarity(img[:, ::-1]) == e


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (24, 24), elements=st.floats(0, 1)))
def test_ranges(img):
    assert density_difference(img) >= 0.0
    try:
        e = edge_orientation_similarity(img, threshold=1e-3)
    except NoEdges:
        return
    assert -1.0 <= e <= 1.0


def test_dd_increases_with_antisymmetric_noise():
    base = 0.25 + 0.5 * symmetric(blobs(3))
    rng = np.random.default_rng(4)
    n = rng.normal(0, 1, base.shape)
    anti = (n - n[:, ::-1]) / 2.0
    amps = np.linspace(0.0, 0.1, 10)
    dd = [density_difference(base + a * anti) for a in amps]
    assert dd[0] == 0.0
    assert all(b > a for a, b in zip(dd, dd[1:]))


def test_rectify_for_symmetry_identity():
    k = np.array(REFERENCE_KEYPOINTS)
    k[INNER_CANTHI[0]], k[INNER_CANTHI[1]], k[PHILTRUM] = C1, C2, C3
    rect = rectify_for_symmetry(np.zeros((128, 128, 3), dtype=np.uint8), k)
    np.testing.assert_allclose(rect.transform, [[1, 0, 0], [0, 1, 0]], atol=1e-12)


def test_rectify_for_symmetry_half_scale():
    k = np.array(REFERENCE_KEYPOINTS)
    k[INNER_CANTHI[0]], k[INNER_CANTHI[1]], k[PHILTRUM] = (2 * np.array([C1, C2, C3]))
    rect = rectify_for_symmetry(np.zeros((256, 256, 3), dtype=np.uint8), k)
    np.testing.assert_allclose(rect.transform, [[0.5, 0, 0], [0, 0.5, 0]], atol=1e-12)
    for got, want in zip(rect.points_after, (C1, C2, C3)):
        assert got == pytest.approx(want, abs=1e-12)


def test_rectify_for_symmetry_output_and_collinear_error():
    k = synthetic_keypoints(2.0, 0.0, (0, 0), (0, 0))
    rect = rectify_for_symmetry(render_face(k), k)
    assert rect.image.shape == (128, 128)
    assert 0.0 <= rect.image.min() and rect.image.max() <= 1.0
    bad = np.array(REFERENCE_KEYPOINTS)
    bad[PHILTRUM] = (64.0, 48.0)
    with pytest.raises(DegenerateGeometry):
        rectify_for_symmetry(np.zeros((128, 128, 3)), bad)


def test_rendered_symmetric_face_scores_near_fixed_point():
    # anti-aliasing-free polygon fill is only symmetric up to a pixel
    k = synthetic_keypoints(2.0, 0.0, (0, 0), (0, 0))
    face = rectify_for_symmetry(render_face(k), k).image
    assert density_difference(face) < 0.005
    assert edge_orientation_similarity(face) > 0.99


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 3.0), st.floats(-30, 30), st.floats(-50, 150), st.floats(-50, 150))
def test_symmetry_anchors_hit(scale, angle, dx, dy):
    k = synthetic_keypoints(scale, angle, (dx, dy), (64, 64))
    rect = rectify_for_symmetry(np.zeros((4, 4)), k)
    for got, want in zip(rect.points_after, (C1, C2, C3)):
        assert math.dist(got, want) <= 0.5


def test_to_gray_bt601():
    px = np.array([[[255, 0, 0], [0, 255, 0], [0, 0, 255]]], dtype=np.uint8)
    np.testing.assert_allclose(to_gray(px)[0], [0.299, 0.587, 0.114], atol=1e-15)
