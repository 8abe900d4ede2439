import numpy as np
import pytest

from facediversity.synthetic import REFERENCE_KEYPOINTS


@pytest.fixture
def ref_k():
    return np.array(REFERENCE_KEYPOINTS)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
