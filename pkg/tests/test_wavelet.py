import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfrs.errors import OddLengthError, SizeError
from tfrs.wavelet import (
    FusionWeights,
    SubbandSet,
    average_detail,
    confidence_matrix,
    dwt2_single,
    flatten,
    haar1d_full,
    haar1d_step,
    idwt2_single,
    inverse_haar1d_full,
    inverse_haar1d_step,
    inverse_standard_decomposition,
    standard_decomposition,
    sweep_weights,
)


def test_step_four_samples():
    means, details = haar1d_step([10, 4, 9, 5])
    assert means.tolist() == [7, 7]
    assert details.tolist() == [3, 2]


def test_step_constant():
    means, details = haar1d_step([4.5] * 6)
    assert means.tolist() == [4.5] * 3 and not details.any()


def test_step_odd_length():
    with pytest.raises(OddLengthError):
        haar1d_step([1, 2, 3])


def test_full_four_samples():
    assert haar1d_full([10, 4, 9, 5]).tolist() == [7, 0, 3, 2]
    assert haar1d_full([3.25]).tolist() == [3.25]


def test_full_non_power_of_two():
    with pytest.raises(SizeError):
        haar1d_full([1, 2, 3, 4, 5, 6])


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 40).map(lambda n: 2 * n), st.integers(0, 2**32 - 1))
def test_step_reconstruction(n, seed):
    v = np.random.default_rng(seed).normal(size=n) * 100
    np.testing.assert_allclose(inverse_haar1d_step(*haar1d_step(v)), v, rtol=0, atol=1e-12 * np.abs(v).max())


@pytest.mark.parametrize("n", [1, 2, 4, 8, 64, 256])
def test_full_reconstruction(n):
    v = np.random.default_rng(n).normal(size=n)
    np.testing.assert_allclose(inverse_haar1d_full(haar1d_full(v)), v, atol=1e-12)


def test_dwt2_constant():
    s = dwt2_single(np.full((6, 8), 3.0))
    assert (s.ll == 3).all() and not (s.hl.any() or s.lh.any() or s.hh.any())


def test_dwt2_two_by_two_by_hand():
    a, b, c, d = 9.0, 1.0, 4.0, 2.0
    s = dwt2_single(np.array([[a, b], [c, d]]))
    # rows: [(a+b)/2 | (a-b)/2], [(c+d)/2 | (c-d)/2]; then columns
    assert s.ll[0, 0] == (a + b + c + d) / 4
    assert s.hl[0, 0] == ((a - b) / 2 + (c - d) / 2) / 2
    assert s.lh[0, 0] == ((a + b) / 2 - (c + d) / 2) / 2
    assert s.hh[0, 0] == ((a - b) / 2 - (c - d) / 2) / 2


def test_dwt2_face_dimensions():
    s = dwt2_single(np.zeros((112, 92)))
    assert s.ll.shape == s.hl.shape == s.lh.shape == s.hh.shape == (56, 46)
    assert flatten(s.ll).size == 2576


def test_dwt2_odd():
    with pytest.raises(SizeError):
        dwt2_single(np.zeros((5, 4)))


def test_dwt2_ll_is_block_mean_and_invertible():
    img = np.random.default_rng(0).uniform(0, 255, (112, 92))
    s = dwt2_single(img)
    blocks = img.reshape(56, 2, 46, 2).mean(axis=(1, 3))
    np.testing.assert_allclose(s.ll, blocks, rtol=1e-12, atol=0)
    np.testing.assert_allclose(idwt2_single(s), img, rtol=1e-12, atol=0)


def test_standard_decomposition_row_example():
    assert standard_decomposition(np.array([[10.0, 4, 9, 5]])).tolist() == [[7, 0, 3, 2]]


def test_standard_decomposition_constant():
    out = standard_decomposition(np.full((8, 4), 6.0))
    assert out[0, 0] == 6.0
    assert np.count_nonzero(out) == 1


def test_standard_decomposition_inverse():
    img = np.random.default_rng(1).uniform(0, 255, (32, 32))
    np.testing.assert_allclose(inverse_standard_decomposition(standard_decomposition(img)), img, atol=1e-10)


def test_standard_decomposition_requires_powers_of_two():
    with pytest.raises(SizeError):
        standard_decomposition(np.zeros((112, 92)))


def _bands(hl, lh, hh):
    z = np.zeros((2, 3))
    return SubbandSet(z, z + hl, z + lh, z + hh)


def test_average_detail():
    assert (average_detail(_bands(5.0, 5.0, 5.0)) == 5.0).all()
    assert (average_detail(_bands(3.0, 6.0, 9.0)) == 6.0).all()
    assert (average_detail(_bands(0.0, 6.0, 9.0)) == 5.0).all()


def test_confidence_matrix():
    ll, d = np.full((2, 2), 4.0), np.full((2, 2), 8.0)
    assert (confidence_matrix(ll, d, FusionWeights(1.0, 0.0)) == ll).all()
    assert (confidence_matrix(ll, d, FusionWeights(0.0, 1.0)) == d).all()
    assert (confidence_matrix(ll, d, FusionWeights(0.5, 0.5)) == 6.0).all()
    with pytest.raises(SizeError):
        confidence_matrix(ll, np.zeros((3, 2)), FusionWeights(0.5, 0.5))


def test_confidence_monotone_in_alpha():
    rng = np.random.default_rng(4)
    d = rng.uniform(0, 10, (5, 5))
    ll = d + rng.uniform(0.1, 10, (5, 5))
    prev = None
    for w in reversed(sweep_weights()):  # alpha increasing
        t = confidence_matrix(ll, d, w)
        if prev is not None:
            assert (t >= prev).all()
        prev = t


def test_sweep_weights():
    ws = sweep_weights()
    assert len(ws) == 11
    assert (ws[0].alpha, ws[0].beta) == (1.0, 0.0)
    assert (ws[5].alpha, ws[5].beta) == (0.5, 0.5)
    assert (ws[10].alpha, ws[10].beta) == (0.0, 1.0)
    for i, w in enumerate(ws):
        assert w.beta == 0.1 * i
        assert w.alpha + w.beta == 1.0


def test_fusion_weights_validation():
    with pytest.raises(ValueError):
        FusionWeights(0.6, 0.6)


def test_flatten():
    assert flatten(np.array([[1, 2], [3, 4]])).tolist() == [1, 2, 3, 4]
    assert flatten(np.array([[5, 6, 7]])).tolist() == [5, 6, 7]
