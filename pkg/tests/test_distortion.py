import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from esfme.distortion import block_satd_map, hadamard4x4, sad, satd, satd4x4, satd8x8
from esfme.pixel_io import Plane

residual4 = arrays(np.int64, (4, 4), elements=st.integers(-255, 255))
block8 = arrays(np.uint8, (8, 8))


def naive_hadamard(r):
    # Sylvester construction, independent of the module's constant
    h2 = [[1, 1], [1, -1]]
    h4 = [[h2[i // 2][j // 2] * h2[i % 2][j % 2] for j in range(4)] for i in range(4)]
    out = [[0] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(4):
            out[i][j] = sum(h4[i][k] * int(r[k][l]) * h4[j][l] for k in range(4) for l in range(4))
    return out


def naive_satd4(r):
    return (sum(abs(c) for row in naive_hadamard(r) for c in row) + 1) // 2


def naive_satd8(o, p):
    r = o.astype(int) - p.astype(int)
    return sum(naive_satd4(r[y:y + 4, x:x + 4]) for y in (0, 4) for x in (0, 4))


def test_hadamard_zero():
    assert not hadamard4x4(np.zeros((4, 4), int)).any()


def test_hadamard_constant_one():
    c = hadamard4x4(np.ones((4, 4), int))
    assert c[0, 0] == 16
    assert np.count_nonzero(c) == 1


def test_hadamard_matches_naive(rng):
    for _ in range(50):
        r = rng.integers(-255, 256, size=(4, 4))
        assert hadamard4x4(r).tolist() == naive_hadamard(r)


@given(residual4)
def test_parseval(r):
    c = hadamard4x4(r)
    assert int((c * c).sum()) == 16 * int((r * r).sum())


def test_satd4x4_examples():
    assert satd4x4(np.zeros((4, 4), int)) == 0
    assert satd4x4(np.ones((4, 4), int)) == 8


@given(residual4)
def test_satd4x4_matches_naive_and_is_sign_symmetric(r):
    assert satd4x4(r) == naive_satd4(r)
    assert satd4x4(r) == satd4x4(-r)


@given(residual4)
def test_satd4x4_zero_iff_zero_residual(r):
    assert (satd4x4(r) == 0) == (not r.any())


def test_satd8x8_examples():
    ones = np.ones((8, 8), np.uint8)
    assert satd8x8(ones, ones) == 0
    assert satd8x8(ones, np.zeros((8, 8), np.uint8)) == 32


@given(block8, block8)
def test_satd8x8_matches_quadrant_oracle(o, p):
    assert satd8x8(o, p) == naive_satd8(o, p)
    assert satd8x8(o, p) == satd8x8(p, o)


@given(residual4, st.integers(0, 3))
def test_satd8x8_single_quadrant(r, q):
    o = np.full((8, 8), 128, np.int64)
    y, x = divmod(q, 2)
    o[4 * y:4 * y + 4, 4 * x:4 * x + 4] += r // 2
    p = np.full((8, 8), 128, np.int64)
    assert satd8x8(o, p) == satd4x4(r // 2)


def test_satd8x8_accepts_views(random_plane):
    a, b = random_plane(16, 16), random_plane(16, 16)
    va, vb = a.view(8, 0, 8, 8), b.view(0, 8, 8, 8)
    assert satd8x8(va, vb) == naive_satd8(va.pixels, vb.pixels)


def test_satd8x8_rejects_other_sizes():
    with pytest.raises(ValueError):
        satd8x8(np.zeros((4, 8)), np.zeros((4, 8)))


def test_block_map_matches_per_block(rng):
    o = rng.integers(0, 256, size=(32, 48))
    p = rng.integers(0, 256, size=(32, 48))
    m = block_satd_map(o, p)
    assert m.shape == (4, 6)
    for by in range(4):
        for bx in range(6):
            sl = np.s_[8 * by:8 * by + 8, 8 * bx:8 * bx + 8]
            assert m[by, bx] == naive_satd8(o[sl], p[sl])
    assert satd(o, p) == m.sum()


def test_sad_examples(rng):
    a = np.full((8, 8), 10, np.uint8)
    assert sad(a, a) == 0
    assert sad(a, a - 2) == 128
    o = rng.integers(0, 256, size=(16, 8))
    p = rng.integers(0, 256, size=(16, 8))
    assert sad(o, p) == sum(abs(int(x) - int(y)) for x, y in zip(o.ravel(), p.ravel()))


def test_sad_dimension_mismatch():
    with pytest.raises(ValueError):
        sad(np.zeros((8, 8)), np.zeros((8, 16)))


def test_results_are_python_ints(random_plane):
    a, b = random_plane(8, 8), random_plane(8, 8)
    assert type(satd8x8(a.samples, b.samples)) is int
    assert type(sad(a.samples, b.samples)) is int
