import numpy as np
import pytest

from entire_symmetry import _kernels

numba = pytest.importorskip("numba")


def _rand(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


@pytest.mark.parametrize("seed", range(5))
def test_cauchy_product_bit_identical(seed):
    rng = np.random.default_rng(seed)
    a, b = _rand(rng, 40), _rand(rng, 40)
    assert np.array_equal(_kernels.cauchy_product_nb(a, b), _kernels.cauchy_product_np(a, b))


@pytest.mark.parametrize("seed", range(5))
def test_substitute_bit_identical(seed):
    rng = np.random.default_rng(seed)
    outer, inner = _rand(rng, 20), _rand(rng, 20)
    inner[0] = 0
    assert np.array_equal(_kernels.substitute_nb(outer, inner), _kernels.substitute_np(outer, inner))


@pytest.mark.parametrize("seed", range(5))
def test_horner_bit_identical(seed):
    rng = np.random.default_rng(seed)
    c, h = _rand(rng, 30), _rand(rng, 17).reshape(17)
    assert np.array_equal(_kernels.horner_nb(c, h), _kernels.horner_np(c, h))


@pytest.mark.parametrize("seed", range(5))
def test_aberth_bit_identical(seed):
    rng = np.random.default_rng(seed)
    c = _rand(rng, 9)
    z0 = _rand(rng, 8)
    zn, itn, okn = _kernels.aberth_nb(c, z0, 1e-12, 200)
    zp, itp, okp = _kernels.aberth_np(c, z0, 1e-12, 200)
    assert (itn, okn) == (itp, okp)
    assert np.array_equal(zn, zp)


def test_cdiv_matches_smith_on_both_paths():
    rng = np.random.default_rng(0)
    a, b = _rand(rng, 50), _rand(rng, 50)
    np_out = _kernels.cdiv_np(a, b)
    for x, y, want in zip(a, b, np_out):
        assert _kernels.cdiv_nb(x, y) == want
    assert np.max(np.abs(np_out - a / b)) <= 1e-15 * np.max(np.abs(a / b))


def test_min_pairwise_distance_agrees():
    rng = np.random.default_rng(1)
    pts = _rand(rng, 60)
    brute = min(abs(pts[i] - pts[j]) for i in range(60) for j in range(i + 1, 60))
    assert _kernels.min_pairwise_distance_nb(pts) == brute
    assert _kernels.min_pairwise_distance_np(pts) == brute
    assert _kernels.min_pairwise_distance(pts[:1]) == float("inf")


@pytest.mark.parametrize("n", [2, 3, 257, 600])
def test_min_pairwise_distance_ties_pick_same_pair(n):
    rng = np.random.default_rng(n)
    pts = np.round(_rand(rng, n), 1)
    assert _kernels.min_pairwise_distance_np(pts) == _kernels.min_pairwise_distance_nb(pts)
