import numpy as np

from dncone.rng import SplitMix64
from dncone._kernels import _splitmix_fill_py, splitmix_fill


def test_same_seed_same_stream():
    a = SplitMix64(123).u64(32)
    b = SplitMix64(123).u64(32)
    assert np.array_equal(a, b)


def test_different_seeds_differ():
    assert not np.array_equal(SplitMix64(1).u64(16), SplitMix64(2).u64(16))


def test_accelerated_fill_matches_pure_python():
    out_a = np.empty(64, dtype=np.uint64)
    out_b = np.empty(64, dtype=np.uint64)
    s_a = splitmix_fill(987654321, out_a)
    s_b = _splitmix_fill_py(987654321, out_b)
    assert s_a == s_b
    assert np.array_equal(out_a, out_b)


def test_derive_gives_independent_streams():
    a = SplitMix64.derive(5, 1).u64(16)
    b = SplitMix64.derive(5, 2).u64(16)
    c = SplitMix64.derive(5, 1).u64(16)
    assert np.array_equal(a, c)
    assert not np.array_equal(a, b)


def test_uniform_range_and_normal_moments():
    rng = SplitMix64(99)
    u = rng.uniforms(20000)
    assert np.all((u >= 0.0) & (u < 1.0))
    assert abs(float(np.mean(u)) - 0.5) < 0.01
    z = rng.normals(20000)
    assert abs(float(np.mean(z))) < 0.03
    assert abs(float(np.std(z)) - 1.0) < 0.03


def test_shapes_and_scalars():
    rng = SplitMix64(4)
    assert isinstance(rng.uniforms(), float)
    assert rng.normals(3, 2).shape == (3, 2)
    assert rng.uniforms(5).shape == (5,)


def test_randint_and_permutation():
    rng = SplitMix64(10)
    vals = {rng.randint(7) for _ in range(200)}
    assert vals == set(range(7))
    perm = rng.permutation(8)
    assert sorted(perm) == list(range(8))


def test_choice_indices_distinct_sorted():
    rng = SplitMix64(10)
    idx = rng.choice_indices(10, 4)
    assert len(set(idx)) == 4
    assert idx == sorted(idx)
