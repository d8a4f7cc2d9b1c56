import numpy as np
import pytest

from dncone import (
    DnSamplerConfig,
    DomainError,
    ProjectionStall,
    STRATEGIES,
    check_dn,
    project_dn,
    sample_dn,
)
from dncone.rng import SplitMix64


def test_check_dn_trivial_cases():
    assert check_dn(np.array([[2.0, 1.0], [1.0, 2.0]])).is_dn
    # PSD but a negative entry
    v = check_dn(np.array([[2.0, -1.0], [-1.0, 2.0]]))
    assert not v.is_dn and v.min_entry == -1.0 and v.min_eigenvalue > 0
    # nonnegative entries but indefinite
    v = check_dn(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert not v.is_dn and v.min_eigenvalue == pytest.approx(-1.0, abs=1e-12)


def test_verdict_definition_is_consistent():
    v = check_dn(np.array([[2.0, -1.0], [-1.0, 2.0]]), entry_tol=2.0)
    assert v.is_dn  # tolerance admits the negative entry
    assert v.is_dn == (v.min_eigenvalue >= -v.psd_tol and v.min_entry >= -v.entry_tol)


@pytest.mark.parametrize("strategy", STRATEGIES)
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_samplers_certify(strategy, n):
    entry_tol = 1e-10 if strategy == "dykstra_project" else 0.0
    count = 60 if strategy == "wishart_reject" and n >= 6 else 200
    cfg = DnSamplerConfig(n=n, strategy=strategy, seed=314, scale=1.0)
    for i in range(count):
        a = sample_dn(cfg, i)
        assert check_dn(a, psd_tol=1e-10, entry_tol=entry_tol).is_dn


def test_sampler_deterministic_per_index():
    cfg = DnSamplerConfig(n=4, strategy="gram_nonneg", seed=5)
    assert np.array_equal(sample_dn(cfg, 7), sample_dn(cfg, 7))
    assert not np.array_equal(sample_dn(cfg, 7), sample_dn(cfg, 8))


def test_sampler_config_validation():
    with pytest.raises(DomainError):
        DnSamplerConfig(n=1, strategy="gram_nonneg", seed=0)
    with pytest.raises(DomainError):
        DnSamplerConfig(n=3, strategy="bogus", seed=0)
    with pytest.raises(DomainError):
        DnSamplerConfig(n=3, strategy="gram_nonneg", seed=0, scale=0.0)


def test_dn_closure_under_permutation_and_cone_combinations():
    rng = SplitMix64(21)
    for i in range(40):
        n = 2 + i % 4
        a = sample_dn(DnSamplerConfig(n=n, strategy=STRATEGIES[i % 3], seed=9), i)
        b = sample_dn(DnSamplerConfig(n=n, strategy=STRATEGIES[(i + 1) % 3], seed=10), i)
        p = np.eye(n)[rng.permutation(n)]
        assert check_dn(p @ a @ p.T).is_dn
        s, t = rng.uniforms(), rng.uniforms()
        assert check_dn(s * a + t * b).is_dn


def test_project_dn_fixed_point_is_bit_exact():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert np.array_equal(project_dn(a), a)
    z = np.zeros((3, 3))
    assert np.array_equal(project_dn(z), z)


def test_project_dn_lands_in_both_sets():
    a = np.array([[2.0, -1.0], [-1.0, 2.0]])
    x = project_dn(a)
    v = check_dn(x, psd_tol=1e-8, entry_tol=1e-8)
    assert v.is_dn
    assert np.min(x) >= 0.0  # orthant side is exact by construction
    # and it moved only as far as it had to: still close to the input
    assert np.max(np.abs(x - a)) <= 1.5


def test_project_dn_respects_iteration_cap():
    a = np.array([[2.0, -1.0], [-1.0, 2.0]])
    with pytest.raises(ProjectionStall):
        project_dn(a, max_iters=1)


def test_dykstra_sampler_reaches_boundary():
    cfg = DnSamplerConfig(n=5, strategy="dykstra_project", seed=77)
    zero_entries = 0
    singular = 0
    from dncone import eig_sym

    for i in range(40):
        a = sample_dn(cfg, i)
        zero_entries += int(np.sum(a == 0.0))
        if eig_sym(a).eigenvalues[0] < 1e-8:
            singular += 1
    assert zero_entries > 0, "projection sampler should produce exact zero entries"
    assert singular > 0, "projection sampler should produce near-singular matrices"
