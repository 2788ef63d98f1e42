from __future__ import annotations

import itertools

import numpy as np
import pytest
from pydantic import ValidationError

from pueb.algebra.finite_field import make_field
from pueb.bases.entangled import (
    all_entangled_bases,
    classify_all,
    classify_label,
    cluster_labels,
    eigen_check,
    ent_state,
    ent_state_pp,
    entanglement_deviation,
    overlap_structure,
    product_mub_deviation,
    project_ent_pp,
    project_mub,
    projection_incidence,
    reduced_density,
    reparameterize,
    verify_cluster,
)
from pueb.errors import PuebError
from pueb.schemas import EntangledLabel, TwoPartyLabel
from pueb.states import StateVector


def test_d3_entangled_bases_are_orthonormal_and_maximally_entangled() -> None:
    d = 3
    bases = all_entangled_bases(d)
    assert len(bases) == d * (d - 1)
    assert [(b.s, b.b) for b in bases] == [(s, b) for s in (1, 2) for b in range(3)]
    for basis in bases:
        v = basis.matrix()
        assert np.abs(v.conj().T @ v - np.eye(9)).max() < 1e-12
        assert np.abs(v @ v.conj().T - np.eye(9)).max() < 1e-12
    states = [psi for basis in bases for psi in basis.states]
    assert len(states) == 54
    for psi in states:
        for particle in ("mu", "nu"):
            assert np.abs(reduced_density(psi, particle).entries - np.eye(3) / 3).max() < 1e-12


@pytest.mark.parametrize("d", [5, 7])
def test_sampled_states_are_maximally_entangled(d: int) -> None:
    rng = np.random.default_rng(11)
    for _ in range(200):
        s = int(rng.integers(1, d))
        b, c1, c2 = (int(v) for v in rng.integers(0, d, size=3))
        psi = ent_state(d, EntangledLabel(b=b, s=s, c1=c1, c2=c2))
        assert abs(psi.norm() - 1.0) < 1e-12
        assert entanglement_deviation(psi) < 1e-12


def test_overlap_law_d3() -> None:
    report = overlap_structure(3)
    assert report.passed
    assert max(report.case_same, report.case_s_equal, report.case_full) < 1e-10
    assert report.pair_counts == {"same": 486, "s_equal": 972, "full": 1458}


@pytest.mark.parametrize("d", [5])
def test_overlap_law_larger_dimension(d: int) -> None:
    assert overlap_structure(d).passed


def test_zz_eigenvalue_for_every_label_d3() -> None:
    d = 3
    for s in (1, 2):
        for b, c1, c2 in itertools.product(range(d), repeat=3):
            report = eigen_check(d, EntangledLabel(b=b, s=s, c1=c1, c2=c2))
            assert report.passed
            assert report.residual1 < 1e-12
            assert report.eig1_exponent == (-c2) % d
            assert report.eig2_exponent == report.derived_eig2_exponent


def test_shift_eigenvalue_claim_holds_only_without_c1() -> None:
    d = 5
    held = eigen_check(d, EntangledLabel(b=2, s=3, c1=0, c2=4))
    assert held.claim_holds
    missed = eigen_check(d, EntangledLabel(b=2, s=3, c1=1, c2=4))
    assert not missed.claim_holds
    assert missed.passed
    assert missed.eig2_exponent == (1 + 3 * 2 * 4) % d


@pytest.mark.parametrize("s", [0, 3, 6])
def test_zero_s_is_rejected_by_state_construction(s: int) -> None:
    with pytest.raises(PuebError, match="must be nonzero"):
        ent_state(3, EntangledLabel(b=0, s=s, c1=0, c2=0))


def test_entangled_label_rejects_negative_labels() -> None:
    with pytest.raises(ValidationError):
        EntangledLabel(b=0, s=-1, c1=0, c2=0)


@pytest.mark.parametrize("d", [3, 5])
def test_projection_onto_mub_bra(d: int) -> None:
    for b, b1, c, c1 in itertools.product(range(d), repeat=4):
        _, result = project_mub(d, b1, c, EntangledLabel(b=b, s=1, c1=c1, c2=0))
        assert result.passed
        assert (result.target_b, result.target_c) == ((b - b1) % d, (c1 - c) % d)


def test_projection_requires_s1_c2_zero() -> None:
    with pytest.raises(PuebError):
        project_mub(3, 0, 0, EntangledLabel(b=0, s=2, c1=0, c2=0))
    with pytest.raises(PuebError):
        project_mub(3, 0, 0, EntangledLabel(b=0, s=1, c1=0, c2=1))


def test_projection_incidence_lists_doubled_labels() -> None:
    report = projection_incidence(5)
    assert report.pairs_checked == 25
    assert sorted(report.coinciding) == sorted(((2 * b1) % 5, b1) for b1 in range(5))


@pytest.mark.parametrize("p,n", [(3, 1), (3, 2)])
def test_prime_power_projection_labels_add(p: int, n: int) -> None:
    f = make_field(p, n)
    for b, c, b1, c1 in itertools.product(range(f.d), repeat=4):
        _, result = project_ent_pp(f, b, c, b1, c1)
        assert result.passed, (b, c, b1, c1, result)
        b2, c2 = f.element(result.target_b), f.element(result.target_c)
        assert f.element(b1) + b2 == f.element(b)
        assert f.element(c1) + c2 == f.element(c)


@pytest.mark.parametrize(
    "d,sizes",
    [(3, (36, 18, 18, 9)), (5, (400, 100, 100, 25))],
)
def test_operator_families_partition_all_monomials(d: int, sizes: tuple) -> None:
    report = classify_all(d)
    assert report.passed, report.failures
    assert tuple(report.family_sizes[k] for k in ("both_x", "z_left", "z_right", "both_z")) == sizes
    assert report.total == d**4
    assert report.reparameterization_bijective
    assert len(report.clusters) == d * (d - 1)
    assert report.z_partition_sizes == {
        "correlated": (d - 1) ** 2,
        "mu_only": d - 1,
        "nu_only": d - 1,
    }


def test_d7_family_sizes_without_cluster_scan() -> None:
    report = classify_all(7, check_clusters=False)
    assert report.passed
    assert report.family_sizes == {"both_x": 1764, "z_left": 294, "z_right": 294, "both_z": 49}


def test_d7_clusters_commute_and_are_orthogonal() -> None:
    report = classify_all(7)
    assert report.passed, report.failures
    assert len(report.clusters) == 42
    for cluster in report.clusters:
        assert cluster.size == 49
        assert cluster.max_commutator < 1e-12
        assert cluster.max_hs_offdiag < 1e-10
        assert cluster.passed


def test_classify_label_examples() -> None:
    tag = classify_label(3, TwoPartyLabel(m1=1, l1=2, m2=2, l2=1))
    assert (tag.variant, tag.b1, tag.b2, tag.m1, tag.m2) == ("both_x", 2, 2, 1, 2)
    assert classify_label(3, TwoPartyLabel(m1=0, l1=1, m2=0, l2=2)).variant == "both_z"
    assert classify_label(3, TwoPartyLabel(m1=0, l1=1, m2=1, l2=2)).variant == "z_left"
    assert classify_label(3, TwoPartyLabel(m1=2, l1=1, m2=0, l2=0)).variant == "z_right"


def test_reparameterization_inverts_cluster_labels() -> None:
    d = 5
    for s, b in itertools.product(range(1, d), range(d)):
        labels = cluster_labels(d, s, b)
        assert len(labels) == d * (d - 1)
        for lab in labels:
            rs, rb, _, _ = reparameterize(d, lab)
            assert (rs, rb) == (s, b)
    with pytest.raises(PuebError):
        reparameterize(d, TwoPartyLabel(m1=0, l1=1, m2=1, l2=0))


@pytest.mark.parametrize("d,s,b", [(3, 1, 0), (3, 2, 2), (5, 3, 1)])
def test_cluster_is_commuting_and_orthogonal(d: int, s: int, b: int) -> None:
    report = verify_cluster(d, s, b)
    assert report.passed
    assert report.size == d * d
    assert report.max_commutator < 1e-12
    assert report.max_offdiag_in_basis < 1e-10


@pytest.mark.parametrize("d", [3, 5])
def test_product_bases_are_unbiased(d: int) -> None:
    devs = product_mub_deviation(d)
    assert max(devs.values()) < 1e-10


def test_ent_state_d3_examples() -> None:
    omega = np.exp(2j * np.pi / 3)
    psi = ent_state(3, EntangledLabel(b=0, s=1, c1=0, c2=0)).amps
    expected = np.zeros(9, dtype=complex)
    expected[[0, 4, 8]] = 1 / np.sqrt(3)
    assert np.allclose(psi, expected)

    psi = ent_state(3, EntangledLabel(b=0, s=1, c1=1, c2=0)).amps
    expected[[0, 4, 8]] = np.array([1, omega**-1, omega**-2]) / np.sqrt(3)
    assert np.allclose(psi, expected)


def test_ent_state_support_follows_s_and_c2() -> None:
    d, s, c2 = 5, 3, 2
    psi = ent_state(d, EntangledLabel(b=1, s=s, c1=4, c2=c2)).amps.reshape(d, d)
    for n in range(d):
        support = np.flatnonzero(np.abs(psi[n]) > 1e-12)
        assert support.tolist() == [(s * n + c2) % d]


def test_eigenvalues_for_d5_label() -> None:
    report = eigen_check(5, EntangledLabel(b=2, s=3, c1=1, c2=4))
    assert report.eig1_exponent == 1
    assert report.eig2_exponent == report.derived_eig2_exponent == 0
    assert report.passed


def test_product_state_reduces_to_pure_state() -> None:
    amps = np.zeros(9, dtype=complex)
    amps[0] = 1.0
    reduced = reduced_density(StateVector(amps), "mu").entries
    assert np.allclose(reduced @ reduced, reduced)
    assert np.isclose(np.trace(reduced).real, 1.0)
    assert entanglement_deviation(StateVector(amps)) > 0.5


def test_prime_power_entangled_state_gf9() -> None:
    f = make_field(3, 2)
    psi = ent_state_pp(f, 0, 0)
    expected = np.zeros(81, dtype=complex)
    expected[[n * 9 + n for n in range(9)]] = 1 / 3
    assert np.allclose(psi.amps, expected)
    assert entanglement_deviation(ent_state_pp(f, 4, 5)) < 1e-12
