from __future__ import annotations

import numpy as np
import pytest

from pueb.algebra.finite_field import make_field
from pueb.algebra.schwinger import monomial
from pueb.bases.entangled import ent_state
from pueb.bases.mub import computational_basis, mub_state, structured_basis
from pueb.errors import InvalidProbabilitiesError, MissingSettingsError, PuebError
from pueb.schemas import EntangledLabel, MonomialLabel, ProbTable, SettingOutcomes
from pueb.states import DensityMatrix
from pueb.tomography.measurements import (
    MeasurementSetting,
    born_probs,
    correlation_expectations,
    exact_prob_table,
    hermitian_pair,
    measurement_count,
    sample_probs,
    sampled_prob_table,
    settings_for,
    setting_rng,
)
from pueb.tomography.reconstruction import (
    diagnostics,
    mix_tables,
    random_density_matrix,
    reconstruct_single,
    reconstruct_two,
)


def test_born_probs_of_simple_states() -> None:
    d = 5
    mixed = np.eye(d) / d
    assert np.allclose(born_probs(mixed, structured_basis(d, 2).matrix()), 1 / d)
    ground = np.zeros((d, d))
    ground[0, 0] = 1.0
    assert born_probs(ground, computational_basis(d).matrix()).tolist() == [1.0, 0, 0, 0, 0]
    for b in range(d):
        assert np.allclose(born_probs(ground, structured_basis(d, b).matrix()), 1 / d, atol=1e-12)


def test_born_probs_rejects_non_orthonormal_basis() -> None:
    with pytest.raises(PuebError):
        born_probs(np.eye(3) / 3, 2 * np.eye(3))


def test_setting_keys_round_trip() -> None:
    for setting in settings_for(3, "two_partite") + settings_for(3, "single"):
        assert MeasurementSetting.from_key(setting.key) == setting
    assert MeasurementSetting.from_key("zz:s=2").kind == "zz_correlation"
    with pytest.raises(PuebError):
        MeasurementSetting.from_key("bogus:b=1")


@pytest.mark.parametrize("d", [3, 5, 7])
def test_single_particle_round_trip(d: int, rho_factory) -> None:
    for seed in range(20):
        rho = rho_factory(d, seed=seed, rank=1 if seed % 2 else None)
        table = exact_prob_table(rho, "single")
        assert len(table.settings) == d + 1
        estimate = reconstruct_single(d, table)
        assert estimate.distance(rho) < 1e-10
        assert abs(estimate.trace() - 1.0) < 1e-10


def test_single_particle_round_trip_prime_power(rho_factory) -> None:
    f = make_field(3, 2)
    rho = rho_factory(9, seed=4)
    table = exact_prob_table(rho, "single", f)
    assert len(table.settings) == 10
    assert reconstruct_single(9, table, f).distance(rho) < 1e-10


def test_single_particle_reconstruction_of_ground_and_mixed_states() -> None:
    d = 3
    ground = np.zeros((d, d), dtype=complex)
    ground[0, 0] = 1.0
    for rho in (ground, np.eye(d) / d):
        estimate = reconstruct_single(d, exact_prob_table(rho, "single"))
        assert np.abs(estimate.entries - rho).max() < 1e-12


@pytest.mark.parametrize("d", [3, 5, 7])
def test_two_particle_round_trip(d: int, rho_factory) -> None:
    for seed in range(20):
        rho = rho_factory(d * d, seed=100 + seed, rank=1 if seed % 3 == 0 else None)
        table = exact_prob_table(rho, "two_partite")
        assert len({entry.id for entry in table.settings}) == d * d + d + 1
        estimate = reconstruct_two(d, table)
        assert estimate.distance(rho) < 1e-10
        assert abs(estimate.trace() - 1.0) < 1e-10


def test_two_particle_reconstruction_of_special_states() -> None:
    d = 3
    bell = DensityMatrix.from_state(ent_state(d, EntangledLabel(b=0, s=1, c1=0, c2=0)))
    assert reconstruct_two(d, exact_prob_table(bell, "two_partite")).distance(bell) < 1e-10
    mixed = np.eye(d * d) / (d * d)
    estimate = reconstruct_two(d, exact_prob_table(mixed, "two_partite"))
    assert np.abs(estimate.entries - mixed).max() < 1e-12


def test_missing_settings_are_listed() -> None:
    table = exact_prob_table(np.eye(9) / 9, "two_partite")
    trimmed = table.model_copy(
        update={"settings": [e for e in table.settings if e.id not in ("comp", "left:b=1")]}
    )
    with pytest.raises(MissingSettingsError) as excinfo:
        reconstruct_two(3, trimmed)
    assert excinfo.value.missing == ["comp", "left:b=1"]


@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 1.0])
def test_reconstruction_is_linear(alpha: float, rho_factory) -> None:
    d = 3
    first, second = rho_factory(d * d, seed=1), rho_factory(d * d, seed=2, rank=1)
    t1, t2 = exact_prob_table(first, "two_partite"), exact_prob_table(second, "two_partite")
    mixed = reconstruct_two(d, mix_tables(t1, t2, alpha))
    expected = alpha * reconstruct_two(d, t1).entries + (1 - alpha) * reconstruct_two(d, t2).entries
    assert np.abs(mixed.entries - expected).max() < 1e-12


def test_measurement_count_table() -> None:
    assert [
        measurement_count(3, scheme)
        for scheme in ("single_mub", "two_partite_full_mub", "two_partite_this_paper", "product_single_mub")
    ] == [4, 10, 13, 16]
    assert len(settings_for(3, "two_partite")) == 13
    assert len(settings_for(5, "two_partite")) == 31
    assert len(settings_for(7, "single")) == 8


@pytest.mark.parametrize("d", [3, 5, 7])
def test_hermitian_pair_is_diagonal_in_structured_basis(d: int) -> None:
    for b in range(d):
        m1, m2 = hermitian_pair(d, b)
        assert np.abs(m1 - m1.conj().T).max() < 1e-12
        assert np.abs(m2 - m2.conj().T).max() < 1e-12
        assert np.abs(m1 @ m2 - m2 @ m1).max() < 1e-12
        for c in range(d):
            psi = mub_state(d, b, c).amps
            angle = 2 * np.pi * c / d
            assert np.abs(m1 @ psi - 2 * np.cos(angle) * psi).max() < 1e-12
            assert np.abs(m2 @ psi + 2 * np.sin(angle) * psi).max() < 1e-12


def test_zz_correlations_come_from_computational_setting(rho_factory) -> None:
    d = 3
    rho = rho_factory(d * d, seed=5)
    table = exact_prob_table(rho, "two_partite")
    for s in range(1, d):
        zz = np.kron(
            monomial(d, MonomialLabel.reduced(d, 0, s)), monomial(d, MonomialLabel.reduced(d, 0, -1))
        )
        values = correlation_expectations(table, s)
        for r in range(d):
            direct = np.trace(rho.entries @ np.linalg.matrix_power(zz, r))
            assert abs(values[r] - direct) < 1e-12


def test_sampling_converges_for_maximally_mixed_state() -> None:
    table = sampled_prob_table(np.eye(9) / 9, "two_partite", 10**6, seed=7)
    for entry in table.settings:
        assert np.abs(np.asarray(entry.outcomes) - 1 / 9).max() < 0.005


def test_single_shot_picks_one_outcome() -> None:
    freqs = sample_probs(np.full(4, 0.25), 1, setting_rng(3, "comp"))
    assert sorted(freqs.tolist()) == [0.0, 0.0, 0.0, 1.0]


def test_sampling_is_deterministic(rho_factory) -> None:
    rho = rho_factory(9, seed=9)
    first = sampled_prob_table(rho, "two_partite", 500, seed=42)
    second = sampled_prob_table(rho, "two_partite", 500, seed=42)
    assert first == second
    assert sampled_prob_table(rho, "two_partite", 500, seed=43) != first


def test_zero_shots_are_rejected() -> None:
    with pytest.raises(PuebError):
        sampled_prob_table(np.eye(3) / 3, "single", 0, seed=1)


def test_sampled_error_shrinks_with_shots(rho_factory) -> None:
    # one-sided: shot noise scales as 1/sqrt(shots), a factor of ~30 here
    improved = 0
    for seed in range(10):
        rho = rho_factory(3, seed=200 + seed)
        coarse = reconstruct_single(3, sampled_prob_table(rho, "single", 10**3, seed=seed))
        fine = reconstruct_single(3, sampled_prob_table(rho, "single", 10**6, seed=seed))
        improved += fine.distance(rho) < coarse.distance(rho)
    assert improved >= 9


def test_noisy_reconstruction_is_reported_raw(rho_factory) -> None:
    rho = rho_factory(3, seed=1, rank=1)
    estimate = reconstruct_single(3, sampled_prob_table(rho, "single", 50, seed=1))
    report = diagnostics(estimate, rho)
    assert report.max_error is not None and report.max_error > 0
    assert abs(report.trace - 1.0) < 1e-10
    assert report.hermiticity_error < 1e-12


def test_prob_table_validation_clips_round_off() -> None:
    table = ProbTable(
        dim=2, scheme="single", settings=[SettingOutcomes(id="comp", outcomes=[1.0, -1e-13])]
    )
    assert table.validated().probabilities("comp").tolist() == [1.0, 0.0]
    bad = ProbTable(
        dim=2, scheme="single", settings=[SettingOutcomes(id="comp", outcomes=[1.1, -0.1])]
    )
    with pytest.raises(InvalidProbabilitiesError):
        bad.validated()


def test_random_density_matrix_construction() -> None:
    pure = random_density_matrix(5, rank=1, seed=0)
    assert abs(np.trace(pure.entries @ pure.entries).real - 1.0) < 1e-12
    mixed = random_density_matrix(5, seed=0)
    assert mixed.min_eigenvalue() > 0
    assert np.array_equal(random_density_matrix(5, seed=0).entries, mixed.entries)
    with pytest.raises(PuebError):
        random_density_matrix(3, rank=4, seed=0)
