"""Tests for the separability criteria, decompositions, and threshold
search."""

import numpy as np
import pytest

from blochsep import (
    BlochData,
    CriterionUnavailableError,
    Decision,
    DensityMatrix,
    ZooSpec,
    assemble_decomposition,
    ball_radii,
    basis_ket,
    bell_states,
    bloch_vector,
    correlation_tensor,
    duer_be4,
    empty_bloch_data,
    factor_pure_state,
    ghz,
    is_pure_product,
    kron,
    maximally_mixed,
    necessary_test,
    noise_threshold_table,
    noisy,
    projector,
    qubit_exact_test,
    reconstruct,
    reduced_w_noisy,
    separability_bound,
    separable_decomposition,
    smolin,
    state_234,
    subset_scan,
    sufficiency_lhs,
    sufficiency_test,
    tensor_kyfan,
    threshold_search,
    w_state,
    zoo_state,
)
from conftest import random_pure_product, random_separable, random_unitary


def diagonal_qubit_state(n_parties, weights):
    """(1/2^n)(I + sum_i w_i sigma_i^xn) via Bloch reconstruction."""
    dims = (2,) * n_parties
    data = empty_bloch_data(dims)
    arr = np.zeros((3,) * n_parties)
    for i, w in enumerate(weights):
        arr[(i,) * n_parties] = w
    tensors = dict(data.tensors)
    tensors[tuple(range(n_parties))] = arr
    return reconstruct(BlochData(dims, data.singles, tensors))


def test_separability_bound_values():
    assert separability_bound((2, 2)) == pytest.approx(1.0)
    assert separability_bound((2,) * 5) == pytest.approx(1.0)
    assert separability_bound((3, 3)) == pytest.approx(3.0)
    assert separability_bound((3, 3, 3)) == pytest.approx(np.sqrt(27))
    assert separability_bound((2, 3, 4)) == pytest.approx(np.sqrt(18))
    with pytest.raises(ValueError):
        separability_bound((2, 1))


def test_necessary_test_flags_bound_entangled_states():
    v = necessary_test(smolin())
    assert v.decision == Decision.ENTANGLED
    assert v.norm_value == pytest.approx(3.0, abs=1e-9)
    assert v.bound_value == pytest.approx(1.0)
    w = necessary_test(duer_be4())
    assert w.decision == Decision.ENTANGLED
    assert w.norm_value == pytest.approx(1.4, abs=1e-6)


def test_necessary_test_never_claims_separable():
    for rho in [maximally_mixed((2, 2, 2)), zoo_state("werner", noise=0.1),
                noisy(w_state(3), 0.2)]:
        v = necessary_test(rho)
        assert v.decision == Decision.INCONCLUSIVE


def test_necessary_test_rejects_single_subsystem():
    with pytest.raises(ValueError):
        necessary_test(maximally_mixed((3,)))


def test_borderline_flag_on_product_state():
    v0 = basis_ket((0,), (2,))
    rho = DensityMatrix((2, 2), projector(np.kron(v0, v0)))
    v = necessary_test(rho)
    assert v.decision == Decision.INCONCLUSIVE
    assert v.borderline
    assert v.norm_value == pytest.approx(v.bound_value, abs=1e-9)


def test_subset_scan_selectors():
    g = ghz(3)
    assert [r.subset for r in subset_scan(g, "full").records] == [(0, 1, 2)]
    assert [r.subset for r in subset_scan(g, "pairs").records] == [
        (0, 1), (0, 2), (1, 2)]
    assert [r.subset for r in subset_scan(g, "all").records] == [
        (0, 1), (0, 2), (1, 2), (0, 1, 2)]
    assert [r.subset for r in subset_scan(g, 2).records] == [
        (0, 1), (0, 2), (1, 2)]
    assert [r.subset for r in subset_scan(g, [(0, 2)]).records] == [(0, 2)]
    with pytest.raises(ValueError):
        subset_scan(g, "everything")
    with pytest.raises(ValueError):
        subset_scan(g, [(0,)])


def test_subset_scan_ghz_pairs_borderline():
    for rec in subset_scan(ghz(3), "pairs").records:
        assert rec.norm == pytest.approx(1.0, abs=1e-9)
        assert rec.bound == pytest.approx(1.0)
        assert rec.verdict.decision == Decision.INCONCLUSIVE
        assert rec.verdict.borderline


def test_subset_scan_reduced_noisy_w():
    # tracing two parties from a noisy six-party W leaves a four-party state
    # that the full-tensor test certifies at p = 0.6
    rho = reduced_w_noisy(6, 2, 0.6)
    rec = subset_scan(rho, "full").records[0]
    assert rec.verdict.decision == Decision.ENTANGLED


def test_subset_scan_product_state_inconclusive():
    rng = np.random.default_rng(23)
    rho = DensityMatrix((2, 2, 3), random_pure_product(rng, (2, 2, 3)))
    for rec in subset_scan(rho, "all").records:
        assert rec.verdict.decision == Decision.INCONCLUSIVE
        assert rec.norm <= rec.bound + 1e-9


def test_is_pure_product():
    v = np.kron(np.kron(basis_ket((0,), (2,)),
                        np.ones(2) / np.sqrt(2)), basis_ket((1,), (2,)))
    assert is_pure_product(DensityMatrix((2, 2, 2), projector(v)))
    assert not is_pure_product(ghz(3))
    assert not is_pure_product(w_state(4))
    with pytest.raises(ValueError):
        is_pure_product(zoo_state("werner", noise=0.5))


def test_factor_pure_blocks():
    bell = bell_states()[0]
    vec = np.kron(basis_ket((0,), (2,)), bell)
    rho = DensityMatrix((2, 2, 2), projector(vec))
    assert factor_pure_state(rho) == [(0,), (1, 2)]
    assert factor_pure_state(ghz(4)) == [(0, 1, 2, 3)]
    rng = np.random.default_rng(24)
    prod = DensityMatrix((2, 2, 2), random_pure_product(rng, (2, 2, 2)))
    assert factor_pure_state(prod) == [(0,), (1,), (2,)]
    with pytest.raises(ValueError):
        factor_pure_state(zoo_state("werner", noise=0.5))


def test_qubit_exact_decides_diagonal_states():
    assert qubit_exact_test(smolin()).decision == Decision.ENTANGLED
    v = qubit_exact_test(diagonal_qubit_state(4, (0.3, 0.3, 0.3)))
    assert v.decision == Decision.SEPARABLE
    assert v.norm_value == pytest.approx(0.9, abs=1e-10)


def test_qubit_exact_reason_codes():
    assert qubit_exact_test(noisy(ghz(3), 0.5)).reason == "lower-order-tensors-nonzero"
    assert qubit_exact_test(w_state(3)).reason == "coherence-vectors-nonzero"
    assert qubit_exact_test(ghz(3, 3)).reason == "not-a-multiqubit-state"
    data = empty_bloch_data((2, 2, 2))
    arr = np.zeros((3, 3, 3))
    arr[0, 0, 0] = 0.5
    arr[0, 1, 2] = 0.3
    rho = reconstruct(BlochData((2, 2, 2), data.singles,
                                {**dict(data.tensors), (0, 1, 2): arr}))
    assert qubit_exact_test(rho).reason == "no-orthogonal-decomposition"


def test_sufficiency_lhs_closed_forms():
    for p in (0.1, 0.25, 0.33):
        assert sufficiency_lhs(zoo_state("werner", noise=p)) == pytest.approx(
            3 * p, abs=1e-10)
    for t in (0.2, 0.7):
        assert sufficiency_lhs(diagonal_qubit_state(3, (0, 0, t))) == pytest.approx(
            t, abs=1e-10)
    assert sufficiency_lhs(noisy(ghz(3), 0.5)) is None


def test_sufficiency_verdicts():
    assert sufficiency_test(maximally_mixed((2, 3))).decision == Decision.SEPARABLE
    assert sufficiency_test(zoo_state("werner", noise=0.3)).decision == Decision.SEPARABLE
    v = sufficiency_test(smolin())
    assert v.decision == Decision.INCONCLUSIVE
    assert v.reason == "sum-exceeds-one"
    g = sufficiency_test(ghz(3))
    assert g.decision == Decision.INCONCLUSIVE
    assert "orthogonal" in g.reason


def test_decomposition_werner():
    rho = zoo_state("werner", noise=0.3)
    dec = separable_decomposition(rho)
    assert len(dec.terms) == 6
    np.testing.assert_allclose([w for w, _ in dec.terms], 0.15, atol=1e-10)
    assert dec.identity_weight == pytest.approx(0.1, abs=1e-10)
    residual = np.abs(assemble_decomposition(dec).matrix - rho.matrix).max()
    assert residual <= 1e-10


def test_decomposition_diagonal_three_qubit():
    rho = diagonal_qubit_state(3, (0, 0, 0.8))
    dec = separable_decomposition(rho)
    assert len(dec.terms) == 4
    np.testing.assert_allclose([w for w, _ in dec.terms], 0.2, atol=1e-10)
    assert dec.identity_weight == pytest.approx(0.2, abs=1e-10)
    assert np.abs(assemble_decomposition(dec).matrix - rho.matrix).max() <= 1e-9


def test_decomposition_identity_only():
    dec = separable_decomposition(maximally_mixed((2, 2)))
    assert len(dec.terms) == 0
    assert dec.identity_weight == pytest.approx(1.0)


def test_decomposition_unavailable():
    with pytest.raises(CriterionUnavailableError):
        separable_decomposition(ghz(3))
    with pytest.raises(CriterionUnavailableError):
        separable_decomposition(smolin())


def decomposition_grid():
    rng = np.random.default_rng(25)
    yield zoo_state("werner", noise=0.05)
    yield zoo_state("werner", noise=0.25)
    yield diagonal_qubit_state(3, (0, 0.3, 0.4))
    yield diagonal_qubit_state(4, (0.2, 0.2, 0.2))
    v = np.kron(basis_ket((0,), (2,)), basis_ket((1,), (3,)))
    yield noisy(DensityMatrix((2, 3), projector(v)), 0.1)


def test_decomposition_invariants():
    for rho in decomposition_grid():
        dec = separable_decomposition(rho)
        total = sum(w for w, _ in dec.terms) + dec.identity_weight
        assert total == pytest.approx(1.0, abs=1e-10)
        for weight, factors in dec.terms:
            assert weight > 0
            assert len(factors) == len(rho.dims)
            for d, vec in zip(rho.dims, factors):
                r, _ = ball_radii(d)
                assert np.linalg.norm(vec) <= r + 1e-10
        rebuilt = assemble_decomposition(dec)
        assert np.abs(rebuilt.matrix - rho.matrix).max() <= 1e-9


def test_soundness_on_random_separable_states():
    rng = np.random.default_rng(26)
    for _ in range(80):
        dims = [(2, 2), (2, 3), (3, 3, 2), (2, 2, 2)][rng.integers(4)]
        rho = random_separable(rng, dims, n_terms=int(rng.integers(1, 9)))
        assert necessary_test(rho).decision != Decision.ENTANGLED
        for rec in subset_scan(rho, "all").records:
            assert rec.verdict.decision != Decision.ENTANGLED
            assert rec.norm <= rec.bound + 1e-9


def test_no_state_both_separable_and_entangled():
    rng = np.random.default_rng(27)
    candidates = [zoo_state("werner", noise=p) for p in np.linspace(0, 1, 9)]
    candidates += [diagonal_qubit_state(3, (0, 0, t)) for t in (0.3, 0.9, 1.0)]
    candidates += [random_separable(rng, (2, 2, 2)) for _ in range(5)]
    for rho in candidates:
        t1 = necessary_test(rho).decision
        p2 = sufficiency_test(rho).decision
        assert not (t1 == Decision.ENTANGLED and p2 == Decision.SEPARABLE)


def test_verdicts_invariant_under_local_unitaries():
    rng = np.random.default_rng(28)
    for rho in [smolin(), zoo_state("werner", noise=0.8), noisy(ghz(3), 0.6)]:
        us = [random_unitary(rng, d) for d in rho.dims]
        big = kron(*us)
        rotated = DensityMatrix(rho.dims, big @ rho.matrix @ big.conj().T)
        a, b = necessary_test(rho), necessary_test(rotated)
        assert a.decision == b.decision
        assert a.norm_value == pytest.approx(b.norm_value, abs=1e-8)


def test_pure_state_criterion_chain():
    rng = np.random.default_rng(29)
    prod = DensityMatrix((2, 2, 2), random_pure_product(rng, (2, 2, 2)))
    assert is_pure_product(prod)
    assert factor_pure_state(prod) == [(0,), (1,), (2,)]
    full = correlation_tensor(prod, (0, 1, 2))
    norms = [np.linalg.norm(bloch_vector(prod, k)) for k in range(3)]
    assert tensor_kyfan(full) == pytest.approx(np.prod(norms), abs=1e-8)
    for rho in (ghz(3), w_state(3)):
        assert not is_pure_product(rho)
        assert factor_pure_state(rho) == [(0, 1, 2)]


def test_noise_scales_tensor_norm():
    for base in [ghz(3), w_state(4), state_234()]:
        subset = tuple(range(base.n_parties))
        pure_norm = tensor_kyfan(correlation_tensor(base, subset))
        for p in (0.2, 0.7):
            mixed_norm = tensor_kyfan(correlation_tensor(noisy(base, p), subset))
            assert mixed_norm == pytest.approx(p * pure_norm, abs=1e-10)


def test_threshold_search_known_values():
    assert threshold_search(ZooSpec(family="ghz-noisy", parties=3)) == pytest.approx(
        0.35355, abs=5e-4)
    assert threshold_search(ZooSpec(family="w-noisy", parties=4)) == pytest.approx(
        0.3018, abs=5e-4)
    assert threshold_search(ZooSpec(family="werner")) == pytest.approx(
        1 / 3, abs=2e-6)
    assert threshold_search(ZooSpec(family="werner"), criterion="p2") == pytest.approx(
        1 / 3, abs=2e-6)


def test_threshold_search_edge_cases():
    assert threshold_search(lambda p: maximally_mixed((2, 2))) is None
    assert threshold_search(lambda p: noisy(ghz(2), 0.9)) == 0.0
    assert threshold_search(lambda p: noisy(ghz(2), p)) == pytest.approx(
        1 / 3, abs=2e-6)
    with pytest.raises(TypeError):
        threshold_search("werner")


def test_noise_threshold_table_small():
    rows = noise_threshold_table(max_parties=4)
    as_dict = {(fam, n): p for fam, n, p in rows}
    assert as_dict[("ghz-noisy", 3)] == pytest.approx(0.35355, abs=5e-4)
    assert as_dict[("ghz-noisy", 4)] == pytest.approx(0.2, abs=5e-4)
    assert as_dict[("w-noisy", 3)] == pytest.approx(0.3068, abs=5e-4)
    assert as_dict[("w-noisy", 4)] == pytest.approx(0.3018, abs=5e-4)
