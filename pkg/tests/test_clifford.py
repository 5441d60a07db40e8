import numpy as np
import pytest

from foliated_dirac.clifford import (LORENTZIAN, RIEMANNIAN, CliffordRep, build_even_rep,
                                     build_odd_rep, check_relations, tilde_rep)


def brute_relation_residual(gens, epsilons):
    """Independent check of g_j g_l + g_l g_j = -2 delta_jl eps_j by direct multiplication."""
    dim = gens[0].shape[0]
    worst = 0.0
    for j, gj in enumerate(gens):
        for l, gl in enumerate(gens):
            target = -2.0 * epsilons[j] * np.eye(dim) if j == l else 0.0
            worst = max(worst, np.max(np.abs(gj @ gl + gl @ gj - target)))
    return worst


def test_base_case_is_minus_i():
    rep = build_odd_rep(1)
    assert rep.generators[0].shape == (1, 1)
    assert rep.generators[0][0, 0] == -1j


@pytest.mark.parametrize("n", [1, 3, 5])
def test_odd_relations_exact(n):
    rep = build_odd_rep(n)
    assert rep.spinor_dim == 2 ** ((n - 1) // 2)
    assert brute_relation_residual(rep.generators, rep.epsilons) == 0.0
    for g in rep.generators:
        assert np.max(np.abs(g + g.conj().T)) == 0.0  # anti-Hermitian
        assert np.max(np.abs(g @ g + np.eye(rep.spinor_dim))) == 0.0


@pytest.mark.parametrize("n", [1, 3, 5])
@pytest.mark.parametrize("sig", [RIEMANNIAN, LORENTZIAN])
def test_even_relations_exact(n, sig):
    rep = build_even_rep(build_odd_rep(n), sig)
    assert rep.ambient_dim == n + 1
    assert rep.spinor_dim == 2 ** ((n + 1) // 2)
    assert brute_relation_residual(rep.generators, rep.epsilons) == 0.0
    e0 = rep.generators[0]
    # e0 squares to -eps0 and is (anti-)Hermitian accordingly
    assert np.array_equal(e0 @ e0, -sig.epsilon0 * np.eye(rep.spinor_dim))
    if sig is RIEMANNIAN:
        assert np.max(np.abs(e0 + e0.conj().T)) == 0.0
    else:
        assert np.max(np.abs(e0 - e0.conj().T)) == 0.0


def test_even_rep_matches_hand_computation_riemannian():
    rep = build_even_rep(build_odd_rep(1), RIEMANNIAN)
    assert np.array_equal(rep.generators[0], np.array([[0, 1j], [1j, 0]]))
    assert np.array_equal(rep.generators[1], np.array([[0, 1], [-1, 0]]))
    assert np.array_equal(rep.grading, np.diag([1.0, -1.0]))


def test_even_rep_matches_hand_computation_lorentzian():
    rep = build_even_rep(build_odd_rep(1), LORENTZIAN)
    assert np.array_equal(rep.generators[0], np.array([[0, 1], [1, 0]]))
    assert np.array_equal(rep.generators[0] @ rep.generators[0], np.eye(2))


@pytest.mark.parametrize("sig", [RIEMANNIAN, LORENTZIAN])
def test_grading_anticommutes(sig):
    rep = build_even_rep(build_odd_rep(3), sig)
    g = rep.grading
    assert np.array_equal(g, g.conj().T)
    assert np.array_equal(g @ g, np.eye(rep.spinor_dim))
    for gen in rep.generators:
        assert np.max(np.abs(g @ gen + gen @ g)) == 0.0


@pytest.mark.parametrize("sig", [RIEMANNIAN, LORENTZIAN])
def test_tilde_is_block_diagonal_with_sign_flip(sig):
    odd = build_odd_rep(3)
    even = build_even_rep(odd, sig)
    spatial = tilde_rep(even)
    assert not spatial.irreducible
    half = odd.spinor_dim
    for j, g in enumerate(spatial.generators):
        assert np.max(np.abs(g[:half, half:])) == 0.0
        assert np.max(np.abs(g[half:, :half])) == 0.0
        assert np.array_equal(g[:half, :half], odd.generators[j])
        assert np.array_equal(g[half:, half:], -odd.generators[j])
        # defining identity: tau0 * g(e0) g(e_j)
        assert np.max(np.abs(g - sig.tau0 * even.generators[0] @ even.generators[1 + j])) == 0.0
    assert brute_relation_residual(spatial.generators, spatial.epsilons) == 0.0


def test_tilde_base_case_value():
    spatial = tilde_rep(build_even_rep(build_odd_rep(1), RIEMANNIAN))
    assert np.array_equal(spatial.generators[0], np.diag([-1j, 1j]))


@pytest.mark.parametrize("n", [1, 3, 5])
@pytest.mark.parametrize("sig", [RIEMANNIAN, LORENTZIAN])
def test_generators_unitary(n, sig):
    rep = build_even_rep(build_odd_rep(n), sig)
    for g in rep.generators:
        assert np.max(np.abs(g.conj().T @ g - np.eye(rep.spinor_dim))) == 0.0


def test_check_relations_detects_scaled_generator():
    rep = build_odd_rep(3)
    gens = list(rep.generators)
    gens[1] = 2.0 * gens[1]
    broken = CliffordRep(3, RIEMANNIAN, tuple(gens))
    report = check_relations(broken)
    # 2g * 2g + 2g * 2g = -8, off by -6 from the required -2
    assert report.relation_residuals[1, 1] == pytest.approx(6.0)
    assert not report.passed
    assert check_relations(rep).passed
    assert check_relations(rep).max_residual == 0.0


def test_lorentzian_hermiticity_pattern_n4():
    rep = build_even_rep(build_odd_rep(3), LORENTZIAN)
    e0 = rep.generators[0]
    assert np.max(np.abs(e0 - e0.conj().T)) == 0.0
    for g in rep.generators[1:]:
        assert np.max(np.abs(g + g.conj().T)) == 0.0


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        build_odd_rep(2)
    with pytest.raises(ValueError):
        build_odd_rep(0)
    with pytest.raises(ValueError):
        build_odd_rep(-3)
    odd = build_odd_rep(3)
    with pytest.raises(ValueError):
        build_even_rep(build_even_rep(odd, RIEMANNIAN), RIEMANNIAN)
    with pytest.raises(ValueError):
        tilde_rep(odd)


def test_json_dump_round_trip_shape():
    rep = build_even_rep(build_odd_rep(1), RIEMANNIAN)
    data = rep.to_json()
    assert data["spinor_dim"] == 2
    arr = np.asarray(data["generators"][0])
    assert arr.shape == (2, 2, 2)
    assert arr[0][1][1] == 1.0  # imaginary part of the (0,1) entry of gamma(e0)
