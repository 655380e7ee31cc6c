import numpy as np
import pytest

from qsteer.coherence import coherence_l1
from qsteer.errors import (
    DimensionTooLarge,
    RankDeficientSchmidt,
    TrivialProductState,
)
from qsteer.msc import (
    MscOptions,
    fibonacci_sphere,
    msc_general,
    msc_oracle,
    msc_two_qubit,
    optimal_measurement_pure,
    sphere_sequence,
)
from qsteer.qcore import pauli_decompose, validate_density
from qsteer.rand import (
    random_classical,
    random_product,
    random_two_qubit,
    random_unitary,
)
from qsteer.states import maximally_obese, rho_c, rho_p, werner
from qsteer.steering import qse


def test_werner_value():
    res = msc_two_qubit(werner(0.7).state)
    assert res.value == pytest.approx(0.7, abs=1e-6)
    assert res.degenerate_path


def test_rho_p_at_right_angle():
    res = msc_two_qubit(rho_p(0.5, np.pi / 2).state)
    assert res.value == pytest.approx(0.5, abs=1e-6)


def test_classical_state_vanishes():
    assert msc_two_qubit(rho_c(0.75).state).value <= 1e-8


def test_obese_value():
    assert msc_two_qubit(maximally_obese(0.64).state).value == pytest.approx(0.6, abs=1e-6)


def test_result_witness_consistency(rng):
    # The reported value must equal the coherence of the reported steered
    # state in the reported basis.
    for _ in range(25):
        st = random_two_qubit(rng)
        res = msc_two_qubit(st)
        assert abs(res.value - coherence_l1(res.steered_state, res.reference_basis)) <= 1e-9
        assert abs(np.linalg.norm(res.optimal_m) - 1) <= 1e-9
        assert 0 <= res.value <= 1 + 1e-9


def test_trivial_product_state_rejected():
    st = validate_density(np.kron(np.diag([1.0, 0.0]), np.eye(2) / 2), (2, 2))
    with pytest.raises(TrivialProductState):
        msc_two_qubit(st)


def test_near_degenerate_warning():
    st = rho_p(0.5, np.pi / 2 - 2e-5).state  # |b| ~ 1.6e-5
    res = msc_two_qubit(st)
    assert res.warnings
    assert not res.degenerate_path


def test_degenerate_bell_diagonal_middle_value(rng):
    # For a = b = 0 the value is inf over axes n of the largest singular
    # value of the projected correlation matrix; an independent oracle
    # evaluates that inner maximum exactly (svd) over a dense grid of axes.
    s = [np.eye(2, dtype=complex),
         np.array([[0, 1], [1, 0]], dtype=complex),
         np.array([[0, -1j], [1j, 0]], dtype=complex),
         np.array([[1, 0], [0, -1]], dtype=complex)]
    for ts in ((0.5, -0.3, 0.1), (0.45, 0.35, -0.2), (0.7, -0.5, 0.3)):
        rho = np.eye(4, dtype=complex) / 4
        for i, t in enumerate(ts, start=1):
            rho += t * np.kron(s[i], s[i]) / 4
        state = validate_density(rho, (2, 2))
        res = msc_two_qubit(state)
        assert res.degenerate_path

        t_mat = np.diag(ts)
        grid = fibonacci_sphere(4000)
        inner = []
        for n in grid[grid[:, 2] >= 0]:
            cross = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
            inner.append(np.linalg.svd(cross @ t_mat.T, compute_uv=False)[0])
        oracle_inf = min(inner)
        middle = sorted(abs(np.array(ts)))[1]
        assert res.value == pytest.approx(oracle_inf, abs=1e-3)
        assert res.value == pytest.approx(middle, abs=1e-3)


def test_general_agrees_with_two_qubit(rng):
    for _ in range(200):
        st = random_two_qubit(rng)
        assert abs(msc_general(st).value - msc_two_qubit(st).value) <= 1e-6


def test_general_product_state(rng):
    assert msc_general(random_product(rng, 2, 2)).value <= 1e-8


def test_general_pure_qutrit_reaches_maximum(rng):
    lam = np.sqrt(np.array([0.5, 0.3, 0.2]))
    ua, ub = random_unitary(rng, 3), random_unitary(rng, 3)
    psi = sum(lam[i] * np.kron(ua[:, i], ub[:, i]) for i in range(3))
    st = validate_density(np.outer(psi, psi.conj()), (3, 3))
    assert msc_general(st).value == pytest.approx(2.0, abs=1e-6)


def test_general_dimension_cap():
    st = validate_density(np.eye(10) / 10, (2, 5))
    with pytest.raises(DimensionTooLarge):
        msc_general(st)


def test_oracle_alice_dimension_cap():
    st = validate_density(np.eye(8) / 8, (4, 2))
    with pytest.raises(DimensionTooLarge):
        msc_oracle(st, 100)


def test_general_degenerate_werner():
    opts = MscOptions(outer_general_maxiter=30, outer_general_starts=2)
    res = msc_general(werner(0.6).state, opts)
    assert res.degenerate_path
    assert res.value == pytest.approx(0.6, abs=1e-3)


def _steer_by_hand(psi, m_op, da, db):
    rho = np.outer(psi, psi.conj()).reshape(da, db, da, db)
    out = np.einsum("ac,cbad->bd", m_op, rho)
    p = float(np.real(np.trace(out)))
    return out / p, p


def test_optimal_measurement_bell():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    m = optimal_measurement_pure(bell, (2, 2))
    assert np.linalg.matrix_rank(m, tol=1e-10) == 1
    steered, p = _steer_by_hand(bell, m, 2, 2)
    off = abs(steered[0, 1]) + abs(steered[1, 0])
    assert off == pytest.approx(1.0, abs=1e-9)
    assert p == pytest.approx(0.5, abs=1e-9)


def test_optimal_measurement_skewed_pair():
    psi = np.sqrt(0.9) * np.array([1, 0, 0, 0]) + np.sqrt(0.1) * np.array([0, 0, 0, 1])
    m = optimal_measurement_pure(psi.astype(complex), (2, 2))
    steered, p = _steer_by_hand(psi.astype(complex), m, 2, 2)
    # Steered to the maximally coherent state regardless of the skew.
    off = abs(steered[0, 1]) + abs(steered[1, 0])
    assert off == pytest.approx(1.0, abs=1e-9)
    expected_p = 1.0 / (1 / 0.9 + 1 / 0.1) * 2
    assert p == pytest.approx(expected_p, abs=1e-9)


def test_optimal_measurement_qutrit():
    lam2 = np.array([0.5, 0.3, 0.2])
    psi = np.zeros(9, dtype=complex)
    for i in range(3):
        psi[i * 3 + i] = np.sqrt(lam2[i])
    m = optimal_measurement_pure(psi, (3, 3))
    steered, _ = _steer_by_hand(psi, m, 3, 3)
    off = np.abs(steered).sum() - np.abs(np.diagonal(steered)).sum()
    assert off == pytest.approx(2.0, abs=1e-9)


def test_optimal_measurement_rank_deficient():
    psi = np.array([1, 0, 0, 0], dtype=complex)
    with pytest.raises(RankDeficientSchmidt):
        optimal_measurement_pure(psi, (2, 2))


def test_oracle_werner():
    assert msc_oracle(werner(0.7).state, 5000) == pytest.approx(0.7, abs=1e-3)


def test_oracle_classical_zero():
    assert msc_oracle(rho_c(0.75).state, 500) == pytest.approx(0.0, abs=1e-14)


def test_oracle_nested_monotone(rng):
    # The sphere sequence is prefix-nested, so doubling the resolution can
    # only raise the grid maximum.
    for _ in range(10):
        st = random_two_qubit(rng)
        for n in (100, 400):
            assert msc_oracle(st, 2 * n) >= msc_oracle(st, n) - 1e-12
    coarse, fine = sphere_sequence(100), sphere_sequence(200)
    np.testing.assert_allclose(fine[:100], coarse, atol=0)


def test_oracle_dominated_by_optimizer(rng):
    for _ in range(25):
        st = random_two_qubit(rng)
        res = msc_two_qubit(st)
        assert msc_oracle(st, 2000, basis=res.reference_basis) <= res.value + 1e-9


def test_local_unitary_invariance(rng):
    for _ in range(20):
        st = random_two_qubit(rng)
        u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
        rotated = validate_density(u @ st.matrix @ u.conj().T, (2, 2))
        assert abs(msc_two_qubit(rotated).value - msc_two_qubit(st).value) <= 1e-6


def test_zero_iff_classical(rng):
    for _ in range(10):
        assert msc_two_qubit(random_classical(rng)).value <= 1e-8
    for _ in range(10):
        assert msc_oracle(random_two_qubit(rng), 2000) >= 1e-4


def test_canonical_bound(rng):
    from qsteer.steering import canonical_transform

    for _ in range(20):
        st = canonical_transform(random_two_qubit(rng))
        ell = qse(st)
        b = np.linalg.norm(ell.center)
        val = msc_two_qubit(st).value
        assert val <= ell.semiaxes[0] + 1e-8
        assert ell.semiaxes[0] <= np.sqrt(max(0.0, 1 - b * b)) + 1e-8


def test_deterministic_results():
    st = rho_p(0.62, 0.23 * np.pi).state
    r1, r2 = msc_two_qubit(st), msc_two_qubit(st)
    assert r1.value == r2.value
    np.testing.assert_array_equal(r1.optimal_m, r2.optimal_m)


def test_pauli_blocks_feed_objective():
    # The optimum for the prolate family tilts against Alice's marginal.
    fam = rho_p(0.8, 0.2 * np.pi)
    res = msc_two_qubit(fam.state)
    a = pauli_decompose(fam.state).a
    assert res.value == pytest.approx(fam.analytic_msc, abs=1e-8)
    assert float(a @ res.optimal_m) < 0
