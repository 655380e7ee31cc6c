import numpy as np
import pytest

from qsteer.coherence import coherence_l1
from qsteer.errors import (
    GeometryViolation,
    InvalidPOVMElement,
    NotHermitian,
    SingularDenominator,
    SingularMarginal,
    ZeroProbability,
)
from qsteer.qcore import (
    Basis,
    KET_MINUS,
    KET_PLUS,
    bloch_vector,
    ket_dm,
    pauli_decompose,
    validate_density,
)
from qsteer.rand import (
    random_density_matrix,
    random_two_qubit,
    random_unitary,
    random_x_state,
)
from qsteer.states import maximally_obese, rho_c, rho_p, werner
from qsteer.steering import (
    canonical_transform,
    qse,
    steer,
    steered_bloch,
    steered_surface,
    validate_povm_element,
)


def test_povm_validation():
    validate_povm_element(np.eye(2) * 0.5)
    with pytest.raises(NotHermitian):
        validate_povm_element(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(InvalidPOVMElement):
        validate_povm_element(np.diag([1.5, 0.0]))
    with pytest.raises(InvalidPOVMElement):
        validate_povm_element(np.diag([-0.2, 0.5]))


def test_product_states_cannot_be_steered(rng):
    for _ in range(50):
        rb = random_density_matrix(rng, (2,))
        st = validate_density(np.kron(random_density_matrix(rng, (2,)).matrix, rb.matrix), (2, 2))
        psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        m = ket_dm(psi / np.linalg.norm(psi))
        steered, _ = steer(st, m)
        np.testing.assert_allclose(steered.matrix, rb.matrix, atol=1e-10)


def test_steer_bell_state():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    st = validate_density(np.outer(bell, bell.conj()), (2, 2))
    steered, p = steer(st, ket_dm(KET_PLUS))
    assert p == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(steered.matrix, ket_dm(KET_PLUS), atol=1e-12)


def test_steer_classical_state_stays_diagonal():
    # Steering a classical state gives states diagonal in the |+>, |-> basis.
    st = rho_c(0.75).state
    steered, _ = steer(st, np.diag([1.0, 0.0]))
    basis = Basis(vectors=np.column_stack([KET_PLUS, KET_MINUS]))
    assert coherence_l1(steered, basis) <= 1e-12


def test_steer_zero_probability():
    st = validate_density(np.kron(np.diag([1.0, 0.0]), np.eye(2) / 2), (2, 2))
    with pytest.raises(ZeroProbability):
        steer(st, np.diag([0.0, 1.0]))


def test_steered_bloch_trivial_measurement(rng):
    for _ in range(20):
        th = pauli_decompose(random_two_qubit(rng))
        np.testing.assert_allclose(steered_bloch(th, np.zeros(3)), th.b, atol=1e-12)


def test_steered_bloch_werner():
    th = pauli_decompose(werner(0.73).state)
    np.testing.assert_allclose(steered_bloch(th, [0, 0, 1]), [0, 0, -0.73], atol=1e-12)


def test_steered_bloch_matches_steer(rng):
    # Cross-module consistency of the Bloch shortcut with direct steering.
    for _ in range(1000):
        st = random_two_qubit(rng)
        th = pauli_decompose(st)
        m = rng.standard_normal(3)
        m /= np.linalg.norm(m)
        direct, _ = steer(st, (np.eye(2) + m[0] * np.array([[0, 1], [1, 0]]) + m[1] * np.array([[0, -1j], [1j, 0]]) + m[2] * np.diag([1, -1])) / 2)
        np.testing.assert_allclose(steered_bloch(th, m), bloch_vector(direct.matrix), atol=1e-9)


def test_steered_bloch_singular_denominator():
    st = validate_density(np.kron(np.diag([1.0, 0.0]), np.eye(2) / 2), (2, 2))
    th = pauli_decompose(st)
    with pytest.raises(SingularDenominator):
        steered_bloch(th, [0.0, 0.0, -1.0])


def test_canonical_transform_fixes_canonical_states():
    for state in (werner(0.6).state, maximally_obese(0.4).state):
        out = canonical_transform(state)
        assert np.abs(out.matrix - state.matrix).max() <= 1e-10


def test_canonical_transform_zeroes_alice(rng):
    for _ in range(50):
        out = canonical_transform(random_two_qubit(rng))
        assert np.linalg.norm(pauli_decompose(out).a) <= 1e-9


def test_canonical_transform_preserves_steering_set(rng):
    # Surface points sampled from the original state's steering map must lie
    # on the canonical state's ellipsoid.
    checked = 0
    while checked < 25:
        st = random_two_qubit(rng)
        ell = qse(st)
        if ell.semiaxes.min() < 1e-6:
            continue
        checked += 1
        pts = steered_surface(pauli_decompose(st), 1000)
        assert ell.surface_residual(pts) <= 1e-6


def test_canonical_transform_rejects_pure_marginal():
    st = validate_density(np.kron(np.diag([1.0, 0.0]), np.eye(2) / 2), (2, 2))
    with pytest.raises(SingularMarginal):
        canonical_transform(st)


def test_qse_rho_p_closed_form():
    for p, theta in ((0.9, 0.2 * np.pi), (0.5, 0.1 * np.pi), (0.3, 0.4 * np.pi)):
        fam = rho_p(p, theta)
        ell = qse(fam.state)
        np.testing.assert_allclose(ell.center, fam.analytic_qse.center, atol=1e-8)
        np.testing.assert_allclose(ell.semiaxes, fam.analytic_qse.semiaxes, atol=1e-8)


def test_qse_werner_ball():
    ell = qse(werner(0.3).state)
    np.testing.assert_allclose(ell.center, 0, atol=1e-12)
    np.testing.assert_allclose(ell.semiaxes, 0.3, atol=1e-12)


def test_qse_obese():
    fam = maximally_obese(0.5)
    ell = qse(fam.state)
    np.testing.assert_allclose(ell.center, [0, 0, 0.5], atol=1e-10)
    np.testing.assert_allclose(ell.semiaxes, [np.sqrt(0.5), np.sqrt(0.5), 0.5], atol=1e-10)


def test_qse_classical_segment():
    ell = qse(rho_c(0.75).state)
    # Radial segment: two vanishing semiaxes, center along the segment.
    assert ell.semiaxes[1] <= 1e-10 and ell.semiaxes[2] <= 1e-10
    assert ell.semiaxes[0] > 0.1


def test_qse_canonical_center_is_bob(rng):
    for _ in range(20):
        st = canonical_transform(random_two_qubit(rng))
        ell = qse(st)
        np.testing.assert_allclose(ell.center, pauli_decompose(st).b, atol=1e-9)


def test_qse_x_state_frame_contains_bob_axis(rng):
    found = 0
    while found < 20:
        st = random_x_state(rng)
        b = pauli_decompose(st).b
        if np.linalg.norm(b) < 1e-3:
            continue
        found += 1
        ell = qse(st)
        cosines = np.abs(ell.frame.T @ (b / np.linalg.norm(b)))
        assert cosines.max() >= 1 - 1e-6


def test_qse_surface_stays_inside_ball(rng):
    for _ in range(30):
        ell = qse(random_two_qubit(rng))
        assert np.linalg.norm(ell.surface_points(500), axis=1).max() <= 1 + 1e-8


def test_qse_frame_orthonormal(rng):
    for _ in range(30):
        ell = qse(random_two_qubit(rng))
        np.testing.assert_allclose(ell.frame.T @ ell.frame, np.eye(3), atol=1e-9)
        assert ell.semiaxes[0] >= ell.semiaxes[1] >= ell.semiaxes[2] >= -1e-12


def test_steered_points_inside_unit_ball(rng):
    for _ in range(30):
        th = pauli_decompose(random_two_qubit(rng))
        pts = steered_surface(th, 500)
        assert np.linalg.norm(pts, axis=1).max() <= 1 + 1e-9


def test_rotated_state_rotates_frame(rng):
    # A local unitary on Bob rotates the ellipsoid rigidly.
    fam = rho_p(0.8, 0.25 * np.pi)
    u = random_unitary(rng, 2)
    rotated = validate_density(
        np.kron(np.eye(2), u) @ fam.state.matrix @ np.kron(np.eye(2), u).conj().T, (2, 2)
    )
    e0, e1 = qse(fam.state), qse(rotated)
    np.testing.assert_allclose(np.sort(e0.semiaxes), np.sort(e1.semiaxes), atol=1e-9)
    assert abs(np.linalg.norm(e0.center) - np.linalg.norm(e1.center)) <= 1e-9


def test_ellipsoid_containment_helper(rng):
    ell = qse(rho_c(0.6).state)
    pts = steered_surface(pauli_decompose(rho_c(0.6).state), 300)
    assert ell.containment_violation(pts) <= 1e-9
    with pytest.raises(GeometryViolation):
        ell.surface_residual(pts)
