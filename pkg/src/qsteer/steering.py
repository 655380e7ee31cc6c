"""Steering of bipartite states by POVM elements on Alice's side.

Covers the steered-state map, its two-qubit Bloch form, the canonical
(maximally-mixed-Alice) transform, and the quantum steering ellipsoid: the
set of Bloch vectors Bob's qubit can be steered to. The ellipsoid is
computed through the canonical transform, whose output has a = 0 so the
steered set is simply the image of the measurement sphere under
m -> b + T^T m; its axes are the singular directions of T^T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    GeometryViolation,
    InvalidPOVMElement,
    NotBipartite,
    NotHermitian,
    SingularDenominator,
    SingularMarginal,
    ZeroProbability,
)
from .qcore import (
    DensityMatrix,
    PauliForm,
    dag,
    pauli_decompose,
    validate_density,
)

ZERO_PROBABILITY_TOL = 1e-12
SINGULAR_MARGINAL_TOL = 1e-12
POVM_EIG_TOL = 1e-10
BALL_TOL = 1e-8


def validate_povm_element(matrix: np.ndarray) -> np.ndarray:
    """Check 0 <= M <= 1 (within tolerance) and Hermiticity; return M."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidPOVMElement(f"POVM element must be square, got shape {m.shape}")
    herm_dev = np.abs(m - dag(m)).max()
    if herm_dev > 1e-10:
        raise NotHermitian(f"max |M - M^dag| = {herm_dev:.3e} exceeds tolerance 1e-10")
    eigs = np.linalg.eigvalsh((m + dag(m)) / 2)
    if eigs.min() < -POVM_EIG_TOL or eigs.max() > 1 + POVM_EIG_TOL:
        raise InvalidPOVMElement(
            f"POVM element eigenvalues [{eigs.min():.3e}, {eigs.max():.3e}] "
            f"outside [-{POVM_EIG_TOL:.0e}, 1 + {POVM_EIG_TOL:.0e}]"
        )
    return m


def _steer_raw(rho4: np.ndarray, m_op: np.ndarray, dims) -> tuple[np.ndarray, float]:
    # Unnormalized steered operator tr_A((M x 1) rho) and its probability.
    da, db = dims
    r = rho4.reshape(da, db, da, db)
    out = np.einsum("ac,cbad->bd", m_op, r)
    return out, float(np.real(np.trace(out)))


def steer(state: DensityMatrix, m_op: np.ndarray) -> tuple[DensityMatrix, float]:
    """Bob's steered state and the outcome probability for POVM element M.

    Raises ZeroProbability when tr((M x 1) rho) falls below 1e-12; the
    steered state is undefined there rather than renormalized noise.
    """
    if not state.is_bipartite:
        raise NotBipartite(f"steering needs a bipartite state, got dims {state.dims}")
    m_op = validate_povm_element(m_op)
    if m_op.shape[0] != state.dims[0]:
        raise DimensionMismatch(
            f"POVM element dimension {m_op.shape[0]} != Alice dimension {state.dims[0]}"
        )
    out, p = _steer_raw(state.matrix, m_op, state.dims)
    if p <= ZERO_PROBABILITY_TOL:
        raise ZeroProbability(f"outcome probability {p:.3e} below threshold {ZERO_PROBABILITY_TOL:.0e}")
    return validate_density(out / p, (state.dims[1],)), p


def steered_bloch(theta: PauliForm, m) -> np.ndarray:
    """Bob's steered Bloch vector (b + T^T m) / |1 + a.m| for direction m."""
    m = np.asarray(m, dtype=float)
    den = abs(1.0 + float(theta.a @ m))
    if den <= 1e-12:
        raise SingularDenominator(f"|1 + a.m| = {den:.3e} below 1e-12 (|a| ~ 1 product state)")
    return (theta.b + theta.T.T @ m) / den


def canonical_transform(state: DensityMatrix) -> DensityMatrix:
    """Map to the canonical state with the same steering ellipsoid and a = 0.

    Conjugates by rho_A^(-1/2) x 1 and renormalizes; Alice's marginal becomes
    maximally mixed while the set of Bob's steered states is unchanged
    (POVM elements map bijectively through rho_A^(1/2)).
    """
    if not state.is_bipartite:
        raise NotBipartite(f"canonical transform needs a bipartite state, got dims {state.dims}")
    da, db = state.dims
    r = state.matrix.reshape(da, db, da, db)
    rho_a = np.einsum("ibjb->ij", r)
    w, v = np.linalg.eigh(rho_a)
    if w.min() < SINGULAR_MARGINAL_TOL:
        raise SingularMarginal(
            f"min eigenvalue of rho_A = {w.min():.3e} below {SINGULAR_MARGINAL_TOL:.0e}; "
            "rho_A is pure and the state is a trivial product"
        )
    inv_sqrt = v @ np.diag(w**-0.5) @ dag(v)
    op = np.kron(inv_sqrt, np.eye(db))
    out = op @ state.matrix @ op
    out = (out + dag(out)) / 2
    out /= np.real(np.trace(out))
    return validate_density(out, state.dims)


@dataclass(frozen=True)
class Ellipsoid:
    """A steering ellipsoid: center, descending semiaxes, orthonormal frame.

    frame[:, i] is the axis direction for semiaxes[i]. Degenerate steering
    sets (segments, points) carry zero semiaxes rather than a separate type.
    """

    center: np.ndarray
    semiaxes: np.ndarray
    frame: np.ndarray

    def surface_points(self, num: int = 422) -> np.ndarray:
        """Deterministic sample of the surface (rows are Bloch vectors)."""
        u = _fibonacci_sphere(num)
        return self.center + (self.frame @ (self.semiaxes[:, None] * u.T)).T

    def surface_residual(self, points: np.ndarray) -> float:
        """Max |normalized radius - 1| over points; needs full-rank axes."""
        y = (np.atleast_2d(points) - self.center) @ self.frame
        if self.semiaxes.min() <= 1e-12:
            raise GeometryViolation("surface residual undefined for a degenerate ellipsoid")
        return float(np.abs(np.linalg.norm(y / self.semiaxes, axis=1) - 1.0).max())

    def containment_violation(self, points: np.ndarray) -> float:
        """How far points stick out of the (possibly degenerate) solid set."""
        y = (np.atleast_2d(points) - self.center) @ self.frame
        live = self.semiaxes > 1e-12
        out = 0.0
        if live.any():
            r = np.linalg.norm(y[:, live] / self.semiaxes[live], axis=1)
            out = max(out, float(np.clip(r - 1.0, 0.0, None).max()) * float(self.semiaxes.max()))
        if (~live).any():
            out = max(out, float(np.abs(y[:, ~live]).max()))
        return out


def _fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    phi = np.pi * (1.0 + 5.0**0.5) * i
    s = np.sqrt(1.0 - z * z)
    return np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=1)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return v if v[k] >= 0 else -v


def qse(state: DensityMatrix) -> Ellipsoid:
    """The quantum steering ellipsoid of a two-qubit state.

    Computed from the canonical transform: center is the canonical Bob
    Bloch vector, semiaxes are the singular values of the canonical T, and
    the frame holds the principal directions of the steered set (the
    eigenvectors of T^T T). Validated against the sampled steering map in
    the tests.
    """
    can = canonical_transform(state)
    th = pauli_decompose(can)
    t = th.T
    w, f = np.linalg.eigh(t.T @ t)
    order = np.argsort(-w, kind="stable")
    semiaxes = np.sqrt(np.clip(w[order], 0.0, None))
    frame = np.column_stack([_fix_sign(f[:, j]) for j in order])
    ell = Ellipsoid(center=th.b, semiaxes=semiaxes, frame=frame)
    _check_inside_ball(ell)
    return ell


def _check_inside_ball(ell: Ellipsoid) -> None:
    worst = float(np.linalg.norm(ell.surface_points(), axis=1).max())
    if worst > 1 + BALL_TOL:
        raise GeometryViolation(
            f"ellipsoid surface reaches radius {worst:.12f}, outside the Bloch ball by more than {BALL_TOL:.0e}"
        )


def steered_surface(theta: PauliForm, num: int = 1000) -> np.ndarray:
    """Steered Bloch vectors for a deterministic grid of projective m."""
    ms = _fibonacci_sphere(num)
    den = np.abs(1.0 + ms @ theta.a)
    return (theta.b + ms @ theta.T) / den[:, None]
