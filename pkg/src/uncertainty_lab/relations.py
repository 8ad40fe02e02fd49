"""Uncertainty-relation evaluators.

Each evaluator computes the left and right side of one inequality and
wraps them in a :class:`RelationReport` carrying the gap and the
satisfied/saturated verdicts.  The family covered:

* product relations: the Heisenberg bound and the Schrodinger bound with
  its covariance term,
* characteristic relations: principal-minor coefficients of the
  covariance matrix dominate those of the commutator matrix, order by
  order (the Schrodinger bound is the n = 2, r = 2 case),
* sum-of-variance relations and their canonical-variable form,
* the two-state extension mixing variances of two different states,
* trace-class identities on symplectically diagonalised covariance
  matrices, with the Williamson decomposition done here.

These are theorems: on exact moments every report is satisfied, and any
violation beyond tolerance signals an implementation bug or a state that
broke the truncation guard.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .fock import ModeConfig, quadratures
from .linalg import char_coeffs, commutator, is_hermitian
from .moments import (
    CommutatorMatrix,
    CovarianceMatrix,
    State,
    covariance,
    covariance_matrix,
    commutator_matrix,
    expect,
    variance,
)

#: Relative slack below which a gap still counts as satisfied.
EPS_REL = 1e-9

#: Relative tolerance for declaring a relation saturated (equality).
EPS_SAT = 1e-6


@dataclass(frozen=True)
class RelationReport:
    """Outcome of one inequality evaluation."""

    name: str
    lhs: float
    rhs: float
    gap: float
    satisfied: bool
    saturated: bool


def make_report(name: str, lhs: float, rhs: float, eps_sat: float = EPS_SAT) -> RelationReport:
    """Build a report; the verdicts use a scale of max(|lhs|, |rhs|, 1)."""
    gap = lhs - rhs
    scale = max(abs(lhs), abs(rhs), 1.0)
    return RelationReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        gap=gap,
        satisfied=gap >= -EPS_REL * scale,
        saturated=abs(gap) <= eps_sat * scale,
    )


def _std(var: float) -> float:
    # Truncation rounding may push a variance epsilon-negative.
    if var < -1e-10:
        raise ValueError(f"variance {var!r} is negative beyond tolerance")
    return float(np.sqrt(max(var, 0.0)))


def heisenberg(state: State, a: np.ndarray, b: np.ndarray,
               eps_sat: float = EPS_SAT) -> RelationReport:
    """Delta A * Delta B >= |<[A, B]>| / 2."""
    lhs = _std(variance(a, state)) * _std(variance(b, state))
    rhs = abs(expect(commutator(a, b), state)) / 2
    return make_report("heisenberg", lhs, rhs, eps_sat)


def schrodinger(state: State, a: np.ndarray, b: np.ndarray,
                eps_sat: float = EPS_SAT) -> RelationReport:
    """Var(A) Var(B) - Cov(A, B)^2 >= |<[A, B]>/2|^2.

    The left side is det sigma(A, B); subtracting the covariance term is
    what sharpens the Heisenberg bound.
    """
    lhs = variance(a, state) * variance(b, state) - covariance(a, b, state) ** 2
    rhs = abs(expect(commutator(a, b), state) / 2) ** 2
    return make_report("schrodinger", lhs, rhs, eps_sat)


def characteristic_ur(state: State, obs, labels=None,
                      eps_sat: float = EPS_SAT) -> list[RelationReport]:
    """C_r(sigma) >= C_r(C) for every minor order r = 1..n.

    Both characteristic-coefficient vectors are computed by principal-minor
    sums.  r = 1 compares the variance sum against Tr(C) = 0; r = n = 2
    reproduces the Schrodinger relation.
    """
    sigma = covariance_matrix(obs, state, labels)
    comm = commutator_matrix(obs, state, labels)
    lhs_coeffs = char_coeffs(sigma.matrix)
    rhs_coeffs = char_coeffs(comm.matrix)
    return [
        make_report(f"characteristic[r={r + 1}]", lhs_coeffs[r], rhs_coeffs[r], eps_sat)
        for r in range(len(lhs_coeffs))
    ]


def sum_ur(state: State, a: np.ndarray, b: np.ndarray,
           eps_sat: float = EPS_SAT) -> RelationReport:
    """Var(A) + Var(B) >= sqrt(|<[A, B]>|^2 + 4 Cov(A, B)^2).

    Saturates exactly when the two variances are equal.
    """
    lhs = variance(a, state) + variance(b, state)
    comm_mean = abs(expect(commutator(a, b), state))
    rhs = float(np.sqrt(comm_mean ** 2 + 4 * covariance(a, b, state) ** 2))
    return make_report("sum", lhs, rhs, eps_sat)


def canonical_sum(state: State, config: ModeConfig,
                  eps_sat: float = EPS_SAT) -> RelationReport:
    """m omega Var(q) + Var(p) / (m omega) >= hbar.

    The covariance-free weakening of the sum relation, stated for the
    canonical pair of the configured mode.
    """
    q, p = quadratures(config)
    mw = config.mass * config.omega
    lhs = mw * variance(q, state) + variance(p, state) / mw
    return make_report("canonical-sum", lhs, config.hbar, eps_sat)


def two_state_ur(psi: State, phi: State, config: ModeConfig,
                 eps_sat: float = EPS_SAT) -> RelationReport:
    """Two-state extension of the Schrodinger relation for (q, p):

    (Var_psi(q) Var_phi(p) + Var_phi(q) Var_psi(p)) / 2
        - |Cov(q, p; psi) Cov(q, p; phi)|  >=  hbar^2 / 4.

    With psi = phi this reduces exactly to the Schrodinger relation.
    """
    if psi.config != config or phi.config != config:
        raise ValueError("both states must live on the given ModeConfig")
    q, p = quadratures(config)
    vq_psi, vp_psi = variance(q, psi), variance(p, psi)
    vq_phi, vp_phi = variance(q, phi), variance(p, phi)
    cov_psi, cov_phi = covariance(q, p, psi), covariance(q, p, phi)
    lhs = (vq_psi * vp_phi + vq_phi * vp_psi) / 2 - abs(cov_psi * cov_phi)
    return make_report("two-state", lhs, config.hbar ** 2 / 4, eps_sat)


# ---------------------------------------------------------------------------
# Symplectic machinery for the trace-class relations
# ---------------------------------------------------------------------------


def symplectic_form(n_modes: int) -> np.ndarray:
    """The 2n x 2n form J = [[0, -I], [I, 0]] in (q_1..q_n, p_1..p_n) order."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes}")
    n = int(n_modes)
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = -np.eye(n)
    j[n:, :n] = np.eye(n)
    return j


class WilliamsonResult(NamedTuple):
    """Symplectic congruence Lambda sigma Lambda^T = diag(nu, nu) and the
    symplectic eigenvalues nu in descending order."""

    Lambda: np.ndarray
    nus: np.ndarray


def _as_real_symmetric(sigma) -> np.ndarray:
    matrix = sigma.matrix if isinstance(sigma, CovarianceMatrix) else np.asarray(sigma, dtype=float)
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("covariance matrix must be square")
    return matrix


def williamson(sigma) -> WilliamsonResult:
    """Williamson diagonalisation of a positive-definite covariance matrix.

    Returns Lambda with Lambda J Lambda^T = J and Lambda sigma Lambda^T
    diagonal with paired entries; the nus are the moduli of the
    eigenvalues of i J sigma.

    Construction: with T = sigma^{-1/2}, the real antisymmetric matrix
    T J T has purely imaginary eigenvalues +- i/nu.  The real and
    imaginary parts of the eigenvectors of the Hermitian matrix i T J T
    assemble an orthogonal basis O with O^T (T J T) O in canonical block
    form, and Lambda = diag(sqrt(nu)) O^T T.
    """
    matrix = _as_real_symmetric(sigma)
    dim = matrix.shape[0]
    if dim % 2:
        raise ValueError(f"covariance matrix dimension {dim} is odd")
    n = dim // 2
    if not is_hermitian(matrix):
        raise ValueError("covariance matrix is not symmetric")
    w, v = np.linalg.eigh(matrix)  # real-symmetric path keeps eigenvectors real
    if w.min() <= 1e-12 * max(w.max(), 1.0):
        raise ValueError("covariance matrix is not positive definite")
    inv_sqrt = (v / np.sqrt(w)) @ v.T
    j = symplectic_form(n)
    core = inv_sqrt @ j @ inv_sqrt
    mu, vecs = np.linalg.eigh(1j * core)
    # Eigenvalues come in +-mu pairs; the upper half is the positive set,
    # ascending, so nu = 1/mu comes out descending.
    mu_pos = mu[n:]
    w_pos = vecs[:, n:]
    nus = 1.0 / mu_pos
    basis = np.empty((dim, dim))
    basis[:, :n] = np.sqrt(2.0) * w_pos.real
    basis[:, n:] = np.sqrt(2.0) * w_pos.imag
    scale = np.sqrt(np.concatenate([nus, nus]))
    lam = (scale[:, None] * basis.T) @ inv_sqrt
    return WilliamsonResult(Lambda=lam, nus=nus)


def trace_class_ur(sigma, comm, k: int, eps_sat: float = EPS_SAT) -> RelationReport:
    """Trace-class identity of order k on a 2N x 2N covariance matrix:

    Tr((i sigma J)^{2k}) = 2^{1-2k} sum_j |<[X'_j, X'_{N+j}]>|^{2k},

    where X' = Lambda X are the Williamson-transformed observables and the
    primed commutator means come from Lambda C Lambda^T.  Reported as an
    equality check: the saturated flag is the verdict.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    k = int(k)
    matrix = _as_real_symmetric(sigma)
    comm_matrix = comm.matrix if isinstance(comm, CommutatorMatrix) else np.asarray(comm, dtype=float)
    if comm_matrix.shape != matrix.shape:
        raise ValueError("covariance and commutator matrices differ in shape")
    n = matrix.shape[0] // 2
    j = symplectic_form(n)
    lhs = float(np.trace(np.linalg.matrix_power(1j * matrix @ j, 2 * k)).real)
    lam = williamson(matrix).Lambda
    primed = lam @ comm_matrix @ lam.T
    # C'_{j, N+j} = -(i/2) <[X'_j, X'_{N+j}]>, so the mean's modulus is 2|C'|.
    moduli = 2.0 * np.abs(primed[np.arange(n), np.arange(n) + n])
    rhs = float(2.0 ** (1 - 2 * k) * np.sum(moduli ** (2 * k)))
    return make_report(f"trace-class[k={k}]", lhs, rhs, eps_sat)
