"""Second-order quantum-statistical moments.

Expectations, variances and covariances of Hermitian observables, the
covariance matrix sigma and the commutator matrix C built from a list of
observables, and the complex quantum covariance function whose real part
is the covariance and whose imaginary part is half the commutator mean.

Every routine accepts either a :class:`~uncertainty_lab.fock.StateVector`
or a :class:`~uncertainty_lab.fock.DensityMatrix`; mixed states are
evaluated through Tr(rho A).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import DensityMatrix, StateVector
from .linalg import anticommutator, as_cmatrix, commutator, is_hermitian

#: Largest imaginary residue tolerated on a nominally real quantity.
IMAG_TOL = 1e-8

State = StateVector | DensityMatrix


def _check_symmetry(matrix: np.ndarray, sign: float, what: str) -> None:
    tol = 1e-10 * max(1.0, float(np.max(np.abs(matrix))) if matrix.size else 1.0)
    if np.max(np.abs(matrix - sign * matrix.T)) > tol:
        raise ValueError(f"{what} failed its symmetry invariant")


@dataclass(frozen=True)
class CovarianceMatrix:
    """Real symmetric matrix of pairwise covariances."""

    labels: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (len(self.labels), len(self.labels)):
            raise ValueError("covariance matrix shape does not match labels")
        _check_symmetry(m, +1.0, "covariance matrix")
        if m.size and np.min(np.diagonal(m)) < -1e-10:
            raise ValueError("covariance matrix has a negative variance on the diagonal")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", tuple(self.labels))


@dataclass(frozen=True)
class CommutatorMatrix:
    """Real antisymmetric matrix of commutator means scaled by -i/2."""

    labels: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (len(self.labels), len(self.labels)):
            raise ValueError("commutator matrix shape does not match labels")
        _check_symmetry(m, -1.0, "commutator matrix")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", tuple(self.labels))


def expect(a: np.ndarray, state: State) -> complex:
    """Quantum mean value <psi|A|psi>, or Tr(rho A) for mixed states."""
    a = as_cmatrix(a)
    dim = state.config.dim
    if a.shape != (dim, dim):
        raise ValueError(f"observable shape {a.shape} does not match dim {dim}")
    if isinstance(state, StateVector):
        return complex(np.vdot(state.amplitudes, a @ state.amplitudes))
    return complex(np.trace(state.matrix @ a))


def _expect_real(a: np.ndarray, state: State, what: str) -> float:
    value = expect(a, state)
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise ValueError(
            f"{what} has imaginary residue {value.imag:.3e}; "
            "input is non-Hermitian or numerically corrupted"
        )
    return value.real


def _require_hermitian(*ops: np.ndarray) -> None:
    for op in ops:
        if not is_hermitian(op):
            raise ValueError("observable must be Hermitian")


def covariance(a: np.ndarray, b: np.ndarray, state: State) -> float:
    """Cov(A, B) = <AB + BA>/2 - <A><B>, the symmetrised cross moment."""
    _require_hermitian(a, b)
    sym = _expect_real(anticommutator(a, b), state, "anticommutator mean") / 2
    return sym - _expect_real(a, state, "<A>") * _expect_real(b, state, "<B>")


def variance(a: np.ndarray, state: State) -> float:
    """Var(A) = Cov(A, A)."""
    return covariance(a, a, state)


def covariance_matrix(obs, state: State, labels=None) -> CovarianceMatrix:
    """Covariance matrix sigma of a list of Hermitian observables."""
    ops = [as_cmatrix(o) for o in obs]
    _require_hermitian(*ops)
    labels = _make_labels(labels, len(ops))
    means = [_expect_real(o, state, f"<{lbl}>") for o, lbl in zip(ops, labels)]
    n = len(ops)
    sigma = np.zeros((n, n))
    for j in range(n):
        for k in range(j, n):
            sym = _expect_real(
                anticommutator(ops[j], ops[k]), state, "anticommutator mean"
            ) / 2
            sigma[j, k] = sigma[k, j] = sym - means[j] * means[k]
    return CovarianceMatrix(labels, sigma)


def commutator_matrix(obs, state: State, labels=None) -> CommutatorMatrix:
    """Commutator matrix C with C_jk = -(i/2) <[X_j, X_k]>.

    Hermitian observables give purely imaginary commutator means, so C is
    real and antisymmetric; a real residue above ``IMAG_TOL`` raises.
    """
    ops = [as_cmatrix(o) for o in obs]
    _require_hermitian(*ops)
    labels = _make_labels(labels, len(ops))
    n = len(ops)
    c = np.zeros((n, n))
    for j in range(n):
        for k in range(j + 1, n):
            mean = expect(commutator(ops[j], ops[k]), state)
            if abs(mean.real) > IMAG_TOL:
                raise ValueError(
                    f"<[{labels[j]}, {labels[k]}]> has real part {mean.real:.3e}; "
                    "input is non-Hermitian or numerically corrupted"
                )
            # -(i/2)(i Im) = Im/2
            c[j, k] = mean.imag / 2
            c[k, j] = -c[j, k]
    return CommutatorMatrix(labels, c)


def qcf(a: np.ndarray, b: np.ndarray, state: State) -> complex:
    """Quantum covariance function <AB> - <A><B>.

    Re = Cov(A, B) and Im = <[A, B]> / (2i) as a real number, so the
    Cauchy-Schwarz bound |qcf|^2 <= Var(A) Var(B) packages both the
    covariance and the commutator term of the uncertainty relations.
    """
    _require_hermitian(a, b)
    mean_a = _expect_real(a, state, "<A>")
    mean_b = _expect_real(b, state, "<B>")
    return expect(as_cmatrix(a) @ as_cmatrix(b), state) - mean_a * mean_b


def _make_labels(labels, n: int) -> tuple[str, ...]:
    if labels is None:
        return tuple(f"X{j + 1}" for j in range(n))
    labels = tuple(str(lbl) for lbl in labels)
    if len(labels) != n:
        raise ValueError(f"{len(labels)} labels for {n} observables")
    return labels
