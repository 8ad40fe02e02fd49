"""Dense complex matrix engine.

Operators, density matrices and unitaries are all carried as square
``numpy.ndarray`` of ``complex128``.  Everything here is a pure function;
no input is ever mutated.
"""

from __future__ import annotations

from itertools import combinations
from typing import NamedTuple

import numpy as np

#: Relative tolerance for Hermiticity checks, scaled by max|M|.
HERMITICITY_TOL = 1e-10

#: Largest dimension accepted by the principal-minor enumeration.
MAX_MINOR_DIM = 12


class EighResult(NamedTuple):
    """Hermitian eigendecomposition: ascending real eigenvalues and
    a unitary matrix whose columns are the matching eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_cmatrix(m) -> np.ndarray:
    """Coerce to a 2-d complex array, rejecting non-finite entries."""
    out = np.asarray(m, dtype=complex)
    if out.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got ndim={out.ndim}")
    if not np.all(np.isfinite(out)):
        raise ValueError("matrix contains NaN or Inf entries")
    return out


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    """True when max|M - M^dagger| <= tol * max|M|."""
    m = np.asarray(m)
    scale = max(np.max(np.abs(m)), 1.0) if m.size else 1.0
    return bool(np.max(np.abs(m - m.conj().T)) <= tol * scale)


def _require_square_pair(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b = as_cmatrix(a), as_cmatrix(b)
    if a.shape[0] != a.shape[1] or b.shape[0] != b.shape[1]:
        raise ValueError("operands must be square matrices")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """AB - BA.  Anti-Hermitian whenever A and B are Hermitian."""
    a, b = _require_square_pair(a, b)
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """AB + BA.  Hermitian whenever A and B are Hermitian."""
    a, b = _require_square_pair(a, b)
    return a @ b + b @ a


def eigh(m: np.ndarray) -> EighResult:
    """Eigendecomposition of a Hermitian matrix.

    Raises:
        ValueError: if the input is not Hermitian within ``HERMITICITY_TOL``.
        numpy.linalg.LinAlgError: if the QR iteration fails to converge.
    """
    m = as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("eigh requires a square matrix")
    if not is_hermitian(m):
        raise ValueError("eigh requires a Hermitian matrix")
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare in LAPACK
        raise np.linalg.LinAlgError(
            f"Hermitian eigensolver did not converge on a {m.shape[0]}x{m.shape[0]} "
            f"matrix: {exc}"
        ) from exc
    return EighResult(eigenvalues=w, eigenvectors=v)


def expm_skew(h: np.ndarray, s: float) -> np.ndarray:
    """exp(i*s*H) for Hermitian H, via eigendecomposition.

    The result is unitary to machine precision because the eigenbasis is
    orthonormal and only the eigenvalue phases are exponentiated.
    """
    w, v = eigh(h)
    return (v * np.exp(1j * s * w)) @ v.conj().T


def _det_small(m: np.ndarray) -> float:
    """Determinant by cofactor expansion, for minors of order <= 4."""
    n = m.shape[0]
    if n == 1:
        return m[0, 0]
    if n == 2:
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    acc = 0.0
    sign = 1.0
    for j in range(n):
        sub = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        acc += sign * m[0, j] * _det_small(sub)
        sign = -sign
    return acc


def _real_matrix(m: np.ndarray) -> np.ndarray:
    m = as_cmatrix(m)
    scale = max(np.max(np.abs(m)), 1.0)
    if np.max(np.abs(m.imag)) > HERMITICITY_TOL * scale:
        raise ValueError("matrix entries are not real within tolerance")
    return m.real.copy()


def char_coeffs(phi: np.ndarray) -> np.ndarray:
    """Characteristic coefficients (C_1, ..., C_n) of a real matrix.

    C_r is the sum of all r x r principal minors, so C_1 is the trace and
    C_n the determinant.  The coefficients equal the elementary symmetric
    polynomials of the eigenvalues and are invariant under similarity.

    Minors of order <= 4 use exact cofactor expansion; larger ones fall
    back to LU determinants.  Enumeration is combinatorial, hence the
    dimension cap of ``MAX_MINOR_DIM``.
    """
    phi = _real_matrix(phi)
    n = phi.shape[0]
    if phi.shape[0] != phi.shape[1]:
        raise ValueError("char_coeffs requires a square matrix")
    if n > MAX_MINOR_DIM:
        raise ValueError(
            f"dimension {n} exceeds {MAX_MINOR_DIM}: use eigenvalue route"
        )
    coeffs = np.empty(n)
    for r in range(1, n + 1):
        total = 0.0
        for idx in combinations(range(n), r):
            minor = phi[np.ix_(idx, idx)]
            total += _det_small(minor) if r <= 4 else float(np.linalg.det(minor))
        coeffs[r - 1] = total
    return coeffs


def similarity(phi: np.ndarray, t: np.ndarray) -> np.ndarray:
    """T Phi T^{-1}.  Rejects T with condition number above 1e12."""
    phi, t = _require_square_pair(phi, t)
    if np.linalg.cond(t) >= 1e12:
        raise ValueError("transformation matrix is singular or ill-conditioned")
    return t @ phi @ np.linalg.inv(t)
