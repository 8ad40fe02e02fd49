"""Truncated single-mode bosonic Hilbert space.

Ladder and quadrature operators plus constructors for vacuum, number,
coherent, squeezed, thermal and superposition states.  Truncation is only
trustworthy for states with negligible weight near the cutoff, so every
state is checked against a tail-weight guard at construction time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import eigh, expm_skew, is_hermitian

#: Number of top basis levels inspected by the tail-weight guard.
TAIL_BUFFER = 8

#: Maximum admissible probability weight in the guarded tail.
TAIL_EPS = 1e-10

#: Tolerance on state normalisation.
NORM_TOL = 1e-10

DEFAULT_DIM = 64


class TruncationError(ValueError):
    """A state carries too much weight near the truncation cutoff."""


@dataclass(frozen=True)
class ModeConfig:
    """Physical constants and truncation dimension for one bosonic mode."""

    dim: int = DEFAULT_DIM
    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))
        for name in ("hbar", "mass", "omega"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and positive, got {value}")


def _check_tail(weights: np.ndarray, dim: int, what: str) -> None:
    tail = float(np.sum(weights[max(dim - TAIL_BUFFER, 0):]))
    if tail > TAIL_EPS:
        raise TruncationError(
            f"{what} has tail weight {tail:.3e} in the top {TAIL_BUFFER} levels "
            f"(limit {TAIL_EPS:.0e}): increase dim"
        )


@dataclass(frozen=True)
class StateVector:
    """Normalised pure state on the truncated Fock space."""

    config: ModeConfig
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.config.dim,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, expected ({self.config.dim},)"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes contain NaN or Inf")
        weights = np.abs(amps) ** 2
        norm = float(np.sum(weights))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised: |psi|^2 = {norm!r}")
        _check_tail(weights, self.config.dim, "state")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state: Hermitian, unit-trace, positive semidefinite."""

    config: ModeConfig
    matrix: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=complex)
        dim = self.config.dim
        if rho.shape != (dim, dim):
            raise ValueError(f"density matrix has shape {rho.shape}, expected ({dim}, {dim})")
        if not np.all(np.isfinite(rho)):
            raise ValueError("density matrix contains NaN or Inf")
        if not is_hermitian(rho):
            raise ValueError("density matrix is not Hermitian")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > NORM_TOL:
            raise ValueError(f"density matrix trace is {trace!r}, expected 1")
        eigvals = eigh(rho).eigenvalues
        if eigvals.min() < -1e-10:
            raise ValueError(f"density matrix has negative eigenvalue {eigvals.min():.3e}")
        _check_tail(rho.real.diagonal(), dim, "density matrix")
        rho.setflags(write=False)
        object.__setattr__(self, "matrix", rho)

    @classmethod
    def from_mixture(cls, states: list[StateVector], weights) -> "DensityMatrix":
        """Convex mixture sum_i w_i |psi_i><psi_i| of same-mode pure states."""
        if not states:
            raise ValueError("mixture needs at least one state")
        config = states[0].config
        if any(s.config != config for s in states):
            raise ValueError("all mixture components must share one ModeConfig")
        w = np.asarray(weights, dtype=float)
        if w.shape != (len(states),) or np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be non-negative finite, one per state")
        total = w.sum()
        if total <= 0:
            raise ValueError("mixture weights sum to zero")
        w = w / total
        rho = np.zeros((config.dim, config.dim), dtype=complex)
        for wi, s in zip(w, states):
            rho += wi * np.outer(s.amplitudes, s.amplitudes.conj())
        return cls(config, rho)


@dataclass(frozen=True)
class GaussianParams:
    """Displacement and squeeze parameters of the Gaussian state family.

    The squeeze phase is wrapped into [0, 2*pi).
    """

    alpha: complex = 0j
    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        alpha = complex(self.alpha)
        if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
            raise ValueError("alpha must be finite")
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ValueError(f"squeeze magnitude must be finite and >= 0, got {self.r}")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "theta", float(self.theta) % (2 * math.pi))

    def excitation(self) -> float:
        """Mean excitation |alpha|^2 + sinh^2 r, used by the dimension guard."""
        return abs(self.alpha) ** 2 + math.sinh(self.r) ** 2


def ladder_ops(config: ModeConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Annihilation, creation and number operators (a, a_dag, n)."""
    dim = config.dim
    a = np.zeros((dim, dim), dtype=complex)
    for k in range(1, dim):
        a[k - 1, k] = math.sqrt(k)
    adag = a.conj().T
    return a, adag, adag @ a


def quadratures(config: ModeConfig) -> tuple[np.ndarray, np.ndarray]:
    """Position and momentum operators for the configured mode.

    q = sqrt(hbar / 2 m omega) (a + a_dag),
    p = i sqrt(hbar m omega / 2) (a_dag - a);  [q, p] = i hbar away from
    the truncation edge.
    """
    a, adag, _ = ladder_ops(config)
    cq = math.sqrt(config.hbar / (2 * config.mass * config.omega))
    cp = math.sqrt(config.hbar * config.mass * config.omega / 2)
    return cq * (a + adag), 1j * cp * (adag - a)


def vacuum(config: ModeConfig) -> StateVector:
    """Ground state |0>."""
    return fock_state(config, 0)


def fock_state(config: ModeConfig, k: int) -> StateVector:
    """Number state |k>.  k must sit below the tail-guard buffer."""
    if int(k) != k or k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k}")
    if k >= config.dim - TAIL_BUFFER:
        raise ValueError(
            f"k={k} is inside the tail buffer of dim={config.dim}: increase dim"
        )
    amps = np.zeros(config.dim, dtype=complex)
    amps[int(k)] = 1.0
    return StateVector(config, amps)


def _guard_dim(excitation: float, dim: int) -> bool:
    return excitation + 5 * math.sqrt(excitation) + TAIL_BUFFER < dim


def auto_dim(params: GaussianParams, minimum: int = DEFAULT_DIM) -> int:
    """Smallest power of two >= minimum whose truncation passes the guard."""
    dim = max(2, int(minimum))
    while dim & (dim - 1):
        dim += 1  # round up to a power of two
    while not _guard_dim(params.excitation(), dim):
        dim *= 2
    return dim


def _displacement_unitary(config: ModeConfig, alpha: complex) -> np.ndarray:
    a, adag, _ = ladder_ops(config)
    # D(alpha) = exp(alpha a_dag - alpha* a) = exp(i H) with Hermitian H
    h = -1j * (alpha * adag - np.conj(alpha) * a)
    return expm_skew(h, 1.0)


def coherent(config: ModeConfig, alpha: complex) -> StateVector:
    """Coherent state D(alpha)|0>."""
    alpha = complex(alpha)
    if not _guard_dim(abs(alpha) ** 2, config.dim):
        raise TruncationError(
            f"coherent(|alpha|={abs(alpha):.3g}) violates the tail guard at "
            f"dim={config.dim}: increase dim"
        )
    amps = _displacement_unitary(config, alpha)[:, 0]
    return StateVector(config, amps)


def squeezed(config: ModeConfig, params: GaussianParams) -> StateVector:
    """Squeezed coherent state D(alpha) S(zeta) |0> with zeta = r e^{i theta}.

    Sign convention: S(zeta) = exp((zeta* a^2 - zeta a_dag^2) / 2), under
    which Cov(q, p) = -(hbar/2) sinh(2r) sin(theta).  The alternate sign
    convention flips Cov; this one is locked by a regression test.
    """
    if not _guard_dim(params.excitation(), config.dim):
        raise TruncationError(
            f"squeezed(excitation={params.excitation():.3g}) violates the tail "
            f"guard at dim={config.dim}: increase dim"
        )
    a, adag, _ = ladder_ops(config)
    zeta = params.r * np.exp(1j * params.theta)
    hs = -1j * (np.conj(zeta) * (a @ a) - zeta * (adag @ adag)) / 2
    amps = expm_skew(hs, 1.0)[:, 0]
    if params.alpha != 0:
        amps = _displacement_unitary(config, params.alpha) @ amps
    return StateVector(config, amps)


def superpose(states: list[StateVector], weights) -> StateVector:
    """Normalised weighted sum of same-mode pure states."""
    if not states:
        raise ValueError("superpose needs at least one state")
    config = states[0].config
    if any(s.config != config for s in states):
        raise ValueError("all components must share one ModeConfig")
    w = np.asarray(weights, dtype=complex)
    if w.shape != (len(states),):
        raise ValueError("one weight per component required")
    amps = np.zeros(config.dim, dtype=complex)
    for wi, s in zip(w, states):
        amps = amps + wi * s.amplitudes
    norm = float(np.linalg.norm(amps))
    if norm <= 1e-12:
        raise ValueError("superposition has zero norm")
    return StateVector(config, amps / norm)


def thermal(config: ModeConfig, nbar: float) -> DensityMatrix:
    """Thermal state with mean photon number nbar (geometric weights)."""
    if not (math.isfinite(nbar) and nbar >= 0):
        raise ValueError(f"nbar must be finite and >= 0, got {nbar}")
    if nbar == 0:
        weights = np.zeros(config.dim)
        weights[0] = 1.0
    else:
        ratio = nbar / (1.0 + nbar)
        weights = (1.0 - ratio) * ratio ** np.arange(config.dim)
    _check_tail(weights, config.dim, "thermal state")
    weights = weights / weights.sum()
    return DensityMatrix(config, np.diag(weights).astype(complex))
