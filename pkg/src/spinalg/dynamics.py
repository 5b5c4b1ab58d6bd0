"""Real-form Liouville-von Neumann dynamics for one and two qudits.

One qudit of spin S is written as

    rho = R_a C_a / ((2S+1) sqrt(S(S+1)/3)),   H = h_a C_a / 2,   R_0 = 1,

and two qudits as

    rho = R_ab C_a (x) C_b / (d1 d2 s1 s2),     H = h_ab C_a (x) C_b / 2,   R_00 = 1,

with ``s = sqrt(S(S+1)/3)``. The coefficients obey closed real linear ODEs
whose right-hand sides contract the structure constant tables; see
:func:`deriv_one_qudit` and :func:`deriv_two_qudit`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .errors import ConsistencyError, DomainError
from .exact import HalfInt
from .spinbasis import BasisSet
from .structconst import StructureTables

__all__ = [
    "BlochState1",
    "BlochState2",
    "HamiltonianCoeffs",
    "Trajectory",
    "IntegrationError",
    "density_to_bloch",
    "bloch_to_density",
    "density_to_bloch2",
    "bloch_to_density2",
    "deriv_one_qudit",
    "deriv_two_qudit",
    "integrate",
    "bloch_length",
    "decompose_hamiltonian",
    "reconstruct_hamiltonian",
    "oracle_evolve",
    "oracle_trajectory",
]

_TRACE_TOL = 1e-9
_HERM_TOL = 1e-9


class IntegrationError(ConsistencyError):
    pass


def _s_factor(spin: HalfInt) -> float:
    s = float(spin)
    return math.sqrt(s * (s + 1) / 3)


@dataclass
class BlochState1:
    """Generalized Bloch vector of one qudit; ``R[0] == 1``."""

    spin: HalfInt
    R: np.ndarray

    def __post_init__(self):
        self.R = np.asarray(self.R, dtype=np.float64)


@dataclass
class BlochState2:
    """Coefficient matrix of two qudits; ``R[0, 0] == 1``."""

    spins: tuple[HalfInt, HalfInt]
    R: np.ndarray

    def __post_init__(self):
        self.R = np.asarray(self.R, dtype=np.float64)


@dataclass
class HamiltonianCoeffs:
    """Real expansion coefficients of H (angular-frequency units).

    A vector ``h`` for one qudit (``H = h_b C_b / 2``) or a matrix for two
    (``H = h_ab C_a (x) C_b / 2``).
    """

    spins: tuple[HalfInt, ...]
    h: np.ndarray

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=np.float64)


@dataclass
class Trajectory:
    """Uniformly sampled solution: ``states[i]`` is the state at ``times[i]``."""

    spins: tuple[HalfInt, ...]
    dt: float
    times: np.ndarray
    states: np.ndarray
    lengths: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def steps(self) -> int:
        return len(self.times) - 1

    def state(self, i: int) -> BlochState1 | BlochState2:
        if len(self.spins) == 1:
            return BlochState1(self.spins[0], self.states[i])
        return BlochState2(self.spins, self.states[i])


def _check_density(rho: np.ndarray, dim: int) -> None:
    if rho.shape != (dim, dim):
        raise DomainError(f"density matrix shape {rho.shape} does not match dimension {dim}")
    tr = np.trace(rho)
    if abs(tr - 1) > _TRACE_TOL:
        raise DomainError(f"density matrix trace {tr} is not 1")


def density_to_bloch(rho, basis: BasisSet) -> BlochState1:
    """R_a = Tr(rho C_a) / sqrt(S(S+1)/3)."""
    rho = np.asarray(rho, dtype=np.complex128)
    _check_density(rho, basis.dim)
    tr = np.einsum("ab,kba->k", rho, basis.matrices)
    return BlochState1(basis.spin, tr.real / _s_factor(basis.spin))


def bloch_to_density(state: BlochState1 | np.ndarray, basis: BasisSet) -> np.ndarray:
    R = state.R if isinstance(state, BlochState1) else np.asarray(state, dtype=np.float64)
    rho = np.tensordot(R, basis.matrices, axes=1)
    return rho / (basis.dim * _s_factor(basis.spin))


def density_to_bloch2(rho, b1: BasisSet, b2: BasisSet) -> BlochState2:
    """R_ab = Tr(rho C_a (x) C_b) / (s1 s2)."""
    rho = np.asarray(rho, dtype=np.complex128)
    d1, d2 = b1.dim, b2.dim
    _check_density(rho, d1 * d2)
    r4 = rho.reshape(d1, d2, d1, d2)
    # Tr(rho A(x)B) = sum rho[(a,c),(b,e)] A[b,a] B[e,c]
    tr = np.einsum("acbe,xba,yec->xy", r4, b1.matrices, b2.matrices, optimize=True)
    return BlochState2((b1.spin, b2.spin), tr.real / (_s_factor(b1.spin) * _s_factor(b2.spin)))


def bloch_to_density2(state: BlochState2 | np.ndarray, b1: BasisSet, b2: BasisSet) -> np.ndarray:
    R = state.R if isinstance(state, BlochState2) else np.asarray(state, dtype=np.float64)
    d1, d2 = b1.dim, b2.dim
    rho = np.einsum("xy,xab,yce->acbe", R, b1.matrices, b2.matrices, optimize=True)
    norm = d1 * d2 * _s_factor(b1.spin) * _s_factor(b2.spin)
    return rho.reshape(d1 * d2, d1 * d2) / norm


def deriv_one_qudit(state: BlochState1 | np.ndarray, h: HamiltonianCoeffs | np.ndarray,
                    tables: StructureTables) -> np.ndarray:
    """dR_l/dt = sum_ij e_ijl h_i R_j (traceless i, j, l; dR_0 = 0)."""
    if isinstance(state, BlochState1):
        if state.spin != tables.spin:
            raise DomainError(f"state spin {state.spin} does not match tables spin {tables.spin}")
        R = state.R
    else:
        R = np.asarray(state, dtype=np.float64)
    hv = h.h if isinstance(h, HamiltonianCoeffs) else np.asarray(h, dtype=np.float64)
    m = tables.n + 1
    if R.shape != (m,) or hv.shape != (m,):
        raise DomainError(f"expected vectors of length {m}")
    return _kernels.backend().one_qudit_rhs(tables.packed(), hv, R)


def deriv_two_qudit(state: BlochState2 | np.ndarray, h: HamiltonianCoeffs | np.ndarray,
                    t1: StructureTables, t2: StructureTables) -> np.ndarray:
    """Derivative of R_ab for two coupled qudits.

    dR_m0 = s2 e1_pim (h_p0 R_i0 + h_pl R_il)
    dR_0m = s1 e2_pim (h_0p R_0i + h_lp R_li)
    dR_mn = e1_pim [s2 (h_pn R_i0 + h_p0 R_in) + g2_rln h_pr R_il]
          + e2_pin [s1 (h_mp R_0i + h_0p R_mi) + g1_rlm h_rp R_li]

    Latin indices run over traceless elements only; dR_00 = 0.
    """
    if isinstance(state, BlochState2):
        if tuple(state.spins) != (t1.spin, t2.spin):
            raise DomainError("state spins do not match the structure tables")
        R = state.R
    else:
        R = np.asarray(state, dtype=np.float64)
    hm = h.h if isinstance(h, HamiltonianCoeffs) else np.asarray(h, dtype=np.float64)
    shape = (t1.n + 1, t2.n + 1)
    if R.shape != shape or hm.shape != shape:
        raise DomainError(f"expected {shape} arrays, got R {R.shape}, h {hm.shape}")
    return _kernels.backend().two_qudit_rhs(
        t1.packed(), t2.packed(), hm, R, _s_factor(t1.spin), _s_factor(t2.spin))


def bloch_length(state) -> float:
    """Euclidean norm of all traceless components (the (0) / (0,0) entry excluded)."""
    R = state.R if isinstance(state, (BlochState1, BlochState2)) else np.asarray(state)
    if R.ndim == 1:
        return float(np.sqrt(np.sum(R[1:] ** 2)))
    return float(np.sqrt(np.sum(R ** 2) - R[0, 0] ** 2))


def _lengths(states: np.ndarray) -> np.ndarray:
    if states.ndim == 2:
        return np.sqrt(np.sum(states[:, 1:] ** 2, axis=1))
    return np.sqrt(np.sum(states ** 2, axis=(1, 2)) - states[:, 0, 0] ** 2)


def integrate(deriv: Callable[[np.ndarray], np.ndarray], state0, dt: float, steps: int) -> Trajectory:
    """Classical fixed-step RK4 for the autonomous system ``dR/dt = deriv(R)``."""
    if not dt > 0:
        raise DomainError("dt must be positive")
    if steps < 1:
        raise DomainError("steps must be at least 1")
    if isinstance(state0, BlochState1):
        spins = (state0.spin,)
    elif isinstance(state0, BlochState2):
        spins = tuple(state0.spins)
    else:
        spins = ()
    y = np.array(state0.R if spins else state0, dtype=np.float64)
    out = np.empty((steps + 1,) + y.shape)
    out[0] = y
    half = 0.5 * dt
    for n in range(1, steps + 1):
        k1 = deriv(y)
        k2 = deriv(y + half * k1)
        k3 = deriv(y + half * k2)
        k4 = deriv(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise IntegrationError(f"non-finite state at step {n} (t = {n * dt:g}); "
                                   "reduce dt or check the Hamiltonian scale")
        out[n] = y
    times = dt * np.arange(steps + 1)
    return Trajectory(spins, dt, times, out, _lengths(out))


def _check_hermitian(H: np.ndarray) -> None:
    if np.abs(H - H.conj().T).max() > _HERM_TOL:
        raise DomainError("Hamiltonian is not Hermitian")


def decompose_hamiltonian(H, basis: BasisSet | tuple[BasisSet, BasisSet]) -> HamiltonianCoeffs:
    """Coefficients h with H = h_b C_b / 2 (or h_ab C_a (x) C_b / 2)."""
    H = np.asarray(H, dtype=np.complex128)
    _check_hermitian(H)
    if isinstance(basis, BasisSet):
        if H.shape != (basis.dim, basis.dim):
            raise DomainError("Hamiltonian dimension does not match the basis")
        tr = np.einsum("ab,kba->k", H, basis.matrices)
        return HamiltonianCoeffs((basis.spin,), 2 * tr.real / basis.norm)
    b1, b2 = basis
    d1, d2 = b1.dim, b2.dim
    if H.shape != (d1 * d2, d1 * d2):
        raise DomainError("Hamiltonian dimension does not match the bases")
    h4 = H.reshape(d1, d2, d1, d2)
    tr = np.einsum("acbe,xba,yec->xy", h4, b1.matrices, b2.matrices, optimize=True)
    return HamiltonianCoeffs((b1.spin, b2.spin), 2 * tr.real / (b1.norm * b2.norm))


def reconstruct_hamiltonian(coeffs: HamiltonianCoeffs | np.ndarray,
                            basis: BasisSet | tuple[BasisSet, BasisSet]) -> np.ndarray:
    h = coeffs.h if isinstance(coeffs, HamiltonianCoeffs) else np.asarray(coeffs, dtype=np.float64)
    if isinstance(basis, BasisSet):
        return 0.5 * np.tensordot(h, basis.matrices, axes=1)
    b1, b2 = basis
    d1, d2 = b1.dim, b2.dim
    H = np.einsum("xy,xab,yce->acbe", h, b1.matrices, b2.matrices, optimize=True)
    return 0.5 * H.reshape(d1 * d2, d1 * d2)


def _propagator_parts(H):
    H = np.asarray(H, dtype=np.complex128)
    _check_hermitian(H)
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise ConsistencyError(f"eigendecomposition failed: {exc}") from exc
    return w, V


def oracle_evolve(rho0, H, t: float) -> np.ndarray:
    """rho(t) = U rho0 U^dagger with U = exp(-iHt) from the eigendecomposition of H."""
    w, V = _propagator_parts(H)
    U = (V * np.exp(-1j * w * t)) @ V.conj().T
    return U @ np.asarray(rho0, dtype=np.complex128) @ U.conj().T


def oracle_trajectory(rho0, H, times) -> np.ndarray:
    """oracle_evolve at each time; shape (len(times), d, d)."""
    w, V = _propagator_parts(H)
    Vh = V.conj().T
    r = Vh @ np.asarray(rho0, dtype=np.complex128) @ V
    times = np.asarray(times, dtype=np.float64)
    phase = np.exp(-1j * np.subtract.outer(w, w)[None, :, :] * times[:, None, None])
    return V[None] @ (phase * r[None]) @ Vh[None]
