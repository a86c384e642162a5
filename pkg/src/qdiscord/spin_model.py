"""Dipolar spin chain (subsystem A) coupled by zz terms to one impurity spin (B).

The impurity is always the last tensor factor.  Chain spin ``i`` occupies
factor ``i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .errors import (
    DegenerateGeometry,
    DimensionMismatch,
    IndexOutOfRange,
    InvariantViolation,
)

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

DEFAULT_G_REF = 3120.79
DEFAULT_D_REF = 2 * math.pi * 1000.0
# beta * omega_B = TEMPERATURE_SCALE / T, with T in kelvin
TEMPERATURE_SCALE = 0.015

STATE_TOL = 1e-10


def beta_omega_from_temperature(temperature_k: float) -> float:
    if not temperature_k > 0:
        raise ValueError(f"temperature must be positive, got {temperature_k}")
    return TEMPERATURE_SCALE / temperature_k


@dataclass(frozen=True)
class SystemSpec:
    """Physical description of chain + impurity.

    ``g_ref`` is the chain-impurity coupling at distance ``a``; ``d_ref`` the
    nearest-neighbour dipolar constant.  Both in s^-1.
    """

    n_chain: int = 2
    a: float = 1.0
    b: float = math.sqrt(0.75)
    beta_omega_A: float = 15.0
    beta_omega_B: float = 15.0
    g_ref: float = DEFAULT_G_REF
    d_ref: float = DEFAULT_D_REF

    def __post_init__(self):
        if int(self.n_chain) != self.n_chain or self.n_chain < 1:
            raise ValueError(f"n_chain must be a positive integer, got {self.n_chain}")
        if not self.a > 0:
            raise ValueError("a must be positive")
        if not self.b >= 0:
            raise ValueError("b must be non-negative")
        if not self.g_ref > 0:
            raise ValueError("g_ref must be positive")
        if not self.d_ref >= 0:
            raise ValueError("d_ref must be non-negative")
        for name in ("beta_omega_A", "beta_omega_B"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def n_total(self) -> int:
        return self.n_chain + 1

    @classmethod
    def from_ratio(cls, n_chain: int, b2_over_a2: float, a: float = 1.0, **kw) -> "SystemSpec":
        if b2_over_a2 < 0:
            raise ValueError("b^2/a^2 must be non-negative")
        return cls(n_chain=n_chain, a=a, b=a * math.sqrt(b2_over_a2), **kw)


@dataclass(frozen=True)
class Couplings:
    d: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        g = np.asarray(self.g, dtype=float).reshape(-1)
        if d.shape != (g.size, g.size):
            raise DimensionMismatch(f"d has shape {d.shape}, expected ({g.size}, {g.size})")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(g))):
            raise ValueError("couplings must be finite")
        if np.any(np.diag(d) != 0) or not np.array_equal(d, d.T):
            raise ValueError("d must be symmetric with zero diagonal")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "g", g)

    @property
    def n_chain(self) -> int:
        return self.g.size


@dataclass(frozen=True)
class DensityMatrix:
    """A density matrix together with its tensor-factor dimensions."""

    dims: tuple
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = linalg.as_matrix(self.mat)
        dims = tuple(int(d) for d in self.dims)
        if math.prod(dims) != mat.shape[0] or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"dims {dims} incompatible with matrix {mat.shape}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return linalg.hermitian_eigvals(self.mat)

    def check(self, tol: float = STATE_TOL) -> "DensityMatrix":
        """Raise InvariantViolation unless Hermitian, unit trace and positive."""
        herm = linalg.hermiticity_error(self.mat)
        if herm > tol:
            raise InvariantViolation(f"density matrix not Hermitian (error {herm:.3e})")
        tr = np.trace(self.mat)
        if abs(tr - 1) > tol:
            raise InvariantViolation(f"density matrix trace {tr:.12g} != 1")
        lo = self.eigenvalues[0]
        if lo < -tol:
            raise InvariantViolation(f"density matrix has eigenvalue {lo:.3e} < 0")
        return self

    def reduced(self, keep) -> "DensityMatrix":
        keep = sorted(set(keep))
        return DensityMatrix(tuple(self.dims[k] for k in keep),
                             linalg.partial_trace(self.mat, self.dims, keep))


def spin_operator(n_total: int, site: int, axis: str) -> np.ndarray:
    """Spin-1/2 projection ``sigma_axis / 2`` on ``site`` of an n-qubit register."""
    if not 0 <= site < n_total:
        raise IndexOutOfRange(f"site {site} outside 0..{n_total - 1}")
    try:
        s = PAULI[axis] / 2
    except KeyError:
        raise ValueError(f"axis must be one of x, y, z; got {axis!r}") from None
    left = np.eye(2 ** site, dtype=np.complex128)
    right = np.eye(2 ** (n_total - site - 1), dtype=np.complex128)
    return np.kron(np.kron(left, s), right)


def chain_positions(spec: SystemSpec) -> np.ndarray:
    i = np.arange(spec.n_chain)
    return (i - (spec.n_chain - 1) / 2) * spec.a


def couplings_from_geometry(spec: SystemSpec) -> Couplings:
    """Coupling constants for a straight chain with the impurity on its bisector.

    Chain spins sit at ``x_i = (i - (n - 1)/2) a``, the impurity at ``(0, b)``.
    Both couplings scale as the inverse cube of the distance; the angular
    factor is common to all pairs because every internuclear vector lies in
    the plane perpendicular to the field.
    """
    n = spec.n_chain
    i = np.arange(n)
    sep = np.abs(i[:, None] - i[None, :]).astype(float)
    d = np.zeros((n, n))
    off = sep > 0
    d[off] = spec.d_ref / sep[off] ** 3
    r = np.hypot(chain_positions(spec), spec.b)
    if np.any(r == 0):
        raise DegenerateGeometry("impurity coincides with a chain spin")
    g = spec.g_ref * (spec.a / r) ** 3
    return Couplings(d=d, g=g)


def hamiltonian_dz(couplings: Couplings, n_total: int) -> np.ndarray:
    """Secular dipolar Hamiltonian of the chain, identity on the impurity.

    ``sum_{i<j} d_ij (3 Iz_i Iz_j - I_i . I_j)``
    """
    n = couplings.n_chain
    if n != n_total - 1:
        raise DimensionMismatch(f"couplings for {n} chain spins, register has {n_total} qubits")
    dim = 2 ** n_total
    ops = {ax: [spin_operator(n_total, k, ax) for k in range(n)] for ax in "xyz"}
    h = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(n):
        for j in range(i + 1, n):
            dij = couplings.d[i, j]
            if dij == 0:
                continue
            zz = ops["z"][i] @ ops["z"][j]
            xx = ops["x"][i] @ ops["x"][j]
            yy = ops["y"][i] @ ops["y"][j]
            h += dij * (2 * zz - xx - yy)
    return h


def hamiltonian_zz(couplings: Couplings, n_total: int) -> np.ndarray:
    """``sum_i g_i Iz_i Sz``; diagonal in the computational basis."""
    n = couplings.n_chain
    if n != n_total - 1:
        raise DimensionMismatch(f"couplings for {n} chain spins, register has {n_total} qubits")
    # diagonal of Iz_k on an n_total-qubit register: +1/2 where bit k is 0
    idx = np.arange(2 ** n_total)
    half = lambda k: 0.5 - ((idx >> (n_total - 1 - k)) & 1)
    sz = half(n_total - 1)
    diag = sum(couplings.g[k] * half(k) for k in range(n)) * sz
    return np.diag(diag.astype(np.complex128))


def single_spin_state(beta_omega: float) -> np.ndarray:
    """``exp(beta_omega * sigma_x / 2) / Z`` for one spin."""
    p = math.tanh(beta_omega / 2)
    return 0.5 * (np.eye(2, dtype=np.complex128) + p * PAULI["x"])


def initial_state(spec: SystemSpec) -> DensityMatrix:
    """Thermal state after the 90-degree pulses: x-polarized product state."""
    factors = [single_spin_state(spec.beta_omega_A)] * spec.n_chain
    factors.append(single_spin_state(spec.beta_omega_B))
    return DensityMatrix((2,) * spec.n_total, linalg.kron_all(factors))


def evolve(rho0: DensityMatrix, h, t: float) -> DensityMatrix:
    h = linalg.as_matrix(h)
    if h.shape != rho0.mat.shape:
        raise DimensionMismatch(f"Hamiltonian {h.shape} vs state {rho0.mat.shape}")
    u = linalg.unitary_from_hermitian(h, t)
    return _conjugate(rho0, u)


def _conjugate(rho: DensityMatrix, u: np.ndarray) -> DensityMatrix:
    m = u @ rho.mat @ u.conj().T
    return DensityMatrix(rho.dims, 0.5 * (m + m.conj().T))


class ModelEvolution:
    """Time evolution of the pulsed initial state under ``H_dz + H_zz``.

    The Hamiltonian is diagonalized once so that sweeps over many time
    points cost one matrix conjugation each.
    """

    def __init__(self, spec: SystemSpec, dipolar: bool = True):
        self.spec = spec
        self.couplings = couplings_from_geometry(spec)
        n = spec.n_total
        h = hamiltonian_zz(self.couplings, n)
        if dipolar:
            h = h + hamiltonian_dz(self.couplings, n)
        self.hamiltonian = h
        self.rho0 = initial_state(spec)
        self._eig = linalg.hermitian_eig(h)
        v = self._eig.eigenvectors
        self._rho0_eigbasis = v.conj().T @ self.rho0.mat @ v

    def state(self, t: float) -> DensityMatrix:
        v = self._eig.eigenvectors
        ph = np.exp(-1j * t * self._eig.eigenvalues)
        m = (ph[:, None] * self._rho0_eigbasis) * ph.conj()[None, :]
        m = v @ m @ v.conj().T
        return DensityMatrix(self.rho0.dims, 0.5 * (m + m.conj().T))
