"""Entropies, measurement ensembles on the impurity qubit, and discord.

All entropies are in bits.  Subsystem B is the last tensor factor and must be
a qubit; subsystem A is everything before it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import linalg
from .bloch import BlochVector
from .errors import DimensionMismatch, InvariantViolation
from .spin_model import PAULI, DensityMatrix

EIG_CLAMP_TOL = 1e-10
PROB_EPS = 1e-12
DISCORD_FLOOR = -1e-8

Minimizer = Callable[[Callable], tuple]


def entropy_from_eigenvalues(w) -> float:
    """``-sum w log2 w`` with ``0 log 0 = 0``; tiny negative values are clamped."""
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -EIG_CLAMP_TOL:
        raise InvariantViolation(f"eigenvalue {w.min():.3e} below -{EIG_CLAMP_TOL:.0e}")
    w = np.clip(w, 0.0, 1.0)
    nz = w[w > 0]
    return float(-np.sum(nz * np.log2(nz)))


def von_neumann_entropy(rho) -> float:
    m = rho.mat if isinstance(rho, DensityMatrix) else linalg.as_matrix(rho)
    return entropy_from_eigenvalues(linalg.hermitian_eigvals(m))


def _split_AB(rho: DensityMatrix) -> tuple[int, int]:
    if len(rho.dims) < 2:
        raise DimensionMismatch("need at least two tensor factors")
    if rho.dims[-1] != 2:
        raise DimensionMismatch(f"subsystem B must be a qubit, got dim {rho.dims[-1]}")
    return rho.dim // 2, 2


def subsystem_entropies(rho: DensityMatrix) -> tuple[float, float, float]:
    """Return ``(S(rho), S(rho_A), S(rho_B))``."""
    _split_AB(rho)
    nb = len(rho.dims) - 1
    s_ab = von_neumann_entropy(rho)
    s_a = von_neumann_entropy(rho.reduced(range(nb)))
    s_b = von_neumann_entropy(rho.reduced([nb]))
    return s_ab, s_a, s_b


def mutual_information(rho: DensityMatrix) -> float:
    s_ab, s_a, s_b = subsystem_entropies(rho)
    return s_a + s_b - s_ab


def measurement_projectors(z: BlochVector) -> tuple[np.ndarray, np.ndarray]:
    """Projectors ``(I + (-1)^k z.sigma) / 2`` for k = 0, 1."""
    if not isinstance(z, BlochVector):
        z = BlochVector.from_array(z)
    n = z.z1 * PAULI["x"] + z.z2 * PAULI["y"] + z.z3 * PAULI["z"]
    eye = np.eye(2, dtype=np.complex128)
    return 0.5 * (eye + n), 0.5 * (eye - n)


@dataclass(frozen=True)
class MeasurementEnsemble:
    """Outcome probabilities and post-measurement states of A.

    ``post_states[k]`` is None when ``p[k] <= 1e-12``.
    """

    p: tuple
    post_states: tuple


def measure_B(rho: DensityMatrix, z: BlochVector) -> MeasurementEnsemble:
    da, _ = _split_AB(rho)
    dims_a = rho.dims[:-1]
    eye_a = np.eye(da, dtype=np.complex128)
    probs, states = [], []
    for proj in measurement_projectors(z):
        big = np.kron(eye_a, proj)
        m = big @ rho.mat @ big
        p = float(np.real(np.trace(m)))
        probs.append(p)
        if p > PROB_EPS:
            sub = linalg.partial_trace(m, rho.dims, range(len(dims_a))) / p
            states.append(DensityMatrix(dims_a, 0.5 * (sub + sub.conj().T)))
        else:
            states.append(None)
    return MeasurementEnsemble(tuple(probs), tuple(states))


def conditional_entropy(rho: DensityMatrix, z: BlochVector) -> float:
    """Average entropy of A after measuring B along ``z``; reference path."""
    ens = measure_B(rho, z)
    return sum(p * von_neumann_entropy(s) for p, s in zip(ens.p, ens.post_states) if s is not None)


def _reflection_basis(n_qubits: int) -> Optional[tuple[np.ndarray, np.ndarray]]:
    """Orthonormal bases of the even and odd subspaces of qubit-order reversal."""
    if n_qubits < 2:
        return None
    dim = 2 ** n_qubits
    idx = np.arange(dim)
    rev = np.zeros_like(idx)
    for k in range(n_qubits):
        rev |= ((idx >> k) & 1) << (n_qubits - 1 - k)
    even, odd = [], []
    r2 = np.sqrt(0.5)
    for i in range(dim):
        j = rev[i]
        if j == i:
            v = np.zeros(dim)
            v[i] = 1.0
            even.append(v)
        elif i < j:
            v = np.zeros(dim)
            v[i], v[j] = r2, r2
            even.append(v)
            v = np.zeros(dim)
            v[i], v[j] = r2, -r2
            odd.append(v)
    return np.array(even).T, np.array(odd).T


class ConditionalEntropy:
    """Fast evaluator of ``z -> S(rho | {B_k(z)})`` for a fixed state.

    The B-measurement only enters through ``Tr_B[(I x sigma_a) rho]``, so the
    four A-operators are extracted once; each evaluation then costs two
    Hermitian eigenvalue problems on A.  When the state commutes with the
    reversal of the chain order those problems split into two blocks.
    """

    def __init__(self, rho: DensityMatrix, use_symmetry: bool = True):
        da, _ = _split_AB(rho)
        m = rho.mat.reshape(da, 2, da, 2)
        # blocks[s, s'] = <s|rho|s'> on A
        blk = m.transpose(1, 3, 0, 2)
        comps = [
            blk[0, 0] + blk[1, 1],          # identity
            blk[0, 1] + blk[1, 0],          # sigma_x
            1j * (blk[0, 1] - blk[1, 0]),   # sigma_y
            blk[0, 0] - blk[1, 1],          # sigma_z
        ]
        comps = [0.5 * (c + c.conj().T) for c in comps]
        self.bloch_B = np.array([np.real(np.trace(c)) for c in comps[1:]])
        self.rho_A = comps[0]
        self.symmetric = False
        blocks = [np.stack(comps)]
        n_a = len(rho.dims) - 1
        if use_symmetry and all(d == 2 for d in rho.dims[:-1]):
            basis = _reflection_basis(n_a)
            if basis is not None:
                even, odd = basis
                cross = max(np.max(np.abs(even.T @ c @ odd)) for c in comps)
                if cross <= 1e-12:
                    self.symmetric = True
                    blocks = [np.stack([q.T @ c @ q for c in comps]) for q in (even, odd)]
        self._blocks = blocks
        self.n_evaluations = 0

    def probabilities(self, z) -> tuple[float, float]:
        zr = float(np.dot(np.asarray(_as_vec(z)), self.bloch_B))
        return 0.5 * (1 + zr), 0.5 * (1 - zr)

    def __call__(self, z) -> float:
        return float(self.evaluate_many(np.asarray(_as_vec(z))[None, :])[0])

    def evaluate_many(self, zs) -> np.ndarray:
        zs = np.atleast_2d(np.asarray(zs, dtype=float))
        self.n_evaluations += len(zs)
        zr = zs @ self.bloch_B
        # p1 is formed like p0 so that z and -z give bitwise-identical results
        probs = np.stack([0.5 * (1 + zr), 0.5 * (1 - zr)], axis=1)
        total = np.zeros((len(zs), 2))
        for comp in self._blocks:
            ident, vec = comp[0], comp[1:]
            dirn = np.tensordot(zs, vec, axes=(1, 0))
            mats = 0.5 * np.stack([ident + dirn, ident - dirn], axis=1)
            w = np.linalg.eigvalsh(mats)
            if w.min() < -EIG_CLAMP_TOL:
                raise InvariantViolation(f"post-measurement eigenvalue {w.min():.3e} < 0")
            w = np.clip(w, 0.0, None)
            with np.errstate(divide="ignore", invalid="ignore"):
                total += -np.sum(np.where(w > 0, w * np.log2(w), 0.0), axis=2)
        # p S(sigma / p) = -sum w log w + p log p
        with np.errstate(divide="ignore", invalid="ignore"):
            plogp = np.where(probs > PROB_EPS, probs * np.log2(np.where(probs > 0, probs, 1)), 0.0)
        total = np.where(probs > PROB_EPS, total + plogp, 0.0)
        return total.sum(axis=1)


def _as_vec(z):
    if isinstance(z, BlochVector):
        return z.as_array()
    return np.asarray(z, dtype=float).reshape(3)


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    mutual_information: float
    min_conditional_entropy: float
    argmin: BlochVector
    p0_at_argmin: float
    entropy_total: float
    entropy_A: float
    entropy_B: float

    @property
    def classical_correlation(self) -> float:
        return self.entropy_A - self.min_conditional_entropy


def discord(rho: DensityMatrix, minimizer: Optional[Minimizer] = None) -> DiscordResult:
    """Discord with projective measurements on the impurity qubit.

    Parameters
    ----------
    rho : DensityMatrix
        Joint state, B last.
    minimizer : callable, optional
        Maps an objective ``z -> bits`` to ``(BlochVector, value)``.  Defaults
        to :func:`qdiscord.optimizer.minimize_evolutionary` with its default
        configuration.
    """
    if minimizer is None:
        from .optimizer import minimize_evolutionary
        minimizer = minimize_evolutionary
    s_ab, s_a, s_b = subsystem_entropies(rho)
    objective = ConditionalEntropy(rho)
    z, cmin = minimizer(objective)
    z = BlochVector.from_array(_as_vec(z), normalize=True)
    mi = s_a + s_b - s_ab
    d = mi - (s_a - cmin)
    if d < DISCORD_FLOOR:
        raise InvariantViolation(f"negative discord {d:.3e}")
    return DiscordResult(
        discord=d,
        mutual_information=mi,
        min_conditional_entropy=float(cmin),
        argmin=z,
        p0_at_argmin=objective.probabilities(z)[0],
        entropy_total=s_ab,
        entropy_A=s_a,
        entropy_B=s_b,
    )
