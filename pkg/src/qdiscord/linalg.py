"""Dense complex linear algebra for exact density-matrix simulation.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Factor 0 of a
tensor product is the leftmost Kronecker factor.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NotHermitian

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Sequence) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for f in factors:
        out = np.kron(out, as_matrix(f))
    return out


def hermiticity_error(h: np.ndarray) -> float:
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def check_hermitian(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"matrix is not square: {h.shape}")
    err = hermiticity_error(h)
    if err > tol:
        raise NotHermitian(f"max |h - h^dagger| = {err:.3e} exceeds {tol:.0e}")
    return h


def hermitian_eig(h) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises
    ------
    NotHermitian
        If ``max |h - h^dagger|`` exceeds 1e-10.
    """
    h = check_hermitian(h)
    # symmetrize so LAPACK sees an exactly Hermitian input
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return EigenDecomposition(w, v)


def hermitian_eigvals(h) -> np.ndarray:
    h = check_hermitian(h)
    return np.linalg.eigvalsh(0.5 * (h + h.conj().T))


def unitary_from_hermitian(h, theta: float) -> np.ndarray:
    """Return ``exp(-1j * theta * h)`` computed through the spectrum of ``h``."""
    eig = hermitian_eig(h)
    v = eig.eigenvectors
    phases = np.exp(-1j * theta * eig.eigenvalues)
    return (v * phases) @ v.conj().T


def _check_dims(n: int, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or prod(dims) != n:
        raise DimensionMismatch(f"factor dims {dims} do not multiply to {n}")
    return dims


def partial_trace(rho, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    Parameters
    ----------
    rho : (N, N) array
        Operator on the tensor product of factors with dimensions ``dims``.
    dims : sequence of int
        Factor dimensions, leftmost factor first.
    keep : iterable of int
        Indices of the factors to keep.  Their relative order in the output
        follows ``dims``, not the order given here.
    """
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"operator is not square: {rho.shape}")
    dims = _check_dims(rho.shape[0], dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise DimensionMismatch(f"keep={keep} is not a nonempty subset of 0..{len(dims) - 1}")
    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    # move traced row/column axes to the end, then contract them pairwise
    order = keep + [n + k for k in keep] + traced + [n + k for k in traced]
    t = t.transpose(order)
    dk = prod(dims[k] for k in keep)
    dt = prod(dims[k] for k in traced)
    t = t.reshape(dk, dk, dt, dt)
    return np.trace(t, axis1=2, axis2=3)
