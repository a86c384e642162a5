from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotNormalized

NORM_TOL = 1e-12


@dataclass(frozen=True)
class BlochVector:
    """Unit vector ``(z1, z2, z3)`` selecting a projective measurement on a qubit."""

    z1: float
    z2: float
    z3: float

    def __post_init__(self):
        n2 = self.z1 ** 2 + self.z2 ** 2 + self.z3 ** 2
        if not abs(n2 - 1) <= NORM_TOL:
            raise NotNormalized(f"|z|^2 = {n2!r}, expected 1")

    @classmethod
    def from_array(cls, v, normalize: bool = False) -> "BlochVector":
        v = np.asarray(v, dtype=float).reshape(3)
        if normalize:
            v = v / np.linalg.norm(v)
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "BlochVector":
        st = math.sin(theta)
        return cls.from_array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)], normalize=True)

    def as_array(self) -> np.ndarray:
        return np.array([self.z1, self.z2, self.z3])

    def __neg__(self) -> "BlochVector":
        return BlochVector(-self.z1, -self.z2, -self.z3)

    def canonical(self) -> "BlochVector":
        """Representative of ``{z, -z}`` with z3 >= 0, then z1 >= 0, then z2 >= 0."""
        for c in (self.z3, self.z1, self.z2):
            if c != 0:
                return self if c > 0 else -self
        return self
