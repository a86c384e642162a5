"""Closed-form entropies and discord for two chain spins plus the impurity.

Every function accepts scalars or numpy arrays.  Results are in bits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

LN2 = np.log(2.0)


@dataclass(frozen=True)
class Analytic3qInputs:
    beta_omega_A: float
    beta_omega_B: float
    g: float
    t: float

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError("g must be positive")
        if not self.t >= 0:
            raise ValueError("t must be non-negative")


def log_cosh(u):
    """``ln cosh u`` without overflow for large ``|u|``."""
    u = np.abs(np.asarray(u, dtype=float))
    return u + np.log1p(np.exp(-2 * u)) - LN2


def _binary_term(x):
    # (1+x) ln(1+x) + (1-x) ln(1-x)
    return xlogy(1 + x, 1 + x) + xlogy(1 - x, 1 - x)


def polarization_B(beta_omega_B, g, t):
    """``tanh(bw_B/2) cos^2(g t/2)``: twice the x-component of the impurity spin."""
    return np.tanh(np.asarray(beta_omega_B, dtype=float) / 2) * np.cos(np.asarray(g) * np.asarray(t) / 2) ** 2


def entropy_total(beta_omega_A, beta_omega_B):
    a = np.asarray(beta_omega_A, dtype=float)
    b = np.asarray(beta_omega_B, dtype=float)
    return (3 + 2 * log_cosh(a / 2) / LN2 + log_cosh(b / 2) / LN2
            - a * np.tanh(a / 2) / LN2 - b * np.tanh(b / 2) / (2 * LN2))


def entropy_A0(beta_omega_A):
    a = np.asarray(beta_omega_A, dtype=float)
    return 2 + 2 * log_cosh(a / 2) / LN2 - a * np.tanh(a / 2) / LN2


def entropy_B(beta_omega_B, g, t):
    x = polarization_B(beta_omega_B, g, t)
    return 1 - _binary_term(x) / (2 * LN2)


def discord_analytic(beta_omega_B, g, t):
    """Discord of the 3-qubit model; independent of bw_A and the dipolar constants."""
    u = np.asarray(beta_omega_B, dtype=float) / 2
    x = polarization_B(beta_omega_B, g, t)
    return -_binary_term(x) / (2 * LN2) - log_cosh(u) / LN2 + u * np.tanh(u) / LN2


def discord_from_inputs(inp: Analytic3qInputs) -> float:
    return float(discord_analytic(inp.beta_omega_B, inp.g, inp.t))
