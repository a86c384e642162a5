"""Global minimization of functions on the unit sphere.

Two routes are provided: an elitist random-mutation evolutionary strategy, and
an exhaustive spherical grid with one local refinement pass used as an oracle.
Objectives are callables ``z -> float`` taking a :class:`BlochVector`; if the
objective also has ``evaluate_many(array of shape (m, 3))`` it is used to
score whole populations at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.spatial.transform import Rotation

from .bloch import BlochVector

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class OptimizerConfig:
    population: int = 16
    elites: int = 4
    mutation_sigma0: float = 0.5
    sigma_decay: float = 0.95
    generations: int = 80
    restarts: int = 4
    seed: int = 20140101

    def __post_init__(self):
        for name in ("population", "elites", "generations", "restarts"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not self.elites < self.population:
            raise ValueError("elites must be smaller than population")
        if not 0 < self.sigma_decay <= 1:
            raise ValueError("sigma_decay must lie in (0, 1]")
        if not self.mutation_sigma0 > 0:
            raise ValueError("mutation_sigma0 must be positive")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class GridConfig:
    n_theta: int = 91
    n_phi: int = 181

    def __post_init__(self):
        if self.n_theta < 2 or self.n_phi < 2:
            raise ValueError("grid needs n_theta >= 2 and n_phi >= 2")


def angles_to_vectors(theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.where(theta == math.pi, 0.0, np.sin(theta))  # sin(pi) is 1.2e-16 in floats
    v = np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def wrap_angles(theta, phi):
    """Fold arbitrary (theta, phi) back to theta in [0, pi], phi in [0, 2 pi)."""
    theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    phi = np.asarray(phi, dtype=float)
    over = theta > math.pi
    theta = np.where(over, TWO_PI - theta, theta)
    phi = np.where(over, phi + math.pi, phi)
    return theta, np.mod(phi, TWO_PI)


def _evaluate(objective: Callable, vectors: np.ndarray) -> np.ndarray:
    many = getattr(objective, "evaluate_many", None)
    if many is not None:
        return np.asarray(many(vectors), dtype=float)
    return np.array([float(objective(BlochVector.from_array(v, normalize=True))) for v in vectors])


def _stream(seed: int, *counters: int) -> np.random.Generator:
    # counter-based stream: identical (seed, counters) always yields identical draws
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *counters])))


def _result(vector, value) -> tuple[BlochVector, float]:
    return BlochVector.from_array(vector, normalize=True).canonical(), float(value)


def minimize_evolutionary(
    objective: Callable,
    cfg: Optional[OptimizerConfig] = None,
    history: Optional[list] = None,
) -> tuple[BlochVector, float]:
    """Minimize ``objective`` over the sphere with a (mu + lambda) strategy.

    Each restart works in its own randomly rotated frame so the polar
    singularity of the angle parametrization lands somewhere different.
    Elites survive unchanged; the rest of the population is refilled with
    elites whose angles receive Gaussian kicks of width ``sigma``, which
    shrinks geometrically every generation.

    If ``history`` is a list, one list of per-generation best values is
    appended to it for every restart.

    Returns the best ``(BlochVector, value)`` over all restarts, with the
    vector canonicalized to z3 >= 0.
    """
    cfg = cfg or OptimizerConfig()
    n_mut = cfg.population - cfg.elites
    best_v, best_f = None, math.inf
    for r in range(cfg.restarts):
        rng = _stream(cfg.seed, r, 0)
        frame = Rotation.random(random_state=rng).as_matrix()
        theta = np.arccos(1 - 2 * rng.random(cfg.population))
        phi = TWO_PI * rng.random(cfg.population)
        vals = _evaluate(objective, angles_to_vectors(theta, phi) @ frame.T)
        sigma = cfg.mutation_sigma0
        trace = [float(vals.min())]
        for gen in range(1, cfg.generations + 1):
            order = np.argsort(vals, kind="stable")[: cfg.elites]
            e_theta, e_phi, e_vals = theta[order], phi[order], vals[order]
            kicks = _stream(cfg.seed, r, gen).normal(0.0, sigma, size=(n_mut, 2))
            parent = np.arange(n_mut) % cfg.elites
            c_theta, c_phi = wrap_angles(e_theta[parent] + kicks[:, 0], e_phi[parent] + kicks[:, 1])
            c_vals = _evaluate(objective, angles_to_vectors(c_theta, c_phi) @ frame.T)
            theta = np.concatenate([e_theta, c_theta])
            phi = np.concatenate([e_phi, c_phi])
            vals = np.concatenate([e_vals, c_vals])
            sigma *= cfg.sigma_decay
            trace.append(float(vals.min()))
        i = int(np.argmin(vals))
        if history is not None:
            history.append(trace)
        if vals[i] < best_f:
            best_f = float(vals[i])
            best_v = angles_to_vectors(theta[i], phi[i]) @ frame.T
    return _result(best_v, best_f)


def sphere_grid(cfg: GridConfig) -> tuple[np.ndarray, np.ndarray]:
    """(theta, phi) grid with each pole appearing exactly once, north pole first."""
    thetas = np.linspace(0.0, math.pi, cfg.n_theta)
    phis = np.linspace(0.0, TWO_PI, cfg.n_phi, endpoint=False)
    inner_t, inner_p = np.meshgrid(thetas[1:-1], phis, indexing="ij")
    theta = np.concatenate([[0.0], inner_t.ravel(), [math.pi]])
    phi = np.concatenate([[0.0], inner_p.ravel(), [0.0]])
    return theta, phi


def minimize_grid(
    objective: Callable,
    cfg: Optional[GridConfig] = None,
    refine: bool = True,
) -> tuple[BlochVector, float]:
    """Exhaustive grid search, optionally followed by one 10x finer local pass."""
    cfg = cfg or GridConfig()
    theta, phi = sphere_grid(cfg)
    vals = _evaluate(objective, angles_to_vectors(theta, phi))
    i = int(np.argmin(vals))
    best_t, best_p, best_f = theta[i], phi[i], vals[i]
    if refine:
        dt = math.pi / (cfg.n_theta - 1)
        dp = TWO_PI / cfg.n_phi
        if best_t in (0.0, math.pi):
            # around a pole every azimuth is a neighbour
            ring = np.linspace(0.0, dt, 11)
            rt = ring if best_t == 0.0 else math.pi - ring
            rp = np.linspace(0.0, TWO_PI, cfg.n_phi, endpoint=False)
        else:
            rt = best_t + np.linspace(-dt, dt, 21)
            rp = best_p + np.linspace(-dp, dp, 21)
        gt, gp = np.meshgrid(rt, rp, indexing="ij")
        ft, fp = wrap_angles(gt.ravel(), gp.ravel())
        fvals = _evaluate(objective, angles_to_vectors(ft, fp))
        j = int(np.argmin(fvals))
        if fvals[j] < best_f:
            best_t, best_p, best_f = ft[j], fp[j], fvals[j]
    return _result(angles_to_vectors(best_t, best_p), best_f)
