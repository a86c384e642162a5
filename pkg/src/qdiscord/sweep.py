"""Time sweeps of the discord and simple analyses of the resulting curves."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import least_squares, minimize_scalar
from scipy.signal import argrelextrema

from . import analytic3q
from .errors import InvariantViolation
from .optimizer import OptimizerConfig, minimize_evolutionary
from .qinfo import DiscordResult, discord
from .spin_model import ModelEvolution, SystemSpec


@dataclass(frozen=True)
class SweepPoint:
    t: float
    result: DiscordResult


def discord_at(evolution: ModelEvolution, t: float, cfg: Optional[OptimizerConfig] = None) -> DiscordResult:
    """Numeric discord of the model at time ``t``; invariant failures name ``t``."""
    try:
        rho = evolution.state(t).check()
        return discord(rho, partial(minimize_evolutionary, cfg=cfg or OptimizerConfig()))
    except InvariantViolation as exc:
        raise InvariantViolation(f"t = {t!r} s: {exc}") from exc


def _chunk(spec: SystemSpec, times, cfg, dipolar) -> list[DiscordResult]:
    ev = ModelEvolution(spec, dipolar=dipolar)
    return [discord_at(ev, t, cfg) for t in times]


def discord_series(
    spec: SystemSpec,
    times: Sequence[float],
    cfg: Optional[OptimizerConfig] = None,
    workers: int = 1,
    dipolar: bool = True,
) -> list[SweepPoint]:
    """Numeric discord at each time, returned in input order.

    With ``workers > 1`` contiguous blocks of times go to separate processes;
    each point uses the same optimizer seed, so the output does not depend on
    the number of workers.
    """
    times = [float(t) for t in times]
    if workers <= 1 or len(times) < 2:
        results = _chunk(spec, times, cfg, dipolar)
    else:
        blocks = [list(b) for b in np.array_split(np.array(times), min(workers, len(times)))]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_chunk, [spec] * len(blocks), blocks, [cfg] * len(blocks), [dipolar] * len(blocks))
            results = [r for part in parts for r in part]
    return [SweepPoint(t, r) for t, r in zip(times, results)]


def local_maxima(values, min_prominence: float = 1e-3) -> np.ndarray:
    """Indices of strict interior local maxima rising ``min_prominence`` above both neighbours' valleys."""
    v = np.asarray(values, dtype=float)
    idx = argrelextrema(v, np.greater)[0]
    keep = []
    for i in idx:
        left = v[: i + 1].min() if not keep else v[keep[-1]: i + 1].min()
        right = v[i:].min()
        if v[i] - max(left, right) >= min_prominence:
            keep.append(i)
    return np.array(keep, dtype=int)


def first_return_time(func, times: Sequence[float], values: Sequence[float]) -> float:
    """Time of the first minimum after the first maximum of a sampled curve.

    The sampled minimum is polished with a bounded scalar search on ``func``.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    peaks = local_maxima(v)
    if peaks.size == 0:
        raise ValueError("curve has no interior maximum")
    j = peaks[0] + 1
    while j < len(v) - 1 and v[j + 1] < v[j]:
        j += 1
    lo, hi = t[j - 1], t[min(j + 1, len(t) - 1)]
    res = minimize_scalar(func, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10 * (hi - lo)})
    return float(res.x)


def fit_single_frequency(times, values) -> tuple[float, float, float]:
    """Best fit of the 3-qubit closed form with free ``(beta_omega_B, g)``.

    Returns ``(beta_omega_B, g, max_abs_residual)``.  Starting frequencies are
    taken from the strongest periodogram lines.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    span = t[-1] - t[0]
    spec = np.abs(np.fft.rfft(v - v.mean()))
    freqs = np.fft.rfftfreq(t.size, d=span / max(t.size - 1, 1))
    # discord oscillates at g / (2 pi): cos^2(g t / 2) has angular frequency g
    starts = [2 * math.pi * freqs[k] for k in np.argsort(spec[1:])[::-1][:5] + 1]
    vmax = float(np.clip(v.max(), 1e-6, 1.0 - 1e-9))
    # invert the peak height for the initial temperature guess
    u0 = max(_peak_to_u(vmax), 1e-3)
    best = None
    for g0 in starts:
        fit = least_squares(
            lambda p: analytic3q.discord_analytic(p[0], p[1], t) - v,
            x0=[2 * u0, g0],
            bounds=([1e-6, 1e-9], [np.inf, np.inf]),
            xtol=1e-15, ftol=1e-15, gtol=1e-15,
        )
        r = float(np.max(np.abs(fit.fun)))
        if best is None or r < best[2]:
            best = (float(fit.x[0]), float(fit.x[1]), r)
    return best


def _peak_to_u(peak_bits: float) -> float:
    f = lambda u: (u * math.tanh(u) - float(analytic3q.log_cosh(u))) / math.log(2) - peak_bits
    lo, hi = 1e-6, 1.0
    while f(hi) < 0 and hi < 1e3:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if f(mid) < 0 else (lo, mid)
    return 0.5 * (lo + hi)
