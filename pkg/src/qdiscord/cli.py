"""Command-line scenario runner writing CSV tables of discord vs time."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import analytic3q
from .errors import ConfigError, DegenerateGeometry, InvariantViolation
from .optimizer import GridConfig, OptimizerConfig, sphere_grid, angles_to_vectors
from .qinfo import ConditionalEntropy
from .spin_model import (
    DEFAULT_D_REF,
    DEFAULT_G_REF,
    ModelEvolution,
    SystemSpec,
    beta_omega_from_temperature,
    couplings_from_geometry,
)
from .sweep import discord_series

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

NUMERIC_COLUMNS = [
    "t_s", "t_ms", "discord_bits", "mutual_info_bits", "min_cond_entropy_bits",
    "z1", "z2", "z3", "p0", "entropy_total_bits", "entropy_A_bits", "entropy_B_bits",
]
ANALYTIC_COLUMNS = ["t_s", "t_ms", "discord_analytic_bits", "entropy_total_bits", "entropy_A0_bits", "entropy_B_bits"]
BOTH_EXTRA = ["discord_analytic_bits", "abs_diff_bits"]
SURFACE_COLUMNS = ["z1", "z2", "z3", "theta", "phi", "cond_entropy_bits", "is_min"]
MODES = ("analytic", "numeric", "both")


def fmt(x) -> str:
    return f"{float(x):.12g}"


@dataclass
class Scenario:
    n_chain: int = 2
    b2_over_a2: float = 0.75
    temperature: float = 0.001
    t_start: float = 0.0
    t_end: float = 2 * math.pi / DEFAULT_G_REF
    t_steps: int = 50
    mode: str = "both"
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    output_path: str = "discord.csv"
    beta_omega_a: Optional[float] = None
    beta_omega_b: Optional[float] = None
    d_ref: float = DEFAULT_D_REF
    g_ref: float = DEFAULT_G_REF
    workers: int = 1

    def validate(self) -> "Scenario":
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.t_steps < 1:
            raise ConfigError("t_steps must be >= 1")
        if not self.t_end >= self.t_start >= 0:
            raise ConfigError("need t_end >= t_start >= 0")
        if self.mode == "analytic" and self.n_chain != 2:
            raise ConfigError("analytic mode needs n_chain = 2")
        if self.beta_omega_b is None and not self.temperature > 0:
            raise ConfigError("temperature must be positive")
        if self.n_chain > 9:
            raise ConfigError("n_chain above 9 exceeds the dense-matrix limit")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        try:
            self.system_spec()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return self

    @property
    def beta_omega_B(self) -> float:
        if self.beta_omega_b is not None:
            return self.beta_omega_b
        return beta_omega_from_temperature(self.temperature)

    def system_spec(self) -> SystemSpec:
        bw_b = self.beta_omega_B
        bw_a = bw_b if self.beta_omega_a is None else self.beta_omega_a
        return SystemSpec.from_ratio(
            self.n_chain, self.b2_over_a2,
            beta_omega_A=bw_a, beta_omega_B=bw_b, g_ref=self.g_ref, d_ref=self.d_ref,
        )

    def times(self) -> np.ndarray:
        if self.t_steps == 1:
            return np.array([self.t_start])
        return np.linspace(self.t_start, self.t_end, self.t_steps)


def _write_csv(path, header, rows) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def run_scenario(s: Scenario) -> dict:
    """Sweep time, write the CSV, and return a summary record."""
    s.validate()
    spec = s.system_spec()
    times = s.times()
    started = time.perf_counter()
    summary = {"output_path": str(s.output_path), "rows": len(times), "mode": s.mode}

    analytic = None
    if s.mode in ("analytic", "both") or s.n_chain == 2:
        g = float(couplings_from_geometry(spec).g[0])
        analytic = np.asarray(analytic3q.discord_analytic(spec.beta_omega_B, g, times), dtype=float)
        analytic = analytic.reshape(times.shape)

    if s.mode == "analytic":
        s_tot = analytic3q.entropy_total(spec.beta_omega_A, spec.beta_omega_B)
        s_a0 = analytic3q.entropy_A0(spec.beta_omega_A)
        s_b = analytic3q.entropy_B(spec.beta_omega_B, g, times)
        rows = [[fmt(t), fmt(t * 1e3), fmt(d), fmt(s_tot), fmt(s_a0), fmt(sb)]
                for t, d, sb in zip(times, analytic, np.broadcast_to(s_b, times.shape))]
        _write_csv(s.output_path, ANALYTIC_COLUMNS, rows)
        summary["max_discord_bits"] = float(np.max(analytic))
    else:
        points = discord_series(spec, times, s.optimizer, workers=s.workers)
        header = NUMERIC_COLUMNS + (BOTH_EXTRA if s.mode == "both" else [])
        rows, diffs = [], []
        for i, pt in enumerate(points):
            r = pt.result
            row = [
                fmt(pt.t), fmt(pt.t * 1e3), fmt(r.discord), fmt(r.mutual_information),
                fmt(r.min_conditional_entropy), fmt(r.argmin.z1), fmt(r.argmin.z2), fmt(r.argmin.z3),
                fmt(r.p0_at_argmin), fmt(r.entropy_total), fmt(r.entropy_A), fmt(r.entropy_B),
            ]
            if s.mode == "both":
                diff = abs(r.discord - analytic[i])
                diffs.append(diff)
                row += [fmt(analytic[i]), fmt(diff)]
            rows.append(row)
        _write_csv(s.output_path, header, rows)
        summary["max_discord_bits"] = max(p.result.discord for p in points)
        if diffs:
            summary["max_abs_diff_bits"] = max(diffs)
    summary["seconds"] = time.perf_counter() - started
    return summary


def run_fig2_surface(t: float, resolution: GridConfig, s: Scenario) -> dict:
    """Conditional entropy over the z2 >= 0 hemisphere of measurement directions."""
    s.validate()
    if s.n_chain != 2:
        raise ConfigError("the surface scan is defined for n_chain = 2")
    ev = ModelEvolution(s.system_spec())
    obj = ConditionalEntropy(ev.state(t).check())
    thetas = np.linspace(0.0, math.pi, resolution.n_theta)
    phis = np.linspace(0.0, math.pi, resolution.n_phi)
    tt, pp = np.meshgrid(thetas[1:-1], phis, indexing="ij")
    theta = np.concatenate([[0.0], tt.ravel(), [math.pi]])
    phi = np.concatenate([[0.0], pp.ravel(), [0.0]])
    z = angles_to_vectors(theta, phi)
    z[:, 1] = np.abs(z[:, 1])
    vals = obj.evaluate_many(z)
    i_min = int(np.argmin(vals))
    rows = [[fmt(v[0]), fmt(v[1]), fmt(v[2]), fmt(th), fmt(ph), fmt(f), int(k == i_min)]
            for k, (v, th, ph, f) in enumerate(zip(z, theta, phi, vals))]
    _write_csv(s.output_path, SURFACE_COLUMNS, rows)
    zm = z[i_min]
    return {"output_path": str(s.output_path), "rows": len(rows), "min_cond_entropy_bits": float(vals[i_min]),
            "argmin": (float(zm[0]), float(zm[1]), float(zm[2]))}


_OPT_KEYS = {f.name for f in dataclasses.fields(OptimizerConfig)}
_SCENARIO_TYPES = {
    "n_chain": int, "b2_over_a2": float, "temperature": float, "t_start": float, "t_end": float,
    "t_steps": int, "mode": str, "output_path": str, "beta_omega_a": float, "beta_omega_b": float,
    "d_ref": float, "g_ref": float, "workers": int,
}
_OPT_TYPES = {"population": int, "elites": int, "mutation_sigma0": float, "sigma_decay": float,
              "generations": int, "restarts": int, "seed": int}


def read_config(path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _SCENARIO_TYPES and key not in _OPT_TYPES:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        conv = _SCENARIO_TYPES.get(key) or _OPT_TYPES[key]
        try:
            out[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{n}: bad value for {key}: {value!r}") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qdiscord", description=__doc__)
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--n-chain", type=int, dest="n_chain")
    p.add_argument("--b2-over-a2", type=float, dest="b2_over_a2")
    p.add_argument("--temperature-k", type=float, dest="temperature")
    p.add_argument("--t-start-ms", type=float, dest="t_start_ms")
    p.add_argument("--t-end-ms", type=float, dest="t_end_ms")
    p.add_argument("--t-steps", type=int, dest="t_steps")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", dest="output_path")
    p.add_argument("--fig2", action="store_true", help="write the conditional-entropy surface at t-start instead")
    p.add_argument("--d-ref", type=float, dest="d_ref")
    p.add_argument("--g-ref", type=float, dest="g_ref")
    p.add_argument("--beta-omega-a", type=float, dest="beta_omega_a")
    p.add_argument("--beta-omega-b", type=float, dest="beta_omega_b")
    p.add_argument("--workers", type=int)
    return p


def scenario_from_args(args: argparse.Namespace) -> Scenario:
    values = read_config(args.config) if args.config else {}
    flags = {k: v for k, v in vars(args).items() if v is not None and k not in ("config", "fig2")}
    if "t_start_ms" in flags:
        flags["t_start"] = flags.pop("t_start_ms") * 1e-3
    if "t_end_ms" in flags:
        flags["t_end"] = flags.pop("t_end_ms") * 1e-3
    values.update(flags)
    opt = {k: values.pop(k) for k in list(values) if k in _OPT_KEYS}
    try:
        optimizer = OptimizerConfig(**opt)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if "mode" not in values and values.get("n_chain", 2) != 2:
        values["mode"] = "numeric"
    return Scenario(optimizer=optimizer, **values).validate()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        s = scenario_from_args(args)
        if args.fig2:
            summary = run_fig2_surface(s.t_start, GridConfig(), s)
        else:
            summary = run_scenario(s)
    except (ConfigError, DegenerateGeometry) as exc:
        print(f"qdiscord: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantViolation as exc:
        print(f"qdiscord: numeric invariant violated at {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for k, v in summary.items():
        print(f"{k}: {v}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
