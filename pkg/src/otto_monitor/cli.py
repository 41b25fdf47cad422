"""Config-driven sweeps and distribution dumps.

Usage::

    python -m otto_monitor run  <config-path>
    python -m otto_monitor dist <config-path>

Configs are flat ``key = value`` files with ``#`` comments.  Pointer widths
``0`` and ``inf`` select the exact projective and unmonitored limits.
"""

from __future__ import annotations

import argparse
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .linops import NonUniqueSteadyStateError, fixed_point
from .schemes import CycleSpec, Scheme, SchemeConfig, cycle_channel
from .stats import joint_distribution, kl_divergence, l1_coherence, marginal_work, scheme_cumulants
from .strokes import (
    SIGMA_X,
    SIGMA_Z,
    BathSpec,
    Occupation,
    Parametric,
    PerfectReset,
    Protocol,
    StrokeHamiltonian,
    gibbs_state,
)

THREADS_ENV = "OTTO_MONITOR_THREADS"
SWEEP_VARIABLES = ("tau_b", "tau_u", "sigma", "r")
FLOAT_KEYS = {
    "omega1", "omega2", "epsilon", "beta_c", "beta_h", "gamma_c", "gamma_h",
    "tau_u", "tau_b", "r", "phi", "sigma", "w_min", "w_max",
}


class ConfigError(ValueError):
    pass


def fmt(x: float) -> str:
    """17 significant digits, locale independent."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _parse_float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r} as a number") from None


def _parse_list(key: str, text: str) -> list[float]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise ConfigError(f"{key}: empty list")
    return [_parse_float(key, t) for t in items]


def parse_pairs(text: str) -> dict[str, str]:
    """Read ``key = value`` lines, keeping order; ``#`` starts a comment."""
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: missing key")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def dump_pairs(pairs: dict[str, str]) -> str:
    return "".join(f"{k} = {v}\n" for k, v in pairs.items())


@dataclass
class RunConfig:
    omega1: float = 1.0
    omega2: float = 3.2
    epsilon: float = 0.0
    beta_c: float = 3.0
    beta_h: float = 0.2
    gamma_c: float = 0.05
    gamma_h: float = 0.05
    tau_u: float = 3.5
    tau_b: float = 22.0
    stroke: str = "protocol"
    r: float = 0.0
    phi: float = 0.0
    steps: int = 10_000
    cold: str = "bath"
    occupation: Occupation = Occupation.GIBBS_CONSISTENT
    schemes: tuple[Scheme, ...] = (Scheme.UM, Scheme.TPM)
    sigmas: tuple[float, ...] = ()
    sigma: float = 1.0
    sweep: str | None = None
    grid: tuple[float, ...] = ()
    output: str = "out.csv"
    w_min: float = -10.0
    w_max: float = 10.0
    resolution: int = 401
    subtract_tpm: bool = False
    raw: dict[str, str] = field(default_factory=dict, repr=False)

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        pairs = parse_pairs(text)
        cfg = cls(raw=pairs)
        for key, value in pairs.items():
            if key in FLOAT_KEYS:
                setattr(cfg, key, _parse_float(key, value))
            elif key in ("steps", "resolution"):
                try:
                    setattr(cfg, key, int(value))
                except ValueError:
                    raise ConfigError(f"{key}: expected an integer, got {value!r}") from None
            elif key == "stroke":
                if value not in ("parametric", "protocol"):
                    raise ConfigError(f"stroke: expected 'parametric' or 'protocol', got {value!r}")
                cfg.stroke = value
            elif key == "cold":
                if value not in ("bath", "reset"):
                    raise ConfigError(f"cold: expected 'bath' or 'reset', got {value!r}")
                cfg.cold = value
            elif key == "occupation":
                try:
                    cfg.occupation = Occupation(value)
                except ValueError:
                    raise ConfigError(f"occupation: expected 'gibbs' or 'printed', got {value!r}") from None
            elif key == "schemes":
                names = [s for s in (t.strip() for t in value.split(",")) if s]
                try:
                    cfg.schemes = tuple(Scheme.parse(s) for s in names)
                except ValueError as exc:
                    raise ConfigError(str(exc)) from None
                if not cfg.schemes:
                    raise ConfigError("schemes: empty list")
            elif key == "sigmas":
                cfg.sigmas = tuple(_parse_list(key, value))
            elif key == "sweep":
                if value not in SWEEP_VARIABLES:
                    raise ConfigError(f"sweep: unknown variable {value!r}; choose from {', '.join(SWEEP_VARIABLES)}")
                cfg.sweep = value
            elif key == "grid":
                cfg.grid = tuple(_parse_list(key, value))
            elif key in ("start", "stop", "points"):
                pass
            elif key == "output":
                cfg.output = value
            elif key == "subtract_tpm":
                cfg.subtract_tpm = value.lower() in ("1", "true", "yes")
            else:
                raise ConfigError(f"unknown key {key!r}")
        if {"start", "stop", "points"} & pairs.keys():
            if not {"start", "stop", "points"} <= pairs.keys():
                raise ConfigError("a linear grid needs all of start, stop, points")
            if cfg.grid:
                raise ConfigError("give either grid or start/stop/points, not both")
            try:
                points = int(pairs["points"])
            except ValueError:
                raise ConfigError("points: expected an integer") from None
            if points < 2:
                raise ConfigError("points: need at least 2")
            cfg.grid = tuple(np.linspace(_parse_float("start", pairs["start"]), _parse_float("stop", pairs["stop"]), points))
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | os.PathLike) -> "RunConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        return cls.from_text(text)

    def dumps(self) -> str:
        return dump_pairs(self.raw)

    def validate(self):
        if self.grid and any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ConfigError("grid must be strictly increasing")
        if self.resolution < 2:
            raise ConfigError("resolution must be >= 2")
        if not self.w_max > self.w_min:
            raise ConfigError("w_max must exceed w_min")
        for s in self.sigmas:
            if s < 0 or math.isnan(s):
                raise ConfigError(f"sigmas: invalid pointer width {s}")
        if self.sigma < 0 or math.isnan(self.sigma):
            raise ConfigError(f"sigma: invalid pointer width {self.sigma}")
        if self.sweep == "r" and self.stroke != "parametric":
            raise ConfigError("sweeping r requires stroke = parametric")
        if self.sweep == "tau_u" and self.stroke != "protocol":
            raise ConfigError("sweeping tau_u requires stroke = protocol")
        if self.sweep == "sigma" and self.sigmas:
            raise ConfigError("sigmas must be omitted when sweeping sigma")
        if self.stroke == "parametric" and not 0 <= self.r <= 1:
            raise ConfigError("r must lie in [0, 1]")

    # ------------------------------------------------------------------
    def with_value(self, name: str, value: float) -> "RunConfig":
        return replace(self, **{name: float(value)})

    def cycle(self) -> CycleSpec:
        if self.stroke == "protocol":
            work = Protocol(self.omega1, self.omega2, self.tau_u, self.steps)
            h1, h2 = work.endpoints()
        else:
            work = Parametric(self.r, self.phi)
            h1 = _tls_hamiltonian(self.omega1, self.epsilon)
            h2 = _tls_hamiltonian(self.omega2, self.epsilon)
        hot = BathSpec(self.beta_h, self.gamma_h, self.tau_b, self.occupation)
        if self.cold == "reset":
            cold = PerfectReset(self.beta_c)
        else:
            cold = BathSpec(self.beta_c, self.gamma_c, self.tau_b, self.occupation)
        return CycleSpec(h1, h2, work, hot, cold)

    def scheme_configs(self, sigma_override: float | None = None) -> list[tuple[str, SchemeConfig]]:
        out = []
        sigmas = (sigma_override,) if sigma_override is not None else self.sigmas
        for scheme in self.schemes:
            if scheme in (Scheme.UM, Scheme.TPM):
                out.append((scheme.value, SchemeConfig.uniform(scheme)))
                continue
            if not sigmas:
                raise ConfigError(f"scheme {scheme.value} needs pointer widths (key 'sigmas')")
            for s in sigmas:
                label = scheme.value if sigma_override is not None else f"{scheme.value}_s{fmt(s)}"
                out.append((label, SchemeConfig.uniform(scheme, s)))
        return out


def _tls_hamiltonian(omega: float, epsilon: float) -> StrokeHamiltonian:
    if epsilon == 0:
        return StrokeHamiltonian.tls(omega)
    return StrokeHamiltonian.from_matrix(omega / 2 * SIGMA_Z + epsilon / 2 * SIGMA_X)


SWEEP_QUANTITIES = ("w", "w2c", "qh", "kl", "l1", "engine")


def evaluate_point(config: RunConfig, value: float | None) -> list[float]:
    """Per-scheme row entries at one sweep value."""
    sigma_override = None
    cfg = config
    if config.sweep == "sigma":
        sigma_override = float(value)
    elif config.sweep is not None:
        cfg = config.with_value(config.sweep, value)
    cycle = cfg.cycle()
    ref = gibbs_state(cycle.h1, cfg.beta_c)
    row: list[float] = []
    for label, sc in cfg.scheme_configs(sigma_override):
        try:
            rho = fixed_point(cycle_channel(cycle, sc))
        except NonUniqueSteadyStateError:
            # e.g. zero-duration isochores leave a unitary cycle; flag the point with NaN
            print(f"warning: {label} at {config.sweep} = {fmt(value)}: non-unique steady state", file=sys.stderr)
            row += [math.nan] * len(SWEEP_QUANTITIES)
            continue
        c = scheme_cumulants(cycle, sc, rho)
        engine = 1.0 if (-c.w > 0 and c.qh > 0) else 0.0
        row += [c.w, c.w2c, c.qh, kl_divergence(rho, ref), l1_coherence(rho, cycle.h1), engine]
    return row


def sweep_header(config: RunConfig) -> list[str]:
    sigma_override = 0.0 if config.sweep == "sigma" else None
    cols = [config.sweep]
    for label, _ in config.scheme_configs(sigma_override):
        cols += [f"{label}_{q}" for q in SWEEP_QUANTITIES]
    return cols


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def sweep_table(config: RunConfig) -> tuple[list[str], list[list[float]]]:
    if config.sweep is None or not config.grid:
        raise ConfigError("run needs a sweep variable ('sweep') and a grid")
    header = sweep_header(config)
    threads = _threads()
    if threads == 1:
        rows = [evaluate_point(config, v) for v in config.grid]
    else:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(lambda v: evaluate_point(config, v), config.grid))
    return header, [[v] + row for v, row in zip(config.grid, rows)]


def _write(path: str, text: str):
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write output {path}: {exc.strerror}") from None


def run_sweep(config: RunConfig) -> str:
    """Evaluate the sweep and write the CSV; returns the output path."""
    header, rows = sweep_table(config)
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(x) for x in row) + "\n")
    _write(config.output, buf.getvalue())
    return config.output


def distribution_table(config: RunConfig) -> tuple[list[str], list[list[float]], str]:
    """Work marginal as rows plus a footer comment."""
    if len(config.schemes) != 1:
        raise ConfigError("dist needs exactly one scheme")
    scheme = config.schemes[0]
    if scheme is Scheme.UM:
        raise ConfigError("no measurement record exists for UM; its work distribution is undefined")
    sc = SchemeConfig.uniform(scheme, None if scheme is Scheme.TPM else config.sigma)
    cycle = config.cycle()
    rho = fixed_point(cycle_channel(cycle, sc))
    marg = marginal_work(joint_distribution(cycle, sc, rho))
    if np.all(marg.widths == 0):
        support, probs = _discrete(marg)
        if config.subtract_tpm:
            tpm = SchemeConfig.uniform(Scheme.TPM)
            rho_t = fixed_point(cycle_channel(cycle, tpm))
            t_support, t_probs = _discrete(marginal_work(joint_distribution(cycle, tpm, rho_t)))
            keys = np.union1d(np.round(support, 12), np.round(t_support, 12))
            p = _lookup(keys, support, probs)
            pt = _lookup(keys, t_support, t_probs)
            rows = [[k, a, b, a - b] for k, a, b in zip(keys, p, pt)]
            return ["w", "probability", "tpm_probability", "difference"], rows, f"# total probability = {fmt(p.sum())}\n"
        rows = [[k, p] for k, p in zip(support, probs)]
        return ["w", "probability"], rows, f"# total probability = {fmt(probs.sum())}\n"
    if np.any(marg.widths == 0):
        raise ConfigError("mixed point-mass and continuous work distribution cannot be gridded")
    grid = np.linspace(config.w_min, config.w_max, config.resolution)
    dens = marg.pdf(grid)
    integral = float(np.trapezoid(dens, grid)) if hasattr(np, "trapezoid") else float(np.trapz(dens, grid))
    rows = [[x, p] for x, p in zip(grid, dens)]
    return ["w", "density"], rows, f"# trapezoid integral over grid = {fmt(integral)}\n"


def _discrete(marg) -> tuple[np.ndarray, np.ndarray]:
    keys = np.round(marg.means, 12) + 0.0
    support = np.unique(keys)
    probs = np.array([marg.weights[keys == k].sum() for k in support])
    return support, probs


def _lookup(keys, support, probs):
    table = dict(zip(np.round(support, 12) + 0.0, probs))
    return np.array([table.get(k, 0.0) for k in keys])


def emit_distribution(config: RunConfig) -> str:
    header, rows, footer = distribution_table(config)
    if not rows:
        raise ConfigError("empty distribution grid")
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(x) for x in row) + "\n")
    buf.write(footer)
    _write(config.output, buf.getvalue())
    return config.output


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="otto-monitor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("run", "parameter sweep to CSV"), ("dist", "work distribution to CSV")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config")
    args = parser.parse_args(argv)
    try:
        config = RunConfig.load(args.config)
        path = run_sweep(config) if args.command == "run" else emit_distribution(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    print(path)
    return 0
