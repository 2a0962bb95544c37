"""Command-line front end.

Every run is described by a flat ``key = value`` configuration that can
come from ``--config`` and be overridden by flags.  ``--dump-config``
prints the resolved configuration in the same format, so feeding it
back through ``--config`` reproduces the run exactly.

Exit status is 0 on success, 1 for invalid input and 2 when a numerical
procedure fails; errors are reported as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from .chain import ChainSpec, normal_modes, spectrum
from .correlations import (
    correlation_report,
    equilibrium_covariance,
    lag_correlation_curves,
)
from .errors import NumericalError, QuenchError
from .interferometer import reck_decompose
from .symplectic import BeamSplitter, Rotation
from .work import (
    average_work,
    chi_at,
    default_u_grid,
    free_energy_change,
    jarzynski_check,
    nonequilibrium_lag,
    rwa_statistics,
)

COMMANDS = ("spectrum", "chi", "work", "correlations", "lagcurve", "decompose", "oracle")
SWEEP_PARAMS = {"n_modes": "n_modes", "omega": "omega", "g0": "g0", "g": "g0", "beta": "beta"}


class ConfigError(QuenchError, ValueError):
    pass


@dataclass(frozen=True)
class Sweep:
    label: str  # as typed, used as the column name
    param: str  # ChainSpec field
    start: float
    stop: float
    count: int
    log: bool = False

    @classmethod
    def parse(cls, text: str) -> "Sweep":
        parts = text.strip().split(":")
        if len(parts) not in (4, 5) or (len(parts) == 5 and parts[4] != "log"):
            raise ConfigError(f"sweep must look like param:start:stop:count[:log], got {text!r}")
        label = parts[0]
        if label not in SWEEP_PARAMS:
            raise ConfigError(f"cannot sweep {label!r}; choose from {sorted(SWEEP_PARAMS)}")
        try:
            start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as exc:
            raise ConfigError(f"bad sweep bounds in {text!r}") from exc
        if not (math.isfinite(start) and math.isfinite(stop)):
            raise ConfigError("sweep bounds must be finite")
        if count < 2:
            raise ConfigError("sweep count must be at least 2")
        log = len(parts) == 5
        if log and (start <= 0 or stop <= 0):
            raise ConfigError("log sweeps need positive bounds")
        return cls(label, SWEEP_PARAMS[label], start, stop, count, log)

    def values(self) -> np.ndarray:
        if self.log:
            v = np.geomspace(self.start, self.stop, self.count)
        else:
            v = np.linspace(self.start, self.stop, self.count)
        if self.param == "n_modes":
            v = np.round(v)
        return v

    def __str__(self) -> str:
        text = f"{self.label}:{self.start!r}:{self.stop!r}:{self.count}"
        return text + (":log" if self.log else "")


@dataclass(frozen=True)
class RunConfig:
    command: str = ""
    n_modes: int = 2
    omega: float = 1.0
    g0: float = 1.0
    beta: float = 1.0
    sweep: Sweep | None = None
    u_max: float | None = None
    u_points: int = 2001
    n_max: int | None = None
    output: str = "-"
    format: str = "csv"
    threads: int | None = None

    @property
    def spec(self) -> ChainSpec:
        return ChainSpec(self.n_modes, self.omega, self.g0, self.beta)

    def dump(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            lines.append(f"{f.name} = {value!r}" if isinstance(value, float) else f"{f.name} = {value}")
        return "\n".join(lines) + "\n"


_CASTS = {
    "command": str, "n_modes": int, "omega": float, "g0": float, "beta": float,
    "sweep": Sweep.parse, "u_max": float, "u_points": int, "n_max": int,
    "output": str, "format": str, "threads": int,
}


def _coerce(key: str, raw):
    if key not in _CASTS:
        raise ConfigError(f"unknown configuration key {key!r}")
    try:
        return _CASTS[key](raw)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def read_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = (part.strip() for part in line.split("=", 1))
            values[key] = _coerce(key, raw)
    return values


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".16e")


def _json_text(obj) -> str:
    """JSON with floats in the same fixed format as the CSV output."""
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {_json_text(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_text(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, float, np.integer, np.floating)):
        text = _fmt(obj)
        return text if math.isfinite(float(obj)) else json.dumps(text)
    return json.dumps(str(obj))


@dataclass
class Table:
    columns: list
    rows: list
    meta: dict

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            out = io.StringIO()
            out.write(",".join(self.columns) + "\n")
            for row in self.rows:
                out.write(",".join(_fmt(v) for v in row) + "\n")
            return out.getvalue()
        body = {"meta": self.meta, "columns": self.columns, "rows": self.rows}
        return _json_text(body) + "\n"


def _thread_count(cfg: RunConfig) -> int:
    if cfg.threads is not None:
        n = cfg.threads
    elif os.environ.get("QT_THREADS"):
        try:
            n = int(os.environ["QT_THREADS"])
        except ValueError as exc:
            raise ConfigError("QT_THREADS must be an integer") from exc
    else:
        n = os.cpu_count() or 1
    if n < 1:
        raise ConfigError("thread count must be positive")
    return n


def _sweep_specs(cfg: RunConfig):
    """``(sweep value, spec)`` pairs; a single ``(None, spec)`` without a sweep."""
    if cfg.sweep is None:
        return [(None, cfg.spec)]
    out = []
    for v in cfg.sweep.values():
        value = int(v) if cfg.sweep.param == "n_modes" else float(v)
        out.append((value, cfg.spec.replace(**{cfg.sweep.param: value})))
    return out


def _map_points(cfg: RunConfig, fn, points):
    n = min(_thread_count(cfg), len(points))
    if n <= 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, points))


def _with_sweep(cfg: RunConfig, columns, per_point):
    """Run ``per_point(spec) -> rows`` over the sweep, prefixing the sweep column."""
    points = _sweep_specs(cfg)
    results = _map_points(cfg, lambda pt: per_point(pt[1]), points)
    if cfg.sweep is None:
        return list(columns), results[0]
    rows = [[value] + list(r) for (value, _), rs in zip(points, results) for r in rs]
    return [cfg.sweep.label] + list(columns), rows


def cmd_spectrum(cfg: RunConfig) -> Table:
    def rows(spec):
        nm = normal_modes(spec)
        return [[j + 1, lam, mu, r] for j, (lam, mu, r) in
                enumerate(zip(spectrum(spec), nm.mus, nm.squeeze_params))]
    cols, data = _with_sweep(cfg, ["j", "lambda", "mu", "r"], rows)
    return Table(cols, data, {})


def _u_grid(cfg: RunConfig, spec: ChainSpec) -> np.ndarray:
    return default_u_grid(spec, cfg.u_max, cfg.u_points)


def cmd_chi(cfg: RunConfig) -> Table:
    def rows(spec):
        u = _u_grid(cfg, spec)
        chi = np.atleast_1d(chi_at(spec, u))
        return [[a, b.real, b.imag] for a, b in zip(u, chi)]
    cols, data = _with_sweep(cfg, ["u", "re_chi", "im_chi"], rows)
    return Table(cols, data, {})


def cmd_work(cfg: RunConfig) -> Table:
    def rows(spec):
        rep = nonequilibrium_lag(spec, with_jarzynski=False)
        return [[rep.avg_work, rep.delta_f, rep.lag, rep.lag_classical, rep.lag_quantum]]
    cols, data = _with_sweep(cfg, ["avg_work", "delta_f", "lag", "lag_c", "lag_q"], rows)
    return Table(cols, data, {})


def cmd_correlations(cfg: RunConfig) -> Table:
    def rows(spec):
        rep = correlation_report(equilibrium_covariance(spec))
        return [[rep.log_negativity, rep.discord, rep.nu_minus_pt, rep.nu_minus, rep.nu_plus,
                 rep.witness[0], rep.witness[1]]]
    cols = ["log_neg", "discord", "nu_minus_pt", "nu_minus", "nu_plus", "s_opt", "phi_opt"]
    cols, data = _with_sweep(cfg, cols, rows)
    return Table(cols, data, {})


def cmd_lagcurve(cfg: RunConfig) -> Table:
    sweep = cfg.sweep or Sweep("beta", "beta", 0.01, 20.0, 80, True)
    if sweep.param != "beta":
        raise ConfigError("lagcurve sweeps the inverse temperature: use --sweep beta:start:stop:count[:log]")
    table = lag_correlation_curves(cfg.spec, sweep.values(), workers=_thread_count(cfg))
    return Table(list(table.columns), [list(r) for r in table.rows()],
                 {"omega": cfg.omega, "g0": cfg.g0})


def cmd_decompose(cfg: RunConfig) -> Table:
    if cfg.sweep is not None:
        raise ConfigError("decompose does not take a sweep")
    plan = reck_decompose(normal_modes(cfg.spec).p_matrix)
    rows = []
    for el in plan.network.elements:
        if isinstance(el, BeamSplitter):
            rows.append(["beam_splitter", el.mode_i, el.mode_j, el.theta, el.phi])
        elif isinstance(el, Rotation):
            rows.append(["rotation", el.mode, el.mode, el.theta, 0.0])
    meta = {"n_modes": plan.n_modes, "source_sha256": plan.source_hash(),
            "source_matrix": plan.source_matrix.tolist()}
    return Table(["type", "mode_i", "mode_j", "theta", "phi"], rows, meta)


def run_oracle_suite(n_max: int | None = None) -> list:
    """Closed forms against the truncated-Fock reference, as :class:`OracleRecord` objects."""
    from . import fock

    n_max = n_max or fock.DEFAULT_N_MAX[2]
    records = []

    def record(name, analytic, oracle, tol, sys_, spec_):
        abs_err = abs(analytic - oracle)
        rel = abs_err / abs(oracle) if oracle != 0 else abs_err
        records.append(fock.OracleRecord(name, float(np.real(analytic)), float(np.real(oracle)),
                                         float(abs_err), float(rel), tol, sys_.n_max,
                                         sys_.tail_estimate(spec_.omega, spec_.beta)))

    spec = ChainSpec(2, 1.0, 1.0, 1.0)
    sys_ = fock.build_system(spec, n_max)
    u = np.linspace(0.0, 10.0, 41)
    err = np.abs(np.asarray(chi_at(spec, u)) - fock.oracle_chi(sys_, spec, u))
    i = int(np.argmax(err))
    records.append(fock.OracleRecord("chi_max_abs_err_u0_10", 0.0, float(err[i]), float(err[i]),
                                     float(err[i]), 1e-6, n_max, sys_.tail_estimate(1.0, 1.0)))
    record("avg_work", average_work(spec), fock.tpm_distribution(sys_, spec).moment(1), 1e-4, sys_, spec)
    record("delta_f", free_energy_change(spec), fock.oracle_free_energy_change(sys_, spec), 1e-6, sys_, spec)
    lag = nonequilibrium_lag(spec, with_jarzynski=False).lag
    record("lag_vs_relative_entropy", lag, fock.relative_entropy_lag(sys_, spec, 1.0), 1e-4, sys_, spec)
    cov = equilibrium_covariance(spec).matrix[np.ix_([0, 2, 1, 3], [0, 2, 1, 3])]
    cov_o = fock.oracle_covariance(sys_, fock.gibbs_columns(sys_, spec.beta))
    k = np.unravel_index(np.argmax(np.abs(cov - cov_o)), cov.shape)
    record("equilibrium_covariance", cov[k], cov_o[k], 1e-6, sys_, spec)

    rspec = ChainSpec(2, 1.0, 0.5, 1.0)
    rsys = fock.build_system(rspec, n_max, model="H2")
    dist = fock.tpm_distribution(rsys, rspec)
    rwa = rwa_statistics(rspec)
    record("rwa_avg_work", rwa.avg_work, dist.moment(1), 1e-8, rsys, rspec)
    record("rwa_second_moment", rwa.second_moment, dist.moment(2), 1e-4 * rwa.second_moment, rsys, rspec)

    jspec = ChainSpec(4, 1.0, 1.0, 1.0)
    res = jarzynski_check(jspec)
    records.append(fock.OracleRecord("jarzynski_residual_N4", 1.0, 1.0 + res, res, res, 1e-10, 0, 0.0))
    return records


def cmd_oracle(cfg: RunConfig) -> Table:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        records = run_oracle_suite(cfg.n_max)
    dicts = [r.to_dict() for r in records]
    cols = list(dicts[0].keys())
    rows = [[d[c] for c in cols] for d in dicts]
    return Table(cols, rows, {"all_passed": all(r.passed for r in records)})


HANDLERS = {
    "spectrum": cmd_spectrum, "chi": cmd_chi, "work": cmd_work,
    "correlations": cmd_correlations, "lagcurve": cmd_lagcurve,
    "decompose": cmd_decompose, "oracle": cmd_oracle,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="harmonic-quench", description="Quench thermodynamics of harmonic chains.")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--config")
    p.add_argument("--output")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--threads", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--u-max", dest="u_max", type=float)
    p.add_argument("--u-points", dest="u_points", type=int)
    p.add_argument("--n-modes", dest="n_modes", type=int)
    p.add_argument("--omega", type=float)
    p.add_argument("--g0", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--sweep")
    p.add_argument("--dump-config", action="store_true")
    return p


def resolve_config(argv) -> tuple:
    args = build_parser().parse_args(argv)
    values = read_config_file(args.config) if args.config else {}
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = _coerce(f.name, flag) if f.name == "sweep" else flag
    cfg = replace(RunConfig(), **values)
    if cfg.command not in COMMANDS:
        raise ConfigError("a command is required: " + ", ".join(COMMANDS))
    if cfg.format not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    if cfg.u_points < 2:
        raise ConfigError("u_points must be at least 2")
    cfg.spec  # validate the chain parameters early
    return cfg, args.dump_config


def _write(text: str, path: str) -> None:
    if path in ("-", ""):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None) -> int:
    try:
        cfg, dump = resolve_config(sys.argv[1:] if argv is None else argv)
        if dump:
            _write(cfg.dump(), cfg.output)
            return 0
        table = HANDLERS[cfg.command](cfg)
        _write(table.render(cfg.format), cfg.output)
        return 0
    except NumericalError as exc:
        status = 2
        err = exc
    except (QuenchError, ValueError, OSError) as exc:
        status = 1
        err = exc
    payload = {"error": type(err).__name__, "message": str(err), "exit_status": status}
    sys.stderr.write(json.dumps(payload) + "\n")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
