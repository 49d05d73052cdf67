"""Command-line front end.

    dephase semiclassical|gamma|collective|register|scaling
            [--config PATH] [--out DIR] [--seed N] [--format csv|json] [--set KEY=VALUE ...]

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 I/O error. Times are in units of 1/T (semiclassical: 1/omega0).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from typing import Any, Callable, Sequence

import numpy as np

from . import encoding, register, scaling, semiclassical, spectral
from .config import ConfigError, load_config

log = logging.getLogger("dephase")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


class NumericalFailure(Exception):
    """Some rows could not be computed; the files were still written."""


# ---------------------------------------------------------------------------
# output


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.16e}"
    if value is None:
        return "inf"
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_json(path: str, data: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(data), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_table(out_dir: str, stem: str, columns: Sequence[str], rows: Sequence[Sequence],
                fmt: str) -> str:
    path = os.path.join(out_dir, f"{stem}.{fmt}")
    if fmt == "json":
        write_json(path, {"columns": list(columns), "rows": [list(r) for r in rows]})
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_cell(v) for v in row) + "\n")
    return path


# ---------------------------------------------------------------------------
# config -> domain objects


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _reservoir(cfg: dict, dimension: int | None = None) -> spectral.ReservoirSpec:
    dim = cfg["dimension"] if dimension is None else dimension
    temp = float(cfg["temperature"])
    if cfg["cutoff"] is not None:
        cutoff = float(cfg["cutoff"])
    else:
        _require(cfg["eta"] is not None, "reservoir needs eta or cutoff")
        cutoff = float(cfg["eta"]) * temp
    try:
        return spectral.ReservoirSpec(int(dim), cutoff, temp, float(cfg["prefactor"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"reservoir: {exc}") from exc


def _times(cfg: dict) -> list[float]:
    if cfg["values"] is not None:
        values = [float(v) for v in cfg["values"]]
    else:
        start, stop, num = float(cfg["start"]), float(cfg["stop"]), int(cfg["num"])
        _require(num >= 1, "times.num must be at least 1")
        if cfg["spacing"] == "log":
            _require(0 < start <= stop, "log-spaced times need 0 < start <= stop")
            values = [float(v) for v in spectral.log_spaced_times(start, stop, num)]
        elif cfg["spacing"] == "linear":
            _require(0 <= start <= stop, "linear times need 0 <= start <= stop")
            values = [float(v) for v in np.linspace(start, stop, num)]
        else:
            raise ConfigError(f"times.spacing must be log or linear, got {cfg['spacing']!r}")
    _require(len(values) > 0, "time grid is empty")
    _require(all(v >= 0 and math.isfinite(v) for v in values), "times must be non-negative")
    _require(all(b >= a for a, b in zip(values, values[1:])), "times must be ordered")
    return values


def _int(value: Any, name: str) -> int:
    _require(isinstance(value, int) and not isinstance(value, bool), f"{name} must be an integer")
    return value


# ---------------------------------------------------------------------------
# commands; each returns the list of files written


def cmd_semiclassical(cfg: dict, out_dir: str, fmt: str) -> list[str]:
    seed = _int(cfg["seed"], "seed")
    try:
        params = semiclassical.StochasticFieldParams(**cfg["field"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field: {exc}") from exc
    s0 = [float(x) for x in cfg["s0"]]
    _require(len(s0) == 3 and math.sqrt(sum(x * x for x in s0)) <= 1 + 1e-12,
             "s0 must be a Bloch vector with |s0| <= 1")
    t_max = float(cfg["t_max"])
    _require(t_max > 0, "t_max must be positive")
    members = [_int(k, "members") for k in cfg["members"]]
    _require(all(k >= 0 for k in members), "member indices must be non-negative")
    ensembles = [_int(n, "ensembles") for n in cfg["ensembles"]]
    _require(all(n >= 1 for n in ensembles), "ensemble sizes must be at least 1")

    columns = ("t", "sx", "sy", "sz")
    tables = []
    for k in members:
        traj = semiclassical.simulate_member(params, s0, t_max,
                                             semiclassical.member_seed(seed, k))
        tables.append((f"member_{k}", traj))
    for n in ensembles:
        tables.append((f"ensemble_{n}", semiclassical.simulate_ensemble(params, s0, t_max, n, seed)))
    return [write_table(out_dir, stem, columns,
                        list(zip(tr.times, tr.sx, tr.sy, tr.sz)), fmt) for stem, tr in tables]


def _gamma_rows(spec: spectral.ReservoirSpec, times: Sequence[float], failures: list) -> list:
    rows = []
    for value in times:
        t = value / spec.temperature
        try:
            quad = spectral.gamma_quadrature(spec, t)
        except spectral.QuadratureError as exc:
            failures.append((spec, value, exc))
            log.error("eta=%g t=%g: %s", spec.eta, value, exc)
            quad = math.nan
        closed = spectral.gamma_closed_form(spec, t)
        regime = spectral.classify_regime(spec, t).value if t > 0 else "none"
        rows.append((value, quad, closed, regime))
    return rows


def cmd_gamma(cfg: dict, out_dir: str, fmt: str) -> list[str]:
    spec = _reservoir(cfg["reservoir"])
    times = _times(cfg["times"])
    sweep = [float(e) for e in cfg["eta_sweep"]]
    sweep_specs = [_reservoir({**cfg["reservoir"], "eta": e, "cutoff": None}) for e in sweep]

    failures: list = []
    written = [write_table(out_dir, "gamma", ("t", "gamma_quadrature", "closed_form", "regime"),
                           _gamma_rows(spec, times, failures), fmt)]
    if sweep_specs:
        rows = [(s.eta, *row) for s in sweep_specs for row in _gamma_rows(s, times, failures)]
        written.append(write_table(out_dir, "gamma_surface",
                                   ("eta", "t", "gamma_quadrature", "closed_form", "regime"),
                                   rows, fmt))
    if failures:
        raise NumericalFailure(f"{len(failures)} quadrature failures", written)
    return written


def cmd_collective(cfg: dict, out_dir: str, fmt: str) -> list[str]:
    dims = [_int(d, "dimensions") for d in cfg["dimensions"]]
    specs = [_reservoir(cfg["reservoir"], d) for d in dims]
    ts_list = [float(x) for x in cfg["ts"]]
    _require(all(x >= 0 for x in ts_list), "ts values must be non-negative")
    times = _times(cfg["times"])

    written = []
    for spec in specs:
        rows = []
        scale = 1.0 / spec.temperature
        for ts in ts_list:
            for value in times:
                t = value * scale
                single = spectral.gamma_quadrature(spec, t)
                rows.append((value, ts, single,
                             register.gamma_pm(spec, ts * scale, -1, t),
                             register.gamma_pm(spec, ts * scale, +1, t)))
        written.append(write_table(out_dir, f"collective_{spec.dimension}d",
                                   ("t", "ts", "gamma_single", "gamma_minus", "gamma_plus"),
                                   rows, fmt))
    return written


_LOGICAL_STATES: dict[str, Callable[[int], np.ndarray]] = {
    "ghz": register.ghz_state,
    "plus": register.plus_state,
}


def cmd_register(cfg: dict, out_dir: str, fmt: str) -> list[str]:
    spec = _reservoir(cfg["reservoir"])
    times = _times(cfg["times"])
    try:
        topology = register.Topology(cfg["topology"])
    except ValueError as exc:
        raise ConfigError(f"topology: {exc}") from exc
    enc = cfg["encoding"]
    logical = None

    if enc["enabled"]:
        n_logical = _int(enc["n_logical"], "encoding.n_logical")
        _require(1 <= n_logical <= encoding.MAX_LOGICAL,
                 f"encoding.n_logical must be in 1..{encoding.MAX_LOGICAL}")
        _require(enc["logical_state"] in _LOGICAL_STATES,
                 f"encoding.logical_state must be one of {sorted(_LOGICAL_STATES)}")
        pairs = enc["pair_positions"] or [0.0] * n_logical
        _require(len(pairs) == n_logical, "need one pair position per logical qubit")
        logical = _LOGICAL_STATES[enc["logical_state"]](n_logical)
        reg = encoding.encode(logical, [float(x) for x in pairs],
                              float(enc["pair_offset"]), topology)
        state = reg.physical
    else:
        n = _int(cfg["n_qubits"], "n_qubits")
        _require(1 <= n <= register.MAX_QUBITS, f"n_qubits must be in 1..{register.MAX_QUBITS}")
        _require(cfg["initial"] in _LOGICAL_STATES,
                 f"initial must be one of {sorted(_LOGICAL_STATES)}")
        positions = cfg["positions"] if cfg["positions"] is not None else [0.0] * n
        _require(len(positions) == n, "need one position per qubit")
        state = register.RegisterState(_LOGICAL_STATES[cfg["initial"]](n),
                                       [float(x) for x in positions], topology)

    dim = 2**state.n_qubits
    elements = cfg["elements"]
    if elements is None:
        if logical is not None:
            idx = encoding.code_indices(reg.n_logical)
            elements = [[int(idx[0]), int(idx[-1])]]
        else:
            elements = [[0, dim - 1]]
    pairs_ij = []
    for item in elements:
        _require(len(item) == 2 and all(isinstance(v, int) and 0 <= v < dim for v in item),
                 f"element {item!r} is not a valid index pair for {dim} basis states")
        pairs_ij.append((item[0], item[1]))

    columns = ["t"] + [f"abs_rho_{i}_{j}" for i, j in pairs_ij]
    if logical is not None:
        columns.append("fidelity")
    rows = []
    for value in times:
        evolved = register.evolve(state, spec, value / spec.temperature)
        row = [value] + [abs(evolved.rho[i, j]) for i, j in pairs_ij]
        if logical is not None:
            decoded = encoding.decode(encoding.LogicalRegister(reg.n_logical, evolved), 1.0)
            row.append(encoding.fidelity(logical, decoded))
        rows.append(row)
    return [write_table(out_dir, "register", columns, rows, fmt)]


def cmd_scaling(cfg: dict, out_dir: str, fmt: str) -> list[str]:
    spec = _reservoir(cfg["reservoir"])
    try:
        topologies = [register.Topology(t) for t in cfg["topologies"]]
    except ValueError as exc:
        raise ConfigError(f"topologies: {exc}") from exc
    tau = float(cfg["tau"])
    _require(tau >= 0, "tau must be non-negative")
    target = float(cfg["target_p"])
    _require(0 < target < 1, "target_p must lie in (0, 1)")
    start, stop = _int(cfg["sizes"]["start"], "sizes.start"), _int(cfg["sizes"]["stop"], "sizes.stop")
    _require(1 <= start <= stop, "sizes need 1 <= start <= stop")
    _require(cfg["mode"] in ("closed", "exact"), "mode must be closed or exact")
    if cfg["mode"] == "exact":
        _require(stop <= register.MAX_QUBITS, f"exact mode allows at most {register.MAX_QUBITS} qubits")
    t_ratio = cfg["t_ratio"]
    if t_ratio is not None:
        t_ratio = float(t_ratio)
        _require(t_ratio > 0, "t_ratio must be positive")

    reports = {
        top.value: scaling.runs_vs_size(spec, top, tau / spec.temperature, target,
                                        range(start, stop + 1), cfg["mode"], t_ratio)
        for top in topologies
    }
    written = []
    for name, rep in reports.items():
        rows = list(zip(rep.input_sizes, rep.epsilon, rep.runs, rep.log_runs, rep.exponent))
        written.append(write_table(out_dir, f"scaling_{name}",
                                   ("L", "eps", "k", "log_k", "exponent"), rows, "csv"))
        print(f"{name}: fitted power of ln k vs L = {rep.fits['log_runs_power']}")
    l_max = scaling.max_register_size(t_ratio) if t_ratio is not None else None
    path = os.path.join(out_dir, "scaling.json")
    write_json(path, {"l_max": l_max, "reports": {k: r.to_dict() for k, r in reports.items()}})
    written.append(path)
    if l_max is not None:
        print(f"L_max = {l_max}")
    return written


COMMANDS = {
    "semiclassical": cmd_semiclassical,
    "gamma": cmd_gamma,
    "collective": cmd_collective,
    "register": cmd_register,
    "scaling": cmd_scaling,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dephase", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="YAML config file")
        p.add_argument("--out", default=".", help="output directory (default: .)")
        p.add_argument("--seed", type=int, help="master seed, overrides the config")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config entry, e.g. --set reservoir.eta=10")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    overrides = list(args.set)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    try:
        cfg = load_config(args.command, args.config, overrides)
        seed = _int(cfg["seed"], "seed")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"seed = {seed}")

    # each command validates its whole config before writing anything
    try:
        os.makedirs(args.out, exist_ok=True)
        written = COMMANDS[args.command](cfg, args.out, args.format)
        write_json(os.path.join(args.out, f"{args.command}_config.json"), cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_NUMERIC
    except ArithmeticError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
