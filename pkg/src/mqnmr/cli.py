"""Command-line front end: parameter sweeps with machine-readable output.

Subcommands `pair-sweep`, `chain-sweep`, `entanglement` and `figure1` write
CSV or JSON tables. Tables that contain both closed-form and pipeline
columns carry a discrepancy column, and the process exits with status 2
when any discrepancy exceeds 1e-8, so every run self-verifies. Exit status
1 signals a usage or config error. CSV output is byte-deterministic for a
given configuration.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from .coherence import (
    chain_pipeline_normalization,
    closed_form_chain,
    closed_form_pair,
    extract_spectrum,
    regime_check,
)
from .dynamics import ExperimentParams, propagate_preparation
from .entanglement import (
    concurrence_closed_form,
    concurrence_numeric,
    entanglement_fluctuation,
    onset_temperature,
)
from .spin_system import SpinSystem, beta_from_temperature

#: Defaults from the reference parameter set: D = 4*pi*1307 rad/s, beta = 6,
#: omega0 = 2*pi*5e8 rad/s. tau is chosen so that D*tau = 9*pi/2 holds
#: exactly (the quoted tau = 0.00086 s is that value rounded).
DEFAULT_COUPLING_D = 4.0 * math.pi * 1307.0
DEFAULT_D_TAU = 4.5 * math.pi
DEFAULT_TAU = DEFAULT_D_TAU / DEFAULT_COUPLING_D
DEFAULT_BETA = 6.0
DEFAULT_OMEGA0 = 2.0 * math.pi * 5.0e8

DISCREPANCY_LIMIT = 1e-8
CHAIN_ORACLE_BETA = 1e-6
CHAIN_ORACLE_MAX_SPINS = 6

_GRID_VARS = {
    "pair-sweep": ("beta", "tau", "dtau", "x"),
    "chain-sweep": ("tau", "dtau", "x"),
    "entanglement": ("beta", "tau", "dtau", "x"),
    "figure1": ("x",),
}


class UsageError(Exception):
    """Bad flags or config; maps to exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we reserve that
        raise UsageError(message)


@dataclass(frozen=True)
class GridSpec:
    var: str
    start: float
    stop: float
    points: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


def parse_grid_spec(text: str, allowed: tuple[str, ...]) -> GridSpec:
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"grid spec must be VAR:START:STOP:POINTS, got {text!r}")
    var, start_s, stop_s, points_s = parts
    if var not in allowed:
        raise UsageError(f"grid variable {var!r} not supported here; allowed: {', '.join(allowed)}")
    try:
        start, stop, points = float(start_s), float(stop_s), int(points_s)
    except ValueError as exc:
        raise UsageError(f"bad grid spec {text!r}: {exc}") from None
    if points < 1:
        raise UsageError(f"grid needs at least 1 point, got {points}")
    if start > stop:
        raise UsageError(f"grid start {start} exceeds stop {stop}")
    return GridSpec(var, start, stop, points)


def _parse_t_mq(text: str) -> float:
    if text.strip().lower() == "inf":
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"--t-mq must be a positive number of seconds or 'inf', got {text!r}") from None
    if not value > 0:
        raise UsageError(f"--t-mq must be positive, got {value}")
    return value


def build_parser() -> _Parser:
    parser = _Parser(prog="mqnmr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode, helptext in (
        ("pair-sweep", "pair intensities: closed form vs pipeline extraction"),
        ("chain-sweep", "chain intensities with sum-rule residual and optional pipeline oracle"),
        ("entanglement", "concurrence (closed form vs numeric), fluctuation and onset temperature"),
        ("figure1", "two-quantum sum, concurrence and fluctuation vs tau/T_MQ"),
    ):
        # flags default to None so config-file values are distinguishable;
        # real defaults are applied in resolve_config
        p = sub.add_parser(mode, help=helptext)
        p.add_argument("--config", metavar="FILE", help="JSON file of option defaults; flags win")
        p.add_argument("--out", metavar="PATH", help="output path, '-' for stdout (default)")
        p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
        p.add_argument(
            "--grid",
            action="append",
            metavar="VAR:START:STOP:POINTS",
            help=f"sweep grid (repeatable, cartesian product); variables: {', '.join(_GRID_VARS[mode])}",
        )
        p.add_argument("--beta", type=float, help="dimensionless inverse-temperature parameter")
        p.add_argument("--temperature", type=float, metavar="K", help="alternative to --beta (needs --omega0)")
        p.add_argument("--coupling-d", type=float, metavar="RAD_S", help="dipolar coupling in rad/s")
        p.add_argument("--tau", type=float, metavar="S", help="preparation period in s")
        p.add_argument("--t-mq", metavar="S|inf", help="spin-lattice relaxation time in s, or 'inf'")
        p.add_argument("--omega0", type=float, metavar="RAD_S", help="Larmor frequency in rad/s")
        if mode == "chain-sweep":
            p.add_argument("--n-spins", type=int, help="chain length (required, >= 2)")
            p.add_argument(
                "--oracle",
                choices=("auto", "on", "off"),
                help=f"pipeline oracle columns (default auto: on for N <= {CHAIN_ORACLE_MAX_SPINS})",
            )
    return parser


@dataclass
class RunConfig:
    mode: str
    out: str
    format: str
    grids: list[GridSpec]
    beta: float
    coupling_d: float
    tau: float
    t_mq: float
    omega0: float
    n_spins: int | None = None
    oracle: str = "auto"

    def echo(self) -> dict:
        data = {
            "mode": self.mode,
            "format": self.format,
            "grids": [
                {"var": g.var, "start": g.start, "stop": g.stop, "points": g.points}
                for g in self.grids
            ],
            "beta": self.beta,
            "coupling_d": self.coupling_d,
            "tau": self.tau,
            "t_mq": "inf" if math.isinf(self.t_mq) else self.t_mq,
            "omega0": self.omega0,
        }
        if self.mode == "chain-sweep":
            data["n_spins"] = self.n_spins
            data["oracle"] = self.oracle
        return data


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    return {str(key).replace("-", "_"): value for key, value in data.items()}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge config file values under command-line flags and validate."""
    file_values = _load_config_file(args.config) if args.config else {}

    def pick(name: str, default):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in file_values and file_values[name] is not None:
            return file_values[name]
        return default

    beta = pick("beta", None)
    temperature = pick("temperature", None)
    omega0 = float(pick("omega0", DEFAULT_OMEGA0))
    if beta is not None and temperature is not None:
        raise UsageError("give either --beta or --temperature, not both")
    if beta is None:
        beta = beta_from_temperature(omega0, float(temperature)) if temperature is not None else DEFAULT_BETA
    beta = float(beta)

    coupling_d = float(pick("coupling_d", DEFAULT_COUPLING_D))
    if coupling_d <= 0:
        raise UsageError(f"--coupling-d must be positive, got {coupling_d}")
    tau = float(pick("tau", DEFAULT_TAU))
    if tau < 0:
        raise UsageError(f"--tau must be nonnegative, got {tau}")

    t_mq_raw = pick("t_mq", math.inf)
    t_mq = _parse_t_mq(t_mq_raw) if isinstance(t_mq_raw, str) else float(t_mq_raw)
    if not t_mq > 0:
        raise UsageError(f"--t-mq must be positive, got {t_mq}")

    allowed = _GRID_VARS[args.mode]
    raw_grids = pick("grid", None) or []
    if isinstance(raw_grids, str):
        raw_grids = [raw_grids]
    grids = [parse_grid_spec(str(spec), allowed) for spec in raw_grids]
    seen = set()
    for grid in grids:
        if grid.var in seen:
            raise UsageError(f"grid variable {grid.var!r} given more than once")
        seen.add(grid.var)
    if args.mode == "figure1" and not grids:
        grids = [GridSpec("x", 0.0, 3.0, 301)]

    n_spins = None
    oracle = "auto"
    if args.mode == "chain-sweep":
        n_spins_raw = pick("n_spins", None)
        if n_spins_raw is None:
            raise UsageError("chain-sweep requires --n-spins")
        n_spins = int(n_spins_raw)
        if n_spins < 2:
            raise UsageError(f"--n-spins must be at least 2, got {n_spins}")
        oracle = str(pick("oracle", "auto"))
        if oracle not in ("auto", "on", "off"):
            raise UsageError(f"--oracle must be auto, on or off, got {oracle!r}")

    out_format = str(pick("format", "csv"))
    if out_format not in ("csv", "json"):
        raise UsageError(f"--format must be csv or json, got {out_format!r}")

    return RunConfig(
        mode=args.mode,
        out=str(pick("out", "-")),
        format=out_format,
        grids=grids,
        beta=beta,
        coupling_d=coupling_d,
        tau=tau,
        t_mq=t_mq,
        omega0=omega0,
        n_spins=n_spins,
        oracle=oracle,
    )


def _grid_points(cfg: RunConfig):
    """Yield dicts of swept-variable values in deterministic row order."""
    if not cfg.grids:
        yield {}
        return
    value_lists = [grid.values() for grid in cfg.grids]
    names = [grid.var for grid in cfg.grids]
    for combo in itertools.product(*value_lists):
        yield dict(zip(names, (float(v) for v in combo)))

def _params_for_point(cfg: RunConfig, point: dict[str, float]) -> ExperimentParams:
    beta = point.get("beta", cfg.beta)
    tau = point.get("tau", cfg.tau)
    if "dtau" in point:
        tau = point["dtau"] / cfg.coupling_d
    if "x" in point:
        x = point["x"]
        if x == 0.0:
            t_mq = math.inf
        elif tau == 0.0:
            raise UsageError("cannot sweep x > 0 with tau = 0 (t_mq would vanish)")
        else:
            t_mq = tau / x
    else:
        t_mq = cfg.t_mq
    try:
        return ExperimentParams(coupling_d=cfg.coupling_d, tau=tau, beta=beta, t_mq=t_mq)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _rows_pair(cfg: RunConfig):
    swept = [grid.var for grid in cfg.grids]
    columns = swept + [
        "j0_closed", "j2_closed", "jm2_closed",
        "j0_pipeline", "j2_pipeline", "jm2_pipeline",
        "discrepancy",
    ]
    system = SpinSystem(2)
    rows = []
    worst = 0.0
    for point in _grid_points(cfg):
        params = _params_for_point(cfg, point)
        closed = closed_form_pair(params)
        extracted = extract_spectrum(system, params)
        discrepancy = max(
            abs(closed.intensity(n) - extracted.intensity(n)) for n in (-2, 0, 2)
        )
        worst = max(worst, discrepancy)
        rows.append(
            [point[v] for v in swept]
            + [closed.intensity(0), closed.intensity(2), closed.intensity(-2)]
            + [extracted.intensity(0), extracted.intensity(2), extracted.intensity(-2)]
            + [discrepancy]
        )
    return columns, rows, worst


def _rows_chain(cfg: RunConfig):
    use_oracle = cfg.oracle == "on" or (
        cfg.oracle == "auto" and cfg.n_spins <= CHAIN_ORACLE_MAX_SPINS
    )
    swept = [grid.var for grid in cfg.grids]
    columns = swept + ["j0", "j_pm2", "sum_rule_residual"]
    if use_oracle:
        columns += ["j0_pipeline", "j_pm2_pipeline", "discrepancy"]
    system = SpinSystem(cfg.n_spins) if use_oracle else None
    rows = []
    worst = 0.0
    first_params = None
    for point in _grid_points(cfg):
        params = _params_for_point(cfg, point)
        if first_params is None:
            first_params = params
        closed = closed_form_chain(cfg.n_spins, params)
        j_pm2 = closed.two_quantum_sum
        residual = closed.intensity(0) + j_pm2 - params.relaxation_factor(2)
        row = [point[v] for v in swept] + [closed.intensity(0), j_pm2, residual]
        if use_oracle:
            oracle_params = ExperimentParams(
                coupling_d=params.coupling_d,
                tau=params.tau,
                beta=CHAIN_ORACLE_BETA,
                t_mq=params.t_mq,
            )
            scale = chain_pipeline_normalization(cfg.n_spins, CHAIN_ORACLE_BETA)
            extracted = extract_spectrum(system, oracle_params)
            j0_pipe = extracted.intensity(0) / scale
            j_pm2_pipe = extracted.two_quantum_sum / scale
            discrepancy = max(
                abs(j0_pipe - closed.intensity(0)), abs(j_pm2_pipe - j_pm2)
            )
            worst = max(worst, discrepancy)
            row += [j0_pipe, j_pm2_pipe, discrepancy]
        rows.append(row)
    if first_params is not None:
        print(regime_check(cfg.coupling_d, first_params.t_mq).message, file=sys.stderr)
    return columns, rows, worst


def _rows_entanglement(cfg: RunConfig):
    swept = [grid.var for grid in cfg.grids]
    columns = swept + [
        "concurrence_closed", "concurrence_numeric", "delta_e", "t_e", "discrepancy",
    ]
    system = SpinSystem(2)
    rows = []
    worst = 0.0
    for point in _grid_points(cfg):
        params = _params_for_point(cfg, point)
        x = params.relaxation_rate
        closed = concurrence_closed_form(params.beta, params.d_tau, x)
        numeric = concurrence_numeric(
            propagate_preparation(system, params),
            beta=params.beta,
            d_tau=params.d_tau,
            relaxation_rate=x,
        ).concurrence
        discrepancy = abs(closed - numeric)
        worst = max(worst, discrepancy)
        rows.append(
            [point[v] for v in swept]
            + [
                closed,
                numeric,
                entanglement_fluctuation(closed),
                onset_temperature(cfg.omega0, x),
                discrepancy,
            ]
        )
    return columns, rows, worst


def _rows_figure1(cfg: RunConfig):
    swept = [grid.var for grid in cfg.grids]
    columns = swept + [
        "j2_sum_closed", "j2_sum_pipeline",
        "concurrence_closed", "concurrence_pipeline",
        "delta_e", "discrepancy",
    ]
    system = SpinSystem(2)
    rows = []
    worst = 0.0
    for point in _grid_points(cfg):
        params = _params_for_point(cfg, point)
        x = params.relaxation_rate
        closed_spectrum = closed_form_pair(params)
        extracted = extract_spectrum(system, params)
        c_closed = concurrence_closed_form(params.beta, params.d_tau, x)
        c_numeric = concurrence_numeric(propagate_preparation(system, params)).concurrence
        discrepancy = max(
            abs(closed_spectrum.two_quantum_sum - extracted.two_quantum_sum),
            abs(c_closed - c_numeric),
        )
        worst = max(worst, discrepancy)
        rows.append(
            [point[v] for v in swept]
            + [
                closed_spectrum.two_quantum_sum,
                extracted.two_quantum_sum,
                c_closed,
                c_numeric,
                entanglement_fluctuation(c_closed),
                discrepancy,
            ]
        )
    return columns, rows, worst


_ROW_BUILDERS = {
    "pair-sweep": _rows_pair,
    "chain-sweep": _rows_chain,
    "entanglement": _rows_entanglement,
    "figure1": _rows_figure1,
}


def _format_cell(value) -> str:
    if value is None:
        return ""
    return format(float(value), ".17g")


def render_csv(columns: list[str], rows: list[list]) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_format_cell(value) for value in row) for row in rows)
    return "\n".join(lines) + "\n"


def render_json(columns: list[str], rows: list[list], config_echo: dict) -> str:
    payload = {
        "config": config_echo,
        "rows": [dict(zip(columns, row)) for row in rows],
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _write_output(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            columns, rows, worst = _ROW_BUILDERS[cfg.mode](cfg)
        for message in sorted({str(w.message) for w in caught}):
            print(f"warning: {message}", file=sys.stderr)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if cfg.format == "csv":
        text = render_csv(columns, rows)
    else:
        text = render_json(columns, rows, cfg.echo())
    try:
        _write_output(text, cfg.out)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 1

    if worst > DISCREPANCY_LIMIT:
        print(
            f"self-verification failed: max discrepancy {worst:.3e} exceeds {DISCREPANCY_LIMIT:.1e}",
            file=sys.stderr,
        )
        return 2
    return 0


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
