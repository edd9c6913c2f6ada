"""Command-line interface emitting reproducible CSV/JSON data files.

Every subcommand resolves its configuration (optional key-value config
file, overridden by explicit flags), runs the corresponding computation,
and writes a table: CSV with `#`-prefixed metadata lines, or a single
JSON object with `config`, `columns`, and `data`.  Identical configuration
yields byte-identical output.  All physical quantities are in Gamma units.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .apm import optimize_detuning
from .core import MediumParams
from .dynamics import (
    NumericalInstability,
    PulseShape,
    SimGrid,
    optimize_amplification,
    simulate,
)
from .phase_jump import detect_zero_crossing, solve_jump
from .steady_state import trace_curve, unwrapped_phase

COMMANDS = ("steady", "phase-diagram", "jump", "apm", "propagate", "amplify-sweep")


def _parse_sweep(spec: str) -> list[float]:
    """start:stop:step grid, stop included when it lies on the grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"sweep must be start:stop:step, got {spec!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0.0:
        raise ValueError(f"sweep step must be > 0, got {step}")
    count = math.floor((stop - start) / step + 1e-9) + 1
    if count < 1:
        raise ValueError(f"sweep {spec!r} contains no points")
    return [start + k * step for k in range(count)]


def _parse_pair(spec: str) -> tuple[float, float]:
    parts = spec.split(":")
    if len(parts) != 2:
        raise ValueError(f"range must be lo:hi, got {spec!r}")
    return float(parts[0]), float(parts[1])


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=1, help="sweep-point workers")
    common.add_argument(
        "--config",
        default=None,
        help="key-value file supplying defaults; explicit flags override it",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dleit",
        description="Double-lambda EIT toolkit: steady-state propagation, "
        "phase jumps, phase modulation, and pulse dynamics (Gamma units).",
    )
    common = _common_parser()
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "steady",
        parents=[common],
        help="terminal transmissions and accumulated phases of both fields",
    )
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.0)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--phi-r", type=float, default=0.0)
    group.add_argument("--phi-r-sweep", type=_parse_sweep, default=None,
                       metavar="START:STOP:STEP")
    p.add_argument("--samples", type=int, default=2000,
                   help="zeta samples used for phase unwrapping")
    p.set_defaults(handler=cmd_steady)

    p = sub.add_parser(
        "phase-diagram",
        parents=[common],
        help="complex field trajectories along the medium",
    )
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--phi-r", type=float, nargs="+", required=True)
    p.add_argument("--samples", type=int, default=2000)
    p.set_defaults(handler=cmd_phase_diagram)

    p = sub.add_parser(
        "jump",
        parents=[common],
        help="critical depths and jump phases over a detuning grid",
    )
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--delta", type=float, nargs="+")
    group.add_argument("--delta-sweep", type=_parse_sweep, metavar="START:STOP:STEP")
    p.add_argument("--n", type=int, default=1, help="jump order (odd)")
    p.add_argument("--verify", action="store_true",
                   help="locate the field zero numerically on a traced curve")
    p.add_argument("--samples", type=int, default=2000)
    p.set_defaults(handler=cmd_jump)

    p = sub.add_parser(
        "apm",
        parents=[common],
        help="optimized phase-modulation working points per optical depth",
    )
    p.add_argument("--alpha", type=float, nargs="+", required=True)
    p.add_argument("--target", choices=("pi", "half_pi"), default="pi")
    p.add_argument("--delta-range", type=_parse_pair, default=(0.5, 60.0),
                   metavar="LO:HI")
    p.add_argument("--scan-step", type=float, default=0.05)
    p.add_argument("--tol", type=float, default=1e-3)
    p.set_defaults(handler=cmd_apm)

    p = sub.add_parser(
        "propagate",
        parents=[common],
        help="time-domain pulse propagation through the medium",
    )
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--gamma21", type=float, default=0.0)
    p.add_argument("--phi-r", type=float, default=0.0,
                   help="loop phase, realized as the drive-field phase")
    p.add_argument("--omega-c", type=float, default=1.0)
    p.add_argument("--omega-d", type=float, default=1.0)
    p.add_argument("--probe-amp", type=float, default=1e-3)
    p.add_argument("--signal-amp", type=float, default=1e-3)
    p.add_argument("--pulse", choices=("square", "smoothed_square", "gaussian", "cw"),
                   default="smoothed_square")
    p.add_argument("--t-on", type=float, default=10.0)
    p.add_argument("--t-off", type=float, default=210.0)
    p.add_argument("--rise-time", type=float, default=2.0)
    p.add_argument("--n-z", type=int, default=200)
    p.add_argument("--dt", type=float, default=0.02)
    p.add_argument("--t-final", type=float, default=400.0)
    p.add_argument("--t-stride", type=int, default=1,
                   help="emit every k-th time sample")
    p.set_defaults(handler=cmd_propagate)

    p = sub.add_parser(
        "amplify-sweep",
        parents=[common],
        help="energy-optimal signal working point per optical depth",
    )
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--alpha", type=float, nargs="+")
    group.add_argument("--alpha-sweep", type=_parse_sweep, metavar="START:STOP:STEP")
    p.add_argument("--delta-range", type=_parse_pair, default=(0.5, 60.0),
                   metavar="LO:HI")
    p.add_argument("--scan-step", type=float, default=0.05)
    p.add_argument("--tol", type=float, default=1e-3)
    p.set_defaults(handler=cmd_amplify_sweep)

    return parser


def _config_tokens(path: str) -> list[str]:
    """Translate a key-value config file into command-line tokens."""
    tokens: list[str] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line is not 'key = value': {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or key == "config":
            raise ValueError(f"invalid config key in line: {raw!r}")
        flag = "--" + key.replace("_", "-")
        if value.lower() in ("true", "false"):
            if value.lower() == "true":
                tokens.append(flag)
            continue
        tokens.append(flag)
        tokens.extend(shlex.split(value))
    return tokens


def _inject_config(argv: list[str]) -> list[str]:
    """Splice config-file tokens right after the subcommand.

    Tokens given explicitly on the command line come later and therefore
    override the config file.
    """
    path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
            break
        if token.startswith("--config="):
            path = token.split("=", 1)[1]
            break
    if path is None:
        return argv
    for i, token in enumerate(argv):
        if token in COMMANDS:
            return argv[: i + 1] + _config_tokens(path) + argv[i + 1 :]
    return argv


def _parallel_map(fn, items, threads: int) -> list:
    items = list(items)
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _terminal_row(phi_r: float, params: MediumParams, samples: int) -> list[float]:
    curve = trace_curve(phi_r, params, n_samples=samples)
    probe_phase, signal_phase = unwrapped_phase(curve)
    return [
        phi_r,
        float(np.abs(curve.probe_ratio[-1]) ** 2),
        float(np.abs(curve.signal_ratio[-1]) ** 2),
        float(probe_phase[-1]),
        float(signal_phase[-1]),
    ]


def cmd_steady(args) -> tuple[list[str], list[list[float]], dict]:
    params = MediumParams(alpha=args.alpha, delta=args.delta)
    phis = args.phi_r_sweep if args.phi_r_sweep is not None else [args.phi_r]
    rows = _parallel_map(
        lambda phi: _terminal_row(phi, params, args.samples), phis, args.threads
    )
    return ["phi_r", "T_p", "T_s", "dphi_p", "dphi_s"], rows, {}


def cmd_phase_diagram(args) -> tuple[list[str], list[list[float]], dict]:
    params = MediumParams(alpha=args.alpha, delta=args.delta)
    columns = ["zeta", "re_probe", "im_probe", "re_signal", "im_signal"]
    multi = len(args.phi_r) > 1
    if multi:
        columns = ["phi_r"] + columns
    rows: list[list[float]] = []
    for phi in args.phi_r:
        curve = trace_curve(phi, params, n_samples=args.samples)
        for k in range(len(curve)):
            row = [
                float(curve.zeta_grid[k]),
                float(curve.probe_ratio[k].real),
                float(curve.probe_ratio[k].imag),
                float(curve.signal_ratio[k].real),
                float(curve.signal_ratio[k].imag),
            ]
            rows.append([phi] + row if multi else row)
    return columns, rows, {}


def cmd_jump(args) -> tuple[list[str], list[list[float]], dict]:
    deltas = args.delta if args.delta is not None else args.delta_sweep
    columns = ["delta", "critical_depth", "probe_jump_phase", "signal_jump_phase"]
    if args.verify:
        columns += ["zero_zeta", "zero_offset", "grid_step"]

    def one(delta: float) -> list[float]:
        sol = solve_jump(delta, args.n)
        row = [delta, sol.critical_depth, sol.probe_jump_phase, sol.signal_jump_phase]
        if args.verify:
            params = MediumParams(alpha=sol.critical_depth, delta=delta)
            curve = trace_curve(sol.probe_jump_phase, params, n_samples=args.samples)
            zero = detect_zero_crossing(curve, "probe")
            step = sol.critical_depth / (args.samples - 1)
            if zero is None:
                row += [float("nan"), float("nan"), step]
            else:
                row += [zero, abs(zero - sol.critical_depth), step]
        return row

    return columns, _parallel_map(one, deltas, args.threads), {}


def cmd_apm(args) -> tuple[list[str], list[list[float]], dict]:
    def one(alpha: float) -> list[float]:
        pt = optimize_detuning(
            alpha,
            args.target,
            delta_range=args.delta_range,
            tol=args.tol,
            scan_step=args.scan_step,
        )
        return [
            pt.alpha,
            pt.delta,
            pt.phi_r,
            pt.transmission_with_signal,
            pt.transmission_without_signal,
            pt.phase_with,
            pt.phase_without,
            pt.apm_contrast,
        ]

    columns = [
        "alpha",
        "delta_opt",
        "phi_r",
        "T_with",
        "T_without",
        "phase_with",
        "phase_without",
        "contrast",
    ]
    return columns, _parallel_map(one, args.alpha, args.threads), {}


def cmd_propagate(args) -> tuple[list[str], list[list[float]], dict]:
    params = MediumParams(
        alpha=args.alpha,
        delta=args.delta,
        gamma21=args.gamma21,
        omega_c=args.omega_c,
        omega_d=args.omega_d * np.exp(1j * args.phi_r),
    )
    if args.pulse == "cw":
        probe = PulseShape.cw(args.probe_amp, args.t_on, args.rise_time)
        signal = PulseShape.cw(args.signal_amp, args.t_on, args.rise_time)
    else:
        probe = PulseShape(args.pulse, args.probe_amp, args.t_on, args.t_off,
                           args.rise_time)
        signal = PulseShape(args.pulse, args.signal_amp, args.t_on, args.t_off,
                            args.rise_time)
    grid = SimGrid(n_z=args.n_z, dt=args.dt, t_final=args.t_final)
    result = simulate(params, probe, signal, grid)
    if args.t_stride < 1:
        raise ValueError(f"t-stride must be >= 1, got {args.t_stride}")
    idx = np.arange(0, result.time_grid.size, args.t_stride)
    rows = [
        [
            float(result.time_grid[k]),
            float(result.input_probe[k].real),
            float(result.input_probe[k].imag),
            float(result.input_signal[k].real),
            float(result.input_signal[k].imag),
            float(result.output_probe[k].real),
            float(result.output_probe[k].imag),
            float(result.output_signal[k].real),
            float(result.output_signal[k].imag),
        ]
        for k in idx
    ]
    columns = [
        "t",
        "re_probe_in",
        "im_probe_in",
        "re_signal_in",
        "im_signal_in",
        "re_probe_out",
        "im_probe_out",
        "re_signal_out",
        "im_signal_out",
    ]
    meta = {
        "energy_transmission_probe": result.energy_transmission_probe,
        "energy_transmission_signal": result.energy_transmission_signal,
        "group_delay_probe": result.group_delay_probe,
        "group_delay_signal": result.group_delay_signal,
    }
    return columns, rows, meta


def cmd_amplify_sweep(args) -> tuple[list[str], list[list[float]], dict]:
    alphas = args.alpha if args.alpha is not None else args.alpha_sweep

    def one(alpha: float) -> list[float]:
        r = optimize_amplification(
            alpha,
            delta_range=args.delta_range,
            scan_step=args.scan_step,
            tol=args.tol,
        )
        return [r.alpha, r.delta_opt, r.phi_r_opt,
                r.probe_transmission, r.signal_transmission]

    columns = ["alpha", "delta_opt", "phi_r_opt", "T_p", "T_s"]
    return columns, _parallel_map(one, alphas, args.threads), {}


#: argparse entries that do not affect the computed data and therefore stay
#: out of the reproducibility header (identical physics => identical bytes).
_NON_CONFIG_KEYS = ("handler", "command", "out", "format", "threads", "config")


def _config_echo(args) -> dict:
    echo = {"command": args.command}
    for key, value in vars(args).items():
        if key in _NON_CONFIG_KEYS:
            continue
        if isinstance(value, tuple):
            value = list(value)
        echo[key] = value
    return echo


def _render_csv(config: dict, columns: list[str], rows: list[list[float]],
                meta: dict) -> str:
    lines = [f"# {key} = {value}" for key, value in config.items()]
    lines += [f"# {key} = {value}" for key, value in meta.items()]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def _finite_or_none(value: float) -> float | None:
    """JSON has no NaN/inf; undefined entries become null."""
    value = float(value)
    return value if math.isfinite(value) else None


def _render_json(config: dict, columns: list[str], rows: list[list[float]],
                 meta: dict) -> str:
    payload = {
        "config": {
            key: _finite_or_none(value) if isinstance(value, float) else value
            for key, value in {**config, **meta}.items()
        },
        "columns": columns,
        "data": [[_finite_or_none(v) for v in row] for row in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def _write(args, columns: list[str], rows: list[list[float]], meta: dict) -> None:
    config = _config_echo(args)
    if args.format == "csv":
        text = _render_csv(config, columns, rows, meta)
    else:
        text = _render_json(config, columns, rows, meta)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _inject_config(argv)
        args = build_parser().parse_args(argv)
        columns, rows, meta = args.handler(args)
        _write(args, columns, rows, meta)
    except NumericalInstability as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
