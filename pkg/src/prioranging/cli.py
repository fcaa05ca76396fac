"""Command line: ``run``, ``sweep`` and ``ucd encode|decode``.

Exit status is 0 on success, 1 on usage or configuration errors and 2 on
anything unexpected.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from pathlib import Path

from .core import (DEFER_UNITS, INITIAL_DEFER, OVERFLOW_POLICIES, SUCCESS_AT, TABLE1, InvalidConfig,
                   SimConfig, format_value, load_config, parse_config_text, validate)
from .engine import Replications, run_replications
from .sweep import POW2_WINDOWS, SweepRow, find_optimal, sweep
from .ucd import UcdError, UcdMessage, decode_ucd, encode_ucd, params_from_ucd

RUN_COLUMNS = ("frame", "hp_arrived", "hp_succeeded", "hp_ratio",
               "lp_arrived", "lp_succeeded", "lp_ratio")
SWEEP_COLUMNS = ("rssw_hp", "rssw_lp", "alpha", "pa", "hp_mean", "hp_std",
                 "lp_mean", "lp_std", "n_seeds")
PRESETS = {"table1": TABLE1}


def _f(x: float) -> str:
    return f"{x:.6f}"


def metadata_lines(config: SimConfig, n_seeds: int) -> list[str]:
    lines = ["# prioranging run"]
    lines += [f"# {f.name} = {format_value(getattr(config, f.name))}"
              for f in dataclasses.fields(config)]
    lines.append(f"# n_seeds = {n_seeds}")
    return lines


def format_run_csv(reps: Replications, config: SimConfig) -> str:
    lines = metadata_lines(config, reps.n_seeds)
    lines.append(",".join(RUN_COLUMNS))
    for k, frame in enumerate(reps.frames):
        lines.append(",".join([str(frame)] + [_f(v[k]) for v in (
            reps.hp_arrived, reps.hp_succeeded, reps.hp_ratio_mean,
            reps.lp_arrived, reps.lp_succeeded, reps.lp_ratio_mean)]))
    return "\n".join(lines) + "\n"


def config_from_csv(text: str) -> tuple[SimConfig, int]:
    """Recover the config and seed count from a ``run`` CSV's metadata block."""
    meta = [line[1:] for line in text.splitlines() if line.startswith("#") and "=" in line]
    config, extra = parse_config_text("\n".join(meta), TABLE1, extra_keys=("n_seeds",))
    return config, int(extra.get("n_seeds", 1))


def format_sweep_csv(rows: list[SweepRow]) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for r in rows:
        if not r.ok:
            lines.append(f"# skipped rssw_hp={r.rssw_start_hp} rssw_lp={r.rssw_start_lp} "
                         f"alpha={r.alpha} pa={r.p_a}: {r.error}")
            continue
        lines.append(",".join([str(r.rssw_start_hp), str(r.rssw_start_lp), _f(r.alpha), _f(r.p_a),
                               _f(r.hp_mean), _f(r.hp_std), _f(r.lp_mean), _f(r.lp_std),
                               str(r.n_seeds)]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing

def _beta(text: str):
    return None if text.lower() in ("none", "inf", "unbounded") else int(text)


def _bool(text: str) -> bool:
    return text.lower() in ("1", "true", "yes", "on")


# (flag, config field, type)
CONFIG_FLAGS = [
    ("--u", "total_stations", int),
    ("--pa", "arrival_prob", float),
    ("--hp-fraction", "hp_fraction", float),
    ("--opps", "opportunities_per_frame", int),
    ("--n-codes", "n_codes", int),
    ("--alpha", "alpha", float),
    ("--rssw-hp", "rssw_start_hp", int),
    ("--rssw-lp", "rssw_start_lp", int),
    ("--rssw-end", "rssw_end", int),
    ("--frame-ms", "frame_duration_ms", float),
    ("--t3-ms", "t3_ms", float),
    ("--beta", "beta", _beta),
    ("--frames", "n_frames", int),
    ("--max-retries", "max_retries", _beta),
    ("--seed", "seed", int),
    ("--overflow-policy", "overflow_policy", str),
    ("--t3-inclusive", "t3_inclusive", _bool),
    ("--success-at", "success_at", str),
    ("--initial-defer", "initial_defer", str),
    ("--defer-unit", "defer_unit", str),
]
_CHOICES = {"overflow_policy": OVERFLOW_POLICIES, "success_at": SUCCESS_AT,
            "initial_defer": INITIAL_DEFER, "defer_unit": DEFER_UNITS}
# sweep takes lists for these
SWEEP_LIST_FIELDS = {"alpha", "arrival_prob"}


def _add_config_flags(p: argparse.ArgumentParser, skip=()) -> None:
    p.add_argument("--preset", choices=sorted(PRESETS), help="start from a named parameter set")
    p.add_argument("--config", type=Path, help="key = value config file")
    for flag, name, kind in CONFIG_FLAGS:
        if name in skip:
            continue
        p.add_argument(flag, dest=name, type=kind, choices=_CHOICES.get(name),
                       default=argparse.SUPPRESS)
    p.add_argument("--seeds", type=int, default=None, help="number of replications")
    p.add_argument("--jobs", type=int, default=1, help="max concurrent replications")
    p.add_argument("-o", "--output", type=Path, help="write CSV here instead of stdout")


def _config_from_args(args, skip=()) -> SimConfig:
    config = PRESETS[args.preset] if args.preset else TABLE1
    if args.config:
        config = load_config(args.config, config)
    given = vars(args)
    changes = {name: given[name] for _, name, _ in CONFIG_FLAGS if name not in skip and name in given}
    return config.replace(**changes)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prioranging", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one configuration, CSV per frame")
    _add_config_flags(p)
    p.add_argument("--replay", type=Path, help="rerun the configuration recorded in a run CSV")

    p = sub.add_parser("sweep", help="grid over start windows, alpha and p_a")
    _add_config_flags(p, skip=SWEEP_LIST_FIELDS)
    p.add_argument("--alpha", dest="alphas", type=float, nargs="+")
    p.add_argument("--pa", dest="arrival_probs", type=float, nargs="+")
    p.add_argument("--hp-windows", type=int, nargs="+", default=POW2_WINDOWS)
    p.add_argument("--lp-windows", type=int, nargs="+", default=POW2_WINDOWS)
    p.add_argument("--pairwise", action="store_true", help="zip the window lists instead of crossing")
    p.add_argument("--tsrr", type=float, help="print the optimal window pair for this HP target")

    p = sub.add_parser("ucd", help="encode or decode the modified UCD message")
    usub = p.add_subparsers(dest="ucd_command", required=True)
    e = usub.add_parser("encode")
    e.add_argument("--cc", type=int, default=0, help="configuration change count")
    e.add_argument("--lp-start", type=int, default=0)
    e.add_argument("--lp-end", type=int, default=0)
    e.add_argument("--req-start", type=int, default=0)
    e.add_argument("--req-end", type=int, default=0)
    e.add_argument("--hp-start", type=int, default=0)
    e.add_argument("--hp-end", type=int, default=0)
    e.add_argument("--frac", type=int, default=0, help="2-bit reservation fraction, v/4")
    e.add_argument("--out-file", type=Path, help="also write the raw octets here")
    d = usub.add_parser("decode")
    d.add_argument("hex", nargs="?", help="hex string; read from stdin when omitted")
    d.add_argument("--in-file", type=Path, help="read raw octets from a file")
    d.add_argument("--n-codes", type=int, default=TABLE1.n_codes)
    return parser


def _emit(text: str, output: Path | None) -> None:
    if output:
        output.write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    if args.replay:
        config, n_seeds = config_from_csv(args.replay.read_text())
    else:
        config = _config_from_args(args)
        n_seeds = args.seeds or 1
    validate(config)
    start = time.perf_counter()
    reps = run_replications(config, n_seeds, jobs=args.jobs)
    _emit(format_run_csv(reps, config), args.output)
    print(f"{n_seeds} replication(s) in {time.perf_counter() - start:.2f} s", file=sys.stderr)
    return 0


def cmd_sweep(args) -> int:
    template = validate(_config_from_args(args, skip=SWEEP_LIST_FIELDS))
    rows = sweep(template, args.hp_windows, args.lp_windows, args.alphas, args.seeds or 200,
                 args.arrival_probs, pairwise=args.pairwise, jobs=args.jobs)
    table = format_sweep_csv(rows)
    if args.tsrr is None:
        _emit(table, args.output)
        return 0
    if args.output:
        args.output.write_text(table)
    groups: dict[tuple, list[SweepRow]] = {}
    for r in rows:
        groups.setdefault((r.alpha, r.p_a), []).append(r)
    for (alpha, pa), group in groups.items():
        best = find_optimal(group, args.tsrr)
        answer = "none" if best is None else f"{best.rssw_start_hp},{best.rssw_start_lp}"
        print(answer if len(groups) == 1 else f"alpha={alpha},pa={pa}: {answer}")
    return 0


def cmd_ucd(args) -> int:
    if args.ucd_command == "encode":
        msg = UcdMessage(args.cc, args.lp_start, args.lp_end, args.req_start, args.req_end,
                         args.hp_start, args.hp_end, args.frac)
        data = encode_ucd(msg)
        if args.out_file:
            args.out_file.write_bytes(data)
        print(data.hex().upper())
        return 0

    if args.in_file:
        data = args.in_file.read_bytes()
    else:
        text = args.hex if args.hex is not None else sys.stdin.read()
        try:
            data = bytes.fromhex(text.strip())
        except ValueError as exc:
            raise UcdError(f"not a hex string: {exc}") from None
    msg = decode_ucd(data)
    params = params_from_ucd(msg, args.n_codes)
    for f in dataclasses.fields(msg):
        print(f"{f.name} = {getattr(msg, f.name)}")
    print(f"# rssw_hp={params.rssw_start_hp} rssw_lp={params.rssw_start_lp} "
          f"rssw_end={params.rssw_end} frac={msg.cdma_code_reservation_fraction_hp} "
          f"({params.n_hp_codes}/{args.n_codes} codes reserved for HP)")
    return 0


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "ucd": cmd_ucd}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return COMMANDS[args.command](args)
    except (InvalidConfig, UcdError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
