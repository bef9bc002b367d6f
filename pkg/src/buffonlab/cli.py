"""Command-line front end.

Five subcommands: needle, joint, lazzarini, ant, converge.  Machine
output (JSON, or CSV where a table schema exists) goes to stdout, or to
--output when given; human-readable summary lines go to stderr, or to
stdout when the machine payload was redirected to a file.  Identical
flags always produce identical bytes on every stream.

Exit codes: 0 success, 1 configuration error (including bad flags),
2 statistical degeneracy (no crossings, too few runs).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import antfield, experiments, formats, sequential
from .errors import ConfigurationError, InsufficientDataError
from .needle import FloorSpec, NeedleSpec, Tally, estimate_pi
from .streams import U64_MAX, StreamSpec, UnitStream


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract wants 1
    def error(self, message):
        raise ConfigurationError(message)


def _parse_seed(text: str) -> int:
    value = int(text, 0)  # accepts decimal and 0x-prefixed hex
    if not 0 <= value <= U64_MAX:
        raise ValueError(f"seed must be in [0, 2**64), got {text}")
    return value


def _parse_target(text: str) -> float:
    if text.strip().lower() == "pi":
        return math.pi
    return float(text)


def _parse_ns(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError:
        raise ValueError(f"--ns wants comma-separated integers, got {text!r}")


def build_parser() -> _Parser:
    parser = _Parser(prog="buffonlab",
                     description="Buffon needle Monte Carlo laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed_required=True):
        p.add_argument("--seed", type=_parse_seed, required=seed_required,
                       default=None, metavar="SEED",
                       help="decimal or 0x-hex stream seed (no default)")
        p.add_argument("--workers", type=int, default=1,
                       help="worker substreams; results depend on (seed, workers)")
        p.add_argument("--output", default=None, metavar="PATH",
                       help="write machine output here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("needle", help="estimate pi from needle throws")
    p.add_argument("--throws", type=int, required=True)
    p.add_argument("--spacing", type=float, default=1.0, help="line spacing a")
    p.add_argument("--length", type=float, default=1.0, help="needle length l")
    common(p)

    p = sub.add_parser("joint", help="estimate pi and e from one throw stream")
    p.add_argument("--throws", type=int, required=True)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--length", type=float, default=1.0)
    p.add_argument("--threshold", type=float, default=1.0,
                   help="run-length threshold x; the e target is e**x")
    common(p)

    p = sub.add_parser("lazzarini",
                       help="exact rational estimate, stop-rule traces, cheat report")
    p.add_argument("--exact", nargs=4, type=int, default=None,
                   metavar=("L_NUM", "L_DEN", "N", "M"),
                   help="evaluate 2*l*n/(a*m) exactly with l/a = L_NUM/L_DEN")
    p.add_argument("--rule", choices=("fixed", "window"), default=None)
    p.add_argument("--n-stop", type=int, default=None,
                   help="throw count for the fixed rule")
    p.add_argument("--target", type=_parse_target, default=math.pi,
                   help="window center; 'pi' or a number (default pi)")
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--stride", type=int, default=1,
                   help="record every this many throws (stop rules see every throw)")
    p.add_argument("--cheat-report", action="store_true",
                   help="compare fixed vs window stopping over many seeds")
    p.add_argument("--seeds", type=int, default=None,
                   help="cheat report: number of consecutive seeds from --seed")
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--length", type=float, default=1.0)
    common(p, seed_required=False)

    p = sub.add_parser("ant", help="area from segment intersection counts")
    p.add_argument("--side", type=float, default=1.0, help="torus side")
    p.add_argument("--count-a", type=int, required=True)
    p.add_argument("--count-b", type=int, required=True)
    p.add_argument("--seg-len", type=float, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--dump-segments", default=None, metavar="PATH",
                   help="write the first repetition's segments as CSV")
    common(p)

    p = sub.add_parser("converge", help="rms error vs n and the fitted slope")
    p.add_argument("--ns", type=_parse_ns, required=True,
                   metavar="N1,N2,...", help="throw counts, at least 3 distinct")
    p.add_argument("--seeds", type=int, required=True,
                   help="substreams per n (one error sample each)")
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--length", type=float, default=1.0)
    common(p)

    return parser


def _emit(args, payload_text: str, human_lines: list[str]) -> None:
    if args.output:
        Path(args.output).write_text(payload_text, encoding="utf-8")
        out = sys.stdout
    else:
        sys.stdout.write(payload_text)
        out = sys.stderr
    for line in human_lines:
        print(line, file=out)


def _require_json(args):
    if args.format != "json":
        raise ConfigurationError(
            f"{args.command}: only json output is defined here")


def _summary_lines(name: str, s) -> list[str]:
    return [f"{name}: {formats.fmt_float(s.point)} +/- {formats.fmt_float(s.stderr)}"
            f"  (95% CI {formats.fmt_float(s.ci95_low)} .. "
            f"{formats.fmt_float(s.ci95_high)}, n={s.n_effective})"]


def _cmd_needle(args) -> int:
    _require_json(args)
    floor = FloorSpec(args.spacing)
    needle = NeedleSpec(args.length)
    result = experiments.run_needle(args.seed, args.throws, floor, needle,
                                    workers=args.workers)
    config = {"throws": args.throws, "spacing_a": formats.round9(args.spacing),
              "length_l": formats.round9(args.length), "seed": args.seed,
              "workers": args.workers}
    derived = {"m": result.tally.m, "runs": None, "correlation": None}
    text = formats.payload("needle", config,
                           [formats.summary_entry("pi", result.summary)], derived)
    lines = _summary_lines("pi estimate", result.summary)
    lines.append(f"throws n={result.tally.n}, crossings m={result.tally.m}")
    _emit(args, text, lines)
    return 0


def _cmd_joint(args) -> int:
    _require_json(args)
    floor = FloorSpec(args.spacing)
    needle = NeedleSpec(args.length)
    result = experiments.run_joint(args.seed, args.throws, floor, needle,
                                   threshold_x=args.threshold,
                                   workers=args.workers)
    config = {"throws": args.throws, "spacing_a": formats.round9(args.spacing),
              "length_l": formats.round9(args.length),
              "threshold_x": formats.round9(args.threshold),
              "seed": args.seed, "workers": args.workers}
    estimates = [formats.summary_entry("pi", result.pi_summary),
                 formats.summary_entry("e", result.e_summary)]
    derived = {"m": result.tally.m, "runs": result.completed_runs,
               "correlation": formats.round9(result.correlation)}
    text = formats.payload("joint", config, estimates, derived)
    lines = _summary_lines("pi estimate", result.pi_summary)
    lines += _summary_lines(f"e**{formats.fmt_float(args.threshold)} estimate",
                            result.e_summary)
    lines.append(f"throws n={result.tally.n}, crossings m={result.tally.m}, "
                 f"completed runs {result.completed_runs}, "
                 f"corr(crossed, u) = "
                 f"{formats.fmt_float(result.correlation) if result.correlation is not None else 'nan'}")
    _emit(args, text, lines)
    return 0


def _lazzarini_exact(args) -> int:
    _require_json(args)
    l_num, l_den, n, m = args.exact
    rational = sequential.exact_estimate_rational(l_num, l_den, n, m)
    config = {"l_num": l_num, "l_den": l_den, "n": n, "m": m}
    derived = {"m": m, "runs": None, "correlation": None,
               "rational": str(rational),
               "numerator": rational.numerator,
               "denominator": rational.denominator,
               "value": formats.round9(rational.value)}
    text = formats.payload("lazzarini", config, [], derived)
    _emit(args, text, [f"{rational} = {formats.fmt_float(rational.value)}"])
    return 0


def _lazzarini_rule(args):
    if args.rule == "fixed":
        if args.n_stop is None:
            raise ConfigurationError("--rule fixed needs --n-stop")
        return sequential.FixedN(args.n_stop)
    if args.tolerance is None or args.n_max is None:
        raise ConfigurationError("--rule window needs --tolerance and --n-max")
    return sequential.TargetWindow(args.target, args.tolerance,
                                   args.n_min, args.n_max)


def _rational_spacing(args):
    # rational trace columns only make sense when l/a is a ratio of integers
    if float(args.length).is_integer() and float(args.spacing).is_integer():
        return int(args.length), int(args.spacing)
    return None, None


def _lazzarini_trace(args) -> int:
    if args.seed is None:
        raise ConfigurationError("simulation mode needs --seed")
    floor = FloorSpec(args.spacing)
    needle = NeedleSpec(args.length)
    rule = _lazzarini_rule(args)
    trace = sequential.run_sequential(
        UnitStream(StreamSpec(args.seed, 0)), floor, needle, rule,
        stride=args.stride)
    if args.format == "csv":
        l_num, l_den = _rational_spacing(args)
        text = formats.trace_csv(trace, l_num, l_den)
    else:
        final_m = int(trace.ms[-1])
        config = {"rule": args.rule, "spacing_a": formats.round9(args.spacing),
                  "length_l": formats.round9(args.length), "seed": args.seed,
                  "stride": args.stride}
        if isinstance(rule, sequential.FixedN):
            config["n_stop"] = rule.n_stop
        else:
            config.update({"target": formats.round9(rule.target),
                           "tolerance": formats.round9(rule.tolerance),
                           "n_min": rule.n_min, "n_max": rule.n_max})
        estimates = []
        if final_m >= 1:
            summary = estimate_pi(Tally(trace.stop_n, final_m), floor, needle)
            estimates.append(formats.summary_entry("pi", summary))
        derived = {"m": final_m, "runs": None, "correlation": None,
                   "stop_n": trace.stop_n, "stop_reason": trace.stop_reason,
                   "records": int(trace.ns.size)}
        text = formats.payload("lazzarini", config, estimates, derived)
    lines = [f"stopped at n={trace.stop_n} ({trace.stop_reason}), "
             f"m={int(trace.ms[-1])}, estimate "
             f"{formats.fmt_float(trace.final_estimate)}"]
    _emit(args, text, lines)
    return 0


def _lazzarini_cheat(args) -> int:
    _require_json(args)
    if args.seed is None or args.seeds is None:
        raise ConfigurationError("--cheat-report needs --seed and --seeds")
    if args.seeds < 1:
        raise ConfigurationError(f"--seeds must be >= 1, got {args.seeds}")
    if args.n_stop is None:
        raise ConfigurationError("--cheat-report needs --n-stop for the fixed arm")
    if args.tolerance is None or args.n_max is None:
        raise ConfigurationError("--cheat-report needs --tolerance and --n-max")
    floor = FloorSpec(args.spacing)
    needle = NeedleSpec(args.length)
    fixed_rule = sequential.FixedN(args.n_stop)
    window = sequential.TargetWindow(args.target, args.tolerance,
                                     args.n_min, args.n_max)
    seeds = list(range(args.seed, args.seed + args.seeds))
    report = sequential.cheat_report(seeds, fixed_rule, window, floor, needle,
                                     workers=args.workers)
    config = {"seeds": args.seeds, "first_seed": args.seed,
              "n_stop": args.n_stop, "target": formats.round9(window.target),
              "tolerance": formats.round9(window.tolerance),
              "n_min": window.n_min, "n_max": window.n_max,
              "spacing_a": formats.round9(args.spacing),
              "length_l": formats.round9(args.length), "workers": args.workers}
    derived = {"m": None, "runs": None, "correlation": None,
               "hits": report.hits,
               "hit_fraction": formats.round9(report.hit_fraction),
               "median_fixed_error": formats.round9(report.median_fixed_error),
               "median_hit_error": formats.round9(report.median_hit_error),
               "error_ratio": formats.round9(report.error_ratio)}
    text = formats.payload("lazzarini", config, [], derived)
    lines = [f"hits {report.hits}/{args.seeds} "
             f"(fraction {formats.fmt_float(report.hit_fraction)})",
             f"median fixed-n error {formats.fmt_float(report.median_fixed_error)}"]
    if report.median_hit_error is not None:
        lines.append(
            f"median hit error {formats.fmt_float(report.median_hit_error)} "
            f"(ratio {formats.fmt_float(report.error_ratio)})")
    _emit(args, text, lines)
    return 0


def _cmd_lazzarini(args) -> int:
    modes = sum([args.exact is not None, args.rule is not None,
                 bool(args.cheat_report)])
    if modes != 1:
        raise ConfigurationError(
            "pick exactly one of --exact, --rule, --cheat-report")
    if args.exact is not None:
        return _lazzarini_exact(args)
    if args.cheat_report:
        return _lazzarini_cheat(args)
    return _lazzarini_trace(args)


def _cmd_ant(args) -> int:
    region = antfield.TorusRegion(args.side)
    result = experiments.run_ant(args.seed, args.reps, args.count_a,
                                 args.count_b, args.seg_len, region,
                                 workers=args.workers)
    if args.dump_segments:
        stream = UnitStream(StreamSpec(args.seed, 0))
        set_a = antfield.scatter(stream, args.count_a, args.seg_len, region)
        set_b = antfield.scatter(stream, args.count_b, args.seg_len, region)
        Path(args.dump_segments).write_text(
            formats.scatter_csv([("a", set_a), ("b", set_b)]), encoding="utf-8")
    if args.format == "csv":
        text = formats.ant_csv(result.n_values, result.area_values)
    else:
        config = {"side": formats.round9(args.side), "count_a": args.count_a,
                  "count_b": args.count_b,
                  "seg_len": formats.round9(args.seg_len), "reps": args.reps,
                  "seed": args.seed, "workers": args.workers}
        estimates = [formats.summary_entry("area", result.area_summary)]
        derived = {"m": None, "runs": None, "correlation": None,
                   "mean_n": formats.round9(result.n_summary.point),
                   "stderr_n": formats.round9(result.n_summary.stderr),
                   "total_s": formats.round9(result.total_s),
                   "total_l": formats.round9(result.total_l)}
        text = formats.payload("ant", config, estimates, derived)
    lines = _summary_lines("area estimate", result.area_summary)
    lines.append(f"mean N = {formats.fmt_float(result.n_summary.point)} "
                 f"+/- {formats.fmt_float(result.n_summary.stderr)} "
                 f"over {args.reps} repetitions")
    _emit(args, text, lines)
    return 0


def _cmd_converge(args) -> int:
    _require_json(args)
    floor = FloorSpec(args.spacing)
    needle = NeedleSpec(args.length)
    result = experiments.run_convergence(args.seed, args.ns, args.seeds,
                                         floor, needle, workers=args.workers)
    config = {"ns": result.ns, "seeds": args.seeds,
              "spacing_a": formats.round9(args.spacing),
              "length_l": formats.round9(args.length),
              "seed": args.seed, "workers": args.workers}
    points = [[n, formats.round9(r)] for n, r in zip(result.ns, result.rms_errors)]
    derived = {"m": None, "runs": None, "correlation": None,
               "slope": formats.round9(result.slope), "points": points}
    text = formats.payload("converge", config, [], derived)
    lines = [f"n={n}: rms error {formats.fmt_float(r)}"
             for n, r in zip(result.ns, result.rms_errors)]
    lines.append(f"fitted log-log slope {formats.fmt_float(result.slope)}")
    _emit(args, text, lines)
    return 0


_DISPATCH = {
    "needle": _cmd_needle,
    "joint": _cmd_joint,
    "lazzarini": _cmd_lazzarini,
    "ant": _cmd_ant,
    "converge": _cmd_converge,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _DISPATCH[args.command](args)
    except InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
