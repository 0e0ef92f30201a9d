"""Command-line front end: ``augur <experiment> [flags]``.

Exit codes: 0 on success, 1 for an invalid parameter value, 2 for usage
errors (no subcommand, unknown subcommand, unknown flag).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, experiments


class UsageError(Exception):
    pass


class ParamError(Exception):
    def __init__(self, param: str, message: str):
        super().__init__(f"invalid value for {param}: {message}")
        self.param = param


class _Parser(argparse.ArgumentParser):
    """Raise instead of exiting so the exit code can be chosen by the caller.

    A flag with a malformed value (``--trials abc``) is a parameter error;
    anything else argparse complains about is a usage error.
    """

    def error(self, message):
        if message.startswith("argument "):
            flag = message.split(":", 1)[0][len("argument "):]
            if "invalid choice" not in message or not flag.startswith("experiment"):
                raise ParamError(flag.split("/")[-1], message.split(":", 1)[1].strip())
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _pos_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _names(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def _pair(text):
    vals = _floats(text)
    if len(vals) != 2 or min(vals) <= 0:
        raise argparse.ArgumentTypeError("expected two positive numbers 'a,b'")
    return tuple(vals)


def _common(p):
    p.add_argument("--seed", type=int, default=0, help="master seed (default: %(default)s)")
    p.add_argument("-o", "--output", default="-",
                   help="output file, '-' for stdout (default: %(default)s)")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="output format (default: %(default)s)")
    p.add_argument("--figure", default=None,
                   help="also save a matplotlib figure to this path")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="augur", description="Learning-augmented algorithm experiments.")
    parser.add_argument("--version", action="version", version=f"augur {__version__}")
    sub = parser.add_subparsers(dest="experiment", metavar="experiment", parser_class=_Parser)

    p = sub.add_parser("search-bench", formatter_class=fmt,
                       help="hinted vs binary search probe counts")
    p.add_argument("--n", type=_pos_int, default=1024, help="array length")
    p.add_argument("--queries", type=_pos_int, default=1000, help="number of queries")
    p.add_argument("--noise", default="additive-uniform:16",
                   help="noise on the hint, 'kind:param'")
    _common(p)

    p = sub.add_parser("ski-grid", formatter_class=fmt,
                       help="exhaustive ski-rental bound check")
    p.add_argument("--b-max", type=_pos_int, default=50, help="largest buy cost b")
    p.add_argument("--d-max", type=_pos_int, default=200, help="largest true day count")
    p.add_argument("--h-max", type=_pos_int, default=None,
                   help="largest predicted day count (default: same as --d-max)")
    p.add_argument("--lambda", dest="lambdas", type=_floats,
                   default=list(experiments.DEFAULT_LAMBDAS),
                   help="comma-separated trust parameters in (0, 1]")
    _common(p)

    p = sub.add_parser("sketch-bench", formatter_class=fmt,
                       help="plain vs learned Count-Min on a Zipf stream")
    p.add_argument("--universe", type=_pos_int, default=1000, help="number of distinct items")
    p.add_argument("--zipf", type=float, default=1.1, help="Zipf exponent")
    p.add_argument("--length", type=_pos_int, default=100_000, help="stream length")
    p.add_argument("--rows", type=_pos_int, default=4, help="sketch rows")
    p.add_argument("--cols", type=_pos_int, default=64, help="plain sketch columns")
    p.add_argument("--heavy", type=int, default=50, help="predicted heavy hitters")
    p.add_argument("--fn-rate", type=float, default=0.0,
                   help="fraction of true heavy hitters the oracle misses")
    _common(p)

    p = sub.add_parser("bloom-bench", formatter_class=fmt,
                       help="standard, learned and sandwiched Bloom filters")
    p.add_argument("--members", type=_pos_int, default=1000, help="number of member keys")
    p.add_argument("--queries", type=_pos_int, default=100_000, help="non-member queries")
    p.add_argument("--member-beta", type=_pair, default=(5.0, 1.0),
                   help="Beta(a,b) score of members")
    p.add_argument("--nonmember-beta", type=_pair, default=(1.0, 5.0),
                   help="Beta(a,b) score of non-members")
    p.add_argument("--tau", type=float, default=0.5, help="score threshold")
    p.add_argument("--coverage", type=float, default=None,
                   help="pick tau so this fraction of members pass (overrides --tau)")
    p.add_argument("--bits-per-key", type=float, default=8.0,
                   help="standard filter bits per key")
    p.add_argument("--backup-bits-per-key", type=float, default=8.0,
                   help="learned filter backup bits per backup key")
    p.add_argument("--initial-bits-per-key", type=float, default=4.0,
                   help="sandwiched filter first-stage bits per key")
    p.add_argument("--sandwich-backup-bits-per-key", type=float, default=4.0,
                   help="sandwiched filter backup bits per backup key")
    p.add_argument("--score-bits", type=int, default=0,
                   help="bits charged for the score function")
    _common(p)

    p = sub.add_parser("cache-bench", formatter_class=fmt,
                       help="eviction policies against Belady")
    p.add_argument("--k", type=_pos_int, default=8, help="cache size")
    p.add_argument("--policy", dest="policies", type=_names,
                   default=list(experiments.CACHE_POLICIES),
                   help="comma-separated from " + ",".join(experiments.CACHE_POLICIES))
    p.add_argument("--trace", default=None,
                   help="trace file: one page per line, optional predicted next arrival")
    p.add_argument("--generator", default="zipf",
                   choices=("random", "zipf", "adversarial-pfif", "cyclic"),
                   help="synthetic trace when --trace is absent")
    p.add_argument("--universe", type=_pos_int, default=64, help="distinct pages")
    p.add_argument("--length", type=_pos_int, default=10_000, help="trace length")
    p.add_argument("--zipf", type=float, default=1.0, help="Zipf exponent")
    p.add_argument("--pairs", type=_pos_int, default=100,
                   help="repeated pairs in the adversarial trace")
    p.add_argument("--noise", default="exact",
                   help="noise on next-arrival gaps, 'kind:param'")
    _common(p)

    p = sub.add_parser("pom-static", formatter_class=fmt,
                       help="price of misprediction, static jobs")
    p.add_argument("--preset", choices=("exp-exp", "uniform-multiplicative"), default="exp-exp",
                   help="joint density of (size, prediction)")
    p.add_argument("--alpha", type=float, default=0.5, help="uniform-multiplicative spread")
    p.add_argument("--dist", default="exponential", choices=("exponential", "mm1", "weibull"),
                   help="service distribution for uniform-multiplicative")
    p.add_argument("--n", type=_pos_int, default=2, help="number of jobs")
    p.add_argument("--tol", type=float, default=1e-4, help="quadrature tolerance")
    _common(p)

    p = sub.add_parser("queue-bench", formatter_class=fmt,
                       help="M/G/1 simulation under scheduling policies")
    p.add_argument("--lambda", dest="lam", type=float, default=0.95, help="arrival rate")
    p.add_argument("--dist", type=_names, default=["exponential"],
                   help="comma-separated from exponential,mm1,weibull")
    p.add_argument("--policy", dest="policies", type=_names, default=["fcfs", "spjf"],
                   help="comma-separated from fcfs,sjf,spjf,psjf,pspjf,srpt,sprpt")
    p.add_argument("--alpha", dest="alphas", type=_floats,
                   default=list(experiments.DEFAULT_ALPHAS),
                   help="comma-separated uniform-multiplicative spreads")
    p.add_argument("--trials", type=_pos_int, default=50, help="independent trials")
    p.add_argument("--horizon", type=float, default=2e5, help="simulated time per trial")
    p.add_argument("--warmup", type=float, default=2e4, help="discarded initial time")
    _common(p)
    return parser


# flag name reported when a ValueError escapes an experiment
_VALUE_FLAGS = {
    "search-bench": "--noise",
    "ski-grid": "--lambda",
    "sketch-bench": "--fn-rate",
    "bloom-bench": "--tau",
    "cache-bench": "--policy",
    "pom-static": "--alpha",
    "queue-bench": "--lambda",
}


def _check(cond: bool, flag: str, message: str) -> None:
    if not cond:
        raise ParamError(flag, message)


def _run(args):
    e = args.experiment
    if e == "search-bench":
        return experiments.search_bench(args.n, args.queries, args.noise, args.seed)
    if e == "ski-grid":
        _check(bool(args.lambdas) and all(0 < v <= 1 for v in args.lambdas), "--lambda",
               "each value must lie in (0, 1]")
        return experiments.ski_grid(args.b_max, args.d_max, args.h_max, args.lambdas)
    if e == "sketch-bench":
        _check(args.zipf > 0, "--zipf", "must be positive")
        _check(0 <= args.heavy <= args.universe, "--heavy", "must lie in [0, universe]")
        _check(0 <= args.fn_rate <= 1, "--fn-rate", "must lie in [0, 1]")
        _check(args.rows * args.cols > args.heavy, "--cols",
               "plain sketch must have more counters than heavy slots")
        return experiments.sketch_bench(args.universe, args.zipf, args.length, args.rows,
                                        args.cols, args.heavy, args.fn_rate, args.seed)
    if e == "bloom-bench":
        _check(0 <= args.tau <= 1, "--tau", "must lie in [0, 1]")
        _check(args.coverage is None or 0 < args.coverage <= 1, "--coverage",
               "must lie in (0, 1]")
        for flag in ("bits_per_key", "backup_bits_per_key", "initial_bits_per_key",
                     "sandwich_backup_bits_per_key"):
            _check(getattr(args, flag) > 0, "--" + flag.replace("_", "-"), "must be positive")
        return experiments.bloom_bench(args.members, args.queries, args.member_beta,
                                       args.nonmember_beta, args.tau, args.coverage,
                                       args.bits_per_key, args.backup_bits_per_key,
                                       args.initial_bits_per_key,
                                       args.sandwich_backup_bits_per_key, args.score_bits,
                                       args.seed)
    if e == "cache-bench":
        bad = [p for p in args.policies if p not in experiments.CACHE_POLICIES + ("combined",)]
        _check(bool(args.policies) and not bad, "--policy", f"unknown policies {bad}")
        _check(args.trace is None or Path(args.trace).is_file(), "--trace", "file not found")
        return experiments.cache_bench(args.k, args.policies, args.trace, args.generator,
                                       args.universe, args.length, args.zipf, args.pairs,
                                       args.noise, args.seed)
    if e == "pom-static":
        _check(0 <= args.alpha < 1, "--alpha", "must lie in [0, 1)")
        _check(args.tol > 0, "--tol", "must be positive")
        return experiments.pom_static(args.preset, args.alpha, args.dist, args.n, args.tol)
    if e == "queue-bench":
        _check(0 < args.lam < 1, "--lambda", "arrival rate must lie in (0, 1)")
        bad = [d for d in args.dist if d not in ("exponential", "mm1", "weibull")]
        _check(bool(args.dist) and not bad, "--dist", f"unknown distributions {bad}")
        known = ("fcfs", "sjf", "spjf", "psjf", "pspjf", "srpt", "sprpt")
        bad = [p for p in args.policies if p not in known]
        _check(bool(args.policies) and not bad, "--policy", f"unknown policies {bad}")
        _check(bool(args.alphas) and all(0 <= a < 1 for a in args.alphas), "--alpha",
               "each value must lie in [0, 1)")
        _check(args.horizon > 0, "--horizon", "must be positive")
        _check(0 <= args.warmup < args.horizon, "--warmup", "must lie in [0, horizon)")
        return experiments.queue_bench(args.lam, args.dist, args.policies, args.alphas,
                                       args.trials, args.horizon, args.warmup, args.seed)
    raise UsageError(f"unknown experiment {e!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(argv)
        if args.experiment is None:
            raise UsageError(parser.format_help())
        try:
            table = _run(args)
        except ParamError:
            raise
        except ValueError as exc:
            raise ParamError(_VALUE_FLAGS[args.experiment], str(exc)) from None
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except ParamError as exc:
        print(f"augur: error: {exc}", file=sys.stderr)
        return 1
    table.config.setdefault("seed", args.seed)
    text = table.render(args.format)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    if args.figure:
        from .plotting import render
        render(table, args.figure)
    return 0


if __name__ == "__main__":
    sys.exit(main())
