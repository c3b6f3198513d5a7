"""Command-line entry point: ``multiwl1 <subcommand> ...``.

Exit status is 0 on success, 1 on a usage error (bad flags, unreadable or
invalid config) and 2 when the computation itself fails. Results go to
stdout or ``--out``; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import theory
from .core import load_matrix_csv, load_vector_txt, make_gaussian_matrix, save_vector_txt
from .experiments import (
    AudioConfig,
    SyntheticConfig,
    config_from_dict,
    export_table,
    load_audio,
    run_audio_experiment,
    run_synthetic_sweep,
    speech_like_signal,
    verify_partial_support_recovery,
)
from .experiments.tables import format_number
from .solver import WeightedBPDNProblem, solve_weighted_bpdn

__all__ = ["dispatch", "main"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _bool(text):
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _emit(value, out=None):
    text = value if isinstance(value, str) else format_number(float(value))
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _config_flags(parser, cls):
    # one --<field> flag per config field, so flags and JSON keys coincide
    for f in dataclasses.fields(cls):
        if f.type in ("tuple",) or isinstance(f.default, tuple):
            kind = _floats
        elif isinstance(f.default, bool):
            kind = _bool
        elif isinstance(f.default, int):
            kind = int
        elif isinstance(f.default, float):
            kind = float
        else:
            kind = str
        parser.add_argument(f"--{f.name}", dest=f"cfg_{f.name}", type=kind, default=None)


def _build_config(cls, args):
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
    overrides = {f.name: getattr(args, f"cfg_{f.name}") for f in dataclasses.fields(cls)}
    try:
        return config_from_dict(cls, data, **overrides)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid {cls.__name__}: {exc}")


def _make_parser():
    p = _Parser(prog="multiwl1", description="Weighted l1 recovery with multiple support estimates.")
    sub = p.add_subparsers(dest="command", metavar="subcommand", parser_class=_Parser)
    sub.required = True

    th = sub.add_parser("theory", help="closed-form recovery calculators")
    tsub = th.add_subparsers(dest="calc", metavar="calculator", parser_class=_Parser)
    tsub.required = True
    g = tsub.add_parser("gamma", help="aggregate gamma of an m-set estimate")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--omega", type=_floats, required=True)
    g.add_argument("--rho", type=_floats, required=True)
    g.add_argument("--alpha", type=_floats, required=True)
    d = tsub.add_parser("delta-hat", help="sufficient RIP bound (a - gamma^2)/(a + gamma^2)")
    d.add_argument("--gamma", type=float, required=True)
    d.add_argument("--a", type=float, required=True)
    for name in ("constants", "eta"):
        c = tsub.add_parser(name, help="error constants C0 C1" if name == "constants" else "signal-class eta")
        if name == "constants":
            c.add_argument("--gamma", type=float, required=True)
        c.add_argument("--a", type=float, required=True)
        c.add_argument("--delta-ak", type=float, required=True)
        c.add_argument("--delta-a1k", type=float, required=True)
    cc = tsub.add_parser("class-check", help="is x in the partial-recovery signal class")
    cc.add_argument("--x", required=True, help="vector file, one value per line")
    cc.add_argument("--k", type=int, required=True)
    cc.add_argument("--s", type=int, required=True)
    cc.add_argument("--eta", type=float, required=True)
    pt = tsub.add_parser("power-threshold", help="accuracy threshold for power-law signals")
    pt.add_argument("--p", type=float, required=True)
    pt.add_argument("--eta", type=float, required=True)
    ow = tsub.add_parser("optimal-weights", help="gamma-minimizing weights per set")
    ow.add_argument("--alpha", type=_floats, required=True)

    s = sub.add_parser("solve", help="solve one weighted BPDN problem from files")
    s.add_argument("--A", dest="A", required=True, help="matrix CSV")
    s.add_argument("--y", required=True, help="measurement vector file")
    s.add_argument("--w", help="weight vector file (default all ones)")
    s.add_argument("--epsilon", type=float, default=None)
    s.add_argument("--config", help='JSON object, may hold "epsilon"')
    s.add_argument("--out", help="write x here instead of stdout")

    for name, cls in (("synthetic", SyntheticConfig), ("audio", AudioConfig)):
        e = sub.add_parser(name, help=f"run the {name} experiment")
        e.add_argument("--config")
        e.add_argument("--out", required=True)
        e.add_argument("--format", choices=("csv", "json"), default=None)
        _config_flags(e, cls)
        if name == "synthetic":
            e.add_argument("--raw", action="store_true", help="one row per trial")
        else:
            e.add_argument("--input", help="audio file (default: bundled speech-like signal)")
            e.add_argument("--input-format", choices=("wav16-mono", "raw-f64"), default="wav16-mono")

    r = sub.add_parser("support-recovery", help="empirical partial support recovery rate")
    for flag, default in (("N", 128), ("n", 64), ("k", 10), ("s", 5), ("trials", 100), ("seed", 0)):
        r.add_argument(f"--{flag}", type=int, default=default)
    r.add_argument("--eta", type=float, default=6.0)

    rb = sub.add_parser("rip-bound", help="Monte-Carlo lower bound on delta_k")
    rb.add_argument("--A", dest="A", help="matrix CSV (default: Gaussian n x N)")
    rb.add_argument("--n", type=int, default=64)
    rb.add_argument("--N", type=int, default=128)
    rb.add_argument("--k", type=int, required=True)
    rb.add_argument("--trials", type=int, default=1000)
    rb.add_argument("--seed", type=int, default=0)
    return p


def _run_theory(args):
    if args.calc == "gamma":
        if not args.m == len(args.omega) == len(args.rho) == len(args.alpha):
            raise UsageError("--omega, --rho and --alpha need exactly m values each")
        prof = theory.SupportEstimateProfile.from_lists(args.rho, args.alpha, args.omega)
        _emit(theory.gamma(prof))
    elif args.calc == "delta-hat":
        _emit(theory.sufficient_delta_bound(args.gamma, args.a))
    elif args.calc == "constants":
        c0, c1 = theory.error_constants(args.gamma, theory.RipParams(args.a, args.delta_ak, args.delta_a1k))
        print(f"C0 {format_number(c0)}")
        print(f"C1 {format_number(c1)}")
    elif args.calc == "eta":
        _emit(theory.eta(theory.RipParams(args.a, args.delta_ak, args.delta_a1k)))
    elif args.calc == "class-check":
        x = load_vector_txt(args.x)
        _emit("true" if theory.check_signal_class(x, args.k, args.s, args.eta) else "false")
    elif args.calc == "power-threshold":
        _emit(theory.power_law_threshold(args.p, args.eta))
    elif args.calc == "optimal-weights":
        _emit(",".join(format_number(v) for v in theory.optimal_weights(args.alpha)))
    return 0


def _run_solve(args):
    eps = 0.0
    if args.config:
        try:
            with open(args.config) as fh:
                eps = float(json.load(fh).get("epsilon", 0.0))
        except (OSError, ValueError, AttributeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
    if args.epsilon is not None:
        eps = args.epsilon
    A = load_matrix_csv(args.A)
    y = load_vector_txt(args.y)
    w = load_vector_txt(args.w) if args.w else None
    res = solve_weighted_bpdn(WeightedBPDNProblem(A, y, eps, w))
    print(
        f"status={res.status} objective={format_number(res.objective)} "
        f"residual={format_number(res.residual_norm)} iterations={res.iterations}",
        file=sys.stderr,
    )
    if args.out:
        save_vector_txt(args.out, res.x)
    else:
        for v in res.x:
            print(format_number(float(v)))
    return 0 if res.converged else 2


def _table_format(args):
    if args.format:
        return args.format
    return "json" if str(args.out).lower().endswith(".json") else "csv"


def _run_synthetic(args):
    cfg = _build_config(SyntheticConfig, args)
    table = run_synthetic_sweep(cfg, raw=args.raw)
    export_table(table, args.out, _table_format(args))
    return 0


def _run_audio(args):
    cfg = _build_config(AudioConfig, args)
    if args.input:
        samples, rate = load_audio(args.input, args.input_format, rate=cfg.fs)
        if rate != cfg.fs:
            print(f"note: file rate {rate} Hz differs from config fs {cfg.fs} Hz", file=sys.stderr)
    else:
        samples = speech_like_signal(cfg.blocks * cfg.N, cfg.fs)
    table = run_audio_experiment(cfg, samples)
    export_table(table, args.out, _table_format(args))
    return 0


def _run_support_recovery(args):
    _emit(verify_partial_support_recovery(args.N, args.n, args.k, args.s, args.trials, args.seed, args.eta))
    return 0


def _run_rip_bound(args):
    A = load_matrix_csv(args.A) if args.A else make_gaussian_matrix(args.n, args.N, args.seed)
    _emit(theory.estimate_rip_delta_lower_bound(A, args.k, args.trials, args.seed))
    return 0


_HANDLERS = {
    "theory": _run_theory,
    "solve": _run_solve,
    "synthetic": _run_synthetic,
    "audio": _run_audio,
    "support-recovery": _run_support_recovery,
    "rip-bound": _run_rip_bound,
}


def dispatch(argv):
    """Run one command line (without the program name); returns the exit code."""
    parser = _make_parser()
    try:
        args = parser.parse_args(list(argv))
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return 1
    except SystemExit as exc:
        # --help exits through argparse
        return 0 if exc.code in (0, None) else 1
    except (ValueError, ArithmeticError, OSError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
