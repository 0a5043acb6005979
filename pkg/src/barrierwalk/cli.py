"""Command-line interface.

Subcommands: simulate (one discrete-walk curve), sweep (grid of runs),
verify (cross-module invariant suite), ctqw (continuous-time curve), and
plan (print the phase-matching quantities for an instance).

Every option can also come from a config file of `key = value` lines
(--config PATH, `#` starts a comment, hyphens and underscores in keys are
interchangeable); explicit flags take precedence over the file.  CSV goes
to --out when given, otherwise to standard output with the summary moved to
standard error so piped CSV stays clean.

Exit codes: 0 success, 1 verification found violations, 2 invalid
arguments/spec/config, 3 output path not writable.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable, TypeVar

from .experiments import (
    DEFAULT_MAX_FULL_N,
    VERIFY_DEFAULT_NS,
    VERIFY_DEFAULT_PHIS,
    ExperimentSpec,
    phi_from_beta,
    run_experiment,
    run_sweep,
    run_verification,
    summary_line,
    write_curve_csv,
    write_sweep_csv,
)
from .phases import build_phase_plan

__all__ = [
    "EXIT_OK",
    "EXIT_CHECK_FAILED",
    "EXIT_USAGE",
    "EXIT_IO",
    "load_config",
    "build_parser",
    "main",
]

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

_FMT = ".12g"

_T = TypeVar("_T")

_MISSING = object()


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_int_list(text: str) -> list[int]:
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise ValueError("expected a comma-separated list of integers")
    return [int(token) for token in tokens]


def _parse_float_list(text: str) -> list[float]:
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise ValueError("expected a comma-separated list of numbers")
    return [float(token) for token in tokens]


def load_config(path: str) -> dict[str, str]:
    """Read `key = value` lines; keys are normalized to underscores."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise ValueError(f"cannot read config file: {exc}") from None
    config: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        config[key.strip().replace("-", "_")] = value.strip()
    return config


class _Resolver:
    """Merge precedence: explicit flag, then config entry, then default."""

    def __init__(self, args: argparse.Namespace, config: dict[str, str]):
        self._args = args
        self._pending = dict(config)

    def get(
        self,
        key: str,
        parse: Callable[[str], _T],
        default: _T | None = None,
        required: bool = False,
    ) -> _T | None:
        # consume the config entry even when the flag wins, so finish() only
        # complains about keys no option ever asked for
        raw = self._pending.pop(key, _MISSING)
        value = getattr(self._args, key)
        if value is None and raw is not _MISSING:
            try:
                value = parse(raw)
            except ValueError as exc:
                raise ValueError(f"config key {key!r}: {exc}") from None
        if value is None:
            if required:
                raise ValueError(f"missing required option --{key.replace('_', '-')}")
            return default
        return value

    def finish(self) -> None:
        if self._pending:
            unknown = ", ".join(sorted(self._pending))
            raise ValueError(f"unknown config keys for this subcommand: {unknown}")


def _emit_curve(result, out_path: str | None) -> None:
    if out_path is None:
        write_curve_csv(result, sys.stdout)
        print(summary_line(result), file=sys.stderr)
        return
    with open(out_path, "w", encoding="utf-8", newline="") as handle:
        write_curve_csv(result, handle)
    print(summary_line(result))


def _cmd_simulate(args: argparse.Namespace, config: dict[str, str]) -> int:
    r = _Resolver(args, config)
    mode = r.get("mode", str, "dtqw-full")
    n = r.get("n", int, required=True)
    beta = r.get("beta", float, 0.0)
    corrected = r.get("corrected", _parse_bool, False)
    steps = r.get("steps", int)
    marked = r.get("marked", int, 0)
    max_full_n = r.get("max_full_n", int, DEFAULT_MAX_FULL_N)
    out = r.get("out", str)
    r.finish()
    if mode == "ctqw":
        raise ValueError("continuous-time runs have their own subcommand: ctqw")
    if mode == "dtqw-full" and n > max_full_n:
        raise ValueError(
            f"N = {n} exceeds the full-space cap {max_full_n}; "
            "use --mode dtqw-reduced or raise --max-full-n"
        )
    spec = ExperimentSpec(
        mode=mode,
        n_vertices=n,
        beta=beta,
        corrected=corrected,
        steps=steps,
        marked=marked,
        out=out,
    )
    _emit_curve(run_experiment(spec), out)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace, config: dict[str, str]) -> int:
    r = _Resolver(args, config)
    n_values = r.get("n", _parse_int_list, required=True)
    beta_values = r.get("beta", _parse_float_list, required=True)
    corrected = r.get("corrected", _parse_bool, False)
    steps = r.get("steps", int)
    max_full_n = r.get("max_full_n", int, DEFAULT_MAX_FULL_N)
    workers = r.get("workers", int, 1)
    out = r.get("out", str)
    r.finish()
    rows = run_sweep(
        n_values,
        beta_values,
        corrected,
        steps=steps,
        max_full_n=max_full_n,
        workers=workers,
    )
    if out is None:
        write_sweep_csv(rows, sys.stdout)
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            write_sweep_csv(rows, handle)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace, config: dict[str, str]) -> int:
    r = _Resolver(args, config)
    n_values = r.get("n", _parse_int_list, list(VERIFY_DEFAULT_NS))
    phi_values = r.get("phi", _parse_float_list, list(VERIFY_DEFAULT_PHIS))
    steps = r.get("steps", int, 200)
    force_eta_zero = r.get("force_eta_zero", _parse_bool, False)
    r.finish()
    checks = run_verification(
        n_values, phi_values, steps=steps, force_eta_zero=force_eta_zero
    )
    for check in checks:
        verdict = "PASS" if check.passed else "FAIL"
        print(
            f"{check.name}: max deviation {check.deviation:.3e}"
            f" (tolerance {check.tolerance:.0e}): {verdict}"
        )
    failed = [check.name for check in checks if not check.passed]
    if failed:
        print(f"verify: FAIL ({len(checks) - len(failed)}/{len(checks)} checks)")
        print(f"failed invariants: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    print(f"verify: PASS ({len(checks)}/{len(checks)} checks)")
    return EXIT_OK


def _cmd_ctqw(args: argparse.Namespace, config: dict[str, str]) -> int:
    r = _Resolver(args, config)
    n = r.get("n", int, required=True)
    epsilon = r.get("epsilon", float, 0.0)
    gamma = r.get("gamma", float)
    corrected = r.get("corrected", _parse_bool, False)
    t_max = r.get("t_max", float)
    samples = r.get("samples", int, 401)
    marked = r.get("marked", int, 0)
    out = r.get("out", str)
    r.finish()
    spec = ExperimentSpec(
        mode="ctqw",
        n_vertices=n,
        corrected=corrected,
        marked=marked,
        epsilon=epsilon,
        gamma=gamma,
        t_max=t_max,
        samples=samples,
        out=out,
    )
    _emit_curve(run_experiment(spec), out)
    return EXIT_OK


def _plan_lines(n: int, beta: float) -> list[str]:
    plan = build_phase_plan(n, phi_from_beta(beta))
    lines = [
        f"n = {plan.n_vertices}",
        f"beta = {beta:{_FMT}}",
        f"phi = {plan.phi:{_FMT}}",
        f"theta = {plan.theta:{_FMT}}",
        f"delta = {plan.delta:{_FMT}}",
        f"blocked = {'true' if plan.blocked else 'false'}",
    ]
    if plan.blocked:
        lines += [
            "eta = none",
            f"sigma = {plan.sigma:{_FMT}}",
            "t_star = infinite",
            "t_star_exact = infinite",
            "t_star_large_n = infinite",
        ]
    else:
        lines += [
            f"eta = {plan.eta:{_FMT}}",
            f"sigma = {plan.sigma:{_FMT}}",
            f"t_star = {plan.t_star}",
            f"t_star_exact = {plan.t_star_exact:{_FMT}}",
            f"t_star_large_n = {plan.t_star_large_n:{_FMT}}",
        ]
    return lines


def _cmd_plan(args: argparse.Namespace, config: dict[str, str]) -> int:
    r = _Resolver(args, config)
    n = r.get("n", int, required=True)
    beta = r.get("beta", float, 0.0)
    r.finish()
    for line in _plan_lines(n, beta):
        print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="barrierwalk",
        description=(
            "Quantum-walk search on the complete graph with potential-barrier"
            " errors and phase-matched correction."
        ),
        epilog=(
            "exit codes: 0 ok, 1 verification failed, 2 invalid"
            " arguments/spec/config, 3 unwritable output path"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser(
        "simulate", help="run one discrete-walk curve and emit step,probability CSV"
    )
    simulate.add_argument("--n", type=int, help="number of vertices (N >= 3)")
    simulate.add_argument(
        "--beta", type=float, help="barrier strength |beta| in [0, 1] (default 0)"
    )
    simulate.add_argument(
        "--corrected",
        action="store_true",
        default=None,
        help="apply the phase-matched eta correction",
    )
    simulate.add_argument(
        "--steps", type=int, help="step count (default: window covering the peak)"
    )
    simulate.add_argument(
        "--mode",
        choices=("dtqw-full", "dtqw-reduced"),
        help="statevector engine or exact 3x3 reduced model (default dtqw-full)",
    )
    simulate.add_argument("--marked", type=int, help="marked vertex index (default 0)")
    simulate.add_argument(
        "--max-full-n",
        type=int,
        dest="max_full_n",
        help=f"cap on full-space N (default {DEFAULT_MAX_FULL_N})",
    )
    simulate.add_argument("--out", help="CSV path (default: standard output)")
    simulate.add_argument("--config", help="key = value config file")
    simulate.set_defaults(handler=_cmd_simulate)

    sweep = sub.add_parser(
        "sweep", help="run an (N, beta) grid and emit one summary row per point"
    )
    sweep.add_argument(
        "--n", type=_parse_int_list, help="comma-separated vertex counts"
    )
    sweep.add_argument(
        "--beta", type=_parse_float_list, help="comma-separated barrier strengths"
    )
    sweep.add_argument(
        "--corrected", action="store_true", default=None,
        help="apply the eta correction at every grid point",
    )
    sweep.add_argument("--steps", type=int, help="step count per point (default auto)")
    sweep.add_argument(
        "--max-full-n",
        type=int,
        dest="max_full_n",
        help="N above this runs the reduced model (noted in the mode column)",
    )
    sweep.add_argument(
        "--workers", type=int, help="process count for grid points (default 1)"
    )
    sweep.add_argument("--out", help="CSV path (default: standard output)")
    sweep.add_argument("--config", help="key = value config file")
    sweep.set_defaults(handler=_cmd_sweep)

    verify = sub.add_parser(
        "verify", help="run the cross-module invariant suite and report deviations"
    )
    verify.add_argument(
        "--n",
        type=_parse_int_list,
        help=f"comma-separated vertex counts (default {','.join(map(str, VERIFY_DEFAULT_NS))})",
    )
    verify.add_argument(
        "--phi",
        type=_parse_float_list,
        help="comma-separated barrier phases in radians (default 0,0.3,arcsin(0.8))",
    )
    verify.add_argument(
        "--steps", type=int, help="trajectory length per check (default 200)"
    )
    verify.add_argument(
        "--force-eta-zero",
        action="store_true",
        default=None,
        dest="force_eta_zero",
        help=(
            "negative control: use eta = 0 in the Hoyer-residual check, which"
            " must then fail for any phi > 0"
        ),
    )
    verify.add_argument("--config", help="key = value config file")
    verify.set_defaults(handler=_cmd_verify)

    ctqw = sub.add_parser(
        "ctqw", help="run a continuous-time curve and emit time,probability CSV"
    )
    ctqw.add_argument("--n", type=int, help="number of vertices (N >= 2)")
    ctqw.add_argument(
        "--epsilon", type=float, help="hop attenuation in [0, 1) (default 0)"
    )
    ctqw.add_argument(
        "--gamma",
        type=float,
        help="explicit jumping rate (default 1/N; incompatible with --corrected)",
    )
    ctqw.add_argument(
        "--corrected",
        action="store_true",
        default=None,
        help="use the corrected rate 1/(N(1-epsilon))",
    )
    ctqw.add_argument(
        "--t-max",
        type=float,
        dest="t_max",
        help="evolution-time horizon (default 1.5x the predicted peak time)",
    )
    ctqw.add_argument(
        "--samples", type=int, help="number of time samples (default 401)"
    )
    ctqw.add_argument("--marked", type=int, help="marked vertex index (default 0)")
    ctqw.add_argument("--out", help="CSV path (default: standard output)")
    ctqw.add_argument("--config", help="key = value config file")
    ctqw.set_defaults(handler=_cmd_ctqw)

    plan = sub.add_parser(
        "plan", help="print theta, eta, sigma, t* and friends for an instance"
    )
    plan.add_argument("--n", type=int, help="number of vertices (N >= 3)")
    plan.add_argument(
        "--beta", type=float, help="barrier strength |beta| in [0, 1] (default 0)"
    )
    plan.add_argument("--config", help="key = value config file")
    plan.set_defaults(handler=_cmd_plan)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        config = load_config(args.config) if args.config else {}
        return args.handler(args, config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
