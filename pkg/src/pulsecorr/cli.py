"""Command-line front end: ``plan``, ``fig2``, ``fit`` and ``verify``.

Exit codes: 0 success, 1 usage or I/O error, 2 vacuous bound, 3 non-decaying
(or otherwise unusable) exponential fit.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from .budget_planner import (
    BudgetRequest,
    UnsupportedModeError,
    fig2_curve,
    log_spaced_grid,
    plan,
)
from .corr_model import CharacterizationRangeError, ExponentialModel, load_tabulated_csv
from .model_fit import (
    DEFAULT_MAX_LOG_RESIDUAL,
    InsufficientDataError,
    NonDecayingModelError,
    PoorFitError,
    SampleSet,
    check_fit,
    fit_exponential,
)
from .verifier import ResourceLimitError, run_campaign

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VACUOUS = 2
EXIT_NON_DECAYING = 3

DEFAULT_C_GRID = (0.1, 0.2, 0.5, 1.0, 2.0)

PLAN_FIELDS = ("N", "eps_sec", "epsilon1", "decay_C", "table", "target_d", "l_e", "output", "record")


class ConfigError(ValueError):
    pass


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(rows, header, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(row[h]) for h in header])


def _emit_csv(rows, header, path):
    if path in (None, "-"):
        write_csv(rows, header, sys.stdout)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        write_csv(rows, header, fh)


def read_config(path) -> dict:
    """Flat ``key=value`` file; ``#`` starts a comment."""
    config = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}, line {lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in PLAN_FIELDS:
            raise ConfigError(f"{path}, line {lineno}: unknown field {key!r}")
        config[key] = value
    return config


def _as_int(field, value):
    text = str(value).strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        number = float(text)
    except ValueError:
        raise ConfigError(f"{field}: expected an integer, got {value!r}") from None
    if not math.isfinite(number) or number != int(number):
        raise ConfigError(f"{field}: expected an integer, got {value!r}")
    return int(number)


def _as_float(field, value):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{field}: expected a number, got {value!r}") from None


def build_request(config: dict) -> BudgetRequest:
    """Turn merged config values into a :class:`BudgetRequest`, naming any bad field."""
    for field in ("N", "eps_sec"):
        if config.get(field) is None:
            raise ConfigError(f"{field}: missing")
    N = _as_int("N", config["N"])
    eps_sec = _as_float("eps_sec", config["eps_sec"])

    has_exp = config.get("epsilon1") is not None or config.get("decay_C") is not None
    has_table = config.get("table") is not None
    if has_exp == has_table:
        raise ConfigError("model: give either epsilon1 and decay_C, or table")
    if has_table:
        model = load_tabulated_csv(config["table"])
    else:
        for field in ("epsilon1", "decay_C"):
            if config.get(field) is None:
                raise ConfigError(f"{field}: missing")
        try:
            model = ExponentialModel(_as_float("epsilon1", config["epsilon1"]),
                                     _as_float("decay_C", config["decay_C"]))
        except ValueError as exc:
            raise ConfigError(f"model: {exc}") from None

    target_d = config.get("target_d")
    l_e = config.get("l_e")
    if (target_d is None) == (l_e is None):
        raise ConfigError("mode: give exactly one of target_d or l_e")
    try:
        return BudgetRequest(
            N=N,
            model=model,
            eps_sec=eps_sec,
            target_d=None if target_d is None else _as_float("target_d", target_d),
            l_e=None if l_e is None else _as_int("l_e", l_e),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


PLAN_HEADER = ("N", "l_e", "sqrt_delta_le", "d", "eps_sec", "eps_total", "vacuous")


def plan_record(result) -> dict:
    return {h: getattr(result, h) for h in PLAN_HEADER}


def cmd_plan(args) -> int:
    config = read_config(args.config) if args.config else {}
    for field in PLAN_FIELDS:
        value = getattr(args, field, None)
        if value is not None:
            config[field] = value
    request = build_request(config)
    result = plan(request)
    record = plan_record(result)

    text = "".join(f"{k}={fmt(v)}\n" for k, v in record.items())
    sys.stdout.write(text)
    print(
        f"step 4: increase the security parameter eps_sec={fmt(result.eps_sec)} by "
        f"2d={fmt(2 * result.d)} to eps_total={fmt(result.eps_total)} "
        f"(bounded-length analysis run with l_c = l_e = {result.l_e})"
    )
    if config.get("record"):
        Path(config["record"]).write_text(text, encoding="utf-8")
    if config.get("output"):
        _emit_csv([record], PLAN_HEADER, config["output"])
    if result.eps_total >= 1.0:
        print(f"WARNING: eps_total = {fmt(result.eps_total)} >= 1, no security claim can be made",
              file=sys.stderr)
    if result.vacuous:
        print("WARNING: the trace-distance bound is vacuous (d clamped to 1)", file=sys.stderr)
        return EXIT_VACUOUS
    return EXIT_OK


def fig2_rows(C_list, N_min, N_max, points_per_decade, epsilon1, target_d) -> list:
    grid = log_spaced_grid(N_min, N_max, points_per_decade)
    if not grid or not C_list:
        raise ConfigError("fig2: empty grid")
    rows = []
    for C in sorted(set(C_list)):
        curve = fig2_curve(ExponentialModel(epsilon1, C), target_d, grid)
        rows.extend({"C": float(C), "N": n, "l_e": l} for n, l in curve.points)
    return rows


def cmd_fig2(args) -> int:
    rows = fig2_rows(args.C, args.N_min, args.N_max, args.points_per_decade, args.epsilon1, args.target_d)
    _emit_csv(rows, ("C", "N", "l_e"), args.output)
    return EXIT_OK


FIT_FIELDS = ("epsilon1", "decay_C", "max_log_residual")


def cmd_fit(args) -> int:
    samples = SampleSet.from_csv(args.csv_path)
    try:
        result = check_fit(fit_exponential(samples), args.max_log_residual)
    except (NonDecayingModelError, PoorFitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NON_DECAYING
    record = {f: getattr(result, f) for f in FIT_FIELDS}
    sys.stdout.write("".join(f"{k}={fmt(v)}\n" for k, v in record.items()))
    if args.json:
        payload = json.dumps({k: float(fmt(v)) for k, v in record.items()})
        if args.json == "-":
            print(payload)
        else:
            Path(args.json).write_text(payload + "\n", encoding="utf-8")
    return EXIT_OK


VERIFY_HEADER = (
    "index", "J", "N", "l_e", "phase_kick", "T_exact", "d_bound", "margin", "bound_pass",
    "phase_gap", "phase_pass", "chain_rounds", "chain_pass", "printed_exponent_ok",
    "gamma_pass", "dpi_pass", "pass",
)


def cmd_verify(args) -> int:
    results = run_campaign(args.seed, args.instances, args.max_N, args.max_J,
                           bound_scale=args.bound_scale)
    _emit_csv([r.as_row() for r in results], VERIFY_HEADER, args.output)
    failed = [r.index for r in results if not r.passed]
    print(f"verify: {len(results) - len(failed)}/{len(results)} instances passed", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_USAGE


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pulsecorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="effective correlation length and adjusted security parameter")
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--N")
    p.add_argument("--eps-sec", dest="eps_sec")
    p.add_argument("--epsilon1")
    p.add_argument("--decay-C", dest="decay_C")
    p.add_argument("--table", help="CSV with columns l,epsilon_l")
    p.add_argument("--target-d", dest="target_d")
    p.add_argument("--l-e", dest="l_e")
    p.add_argument("--output", help="write the plan as a one-row CSV")
    p.add_argument("--record", help="write the key=value record to this file")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("fig2", help="l_e against N for several decay rates (CSV)")
    p.add_argument("--C", type=_float_list, default=list(DEFAULT_C_GRID))
    p.add_argument("--N-min", dest="N_min", type=float, default=1e6)
    p.add_argument("--N-max", dest="N_max", type=float, default=1e12)
    p.add_argument("--points-per-decade", type=int, default=10)
    p.add_argument("--epsilon1", type=float, default=1e-3)
    p.add_argument("--target-d", dest="target_d", type=float, default=1e-10)
    p.add_argument("--output")
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("fit", help="fit eps_1 and C to measured correlation magnitudes")
    p.add_argument("csv_path")
    p.add_argument("--max-log-residual", type=float, default=DEFAULT_MAX_LOG_RESIDUAL)
    p.add_argument("--json", help="also write a flat JSON record ('-' for stdout)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="randomized exact verification campaign (CSV)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--max-N", dest="max_N", type=int, default=5)
    p.add_argument("--max-J", dest="max_J", type=int, default=2)
    p.add_argument("--output")
    p.add_argument("--bound-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, UnsupportedModeError, CharacterizationRangeError, InsufficientDataError,
            ResourceLimitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
