"""Command-line front end: every experiment as a subcommand.

Reports are emitted as human tables (default), JSON, or CSV (correlation
table only).  All randomness is derived from ``--seed``; rerunning any
command with the same seed produces byte-identical JSON for every worker
count, so worker count is deliberately not part of the report.

Exit codes: 0 success, 1 usage or validation error, 2 internal assertion
failure (a hidden-variable model exceeding the classical bound, which must
never happen).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import bell, cat, lhv, measurement, monty
from .mc import StreamSpec, TrialStream
from .qlin import PureState, TensorSpace, matrix_to_json, purity

DEFAULT_SEED = 42
DEFAULT_TRIALS = 1_000_000
DEFAULT_WORKERS = 1

_FIXED_CORRELATION_GRID = (0.0, 45.0, 90.0, 180.0)


class InternalCheckError(RuntimeError):
    """A mathematical invariant failed at runtime; reported with exit code 2."""


class _Parser(argparse.ArgumentParser):
    # usage errors exit with code 1, not argparse's default 2
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _sig7(x: float) -> str:
    return f"{x:.7g}"


def _common_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (default 42)")
    sub.add_argument(
        "--trials",
        type=int,
        default=DEFAULT_TRIALS,
        help="Monte Carlo trials per estimate; 0 disables sampling (default 1000000)",
    )
    sub.add_argument(
        "--workers", type=int, default=DEFAULT_WORKERS, help="worker threads (results identical)"
    )
    sub.add_argument(
        "--format",
        choices=("table", "json", "csv"),
        default="table",
        help="output format (csv: correlations only)",
    )
    sub.add_argument("--out", default=None, help="write the report to this path instead of stdout")


def _angle_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--theta-a", type=float, default=0.0, help="first A-side angle, degrees")
    sub.add_argument("--theta-a2", type=float, default=90.0, help="second A-side angle, degrees")
    sub.add_argument("--theta-b", type=float, default=45.0, help="first B-side angle, degrees")
    sub.add_argument("--theta-b2", type=float, default=-45.0, help="second B-side angle, degrees")


def build_parser() -> _Parser:
    parser = _Parser(prog="collapselab", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("chsh-quantum", help="singlet-state CHSH value at four analyzer angles")
    _angle_options(sub)
    _common_options(sub)

    sub = subs.add_parser("chsh-lhv", help="CHSH values of explicit hidden-variable models")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--model", help="path to a model JSON file")
    group.add_argument("--random", type=int, metavar="N", help="evaluate N random models")
    sub.add_argument("--lambdas", type=int, default=8, help="hidden states per random model")
    _angle_options(sub)
    _common_options(sub)

    sub = subs.add_parser("correlations", help="singlet correlation table over angle differences")
    sub.add_argument(
        "--grid",
        default=None,
        help="extra angle differences in degrees, comma separated (added to 0,45,90,180)",
    )
    _common_options(sub)

    sub = subs.add_parser("monty", help="Monty Hall posteriors and win rates")
    sub.add_argument("--doors", type=int, default=3, help="number of doors (default 3)")
    sub.add_argument("--open", type=int, default=1, dest="open_k", help="doors the host opens")
    sub.add_argument(
        "--open-all-but-one",
        action="store_true",
        help="host opens every door except the pick and one other",
    )
    sub.add_argument("--pick", type=int, default=1, help="player's door, 1-indexed (default 1)")
    sub.add_argument(
        "--opened",
        default=None,
        help="observed opened doors, 1-indexed comma list (default: lowest legal doors)",
    )
    _common_options(sub)

    sub = subs.add_parser("cat", help="nucleus/cat/observer story diagnostics")
    sub.add_argument("--time", type=float, default=1.0, help="waiting time in half-lives")
    _common_options(sub)

    sub = subs.add_parser("measure", help="Born distribution and dephasing for a small state")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--spin", nargs=2, metavar=("A1", "A2"), help="two spin amplitudes")
    group.add_argument("--sites", nargs="+", metavar="A", help="site amplitudes (ring of n sites)")
    sub.add_argument(
        "--basis",
        choices=("spin", "position", "momentum"),
        required=True,
        help="measurement basis",
    )
    sub.add_argument("--angle", type=float, default=0.0, help="analyzer angle for --basis spin, degrees")
    _common_options(sub)

    return parser


def _settings_from_args(args) -> lhv.ChshSettings:
    return lhv.ChshSettings(args.theta_a, args.theta_a2, args.theta_b, args.theta_b2)


def _settings_json(settings: lhv.ChshSettings) -> dict:
    return {
        "theta_a_deg": settings.theta_a_deg,
        "theta_a_prime_deg": settings.theta_a_prime_deg,
        "theta_b_deg": settings.theta_b_deg,
        "theta_b_prime_deg": settings.theta_b_prime_deg,
    }


# ---------------------------------------------------------------- chsh-quantum

def cmd_chsh_quantum(args) -> dict:
    settings = _settings_from_args(args)
    exact = bell.chsh_quantum(settings)
    report = {
        "command": "chsh-quantum",
        "settings_deg": _settings_json(settings),
        "exact_s": exact,
        "abs_s": abs(exact),
        "classical_bound": 2.0,
        "tsirelson_bound": bell.TSIRELSON_BOUND,
        "empirical": None,
        "n_trials_per_term": args.trials,
        "seed": args.seed,
    }
    if args.trials > 0:
        s, stderr = bell.empirical_chsh(
            settings, args.trials, StreamSpec(args.seed, 0), workers=args.workers
        )
        report["empirical"] = {"s": s, "abs_s": abs(s), "stderr": stderr}
    return report


def _table_chsh_quantum(report: dict) -> str:
    lines = [
        "CHSH (singlet state)",
        f"  angles (deg): A={_sig7(report['settings_deg']['theta_a_deg'])}"
        f" A'={_sig7(report['settings_deg']['theta_a_prime_deg'])}"
        f" B={_sig7(report['settings_deg']['theta_b_deg'])}"
        f" B'={_sig7(report['settings_deg']['theta_b_prime_deg'])}",
        f"  exact S        = {_sig7(report['exact_s'])}",
        f"  |S|            = {_sig7(report['abs_s'])}",
        "  classical bound = 2",
        f"  2*sqrt(2)      = {_sig7(report['tsirelson_bound'])}",
    ]
    if report["empirical"] is not None:
        emp = report["empirical"]
        lines.append(
            f"  empirical S    = {_sig7(emp['s'])} +/- {_sig7(emp['stderr'])}"
            f"  (n = {report['n_trials_per_term']} per term, seed {report['seed']})"
        )
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------------- chsh-lhv

LHV_BOUND_SLACK = 1e-12


def cmd_chsh_lhv(args) -> dict:
    settings = _settings_from_args(args)
    if args.random is not None:
        if args.random < 1:
            raise ValueError("--random must be >= 1")
        if args.lambdas < 1:
            raise ValueError("--lambdas must be >= 1")
        spec = StreamSpec(args.seed, 0)
        models = [
            lhv.random_model(args.lambdas, settings, TrialStream(spec, i))
            for i in range(args.random)
        ]
        source = "random"
        empirical = None
    else:
        with open(args.model, "r", encoding="utf-8") as fh:
            try:
                payload = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"model JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}")
        models = [lhv.model_from_json(payload)]
        source = "file"
        empirical = None
        if args.trials > 0:
            s, stderr = lhv.empirical_chsh(
                models[0], args.trials, StreamSpec(args.seed, 0), workers=args.workers
            )
            empirical = {"s": s, "stderr": stderr}

    s_values = [lhv.chsh_exact(model) for model in models]
    max_abs = max(abs(s) for s in s_values)
    bound_ok = max_abs <= 2.0 + LHV_BOUND_SLACK
    report = {
        "command": "chsh-lhv",
        "settings_deg": _settings_json(settings),
        "source": source,
        "n_models": len(models),
        "s_values": s_values,
        "max_abs_s": max_abs,
        "classical_bound": 2.0,
        "bound_satisfied": bound_ok,
        "empirical": empirical,
        "n_trials_per_term": args.trials if source == "file" else None,
        "seed": args.seed,
    }
    if not bound_ok:
        raise InternalCheckError(
            f"hidden-variable model produced |S| = {max_abs!r} > 2; this must never happen"
        )
    return report


def _table_chsh_lhv(report: dict) -> str:
    lines = [
        "CHSH (hidden-variable models)",
        f"  models evaluated = {report['n_models']} ({report['source']})",
        f"  max |S|          = {_sig7(report['max_abs_s'])}",
        f"  classical bound  = 2  -> satisfied: {report['bound_satisfied']}",
    ]
    if report["n_models"] == 1:
        lines.append(f"  exact S          = {_sig7(report['s_values'][0])}")
    if report["empirical"] is not None:
        emp = report["empirical"]
        lines.append(
            f"  empirical S      = {_sig7(emp['s'])} +/- {_sig7(emp['stderr'])}"
            f"  (n = {report['n_trials_per_term']} per term, seed {report['seed']})"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- correlations

def cmd_correlations(args) -> dict:
    deltas = list(_FIXED_CORRELATION_GRID)
    if args.grid:
        try:
            extra = [float(part) for part in args.grid.split(",") if part.strip() != ""]
        except ValueError:
            raise ValueError(f"could not parse --grid {args.grid!r} as comma-separated degrees")
        deltas.extend(extra)
    rows = []
    for i, delta in enumerate(deltas):
        row = bell.correlation(0.0, delta)
        if args.trials > 0:
            summary = bell.empirical_correlation(
                0.0, delta, args.trials, StreamSpec(args.seed, i), workers=args.workers
            )
            row = bell.with_empirical(row, summary)
        rows.append(row)
    return {
        "command": "correlations",
        "rows": [row.to_json() for row in rows],
        "n_trials_per_row": args.trials,
        "seed": args.seed,
    }


def _table_correlations(report: dict) -> str:
    header = f"{'delta_deg':>10}  {'exact':>12}  {'closed_form':>12}  {'empirical':>12}  {'stderr':>10}"
    lines = ["Singlet correlation C(delta) = -cos(delta)", header]
    for row in report["rows"]:
        empirical = "" if row["empirical"] is None else _sig7(row["empirical"])
        stderr = "" if row["stderr"] is None else _sig7(row["stderr"])
        lines.append(
            f"{_sig7(row['theta_b_deg']):>10}  {_sig7(row['exact']):>12}  "
            f"{_sig7(row['closed_form']):>12}  {empirical:>12}  {stderr:>10}"
        )
    return "\n".join(lines) + "\n"


def _csv_correlations(report: dict) -> str:
    lines = [bell.CSV_HEADER]
    for row in report["rows"]:
        empirical = "" if row["empirical"] is None else repr(row["empirical"])
        stderr = "" if row["stderr"] is None else repr(row["stderr"])
        n = "" if row["n"] is None else str(row["n"])
        lines.append(
            f"{row['theta_a_deg']!r},{row['theta_b_deg']!r},{row['exact']!r},"
            f"{row['closed_form']!r},{empirical},{stderr},{n}"
        )
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------------ monty

def _fraction_json(value: Fraction) -> dict:
    return {"value": float(value), "fraction": f"{value.numerator}/{value.denominator}"}


def cmd_monty(args) -> dict:
    n = args.doors
    k = n - 2 if args.open_all_but_one else args.open_k
    pick = args.pick - 1
    if not 0 <= pick < n:
        raise ValueError(f"--pick must be between 1 and {n}")
    if args.opened is not None:
        try:
            opened = frozenset(int(part) - 1 for part in args.opened.split(","))
        except ValueError:
            raise ValueError(f"could not parse --opened {args.opened!r} as comma-separated doors")
    else:
        candidates = [d for d in range(n) if d != pick]
        opened = frozenset(candidates[: max(k, 0)])
    instance = monty.MontyInstance(n_doors=n, k_opened=k, player_pick=pick, opened=opened)
    probs = monty.posterior(instance)

    strategies = []
    for stream_id, strategy in enumerate(("stay", "switch")):
        exact = monty.win_probability(n, k, strategy)
        entry = {
            "strategy": strategy,
            "exact": _fraction_json(exact),
            "empirical": None,
            "stderr": None,
        }
        if args.trials > 0:
            summary = monty.empirical_win_rate(
                n, k, strategy, args.trials, StreamSpec(args.seed, stream_id), workers=args.workers
            )
            entry["empirical"] = summary.mean
            entry["stderr"] = summary.stderr
        strategies.append(entry)

    return {
        "command": "monty",
        "n_doors": n,
        "k_opened": k,
        "strategies": strategies,
        "posterior": monty.posterior_to_json(instance, probs),
        "n_trials": args.trials,
        "seed": args.seed,
    }


def _table_monty(report: dict) -> str:
    lines = [
        f"Monty Hall: {report['n_doors']} doors, host opens {report['k_opened']}",
    ]
    for entry in report["strategies"]:
        line = (
            f"  {entry['strategy']:<7} exact = {_sig7(entry['exact']['value'])}"
            f" ({entry['exact']['fraction']})"
        )
        if entry["empirical"] is not None:
            line += f"  empirical = {_sig7(entry['empirical'])} +/- {_sig7(entry['stderr'])}"
        lines.append(line)
    post = report["posterior"]
    lines.append(f"  posterior: pick door #{post['pick_door']} -> {_sig7(post['pick_prob'])}")
    shown = [d for d in post["closed_doors"] if d[0] != post["pick_door"]][:8]
    for door, prob in shown:
        lines.append(f"             door #{door} -> {_sig7(prob)}")
    if post["truncated"]:
        lines.append(f"             ... ({post['n_closed']} closed doors in total)")
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------------------- cat

def cmd_cat(args) -> dict:
    if args.time < 0:
        raise ValueError("--time must be >= 0")
    stages = cat.run_stages(args.time)
    return {
        "command": "cat",
        "time_half_lives": args.time,
        "stages": {name: report.to_json() for name, report in stages.items()},
    }


def _table_cat(report: dict) -> str:
    lines = [f"Cat story at t = {_sig7(report['time_half_lives'])} half-lives"]
    for name, stage in report["stages"].items():
        cat_pmf = stage["cat_pmf"]
        obs_pmf = stage["observer_pmf"]
        lines.append(f"  {name}:")
        lines.append(
            f"    P(alive) = {_sig7(cat_pmf['alive'])}  P(dead) = {_sig7(cat_pmf['dead'])}"
        )
        lines.append(
            f"    P(ignorant) = {_sig7(obs_pmf['ignorant'])}  P(happy) = {_sig7(obs_pmf['happy'])}"
            f"  P(shocked) = {_sig7(obs_pmf['shocked'])}"
        )
        lines.append(
            f"    purity: full = {_sig7(stage['purity_full'])}, cat = {_sig7(stage['purity_cat'])},"
            f" observer = {_sig7(stage['purity_observer'])}"
        )
        lines.append(f"    cat-observer agreement = {_sig7(stage['agreement'])}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------- measure

def _parse_amplitudes(parts: list[str]) -> np.ndarray:
    values = []
    for part in parts:
        try:
            values.append(complex(part))
        except ValueError:
            raise ValueError(f"could not parse amplitude {part!r} (use forms like 0.6 or 0.6+0.2j)")
    amps = np.asarray(values, dtype=np.complex128)
    norm = float(np.sqrt(np.sum(np.abs(amps) ** 2)))
    if norm < 1e-12:
        raise ValueError("state amplitudes are all zero; cannot normalize")
    return amps / norm


def cmd_measure(args) -> dict:
    if args.spin is not None:
        amps = _parse_amplitudes(args.spin)
    else:
        amps = _parse_amplitudes(args.sites)
    n = amps.size
    state = PureState(TensorSpace((n,)), amps).density()

    angle_deg = None
    if args.basis == "spin":
        if n != 2:
            raise ValueError("--basis spin requires exactly two amplitudes")
        angle_deg = args.angle
        projectors = measurement.spin_projectors(math.radians(args.angle))
    elif args.basis == "position":
        projectors = measurement.position_projectors(n)
    else:
        projectors = measurement.ring_momentum_projectors(n)

    outcomes = measurement.born_distribution(state, projectors)
    dephased = measurement.dephasing_channel(state, projectors)
    return {
        "command": "measure",
        "basis": args.basis,
        "angle_deg": angle_deg,
        "amplitudes": [[float(a.real), float(a.imag)] for a in amps],
        "outcomes": measurement.outcomes_to_json(outcomes),
        "rho_before": matrix_to_json(state.matrix),
        "rho_after": matrix_to_json(dephased.matrix),
        "purity_before": purity(state),
        "purity_after": purity(dephased),
    }


def _table_measure(report: dict) -> str:
    lines = [f"Projective measurement in the {report['basis']} basis"]
    if report["angle_deg"] is not None:
        lines.append(f"  analyzer angle = {_sig7(report['angle_deg'])} deg")
    lines.append("  outcomes:")
    for outcome in report["outcomes"]:
        label = outcome["label"]
        text = _sig7(label) if isinstance(label, float) else str(label)
        lines.append(f"    {text:>12}  p = {_sig7(outcome['p'])}")
    lines.append(f"  purity before = {_sig7(report['purity_before'])}")
    lines.append(f"  purity after  = {_sig7(report['purity_after'])}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------- plumbing

_COMMANDS = {
    "chsh-quantum": (cmd_chsh_quantum, _table_chsh_quantum),
    "chsh-lhv": (cmd_chsh_lhv, _table_chsh_lhv),
    "correlations": (cmd_correlations, _table_correlations),
    "monty": (cmd_monty, _table_monty),
    "cat": (cmd_cat, _table_cat),
    "measure": (cmd_measure, _table_measure),
}


def _render(report: dict, args) -> str:
    if args.format == "json":
        return json.dumps(report, indent=2) + "\n"
    if args.format == "csv":
        if report["command"] != "correlations":
            raise ValueError("csv output is only available for the correlations subcommand")
        return _csv_correlations(report)
    return _COMMANDS[report["command"]][1](report)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "trials", 0) < 0:
            raise ValueError("--trials must be >= 0")
        if getattr(args, "workers", 1) < 1:
            raise ValueError("--workers must be >= 1")
        report = _COMMANDS[args.command][0](args)
        text = _render(report, args)
    except InternalCheckError as exc:
        print(f"collapselab: internal check failed: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"collapselab: error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
