"""Command line interface.

Subcommands: ``grid`` (outcome/nimber tables, optionally as a figure),
``dominate`` (relation between two rulesets), ``laws`` (algebraic law
checks), ``solve`` (sum verdict and move advice), ``play`` (interactive
session), ``check`` (termination certificate).

Exit codes: 0 success / relation holds; 1 relation fails or a
counterexample was found; 2 usage or parse error; 3 termination guard
violation.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional

from .engine import DEFAULT_NODE_BUDGET, MemoStore, Outcome, TerminationError
from .exprs import (
    Enforce,
    Expr,
    ExprSyntaxError,
    canonical_text,
    check_jointly_short,
    dimension,
    joint_options,
    outcome,
    parse_expr,
)
from .rulesets import CATALOG, ConfigError, load_ruleset_file
from .analysis import (
    LAW_ARITY,
    LAW_NAMES,
    check_law,
    classify_domination,
    compare_nimbers,
)
from .grids import (
    ANALYSES,
    FORMATS,
    GridRequest,
    emit_grid,
    save_domination_figure,
    save_grid_figure,
)
from .solver import (
    SumComponent,
    best_move,
    make_sum,
    sum_outcome,
    sum_outcome_oracle,
    sum_values,
)
from .play import PlayAborted, run_play

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_TERMINATION = 3


class UsageError(ValueError):
    pass


def _load_atoms(path: Optional[str]) -> dict:
    return load_ruleset_file(path) if path else {}


def _parse_position(text: str, dim: int) -> tuple[int, ...]:
    parts = text.strip().strip("()").split(";")
    try:
        pos = tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"bad position {text!r}; write it like 3;4") from None
    if len(pos) != dim or any(c < 0 for c in pos):
        raise UsageError(
            f"position {text!r} must have {dim} nonnegative coordinates"
        )
    return pos


def parse_sum(text: str, atoms: Optional[dict] = None) -> list[SumComponent]:
    """Parse ``expr@x;y,expr@x;y,...`` into sum components."""
    parts = [p.strip() for p in text.split(",")]
    components = []
    for part in parts:
        if "@" not in part:
            raise UsageError(
                f"bad sum component {part!r}; write it like bishop.nim@4;3"
            )
        expr_text, pos_text = part.rsplit("@", 1)
        expr = parse_expr(expr_text.strip(), atoms)
        components.append((expr, _parse_position(pos_text, dimension(expr))))
    return make_sum(components)


def _parse_size(text: str) -> tuple[int, int]:
    try:
        if "x" in text:
            w, h = text.lower().split("x", 1)
            return int(w), int(h)
        n = int(text)
        return n, n
    except ValueError:
        raise UsageError(f"bad size {text!r}; write it like 11x11") from None


# ---------------------------------------------------------------------------
# subcommands

def _cmd_grid(args: argparse.Namespace) -> int:
    atoms = _load_atoms(args.config)
    expr = parse_expr(args.expr, atoms)
    width, height = _parse_size(args.size) if args.size else (
        (11, 1) if dimension(expr) == 1 else (11, 11)
    )
    analysis = args.analysis
    if analysis == "enforce-grundy" and not isinstance(expr, Enforce):
        print(
            "note: expression has no enforce at the root; computing grundy",
            file=sys.stderr,
        )
        analysis = "grundy"
    request = GridRequest(expr, analysis, width, height, args.format)
    memo = MemoStore()
    text = emit_grid(request, memo, node_budget=args.budget)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.figure:
        save_grid_figure(request, args.figure, memo, node_budget=args.budget)
    return EXIT_OK


def _render_domination_text(report, reasons: list[str]) -> str:
    lines = [
        f"a: {report.a}",
        f"b: {report.b}",
        f"relation: {report.relation}",
        f"region: {report.region} ({report.positions_checked} positions)",
    ]
    lines += reasons
    return "\n".join(lines) + "\n"


def _cmd_dominate(args: argparse.Namespace) -> int:
    atoms = _load_atoms(args.config)
    a = parse_expr(args.a, atoms)
    b = parse_expr(args.b, atoms)
    memo = MemoStore()
    report = classify_domination(a, b, args.region, memo, node_budget=args.budget)

    reasons = []
    for label, cex, wit in (
        ("a over b", report.counterexample_a_over_b, report.recovery_witness_a_over_b),
        ("b over a", report.counterexample_b_over_a, report.recovery_witness_b_over_a),
    ):
        if cex is not None:
            reasons.append(
                f"{label} fails: combined outcome differs at {cex}; "
                f"no one-move recovery at {wit}"
            )
    payload = report.to_dict()
    if args.nimbers:
        nim_report = compare_nimbers(a, b, args.region, memo)
        payload["nimbers"] = nim_report.to_dict()
        reasons.append(
            "nimbers agree on region"
            if nim_report.nimbers_agree
            else f"nimbers differ first at {nim_report.first_mismatch}: "
            f"{nim_report.grundy_at_mismatch} vs {nim_report.enforce_value_at_mismatch}"
        )
    if args.format == "json":
        sys.stdout.write(json.dumps(payload) + "\n")
    else:
        sys.stdout.write(_render_domination_text(report, reasons))
    if args.figure:
        save_domination_figure(a, b, args.region, args.figure, memo)
    return EXIT_OK if report.relation in ("dominates", "similar") else EXIT_FAIL


def _cmd_laws(args: argparse.Namespace) -> int:
    atoms = _load_atoms(args.config)
    memo = MemoStore()
    laws = list(LAW_NAMES) if args.law == "all" else [args.law]
    operands_given = [t for t in (args.a, args.b, args.c) if t]

    runs = []
    if operands_given:
        for law in laws:
            arity = LAW_ARITY[law]
            if len(operands_given) < arity:
                raise UsageError(
                    f"law {law!r} needs {arity} operand(s); give --a/--b/--c"
                )
            ops = [parse_expr(t, atoms) for t in operands_given[:arity]]
            runs.append((law, ops))
    else:
        rng = random.Random(args.seed)
        pool = sorted(name for name in CATALOG if CATALOG[name].dimension == 2)
        pool += ["e", "o"]
        for law in laws:
            arity = LAW_ARITY[law]
            for _ in range(args.samples):
                names = [rng.choice(pool) for _ in range(arity)]
                runs.append((law, [parse_expr(n, atoms) for n in names]))

    failures = 0
    for law, ops in runs:
        report = check_law(law, ops, args.region, memo)
        status = "ok" if report.holds else f"FAILS at {report.counterexample}"
        print(
            f"{report.law}: {', '.join(report.operands)} -> {status} "
            f"({report.positions_checked} positions)"
        )
        failures += 0 if report.holds else 1
    print(f"{len(runs)} checks, {failures} failures")
    return EXIT_OK if failures == 0 else EXIT_FAIL


def _cmd_solve(args: argparse.Namespace) -> int:
    atoms = _load_atoms(args.config)
    components = parse_sum(args.sum, atoms)
    memo = MemoStore()
    advice = best_move(components, memo, node_budget=args.budget)
    payload = advice.to_dict()
    payload["components"] = [
        {"expr": canonical_text(c.expr), "position": list(c.position)}
        for c in components
    ]
    oracle_status = None
    if args.oracle:
        oracle = sum_outcome_oracle(components, memo, node_budget=args.budget)
        oracle_status = oracle.value
        payload["oracle"] = oracle_status
    if args.format == "json":
        sys.stdout.write(json.dumps(payload) + "\n")
    else:
        values = ", ".join(
            f"{canonical_text(c.expr)}@{';'.join(map(str, c.position))}={v}"
            for c, v in zip(components, advice.values)
        )
        print(f"values: {values}")
        print(f"verdict: {advice.outcome.value} for the player to move")
        if advice.component is None:
            print("advice: no winning move; any move loses against best play")
        elif advice.target is not None:
            print(
                f"advice: announce component {advice.component + 1} and move to "
                f"{';'.join(map(str, advice.target))}"
            )
        else:
            replies = "; ".join(
                f"{name} -> {';'.join(map(str, pos))}"
                for name, pos in advice.replies.items()
            )
            print(
                f"advice: announce component {advice.component + 1}; "
                f"then against each enforcement: {replies}"
            )
        if oracle_status is not None:
            print(f"oracle verdict: {oracle_status}")
    if oracle_status is not None and oracle_status != advice.outcome.value:
        print("oracle disagrees with the nimber verdict", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _cmd_play(args: argparse.Namespace) -> int:
    atoms = _load_atoms(args.config)
    components = parse_sum(args.sum, atoms)
    humans = {
        "first": {1},
        "second": {2},
        "both": {1, 2},
        "none": set(),
    }[args.human]
    try:
        run_play(components, humans, sys.stdin, sys.stdout)
    except PlayAborted:
        print("session aborted: input ended", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    atoms = _load_atoms(args.config)
    expr = parse_expr(args.expr, atoms)
    dim = dimension(expr)
    pos = (
        _parse_position(args.pos, dim)
        if args.pos
        else (8,) * dim
    )
    report = check_jointly_short(expr, pos, node_budget=args.budget)
    print(
        f"{report.subject} is short from {pos}: witness={report.witness}, "
        f"{report.positions_seen} positions, {report.edges_checked} moves checked"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="enforcegames",
        description="Outcomes, nimbers, domination, and sum solving for "
        "impartial rulesets combined with enforce (.) and selective (+s) "
        "operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="ruleset config file with extra atoms")
        p.add_argument(
            "--budget",
            type=int,
            default=DEFAULT_NODE_BUDGET,
            help="node budget for evaluation and termination checks",
        )

    p = sub.add_parser("grid", help="emit an outcome or nimber table")
    p.add_argument("--expr", required=True, help="ruleset expression, e.g. bishop.nim")
    p.add_argument("--analysis", choices=ANALYSES, default="outcome")
    p.add_argument("--size", help="WxH (default 11x11, or 11x1 for one coordinate)")
    p.add_argument("--format", choices=FORMATS, default="ascii")
    p.add_argument("--out", help="write the table to a file instead of stdout")
    p.add_argument("--figure", help="also render the table to this image file")
    common(p)
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("dominate", help="relation between two rulesets under enforcing")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--region", type=int, default=11, help="box size N, i.e. [0,N)^d")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--nimbers", action="store_true", help="also compare nimbers")
    p.add_argument("--figure", help="render the mismatch map to this image file")
    common(p)
    p.set_defaults(func=_cmd_dominate)

    p = sub.add_parser("laws", help="check the algebraic laws")
    p.add_argument("--law", choices=("all",) + LAW_NAMES, default="all")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--c")
    p.add_argument("--region", type=int, default=9)
    p.add_argument("--samples", type=int, default=10, help="random operand tuples per law")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=_cmd_laws)

    p = sub.add_parser("solve", help="verdict and advice for a sum of games")
    p.add_argument(
        "--sum", required=True, help="components like bishop.nim@4;3,knight.nim@3;5"
    )
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check the verdict by direct search",
    )
    common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("play", help="play a sum interactively")
    p.add_argument("--sum", required=True)
    p.add_argument(
        "--human",
        choices=("first", "second", "both", "none"),
        default="first",
        help="which players are controlled from stdin",
    )
    common(p)
    p.set_defaults(func=_cmd_play)

    p = sub.add_parser("check", help="certify an expression short from a position")
    p.add_argument("--expr", required=True)
    p.add_argument("--pos", help="start position like 8;8 (default 8 in each coordinate)")
    common(p)
    p.set_defaults(func=_cmd_check)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ExprSyntaxError, ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TerminationError as exc:
        print(f"termination guard: {exc}", file=sys.stderr)
        return EXIT_TERMINATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
