"""Nimber computations, ruleset domination, and the algebraic laws.

The two nimber notions: ``grundy`` is the classical value of a single
ruleset (or a selective combination, which is just the union ruleset);
``enforce_grundy`` is the value of an enforce combination, computed with
mex over the intersection of the children's option values.  Both reduce
disjunctive sums to nim-addition of component values.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .engine import (
    DEFAULT_NODE_BUDGET,
    MemoStore,
    Outcome,
    Position,
    box,
    evaluate,
    position_order,
    validate_position,
)
from .exprs import (
    Base,
    Enforce,
    Expr,
    ExprLike,
    as_expr,
    canonical_id,
    canonical_text,
    dimension,
    enforce,
    is_plain,
    joint_measure,
    joint_options,
    outcome,
    reachable_closure,
    select,
)
from .rulesets import absorbing_ruleset, identity_ruleset

Region = Union[int, Iterable[Position]]


def mex(values: Iterable[int]) -> int:
    """Least nonnegative integer not in ``values``."""
    present = set(values)
    n = 0
    while n in present:
        n += 1
    return n


def nim_sum(values: Iterable[int]) -> int:
    """Bitwise xor fold; the value of a disjunctive sum of components."""
    total = 0
    for v in values:
        total ^= v
    return total


def _region_positions(region: Region, dim: int) -> list[Position]:
    if isinstance(region, int):
        return box(dim, region)
    positions = [validate_position(p, dim) for p in region]
    if not positions:
        raise ValueError("region must contain at least one position")
    return positions


def grundy(
    expr: ExprLike,
    pos: Position,
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> int:
    """Classical nimber of a plain expression (no enforce parts)."""
    expr = as_expr(expr)
    if not is_plain(expr):
        raise ValueError(
            "grundy is defined for expressions without enforce parts; "
            "use enforce_grundy for an enforce combination"
        )
    if memo is None:
        memo = MemoStore()
    table = memo.table("grundy", canonical_id(expr))
    if pos in table:
        memo.hits += 1
        return table[pos]  # type: ignore[return-value]
    memo.misses += 1
    validate_position(pos, dimension(expr))

    def combine(p: Position, lookup) -> int:
        return mex(lookup(q) for q in joint_options(expr, p))

    return evaluate(
        pos,
        lambda p: joint_options(expr, p),
        combine,
        table,
        measure=joint_measure(expr),
        node_budget=node_budget,
    )


def enforce_grundy(
    expr: ExprLike,
    pos: Position,
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> int:
    """Nimber of an enforce combination: mex of the values reachable under
    every child at once (the intersection of the children's option values).

    The expression root must be an enforce node and each child must be
    plain; deeper mixtures have no supported nimber theory here.
    """
    expr = as_expr(expr)
    if not isinstance(expr, Enforce):
        raise ValueError("enforce_grundy needs an enforce combination at the root")
    for c in expr.children:
        if not is_plain(c):
            raise ValueError(
                "enforce_grundy supports enforce over plain parts only; "
                f"child {canonical_text(c)!r} nests another enforce"
            )
    if memo is None:
        memo = MemoStore()
    table = memo.table("enforce-grundy", canonical_id(expr))
    if pos in table:
        memo.hits += 1
        return table[pos]  # type: ignore[return-value]
    memo.misses += 1
    validate_position(pos, dimension(expr))
    children = expr.children

    def combine(p: Position, lookup) -> int:
        value_sets = [
            {lookup(q) for q in joint_options(c, p)} for c in children
        ]
        return mex(set.intersection(*value_sets))

    return evaluate(
        pos,
        lambda p: joint_options(expr, p),
        combine,
        table,
        measure=joint_measure(expr),
        node_budget=node_budget,
    )


def analysis_value(
    analysis: str,
    expr: ExprLike,
    pos: Position,
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
):
    """Dispatch helper: analysis is 'outcome', 'grundy', or 'enforce-grundy'."""
    if analysis == "outcome":
        return outcome(expr, pos, memo, node_budget=node_budget)
    if analysis == "grundy":
        return grundy(expr, pos, memo, node_budget=node_budget)
    if analysis == "enforce-grundy":
        return enforce_grundy(expr, pos, memo, node_budget=node_budget)
    raise ValueError(f"unknown analysis {analysis!r}")


# ---------------------------------------------------------------------------
# domination

def property1(
    a: ExprLike,
    b: ExprLike,
    positions: Iterable[Position],
    memo: Optional[MemoStore] = None,
) -> tuple[bool, Optional[Position]]:
    """The one-move recovery criterion for ``a`` to dominate ``b``: at every
    checked position that is N under ``a``, some ``b`` move lands on a
    position that is P under ``a``.

    Returns (holds, witness); the witness is the failing position with the
    smallest coordinate sum (ties broken lexicographically).  Outcome
    queries follow moves wherever they lead, even outside ``positions``.
    """
    a, b = as_expr(a), as_expr(b)
    if memo is None:
        memo = MemoStore()
    witness: Optional[Position] = None
    for pos in positions:
        if outcome(a, pos, memo) is not Outcome.N:
            continue
        if any(outcome(a, q, memo) is Outcome.P for q in joint_options(b, pos)):
            continue
        if witness is None or position_order(pos) < position_order(witness):
            witness = pos
    return witness is None, witness


@dataclass(frozen=True)
class DominationReport:
    """How two rulesets relate under enforcing, verified two ways.

    ``relation`` is one of ``dominates`` (a beats b: enforcing b on top of a
    never changes a's outcomes), ``dominated_by``, ``similar`` (both ways),
    ``confused`` (neither).  For each failing direction the report carries
    the smallest position where the combined outcome differs and the
    smallest position where the one-move recovery criterion fails.
    """

    a: str
    b: str
    relation: str
    region: str
    positions_checked: int
    a_over_b: bool
    b_over_a: bool
    counterexample_a_over_b: Optional[Position] = None
    counterexample_b_over_a: Optional[Position] = None
    recovery_witness_a_over_b: Optional[Position] = None
    recovery_witness_b_over_a: Optional[Position] = None

    def to_dict(self) -> dict:
        def aslist(p):
            return None if p is None else list(p)

        return {
            "a": self.a,
            "b": self.b,
            "relation": self.relation,
            "region": self.region,
            "positions_checked": self.positions_checked,
            "a_over_b": self.a_over_b,
            "b_over_a": self.b_over_a,
            "counterexample_a_over_b": aslist(self.counterexample_a_over_b),
            "counterexample_b_over_a": aslist(self.counterexample_b_over_a),
            "recovery_witness_a_over_b": aslist(self.recovery_witness_a_over_b),
            "recovery_witness_b_over_a": aslist(self.recovery_witness_b_over_a),
        }


def _outcome_mismatch(
    lhs: Expr, rhs: Expr, positions: Sequence[Position], memo: MemoStore
) -> Optional[Position]:
    worst: Optional[Position] = None
    for pos in positions:
        if outcome(lhs, pos, memo) is not outcome(rhs, pos, memo):
            if worst is None or position_order(pos) < position_order(worst):
                worst = pos
    return worst


def classify_domination(
    a: ExprLike,
    b: ExprLike,
    region: Region,
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> DominationReport:
    """Classify the relation between two rulesets under enforcing.

    Quantifies over the closure of the region under joint moves, which makes
    the two verification routes (one-move recovery, and outcomes of the
    combined game against each component) provably equivalent; they are both
    evaluated and cross-checked, and any disagreement raises.
    """
    a, b = as_expr(a), as_expr(b)
    if memo is None:
        memo = MemoStore()
    combined = enforce(a, b)
    seeds = _region_positions(region, dimension(a))
    closure = sorted(
        reachable_closure(combined, seeds, node_budget=node_budget)
    )

    p1_ab, wit_ab = property1(a, b, closure, memo)
    p1_ba, wit_ba = property1(b, a, closure, memo)
    mism_a = _outcome_mismatch(combined, a, closure, memo)
    mism_b = _outcome_mismatch(combined, b, closure, memo)

    if p1_ab is not (mism_a is None) or p1_ba is not (mism_b is None):
        raise RuntimeError(
            "internal error: recovery criterion and outcome comparison disagree "
            f"for {canonical_text(a)} vs {canonical_text(b)}"
        )

    if p1_ab and p1_ba:
        relation = "similar"
    elif p1_ab:
        relation = "dominates"
    elif p1_ba:
        relation = "dominated_by"
    else:
        relation = "confused"

    region_desc = (
        f"box[{region}]^{dimension(a)}" if isinstance(region, int) else "explicit"
    )
    return DominationReport(
        a=canonical_text(a),
        b=canonical_text(b),
        relation=relation,
        region=f"{region_desc} closed under joint moves",
        positions_checked=len(closure),
        a_over_b=p1_ab,
        b_over_a=p1_ba,
        counterexample_a_over_b=mism_a,
        counterexample_b_over_a=mism_b,
        recovery_witness_a_over_b=wit_ab,
        recovery_witness_b_over_a=wit_ba,
    )


# ---------------------------------------------------------------------------
# algebraic laws

def _identity_for(dim: int) -> Expr:
    return Base(identity_ruleset(dim))


def _absorbing_for(dim: int) -> Expr:
    return Base(absorbing_ruleset(dim))


LAW_ARITY: dict[str, int] = {
    "absorb-select-then-enforce": 2,
    "absorb-enforce-then-select": 2,
    "enforce-distributes-over-select": 3,
    "select-distributes-over-enforce": 3,
    "enforce-identity": 1,
    "enforce-absorbing": 1,
    "select-identity": 1,
    "select-absorbing": 1,
}

LAW_NAMES: tuple[str, ...] = tuple(LAW_ARITY)


def _law_sides(law: str, operands: Sequence[Expr]) -> tuple[Expr, Expr]:
    dim = dimension(operands[0])
    if law == "absorb-select-then-enforce":
        a, b = operands
        return enforce(select(a, b), a), a
    if law == "absorb-enforce-then-select":
        a, b = operands
        return select(enforce(a, b), a), a
    if law == "enforce-distributes-over-select":
        a, b, c = operands
        return enforce(select(a, b), c), select(enforce(a, c), enforce(b, c))
    if law == "select-distributes-over-enforce":
        a, b, c = operands
        return select(enforce(a, b), c), enforce(select(a, c), select(b, c))
    (a,) = operands
    if law == "enforce-identity":
        return enforce(a, _identity_for(dim)), a
    if law == "enforce-absorbing":
        return enforce(a, _absorbing_for(dim)), _absorbing_for(dim)
    if law == "select-identity":
        return select(a, _absorbing_for(dim)), a
    if law == "select-absorbing":
        return select(a, _identity_for(dim)), _identity_for(dim)
    raise ValueError(f"unknown law {law!r}; known laws: {', '.join(LAW_NAMES)}")


@dataclass(frozen=True)
class LawReport:
    law: str
    operands: tuple[str, ...]
    lhs: str
    rhs: str
    holds: bool
    positions_checked: int
    counterexample: Optional[Position] = None

    def to_dict(self) -> dict:
        return {
            "law": self.law,
            "operands": list(self.operands),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "positions_checked": self.positions_checked,
            "counterexample": None
            if self.counterexample is None
            else list(self.counterexample),
        }


def check_law(
    law: str,
    operands: Sequence[ExprLike],
    region: Region,
    memo: Optional[MemoStore] = None,
) -> LawReport:
    """Verify one algebraic law position-wise over the region: outcomes of
    the two sides must agree everywhere."""
    ops = tuple(as_expr(op) for op in operands)
    if law not in LAW_ARITY:
        raise ValueError(f"unknown law {law!r}; known laws: {', '.join(LAW_NAMES)}")
    if len(ops) != LAW_ARITY[law]:
        raise ValueError(
            f"law {law!r} takes {LAW_ARITY[law]} operand(s), got {len(ops)}"
        )
    if memo is None:
        memo = MemoStore()
    lhs, rhs = _law_sides(law, ops)
    positions = _region_positions(region, dimension(ops[0]))
    worst = _outcome_mismatch(lhs, rhs, positions, memo)
    return LawReport(
        law=law,
        operands=tuple(canonical_text(op) for op in ops),
        lhs=canonical_text(lhs),
        rhs=canonical_text(rhs),
        holds=worst is None,
        positions_checked=len(positions),
        counterexample=worst,
    )


# ---------------------------------------------------------------------------
# strong domination and cycles

def default_candidates(pool: Sequence[ExprLike]) -> list[Expr]:
    """Candidate contexts for strong-domination testing: the pool itself
    plus every pairwise enforce and selective combination."""
    exprs = [as_expr(p) for p in pool]
    out = list(exprs)
    for i, x in enumerate(exprs):
        for y in exprs[i + 1:]:
            out.append(enforce(x, y))
            out.append(select(x, y))
    return out


@dataclass(frozen=True)
class StrongDominationReport:
    a: str
    b: str
    holds_on_candidates: bool
    candidates_checked: int
    positions_checked: int
    candidate: Optional[str] = None
    counterexample: Optional[Position] = None

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "holds_on_candidates": self.holds_on_candidates,
            "candidates_checked": self.candidates_checked,
            "positions_checked": self.positions_checked,
            "candidate": self.candidate,
            "counterexample": None
            if self.counterexample is None
            else list(self.counterexample),
        }


def falsify_strong_domination(
    a: ExprLike,
    b: ExprLike,
    candidates: Sequence[ExprLike],
    region: Region,
    memo: Optional[MemoStore] = None,
) -> StrongDominationReport:
    """Search for a context ruleset C under which adding ``b`` to ``a . C``
    changes some outcome, i.e. a refutation of 'a strongly dominates b'.

    A clean report only means no candidate refuted it; it never claims
    strong domination proved.
    """
    a, b = as_expr(a), as_expr(b)
    if memo is None:
        memo = MemoStore()
    positions = _region_positions(region, dimension(a))
    checked = 0
    for cand in candidates:
        cand = as_expr(cand)
        checked += 1
        worst = _outcome_mismatch(
            enforce(a, b, cand), enforce(a, cand), positions, memo
        )
        if worst is not None:
            return StrongDominationReport(
                a=canonical_text(a),
                b=canonical_text(b),
                holds_on_candidates=False,
                candidates_checked=checked,
                positions_checked=len(positions),
                candidate=canonical_text(cand),
                counterexample=worst,
            )
    return StrongDominationReport(
        a=canonical_text(a),
        b=canonical_text(b),
        holds_on_candidates=True,
        candidates_checked=checked,
        positions_checked=len(positions),
    )


@dataclass(frozen=True)
class ThreeCycleReport:
    """Relations around a triple.  A cycle of dominations forces all three
    rulesets to be similar, so a strict cycle can never appear; ``consistent``
    records that this held."""

    ab: str
    bc: str
    ca: str
    weak_cycle: bool
    strict_cycle: bool
    all_similar: bool
    consistent: bool


def three_cycle_check(
    a: ExprLike,
    b: ExprLike,
    c: ExprLike,
    region: Region,
    memo: Optional[MemoStore] = None,
) -> ThreeCycleReport:
    """Classify all three pairs around the triple and check the cycle rule:
    if a beats b, b beats c, and c beats a (weakly), all must be similar."""
    if memo is None:
        memo = MemoStore()
    rel_ab = classify_domination(a, b, region, memo).relation
    rel_bc = classify_domination(b, c, region, memo).relation
    rel_ca = classify_domination(c, a, region, memo).relation
    beats = ("dominates", "similar")
    weak = rel_ab in beats and rel_bc in beats and rel_ca in beats
    strict = (rel_ab, rel_bc, rel_ca) == ("dominates",) * 3
    all_similar = (rel_ab, rel_bc, rel_ca) == ("similar",) * 3
    return ThreeCycleReport(
        ab=rel_ab,
        bc=rel_bc,
        ca=rel_ca,
        weak_cycle=weak,
        strict_cycle=strict,
        all_similar=all_similar,
        consistent=not strict and (not weak or all_similar),
    )


# ---------------------------------------------------------------------------
# nimber domination (experimental comparison, no theory asserted)

@dataclass(frozen=True)
class NimberComparisonReport:
    """Does enforcing ``b`` on top of ``a`` keep not just outcomes but
    nimbers?  Open territory: reported, never asserted."""

    a: str
    b: str
    relation: str
    positions_checked: int
    mismatches: int
    first_mismatch: Optional[Position] = None
    grundy_at_mismatch: Optional[int] = None
    enforce_value_at_mismatch: Optional[int] = None

    @property
    def nimbers_agree(self) -> bool:
        return self.mismatches == 0

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "relation": self.relation,
            "positions_checked": self.positions_checked,
            "mismatches": self.mismatches,
            "nimbers_agree": self.nimbers_agree,
            "first_mismatch": None
            if self.first_mismatch is None
            else list(self.first_mismatch),
            "grundy_at_mismatch": self.grundy_at_mismatch,
            "enforce_value_at_mismatch": self.enforce_value_at_mismatch,
        }


def compare_nimbers(
    a: ExprLike,
    b: ExprLike,
    region: Region,
    memo: Optional[MemoStore] = None,
) -> NimberComparisonReport:
    """Compare the nimbers of ``a`` with the enforce values of ``a . b``
    over the region, alongside the outcome relation."""
    a, b = as_expr(a), as_expr(b)
    if memo is None:
        memo = MemoStore()
    relation = classify_domination(a, b, region, memo).relation
    positions = sorted(_region_positions(region, dimension(a)))
    combined = enforce(a, b)
    mismatches = 0
    first: Optional[Position] = None
    g_first: Optional[int] = None
    e_first: Optional[int] = None
    for pos in positions:
        g = grundy(a, pos, memo)
        ev = enforce_grundy(combined, pos, memo)
        if g != ev:
            mismatches += 1
            if first is None or position_order(pos) < position_order(first):
                first, g_first, e_first = pos, g, ev
    return NimberComparisonReport(
        a=canonical_text(a),
        b=canonical_text(b),
        relation=relation,
        positions_checked=len(positions),
        mismatches=mismatches,
        first_mismatch=first,
        grundy_at_mismatch=g_first,
        enforce_value_at_mismatch=e_first,
    )
