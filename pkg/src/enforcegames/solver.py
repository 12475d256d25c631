"""Disjunctive sums of ruleset games: verdicts and move advice.

A sum is a list of components, each an expression with its own position.
On a turn the mover announces one component; if that component is an
enforce combination, the opponent then picks which child ruleset the move
must follow; the mover finally moves inside that component.  Announcing a
component whose enforced part turns out to have no moves loses on the
spot, so enforce components can be traps.

Verdicts come from nim-addition of component values (grundy for plain
components, enforce values for enforce combinations); ``sum_outcome_oracle``
recomputes the verdict by direct search over whole sum states for
cross-checking.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .engine import (
    DEFAULT_NODE_BUDGET,
    MemoStore,
    Outcome,
    Position,
    TerminationError,
    position_order,
    validate_position,
)
from .exprs import (
    Enforce,
    Expr,
    ExprLike,
    as_expr,
    canonical_id,
    canonical_text,
    dimension,
    joint_options,
)
from .analysis import enforce_grundy, grundy, nim_sum

# Component expressions the randomized oracle cross-check draws from: the
# playable two-coordinate rulesets and their enforce combinations.
SAMPLE_COMPONENT_EXPRESSIONS: tuple[str, ...] = (
    "nim",
    "bishop",
    "knight",
    "yama",
    "wythoff",
    "bishop.nim",
    "knight.nim",
    "bishop.knight",
    "wythoff.yama",
)


@dataclass(frozen=True)
class SumComponent:
    expr: Expr
    position: Position

    def __post_init__(self):
        validate_position(self.position, dimension(self.expr))


def make_sum(components: Sequence[tuple[ExprLike, Position]]) -> list[SumComponent]:
    if not components:
        raise ValueError("a sum needs at least one component")
    return [SumComponent(as_expr(e), tuple(p)) for e, p in components]


def component_value(
    expr: ExprLike,
    pos: Position,
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> int:
    """The nimber this component contributes to a sum."""
    expr = as_expr(expr)
    if isinstance(expr, Enforce):
        return enforce_grundy(expr, pos, memo, node_budget=node_budget)
    return grundy(expr, pos, memo, node_budget=node_budget)


def sum_values(
    components: Sequence[SumComponent],
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[int, ...]:
    if memo is None:
        memo = MemoStore()
    return tuple(
        component_value(c.expr, c.position, memo, node_budget=node_budget)
        for c in components
    )


def sum_outcome(
    components: Sequence[SumComponent],
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Outcome:
    """Sum verdict via nim-addition of component values."""
    total = nim_sum(sum_values(components, memo, node_budget=node_budget))
    return Outcome.N if total else Outcome.P


def sum_outcome_oracle(
    components: Sequence[SumComponent],
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Outcome:
    """Sum verdict by direct search over whole sum states, no nimbers.

    Exponential in principle; meant for cross-checking the nim-addition
    route on small boards.  States are cached up to component order.
    """
    if memo is None:
        memo = MemoStore()
    by_id: dict[str, Expr] = {canonical_id(c.expr): c.expr for c in components}
    table = memo.table("sum-oracle", "|".join(sorted(by_id)))
    budget = [node_budget]

    def moved(state, i, eid, q):
        return tuple(sorted(state[:i] + ((eid, q),) + state[i + 1:]))

    def mover_wins(state) -> bool:
        if state in table:
            return table[state]
        budget[0] -= 1
        if budget[0] < 0:
            raise TerminationError(
                f"node budget of {node_budget} exhausted in the sum search",
                budget=node_budget,
            )
        result = False
        for i, (eid, pos) in enumerate(state):
            expr = by_id[eid]
            if isinstance(expr, Enforce):
                ok = all(
                    any(
                        not mover_wins(moved(state, i, eid, q))
                        for q in joint_options(child, pos)
                    )
                    for child in expr.children
                )
            else:
                ok = any(
                    not mover_wins(moved(state, i, eid, q))
                    for q in joint_options(expr, pos)
                )
            if ok:
                result = True
                break
        table[state] = result
        return result

    start = tuple(
        sorted((canonical_id(c.expr), c.position) for c in components)
    )
    return Outcome.N if mover_wins(start) else Outcome.P


@dataclass(frozen=True)
class MoveAdvice:
    """What the mover should do.

    For a winning sum: ``component`` is the index to announce; ``target``
    is the move when that component is plain; ``replies`` maps each child
    of an enforce component to the move answering that enforcement.  For a
    losing sum everything is None.
    """

    outcome: Outcome
    values: tuple[int, ...]
    component: Optional[int] = None
    target: Optional[Position] = None
    replies: Optional[dict[str, Position]] = None

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "values": list(self.values),
            "component": self.component,
            "target": None if self.target is None else list(self.target),
            "replies": None
            if self.replies is None
            else {k: list(v) for k, v in self.replies.items()},
        }


def _ordered(options: Sequence[Position]) -> list[Position]:
    return sorted(options, key=position_order)


def best_move(
    components: Sequence[SumComponent],
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> MoveAdvice:
    """Deterministic winning advice: scan components in order and pick the
    first that restores a zero sum against every possible enforcement;
    candidate targets are tried smallest coordinate sum first."""
    if memo is None:
        memo = MemoStore()
    values = sum_values(components, memo, node_budget=node_budget)
    total = nim_sum(values)
    if total == 0:
        return MoveAdvice(outcome=Outcome.P, values=values)
    for i, comp in enumerate(components):
        needed = total ^ values[i]

        def value_at(q: Position) -> int:
            return component_value(comp.expr, q, memo, node_budget=node_budget)

        if isinstance(comp.expr, Enforce):
            replies: dict[str, Position] = {}
            complete = True
            for child in comp.expr.children:
                reply = next(
                    (
                        q
                        for q in _ordered(joint_options(child, comp.position))
                        if value_at(q) == needed
                    ),
                    None,
                )
                if reply is None:
                    complete = False
                    break
                replies[canonical_text(child)] = reply
            if complete:
                return MoveAdvice(
                    outcome=Outcome.N,
                    values=values,
                    component=i,
                    replies=replies,
                )
        else:
            target = next(
                (
                    q
                    for q in _ordered(joint_options(comp.expr, comp.position))
                    if value_at(q) == needed
                ),
                None,
            )
            if target is not None:
                return MoveAdvice(
                    outcome=Outcome.N,
                    values=values,
                    component=i,
                    target=target,
                )
    raise RuntimeError(
        "internal error: winning sum but no component admits a complete "
        "winning answer"
    )


@dataclass(frozen=True)
class EnforcementAdvice:
    """What the opponent should enforce after the mover announced the given
    enforce component.  ``blocking`` means the enforced child leaves the
    mover no move that restores a zero sum; when no child blocks (the
    enforcer is losing anyway) the child with the fewest escapes is chosen
    and ``blocking`` is False."""

    component: int
    child_index: int
    child: str
    blocking: bool

    def to_dict(self) -> dict:
        return {
            "component": self.component,
            "child_index": self.child_index,
            "child": self.child,
            "blocking": self.blocking,
        }


def best_enforcement(
    components: Sequence[SumComponent],
    component: int,
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> EnforcementAdvice:
    comp = components[component]
    if not isinstance(comp.expr, Enforce):
        raise ValueError("best_enforcement applies to enforce components only")
    if memo is None:
        memo = MemoStore()
    values = sum_values(components, memo, node_budget=node_budget)
    needed = nim_sum(values) ^ values[component]

    best_i: Optional[int] = None
    best_escapes: Optional[int] = None
    for i, child in enumerate(comp.expr.children):
        escapes = sum(
            1
            for q in joint_options(child, comp.position)
            if component_value(comp.expr, q, memo, node_budget=node_budget) == needed
        )
        if escapes == 0:
            return EnforcementAdvice(
                component=component,
                child_index=i,
                child=canonical_text(child),
                blocking=True,
            )
        if best_escapes is None or escapes < best_escapes:
            best_i, best_escapes = i, escapes
    assert best_i is not None
    return EnforcementAdvice(
        component=component,
        child_index=best_i,
        child=canonical_text(comp.expr.children[best_i]),
        blocking=False,
    )
