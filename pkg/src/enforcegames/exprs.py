"""Ruleset expressions: combining rulesets with the selective and enforce
operators, plus the text grammar the command line uses.

A ``Select`` node lets the mover pick which part to move under; an
``Enforce`` node lets the opponent pick which part the mover must follow,
and the constraint is forgotten as soon as the move is made.  Both
operators are associative and commutative, so nodes are n-ary and
``canonicalize`` flattens nests and sorts children; duplicate children are
kept (they do not change the game).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Union

from .engine import (
    DEFAULT_NODE_BUDGET,
    MemoStore,
    Outcome,
    Position,
    Ruleset,
    ShortnessReport,
    TerminationError,
    check_graph_short,
    coordinate_sum,
    evaluate,
    validate_position,
)
from .rulesets import CATALOG, absorbing_ruleset, identity_ruleset


@dataclass(frozen=True)
class Base:
    ruleset: Ruleset


@dataclass(frozen=True)
class Enforce:
    children: tuple["Expr", ...]


@dataclass(frozen=True)
class Select:
    children: tuple["Expr", ...]


Expr = Union[Base, Enforce, Select]
ExprLike = Union[Expr, Ruleset]


def base(ruleset: Ruleset) -> Base:
    return Base(ruleset)


def as_expr(part: ExprLike) -> Expr:
    if isinstance(part, Ruleset):
        return Base(part)
    if isinstance(part, (Base, Enforce, Select)):
        return part
    raise TypeError(f"expected a Ruleset or expression, got {part!r}")


def _combine(node_type: type, parts: tuple[ExprLike, ...]) -> Expr:
    if not parts:
        raise ValueError("an operator needs at least one operand")
    flat: list[Expr] = []
    for part in parts:
        e = as_expr(part)
        if isinstance(e, node_type):
            flat.extend(e.children)
        else:
            flat.append(e)
    dims = {dimension(e) for e in flat}
    if len(dims) > 1:
        raise ValueError(
            f"cannot combine rulesets of different dimensions: {sorted(dims)}"
        )
    if len(flat) == 1:
        return flat[0]
    return node_type(tuple(flat))


def enforce(*parts: ExprLike) -> Expr:
    """Combine rulesets so the opponent picks, before every move, which one
    the mover must follow."""
    return _combine(Enforce, parts)


def select(*parts: ExprLike) -> Expr:
    """Combine rulesets so the mover picks, at every move, which one to
    follow (the union ruleset)."""
    return _combine(Select, parts)


def leaves(expr: Expr) -> tuple[Ruleset, ...]:
    if isinstance(expr, Base):
        return (expr.ruleset,)
    out: list[Ruleset] = []
    for c in expr.children:
        out.extend(leaves(c))
    return tuple(out)


def dimension(expr: Expr) -> int:
    return leaves(expr)[0].dimension


def is_plain(expr: Expr) -> bool:
    """True when the expression contains no enforce node, i.e. it denotes a
    single ruleset (the union of its leaves)."""
    if isinstance(expr, Base):
        return True
    if isinstance(expr, Select):
        return all(is_plain(c) for c in expr.children)
    return False


@lru_cache(maxsize=None)
def canonicalize(expr: Expr) -> Expr:
    """Flatten associative nests and sort children into a canonical order."""
    if isinstance(expr, Base):
        return expr
    node_type = type(expr)
    flat: list[Expr] = []
    for c in expr.children:
        cc = canonicalize(c)
        if isinstance(cc, node_type):
            flat.extend(cc.children)
        else:
            flat.append(cc)
    flat.sort(key=lambda e: (text(e), canonical_id(e)))
    return node_type(tuple(flat))


def text(expr: Expr) -> str:
    """Render an expression in the grammar the parser accepts; children are
    shown in their current order."""
    return _render(expr, 0)


def _render(expr: Expr, parent_level: int) -> str:
    # precedence: select (1) binds looser than enforce (2)
    if isinstance(expr, Base):
        return expr.ruleset.name
    level = 2 if isinstance(expr, Enforce) else 1
    sep = "." if isinstance(expr, Enforce) else " +s "
    body = sep.join(_render(c, level) for c in expr.children)
    return f"({body})" if level < parent_level else body


@lru_cache(maxsize=None)
def canonical_id(expr: Expr) -> str:
    """Stable cache identity: equal for any two expressions that flatten and
    sort to the same tree over the same ruleset keys."""
    if isinstance(expr, Base):
        return expr.ruleset.key
    tag = "enf" if isinstance(expr, Enforce) else "sel"
    parts = sorted(canonical_id(c) for c in expr.children)
    return f"{tag}({','.join(parts)})"


def canonical_text(expr: Expr) -> str:
    return text(canonicalize(expr))


def joint_options(expr: Expr, pos: Position) -> list[Position]:
    """All positions reachable in one move under any leaf ruleset, in a
    deterministic order."""
    validate_position(pos, dimension(expr))
    out: set[Position] = set()
    for rs in leaves(expr):
        out |= rs.moves(pos)
    return sorted(out)


def joint_measure(expr: Expr):
    """The shared decreasing measure if every leaf declares the canonical
    one; None otherwise (falls back to cycle detection)."""
    if all(rs.measure is coordinate_sum for rs in leaves(expr)):
        return coordinate_sum
    return None


def reachable_closure(
    expr: Expr, seeds: Iterable[Position], *, node_budget: int = DEFAULT_NODE_BUDGET
) -> set[Position]:
    """All positions reachable from the seeds under the joint move graph,
    seeds included."""
    seen: set[Position] = set()
    stack: list[Position] = []
    for pos in seeds:
        validate_position(pos, dimension(expr))
        if pos not in seen:
            seen.add(pos)
            stack.append(pos)
    while stack:
        pos = stack.pop()
        for q in joint_options(expr, pos):
            if q not in seen:
                if len(seen) >= node_budget:
                    raise TerminationError(
                        f"node budget of {node_budget} exhausted while closing the region",
                        budget=node_budget,
                    )
                seen.add(q)
                stack.append(q)
    return seen


def _mover_wins(node: Expr, pos: Position, lookup) -> bool:
    """Can the mover reach a P position, given each select node is resolved
    by the mover and each enforce node by the opponent?"""
    if isinstance(node, Base):
        return any(lookup(q) is Outcome.P for q in node.ruleset.moves(pos))
    if isinstance(node, Select):
        return any(_mover_wins(c, pos, lookup) for c in node.children)
    return all(_mover_wins(c, pos, lookup) for c in node.children)


def outcome(
    expr: ExprLike,
    pos: Position,
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Outcome:
    """Normal-play outcome of ``pos`` under an arbitrary expression."""
    expr = as_expr(expr)
    if memo is None:
        memo = MemoStore()
    table = memo.table("outcome", canonical_id(expr))
    if pos in table:
        memo.hits += 1
        return table[pos]  # type: ignore[return-value]
    memo.misses += 1
    validate_position(pos, dimension(expr))

    def combine(p: Position, lookup) -> Outcome:
        return Outcome.N if _mover_wins(expr, p, lookup) else Outcome.P

    return evaluate(
        pos,
        lambda p: joint_options(expr, p),
        combine,
        table,
        measure=joint_measure(expr),
        node_budget=node_budget,
    )


def check_jointly_short(
    expr: ExprLike,
    start: Position,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> ShortnessReport:
    """Certify that no infinite play leaves ``start`` when moves may be
    drawn from every leaf ruleset; rulesets short on their own can still
    fail this together."""
    expr = as_expr(expr)
    validate_position(start, dimension(expr))
    return check_graph_short(
        canonical_text(expr),
        lambda p: joint_options(expr, p),
        start,
        joint_measure(expr),
        node_budget,
    )


# ---------------------------------------------------------------------------
# the expression grammar
#
#     expr   := term ("+s" term)*          selective combination
#     term   := factor ("." factor)*       enforce combination (binds tighter)
#     factor := NAME | "(" expr ")"
#
# NAME is an atom from the builtin catalog or a loaded config; ``e`` and
# ``o`` take the dimension of the other atoms (default 2).

class ExprSyntaxError(ValueError):
    """Expression text failed to parse; carries the offset and what was
    expected there."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
        self.expected = expected


_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[a-z][a-z0-9-]*)|(?P<op>\+s|[.()]))")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            rest = src[pos:].lstrip()
            if not rest:
                break
            raise ExprSyntaxError(
                f"unexpected character {rest[0]!r}",
                len(src) - len(rest),
                ("name", "(", ")", ".", "+s"),
            )
        if m.group("name"):
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.i = 0
        self.names_used: list[tuple[str, int]] = []

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, value, offset = self.peek()
        if kind != "op" or value != op:
            raise ExprSyntaxError(f"expected {op!r}", offset, (op,))
        self.take()

    # grammar rules return nested name trees: ("name", n) / (op, [children])
    def parse_expr(self):
        parts = [self.parse_term()]
        while self.peek()[:2] == ("op", "+s"):
            self.take()
            parts.append(self.parse_term())
        return parts[0] if len(parts) == 1 else ("select", parts)

    def parse_term(self):
        parts = [self.parse_factor()]
        while self.peek()[:2] == ("op", "."):
            self.take()
            parts.append(self.parse_factor())
        return parts[0] if len(parts) == 1 else ("enforce", parts)

    def parse_factor(self):
        kind, value, offset = self.peek()
        if kind == "name":
            self.take()
            self.names_used.append((value, offset))
            return ("name", value, offset)
        if (kind, value) == ("op", "("):
            self.take()
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        raise ExprSyntaxError(
            "expected a ruleset name or '('", offset, ("name", "(")
        )


def parse_expr(
    src: str,
    atoms: Optional[dict[str, Ruleset]] = None,
    *,
    default_dimension: int = 2,
) -> Expr:
    """Parse expression text into an expression tree.

    ``atoms`` supplies extra named rulesets (e.g. from a config file) on
    top of the builtin catalog.
    """
    table: dict[str, Ruleset] = dict(CATALOG)
    if atoms:
        table.update(atoms)
    parser = _Parser(src)
    tree = parser.parse_expr()
    kind, value, offset = parser.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {value!r}", offset, (".", "+s", "end"))

    # resolve dimension first so that e/o can adapt to the other atoms
    dims = set()
    for name, offset in parser.names_used:
        if name in ("e", "o"):
            continue
        if name not in table:
            raise ExprSyntaxError(
                f"unknown ruleset {name!r}; available: "
                + ", ".join(sorted(table) + ["e", "o"]),
                offset,
                ("name",),
            )
        dims.add(table[name].dimension)
    if len(dims) > 1:
        raise ExprSyntaxError(
            f"rulesets of different dimensions in one expression: {sorted(dims)}",
            0,
        )
    dim = dims.pop() if dims else default_dimension

    def build(node) -> Expr:
        if node[0] == "name":
            name = node[1]
            if name == "e":
                return Base(identity_ruleset(dim))
            if name == "o":
                return Base(absorbing_ruleset(dim))
            return Base(table[name])
        tag, children = node
        parts = [build(c) for c in children]
        return enforce(*parts) if tag == "enforce" else select(*parts)

    return build(tree)
