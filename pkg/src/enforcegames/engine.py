"""Positions, rulesets, memo tables, and guarded bottom-up evaluation.

Positions are tuples of nonnegative ints on an unbounded d-dimensional
board.  Every analysis walks the move graph lazily from the queried
position, so boards are never materialised.  A termination guard (a
strictly decreasing measure where one is declared, cycle detection plus a
node budget otherwise) keeps ill-founded rulesets from hanging the
evaluator.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

Position = tuple[int, ...]

DEFAULT_NODE_BUDGET = 10 ** 6


class Outcome(enum.Enum):
    """Normal-play outcome of a position: P means the player who just moved
    wins, N means the player to move wins."""

    P = "P"
    N = "N"

    def __str__(self) -> str:
        return self.value


def coordinate_sum(pos: Position) -> int:
    """The canonical termination measure; a ruleset whose every move lowers
    it is short by construction."""
    return sum(pos)


def position_order(pos: Position) -> tuple[int, Position]:
    """Sort key used whenever one witness or target must be picked out of
    many: smallest coordinate sum first, ties broken lexicographically."""
    return (sum(pos), pos)


def validate_position(pos: object, dimension: int) -> Position:
    if (
        not isinstance(pos, tuple)
        or len(pos) != dimension
        or not all(isinstance(c, int) and not isinstance(c, bool) and c >= 0 for c in pos)
    ):
        raise ValueError(
            f"position must be a tuple of {dimension} nonnegative integers, got {pos!r}"
        )
    return pos


def box(dimension: int, size: int) -> list[Position]:
    """All positions with every coordinate in [0, size)."""
    if size <= 0:
        raise ValueError("region size must be positive")
    out: list[Position] = [()]
    for _ in range(dimension):
        out = [pos + (c,) for pos in out for c in range(size)]
    return out


class TerminationError(RuntimeError):
    """A termination witness failed: a cycle was reached, a declared measure
    failed to decrease along a move, or the node budget ran out."""

    def __init__(
        self,
        message: str,
        *,
        cycle: Optional[list[Position]] = None,
        edge: Optional[tuple[Position, Position]] = None,
        budget: Optional[int] = None,
    ):
        super().__init__(message)
        self.cycle = cycle
        self.edge = edge
        self.budget = budget


class Ruleset:
    """A single impartial ruleset.

    ``moves(pos)`` returns the set of positions reachable in one move; the
    empty set marks a terminal position.  ``measure``, when given, must
    strictly decrease along every move (this is spot-checked whenever the
    graph is traversed); rulesets without a measure fall back to cycle
    detection.  ``key`` identifies the ruleset for caching: two rulesets
    compare equal iff their keys and dimensions agree.
    """

    def __init__(
        self,
        name: str,
        dimension: int,
        moves: Callable[[Position], set[Position]],
        *,
        measure: Optional[Callable[[Position], int]] = None,
        key: Optional[str] = None,
    ):
        if dimension < 1:
            raise ValueError("dimension must be at least 1")
        self.name = name
        self.dimension = dimension
        self._moves = moves
        self.measure = measure
        self.key = key if key is not None else name

    def moves(self, pos: Position) -> set[Position]:
        return self._moves(pos)

    def options(self, pos: Position) -> list[Position]:
        """Validated, deterministically ordered list of moves from pos."""
        validate_position(pos, self.dimension)
        return sorted(self._moves(pos))

    def is_terminal(self, pos: Position) -> bool:
        return not self._moves(pos)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ruleset):
            return NotImplemented
        return self.key == other.key and self.dimension == other.dimension

    def __hash__(self) -> int:
        return hash((self.key, self.dimension))

    def __repr__(self) -> str:
        return f"Ruleset({self.name!r}, dimension={self.dimension})"


class MemoStore:
    """Write-once caches of evaluated positions, one table per analysis kind
    and expression identity.

    Sharing a store across queries reuses everything already evaluated;
    separate stores are fully independent.  Values never change once
    written, so concurrent readers are safe as long as writers go through
    ``evaluate``.
    """

    def __init__(self) -> None:
        self._tables: dict[tuple[str, str], dict[Position, object]] = {}
        self.hits = 0
        self.misses = 0

    def table(self, kind: str, key: str) -> dict:
        return self._tables.setdefault((kind, key), {})

    def __len__(self) -> int:
        return sum(len(t) for t in self._tables.values())

    def stats(self) -> dict:
        return {
            "tables": len(self._tables),
            "entries": len(self),
            "hits": self.hits,
            "misses": self.misses,
        }


def evaluate(
    start: Position,
    successors: Callable[[Position], list[Position]],
    combine: Callable[[Position, Callable[[Position], object]], object],
    table: dict[Position, object],
    *,
    measure: Optional[Callable[[Position], int]] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> object:
    """Memoized value of ``start`` over the graph spanned by ``successors``.

    ``combine(pos, lookup)`` folds the already-evaluated successors of
    ``pos`` into its value; ``lookup`` resolves any position returned by
    ``successors(pos)``.  Runs on an explicit stack so deep game graphs
    cannot hit the interpreter recursion limit, detects cycles on the
    current path, and aborts once ``node_budget`` positions were expanded.
    """
    if start in table:
        return table[start]
    lookup = table.__getitem__
    frames: list[list] = []  # [position, ordered successor list, cursor]
    on_path: set[Position] = set()
    expanded = 0

    def open_frame(pos: Position) -> None:
        nonlocal expanded
        expanded += 1
        if expanded > node_budget:
            raise TerminationError(
                f"node budget of {node_budget} exhausted at {pos}; "
                "cannot certify the game is short",
                budget=node_budget,
            )
        succ = successors(pos)
        if measure is not None:
            base = measure(pos)
            for q in succ:
                if measure(q) >= base:
                    raise TerminationError(
                        f"measure does not decrease along {pos} -> {q}",
                        edge=(pos, q),
                    )
        frames.append([pos, succ, 0])
        on_path.add(pos)

    open_frame(start)
    while frames:
        frame = frames[-1]
        pos, succ, cursor = frame
        while cursor < len(succ) and succ[cursor] in table:
            cursor += 1
        frame[2] = cursor
        if cursor == len(succ):
            table[pos] = combine(pos, lookup)
            on_path.discard(pos)
            frames.pop()
            continue
        child = succ[cursor]
        if child in on_path:
            path = [f[0] for f in frames]
            cycle = path[path.index(child):] + [child]
            raise TerminationError(
                "cycle detected: " + " -> ".join(map(str, cycle)), cycle=cycle
            )
        open_frame(child)
    return table[start]


@dataclass(frozen=True)
class ShortnessReport:
    """Result of a successful termination check."""

    subject: str
    start: Position
    witness: str  # "measure" or "dag"
    positions_seen: int
    edges_checked: int


def check_graph_short(
    subject: str,
    successors: Callable[[Position], list[Position]],
    start: Position,
    measure: Optional[Callable[[Position], int]],
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> ShortnessReport:
    """Certify that no infinite play leaves ``start``.

    With a measure, every reachable edge is checked for strict decrease;
    without one, the reachable graph is searched for cycles.  Raises
    TerminationError on any violation or when the budget runs out.
    """
    if measure is not None:
        seen = {start}
        edges = 0
        queue = deque([start])
        while queue:
            pos = queue.popleft()
            base = measure(pos)
            for q in successors(pos):
                edges += 1
                if measure(q) >= base:
                    raise TerminationError(
                        f"measure does not decrease along {pos} -> {q}",
                        edge=(pos, q),
                    )
                if q not in seen:
                    if len(seen) >= node_budget:
                        raise TerminationError(
                            f"node budget of {node_budget} exhausted",
                            budget=node_budget,
                        )
                    seen.add(q)
                    queue.append(q)
        return ShortnessReport(subject, start, "measure", len(seen), edges)

    frames: list[list] = [[start, None, 0]]
    on_path = {start}
    done: set[Position] = set()
    edges = 0
    expanded = 0
    while frames:
        frame = frames[-1]
        pos = frame[0]
        if frame[1] is None:
            expanded += 1
            if expanded > node_budget:
                raise TerminationError(
                    f"node budget of {node_budget} exhausted at {pos}",
                    budget=node_budget,
                )
            frame[1] = successors(pos)
            edges += len(frame[1])
        succ, cursor = frame[1], frame[2]
        while cursor < len(succ) and succ[cursor] in done:
            cursor += 1
        if cursor == len(succ):
            done.add(pos)
            on_path.discard(pos)
            frames.pop()
            continue
        child = succ[cursor]
        frame[2] = cursor + 1
        if child in on_path:
            path = [f[0] for f in frames]
            cycle = path[path.index(child):] + [child]
            raise TerminationError(
                "cycle detected: " + " -> ".join(map(str, cycle)), cycle=cycle
            )
        frames.append([child, None, 0])
        on_path.add(child)
    return ShortnessReport(subject, start, "dag", len(done), edges)


def check_short(
    ruleset: Ruleset,
    start: Position,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> ShortnessReport:
    """Certify a single ruleset short from ``start``; see check_graph_short."""
    validate_position(start, ruleset.dimension)
    return check_graph_short(
        ruleset.name, ruleset.options, start, ruleset.measure, node_budget
    )
