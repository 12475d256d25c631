"""Interactive play over a disjunctive sum.

Protocol per turn: the mover announces a component; if that component is
an enforce combination the opponent picks which child ruleset applies;
the mover then moves inside it.  A mover stuck with no legal target (for
instance after announcing an enforce component whose enforced part is
empty) loses; a mover with no announceable component loses.

Humans type answers on stdin (component number, child name or number,
target like ``2;0``); the engine plays its own sides deterministically
using the sum solver.  Illegal input re-prompts with the legal choices;
end of input aborts the session.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Optional

from .engine import MemoStore, Position, position_order
from .exprs import Enforce, canonical_text, joint_options
from .solver import SumComponent, best_enforcement, best_move


class PlayAborted(RuntimeError):
    """Input ended before the game did."""


@dataclass
class Ply:
    number: int
    mover: int
    component: int
    enforced: Optional[str]
    source: Position
    target: Position


@dataclass
class PlayResult:
    winner: int
    plies: list[Ply] = field(default_factory=list)


def _fmt_pos(pos: Position) -> str:
    return "(" + ";".join(map(str, pos)) + ")"


class PlaySession:
    """One game over a sum.  ``humans`` is the set of player numbers (1
    moves first) controlled from the input stream."""

    def __init__(
        self,
        components: list[SumComponent],
        humans: set[int],
        instream: IO[str],
        outstream: IO[str],
        memo: Optional[MemoStore] = None,
    ):
        self.components = list(components)
        self.humans = humans
        self.instream = instream
        self.outstream = outstream
        self.memo = memo if memo is not None else MemoStore()

    def say(self, line: str) -> None:
        self.outstream.write(line + "\n")

    def ask(self, prompt: str) -> str:
        self.outstream.write(prompt)
        self.outstream.flush()
        line = self.instream.readline()
        if line == "":
            raise PlayAborted("input ended before the game did")
        return line.strip()

    def show_state(self) -> None:
        for i, comp in enumerate(self.components, start=1):
            self.say(f"  [{i}] {canonical_text(comp.expr)} @ {_fmt_pos(comp.position)}")

    def _movable(self) -> list[int]:
        return [
            i
            for i, comp in enumerate(self.components)
            if joint_options(comp.expr, comp.position)
        ]

    def _choose_component(self, player: int, movable: list[int]) -> int:
        if player not in self.humans:
            advice = best_move(self.components, self.memo)
            idx = advice.component if advice.component is not None else movable[0]
            self.say(f"player {player} announces component {idx + 1}")
            return idx
        labels = ", ".join(str(i + 1) for i in movable)
        while True:
            answer = self.ask(f"player {player}, announce a component [{labels}]: ")
            if answer.isdigit() and int(answer) - 1 in movable:
                return int(answer) - 1
            self.say(f"illegal choice; pick one of: {labels}")

    def _choose_enforcement(self, enforcer: int, comp_index: int) -> int:
        comp = self.components[comp_index]
        children = comp.expr.children
        names = [canonical_text(c) for c in children]
        if enforcer not in self.humans:
            advice = best_enforcement(self.components, comp_index, self.memo)
            self.say(f"player {enforcer} enforces {names[advice.child_index]}")
            return advice.child_index
        labels = ", ".join(f"{i + 1}={n}" for i, n in enumerate(names))
        while True:
            answer = self.ask(f"player {enforcer}, enforce one of [{labels}]: ")
            if answer.isdigit() and 1 <= int(answer) <= len(children):
                return int(answer) - 1
            if answer in names:
                return names.index(answer)
            self.say(f"illegal choice; pick one of: {labels}")

    def _choose_target(
        self, player: int, comp_index: int, legal: list[Position], enforced: Optional[str]
    ) -> Position:
        comp = self.components[comp_index]
        under = f" under {enforced}" if enforced else ""
        if player not in self.humans:
            advice = best_move(self.components, self.memo)
            target = None
            if advice.component == comp_index:
                if advice.target is not None and advice.target in legal:
                    target = advice.target
                elif advice.replies and enforced in advice.replies:
                    target = advice.replies[enforced]
            if target is None or target not in legal:
                target = sorted(legal, key=position_order)[0]
            self.say(
                f"player {player} moves component {comp_index + 1}{under} "
                f"to {_fmt_pos(target)}"
            )
            return target
        shown = " ".join(_fmt_pos(q) for q in sorted(legal, key=position_order))
        while True:
            answer = self.ask(
                f"player {player}, move component {comp_index + 1}{under} to: "
            )
            try:
                target = tuple(int(v) for v in answer.strip("() ").split(";"))
            except ValueError:
                target = None
            if target in legal:
                return target
            self.say(f"illegal target; legal moves: {shown}")

    def run(self) -> PlayResult:
        result = PlayResult(winner=0)
        player = 1
        ply = 0
        self.say("sum: " + ", ".join(
            f"{canonical_text(c.expr)}@{_fmt_pos(c.position)}" for c in self.components
        ))
        while True:
            movable = self._movable()
            if not movable:
                result.winner = 3 - player
                self.say(f"player {player} cannot move; player {result.winner} wins")
                return result
            self.show_state()
            comp_index = self._choose_component(player, movable)
            comp = self.components[comp_index]
            enforced_name: Optional[str] = None
            if isinstance(comp.expr, Enforce):
                child_index = self._choose_enforcement(3 - player, comp_index)
                child = comp.expr.children[child_index]
                enforced_name = canonical_text(child)
                legal = joint_options(child, comp.position)
            else:
                legal = joint_options(comp.expr, comp.position)
            if not legal:
                result.winner = 3 - player
                self.say(
                    f"player {player} has no move in component {comp_index + 1}"
                    f" under {enforced_name}; player {result.winner} wins"
                )
                return result
            target = self._choose_target(player, comp_index, legal, enforced_name)
            ply += 1
            result.plies.append(
                Ply(ply, player, comp_index, enforced_name, comp.position, target)
            )
            self.components[comp_index] = SumComponent(comp.expr, target)
            player = 3 - player


def run_play(
    components: list[SumComponent],
    humans: set[int],
    instream: IO[str],
    outstream: IO[str],
    memo: Optional[MemoStore] = None,
) -> PlayResult:
    return PlaySession(components, humans, instream, outstream, memo).run()
