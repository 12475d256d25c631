"""Builtin ruleset catalog and the subtraction-spec config format.

The catalog covers the chess-piece style rulesets on two coordinates, three
one-heap subtraction rulesets, and two coordinated-subtraction rulesets that
are defined through the same config grammar users can load from files.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .engine import Position, Ruleset, coordinate_sum, validate_position


# ---------------------------------------------------------------------------
# builtin move functions

def _nim_moves(pos: Position) -> set[Position]:
    x, y = pos
    opts = {(i, y) for i in range(x)}
    opts.update((x, j) for j in range(y))
    return opts


def _bishop_moves(pos: Position) -> set[Position]:
    x, y = pos
    return {(x - i, y - i) for i in range(1, min(x, y) + 1)}


def _wythoff_moves(pos: Position) -> set[Position]:
    return _nim_moves(pos) | _bishop_moves(pos)


def _yama_moves(pos: Position) -> set[Position]:
    # lowering one coordinate by at least two raises the other by one
    x, y = pos
    opts = {(x - i, y + 1) for i in range(2, x + 1)}
    opts.update((x + 1, y - i) for i in range(2, y + 1))
    return opts


_KNIGHT_STEPS = ((-2, 1), (-2, -1), (-1, -2), (1, -2))


def _knight_moves(pos: Position) -> set[Position]:
    x, y = pos
    return {
        (x + dx, y + dy)
        for dx, dy in _KNIGHT_STEPS
        if x + dx >= 0 and y + dy >= 0
    }


def _sub_one_moves(pos: Position) -> set[Position]:
    (x,) = pos
    return {(x - 1,)} if x else set()


def _sub_odd_moves(pos: Position) -> set[Position]:
    (x,) = pos
    return {(x - k,) for k in range(1, x + 1, 2)}


def _sub_even_moves(pos: Position) -> set[Position]:
    (x,) = pos
    return {(x - k,) for k in range(2, x + 1, 2)}


def identity_ruleset(dimension: int = 2, terminal: Optional[Position] = None) -> Ruleset:
    """The ruleset ``e``: every position moves only to one designated
    terminal (default the origin), which itself has no moves.  Enforcing it
    changes nothing; selecting it lets the mover end the game at will."""
    term = tuple(terminal) if terminal is not None else (0,) * dimension
    validate_position(term, dimension)

    def moves(pos: Position) -> set[Position]:
        return set() if pos == term else {term}

    measure = coordinate_sum if term == (0,) * dimension else None
    key = f"e[{dimension}d@{';'.join(map(str, term))}]"
    return Ruleset("e", dimension, moves, measure=measure, key=key)


def absorbing_ruleset(dimension: int = 2) -> Ruleset:
    """The ruleset ``o`` with no moves anywhere: enforcing it wins on the
    spot, selecting it adds nothing."""
    return Ruleset(
        "o", dimension, lambda pos: set(), measure=coordinate_sum, key=f"o[{dimension}d]"
    )


def nim_heaps(dimension: int) -> Ruleset:
    """Nim on ``dimension`` independent heaps: lower any one coordinate."""
    if dimension < 1:
        raise ValueError("dimension must be at least 1")

    def moves(pos: Position) -> set[Position]:
        out = set()
        for i, c in enumerate(pos):
            out.update(pos[:i] + (v,) + pos[i + 1:] for v in range(c))
        return out

    return Ruleset(f"nim{dimension}", dimension, moves, measure=coordinate_sum)


def ruleset_sum(a: Ruleset, b: Ruleset) -> Ruleset:
    """The disjunctive sum of two rulesets packaged as a single ruleset on
    the concatenated coordinates: move in one half, leave the other alone."""
    d = a.dimension + b.dimension

    def moves(pos: Position) -> set[Position]:
        left, right = pos[: a.dimension], pos[a.dimension:]
        out = {q + right for q in a.moves(left)}
        out.update(left + q for q in b.moves(right))
        return out

    measure = (
        coordinate_sum
        if a.measure is coordinate_sum and b.measure is coordinate_sum
        else None
    )
    return Ruleset(
        f"{a.name}+{b.name}", d, moves, measure=measure, key=f"sum({a.key},{b.key})"
    )


# ---------------------------------------------------------------------------
# subtraction-spec config format
#
# One ruleset per block:
#
#     ruleset NAME
#     dimension D
#     deltas (-1,0) (-2,0)
#     when +,0 deltas (-1,0)
#     witness dag
#
# ``deltas`` lines apply everywhere; ``when GUARD deltas`` lines apply only
# where the guard matches.  A guard gives one symbol per coordinate: ``0``
# (coordinate is zero), ``+`` (positive), ``*`` (anything).  A move is the
# position plus a delta and is legal only if no coordinate goes negative.
# ``witness dag`` opts out of the default decreasing-sum measure; it is
# required whenever some delta does not lower the coordinate sum.

_NAME_RE = re.compile(r"^[a-z][a-z0-9-]*$")
_VECTOR_RE = re.compile(r"\((-?\d+(?:,-?\d+)*)\)")


class ConfigError(ValueError):
    """A ruleset config file failed to parse or validate."""


@dataclass(frozen=True)
class Branch:
    guard: tuple[str, ...]
    deltas: tuple[tuple[int, ...], ...]

    def matches(self, pos: Position) -> bool:
        return all(
            g == "*" or (c == 0 if g == "0" else c > 0)
            for g, c in zip(self.guard, pos)
        )


@dataclass(frozen=True)
class SubtractionSpec:
    name: str
    dimension: int
    branches: tuple[Branch, ...]
    witness: str = "measure"


def _parse_deltas(segment: str, lineno: int) -> tuple[tuple[int, ...], ...]:
    compact = segment.replace(" ", "")
    if not compact:
        raise ConfigError(f"line {lineno}: expected at least one delta vector")
    vectors = []
    pos = 0
    for m in _VECTOR_RE.finditer(compact):
        if m.start() != pos:
            raise ConfigError(
                f"line {lineno}: malformed delta list near {compact[pos:]!r}"
            )
        vectors.append(tuple(int(v) for v in m.group(1).split(",")))
        pos = m.end()
    if pos != len(compact):
        raise ConfigError(f"line {lineno}: malformed delta list near {compact[pos:]!r}")
    return tuple(vectors)


def parse_rulesets(text: str) -> dict[str, SubtractionSpec]:
    """Parse config text into specs, keyed by name in file order."""
    specs: dict[str, SubtractionSpec] = {}
    name: Optional[str] = None
    dimension: Optional[int] = None
    branches: list[tuple[int, Optional[str], tuple[tuple[int, ...], ...]]] = []
    witness = "measure"
    start_line = 0

    def flush(lineno: int) -> None:
        nonlocal name, dimension, branches, witness
        if name is None:
            return
        if dimension is None:
            raise ConfigError(f"line {start_line}: ruleset {name!r} has no dimension")
        built: list[Branch] = []
        for bl, guard_txt, deltas in branches:
            if guard_txt is None:
                guard = ("*",) * dimension
            else:
                guard = tuple(guard_txt.split(","))
                if len(guard) != dimension or any(g not in ("*", "0", "+") for g in guard):
                    raise ConfigError(
                        f"line {bl}: guard {guard_txt!r} must give one of */0/+ "
                        f"for each of {dimension} coordinates"
                    )
            for d in deltas:
                if len(d) != dimension:
                    raise ConfigError(
                        f"line {bl}: delta {d} has {len(d)} coordinates, expected {dimension}"
                    )
                if witness == "measure" and sum(d) >= 0:
                    raise ConfigError(
                        f"line {bl}: delta {d} does not lower the coordinate sum; "
                        "declare 'witness dag' to allow it"
                    )
            built.append(Branch(guard, tuple(sorted(set(deltas)))))
        specs[name] = SubtractionSpec(name, dimension, tuple(built), witness)
        name, dimension, branches, witness = None, None, [], "measure"

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        head, rest = parts[0], (parts[1] if len(parts) > 1 else "")
        if head == "ruleset":
            flush(lineno)
            if not _NAME_RE.match(rest):
                raise ConfigError(
                    f"line {lineno}: ruleset name must match [a-z][a-z0-9-]*, got {rest!r}"
                )
            if rest in specs:
                raise ConfigError(f"line {lineno}: duplicate ruleset name {rest!r}")
            name, start_line = rest, lineno
        elif name is None:
            raise ConfigError(f"line {lineno}: expected 'ruleset NAME' before {head!r}")
        elif head == "dimension":
            if not rest.isdigit() or int(rest) < 1:
                raise ConfigError(f"line {lineno}: dimension must be a positive integer")
            dimension = int(rest)
        elif head == "deltas":
            branches.append((lineno, None, _parse_deltas(rest, lineno)))
        elif head == "when":
            sub = rest.split(None, 1)
            if len(sub) != 2 or not sub[1].startswith("deltas"):
                raise ConfigError(f"line {lineno}: expected 'when GUARD deltas ...'")
            branches.append(
                (lineno, sub[0], _parse_deltas(sub[1][len("deltas"):], lineno))
            )
        elif head == "witness":
            if rest not in ("measure", "dag"):
                raise ConfigError(f"line {lineno}: witness must be 'measure' or 'dag'")
            witness = rest
        else:
            raise ConfigError(f"line {lineno}: unknown directive {head!r}")
    flush(-1)
    return specs


def serialize_rulesets(specs: Iterable[SubtractionSpec]) -> str:
    """Canonical text for specs; parse(serialize(parse(t))) == parse(t)."""
    blocks = []
    for spec in specs:
        lines = [f"ruleset {spec.name}", f"dimension {spec.dimension}"]
        for br in spec.branches:
            vecs = " ".join("(" + ",".join(map(str, d)) + ")" for d in br.deltas)
            if all(g == "*" for g in br.guard):
                lines.append(f"deltas {vecs}")
            else:
                lines.append(f"when {','.join(br.guard)} deltas {vecs}")
        if spec.witness != "measure":
            lines.append(f"witness {spec.witness}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def make_from_spec(spec: SubtractionSpec) -> Ruleset:
    """Build the ruleset a spec describes; its cache key includes a digest
    of the spec so same-named but different specs never share caches."""

    def moves(pos: Position) -> set[Position]:
        out = set()
        for br in spec.branches:
            if not br.matches(pos):
                continue
            for d in br.deltas:
                q = tuple(c + dc for c, dc in zip(pos, d))
                if all(c >= 0 for c in q):
                    out.add(q)
        return out

    digest = hashlib.sha1(serialize_rulesets([spec]).encode()).hexdigest()[:10]
    measure = coordinate_sum if spec.witness == "measure" else None
    return Ruleset(
        spec.name, spec.dimension, moves, measure=measure, key=f"{spec.name}#{digest}"
    )


def load_ruleset_file(path: str) -> dict[str, Ruleset]:
    """Load config rulesets from a file; names may not shadow builtins."""
    with open(path, "r", encoding="utf-8") as fh:
        specs = parse_rulesets(fh.read())
    out = {}
    for spec_name, spec in specs.items():
        if spec_name in CATALOG or spec_name in ("e", "o"):
            raise ConfigError(f"ruleset name {spec_name!r} shadows a builtin")
        out[spec_name] = make_from_spec(spec)
    return out


# ---------------------------------------------------------------------------
# catalog

_CATALOG_SPEC_TEXT = """\
ruleset pair-sub-12
dimension 2
deltas (-1,0) (-2,0) (0,-1) (0,-2)

ruleset cc-sub-12
dimension 2
when +,+ deltas (-1,-1) (-1,-2) (-2,-1) (-2,-2)
when +,0 deltas (-1,0) (-2,0)
when 0,+ deltas (0,-1) (0,-2)
"""


def _build_catalog() -> dict[str, Ruleset]:
    cat = {
        "nim": Ruleset("nim", 2, _nim_moves, measure=coordinate_sum),
        "bishop": Ruleset("bishop", 2, _bishop_moves, measure=coordinate_sum),
        "wythoff": Ruleset("wythoff", 2, _wythoff_moves, measure=coordinate_sum),
        "yama": Ruleset("yama", 2, _yama_moves, measure=coordinate_sum),
        "knight": Ruleset("knight", 2, _knight_moves, measure=coordinate_sum),
        "sub-one": Ruleset("sub-one", 1, _sub_one_moves, measure=coordinate_sum),
        "sub-odd": Ruleset("sub-odd", 1, _sub_odd_moves, measure=coordinate_sum),
        "sub-even": Ruleset("sub-even", 1, _sub_even_moves, measure=coordinate_sum),
    }
    for spec_name, spec in parse_rulesets(_CATALOG_SPEC_TEXT).items():
        cat[spec_name] = make_from_spec(spec)
    return cat


CATALOG: dict[str, Ruleset] = _build_catalog()

#: Atom names usable in expressions; ``e`` and ``o`` adapt their dimension
#: to the other atoms in the expression.
BUILTIN_NAMES: tuple[str, ...] = tuple(sorted(CATALOG)) + ("e", "o")


def make_builtin(
    name: str, dimension: Optional[int] = None, terminal: Optional[Position] = None
) -> Ruleset:
    """Look up a catalog ruleset, or build ``e``/``o`` at the wanted
    dimension (default 2)."""
    if name == "e":
        return identity_ruleset(dimension or 2, terminal)
    if name == "o":
        return absorbing_ruleset(dimension or 2)
    if name not in CATALOG:
        raise ValueError(
            f"unknown ruleset {name!r}; builtins are: {', '.join(BUILTIN_NAMES)}"
        )
    rs = CATALOG[name]
    if dimension is not None and dimension != rs.dimension:
        raise ValueError(
            f"ruleset {name!r} has dimension {rs.dimension}, not {dimension}"
        )
    return rs
