"""The acceptance gate: one test per numbered criterion.

Every test carries ``@pytest.mark.criterion(n, title)``; the conftest hook
prints one PASS/FAIL line per criterion after the run.  Frozen values and
regions are stated inline; nothing here is tuned to make a red bar green.
"""
import itertools
import math
import random
import time

import pytest

from conftest import read_fixture, record_note

from enforcegames import (
    CATALOG,
    LAW_ARITY,
    LAW_NAMES,
    GridRequest,
    MemoStore,
    Outcome,
    best_move,
    box,
    check_law,
    classify_domination,
    emit_grid,
    enforce,
    enforce_grundy,
    grundy,
    joint_options,
    make_sum,
    outcome,
    parse_expr,
    property1,
    reachable_closure,
    sum_outcome,
    sum_outcome_oracle,
    SAMPLE_COMPONENT_EXPRESSIONS,
)

SEED = 20260815


@pytest.mark.criterion(
    1, "three subtraction rulesets and their enforce pairs: frozen outcome rows"
)
def test_subtraction_outcome_table():
    memo = MemoStore()
    started = time.perf_counter()

    def row(text):
        expr = parse_expr(text)
        return "".join(outcome(expr, (x,), memo).value for x in range(11))

    assert row("sub-one") == "PNPNPNPNPNP"
    assert row("sub-odd") == "PNPNPNPNPNP"
    assert row("sub-even") == "PPNNNNNNNNN"
    assert row("sub-odd.sub-one") == "PNPNPNPNPNP"
    assert row("sub-one.sub-even") == "PPNPNPNPNPN"
    assert row("sub-odd.sub-even") == "PPNNNNNNNNN"
    assert time.perf_counter() - started < 1.0


@pytest.mark.criterion(2, "twelve frozen nimber grids reproduce byte for byte")
def test_frozen_grid_fixtures():
    grids = [
        ("nim", "grundy", 6),
        ("bishop", "grundy", 6),
        ("knight", "grundy", 6),
        ("wythoff", "grundy", 6),
        ("yama", "grundy", 6),
        ("bishop.nim", "enforce-grundy", 6),
        ("knight.nim", "enforce-grundy", 6),
        ("bishop.knight", "enforce-grundy", 6),
        ("wythoff.yama", "enforce-grundy", 6),
        ("pair-sub-12", "grundy", 11),
        ("cc-sub-12", "grundy", 11),
        ("cc-sub-12.pair-sub-12", "enforce-grundy", 11),
    ]
    assert len(grids) == 12
    memo = MemoStore()
    started = time.perf_counter()
    for text, analysis, n in grids:
        request = GridRequest(parse_expr(text), analysis, n, n, "csv")
        produced = emit_grid(request, memo)
        assert produced == read_fixture(f"{analysis}_{text}_{n}x{n}.csv"), text
    assert time.perf_counter() - started < 5.0


@pytest.mark.criterion(
    3, "enforce values of wythoff.yama coincide with yama's nimbers"
)
def test_enforced_wythoff_keeps_yama_nimbers():
    memo = MemoStore()
    combined = parse_expr("wythoff.yama")
    yama = parse_expr("yama")
    for pos in box(2, 6):
        assert enforce_grundy(combined, pos, memo) == grundy(yama, pos, memo), pos
    # wider sweep is reported, not asserted: no theorem covers it
    mismatches = [
        pos
        for pos in box(2, 31)
        if enforce_grundy(combined, pos, memo) != grundy(yama, pos, memo)
    ]
    if mismatches:
        record_note(
            3,
            f"[0,30]^2 extension: {961 - len(mismatches)}/961 agree, "
            f"first mismatch at {mismatches[0]}",
        )
    else:
        record_note(3, "[0,30]^2 extension: 961/961 positions agree")


@pytest.mark.criterion(4, "worked sum puzzles: exact verdicts and reply tables")
def test_worked_sum_puzzles():
    memo = MemoStore()
    opening = make_sum(
        [(parse_expr("bishop.nim"), (4, 3)), (parse_expr("knight.nim"), (3, 5))]
    )
    advice = best_move(opening, memo)
    assert advice.outcome is Outcome.N
    assert advice.values == (3, 0)
    assert advice.component == 0
    assert advice.replies == {"bishop": (1, 0), "nim": (0, 3)}

    quiet = make_sum(
        [(parse_expr("nim"), (4, 5)), (parse_expr("bishop.knight"), (5, 4))]
    )
    verdict = best_move(quiet, memo)
    assert verdict.outcome is Outcome.P
    assert verdict.values == (1, 1)
    assert verdict.component is None


@pytest.mark.criterion(
    5, "one-move recovery matches outcome comparison on all 20 ruleset pairs"
)
def test_recovery_criterion_equals_outcome_comparison():
    memo = MemoStore()
    names = ["nim", "bishop", "wythoff", "yama", "knight"]
    pairs = [(a, b) for a in names for b in names if a != b]
    assert len(pairs) == 20
    for a_name, b_name in pairs:
        a, b = parse_expr(a_name), parse_expr(b_name)
        combined = enforce(a, b)
        closure = sorted(reachable_closure(combined, box(2, 9)))
        holds, _ = property1(a, b, closure, memo)
        direct = all(
            outcome(combined, pos, memo) == outcome(a, pos, memo)
            for pos in closure
        )
        assert holds == direct, (a_name, b_name)


@pytest.mark.criterion(6, "enforce-value structure theorems across the catalog")
def test_enforce_value_theorem_suite():
    memo = MemoStore()
    two_dim = sorted(n for n in CATALOG if CATALOG[n].dimension == 2)
    one_dim = sorted(n for n in CATALOG if CATALOG[n].dimension == 1)
    assert len(two_dim) == 7 and len(one_dim) == 3

    cases = [
        (pair, box(2, 18)) for pair in itertools.combinations(two_dim, 2)
    ] + [
        (pair, [(x,) for x in range(401)])
        for pair in itertools.combinations(one_dim, 2)
    ]
    fewest = None
    for (a_name, b_name), region in cases:
        combined = enforce(parse_expr(a_name), parse_expr(b_name))
        checks = 0
        for pos in region:
            value = enforce_grundy(combined, pos, memo)
            option_values = [
                {enforce_grundy(combined, q, memo) for q in joint_options(c, pos)}
                for c in combined.children
            ]
            if any(not joint_options(c, pos) for c in combined.children):
                # a stuck part pins the value at zero
                assert value == 0, (a_name, b_name, pos)
                checks += 1
            # zero exactly at previous-player wins
            assert (value == 0) == (
                outcome(combined, pos, memo) is Outcome.P
            ), (a_name, b_name, pos)
            checks += 1
            # some part has no option keeping the same value
            assert any(value not in seen for seen in option_values), (
                a_name,
                b_name,
                pos,
            )
            checks += 1
            # every part reaches every smaller value
            for seen in option_values:
                for smaller in range(value):
                    assert smaller in seen, (a_name, b_name, pos, smaller)
                    checks += 1
        if fewest is None or checks < fewest[0]:
            fewest = (checks, a_name, b_name)
        assert checks >= 1000, (a_name, b_name, checks)
    record_note(
        6,
        f"{len(cases)} pairs; fewest checks {fewest[0]} "
        f"({fewest[1]} with {fewest[2]})",
    )


@pytest.mark.criterion(7, "10,000 random sums agree with the direct search oracle")
def test_random_sums_against_the_oracle():
    memo = MemoStore()
    rng = random.Random(SEED)
    exprs = {text: parse_expr(text) for text in SAMPLE_COMPONENT_EXPRESSIONS}
    started = time.perf_counter()
    for _ in range(10_000):
        components = make_sum(
            [
                (
                    exprs[rng.choice(SAMPLE_COMPONENT_EXPRESSIONS)],
                    (rng.randrange(5), rng.randrange(5)),
                )
                for _ in range(2)
            ]
        )
        assert sum_outcome(components, memo) == sum_outcome_oracle(
            components, memo
        ), components
    assert time.perf_counter() - started < 60.0


@pytest.mark.criterion(8, "all eight algebraic laws hold on seeded operand samples")
def test_algebraic_laws_on_sampled_operands():
    memo = MemoStore()
    rng = random.Random(SEED)
    pool = sorted(n for n in CATALOG if CATALOG[n].dimension == 2) + ["e", "o"]
    reports = 0
    for law in LAW_NAMES:
        for _ in range(10):
            operands = [
                parse_expr(rng.choice(pool)) for _ in range(LAW_ARITY[law])
            ]
            report = check_law(law, operands, 9, memo)
            assert report.holds, (law, report.operands, report.counterexample)
            assert report.positions_checked == 81
            reports += 1
    assert reports == 80


@pytest.mark.criterion(9, "domination is not transitive on the subtraction triple")
def test_domination_non_transitivity():
    memo = MemoStore()
    even, odd, one = (
        parse_expr("sub-even"),
        parse_expr("sub-odd"),
        parse_expr("sub-one"),
    )
    assert classify_domination(even, odd, 13, memo).relation == "dominates"
    assert classify_domination(odd, one, 13, memo).relation == "similar"
    report = classify_domination(even, one, 13, memo)
    assert report.relation == "confused"
    assert report.counterexample_a_over_b == (3,)
    # the reason, replayed from the raw rules: the single-step ruleset only
    # reaches 2 from 3, and both 3 and 2 are next-player wins for the
    # even-subtraction ruleset, so no recovering reply exists
    assert CATALOG["sub-one"].options((3,)) == [(2,)]
    assert outcome(even, (3,), memo) is Outcome.N
    assert outcome(even, (2,), memo) is Outcome.N
    holds, witness = property1(even, one, [(x,) for x in range(14)], memo)
    assert not holds and witness == (3,)


@pytest.mark.criterion(
    10, "recursive outcomes match closed forms for the four classic rulesets"
)
def test_closed_form_outcomes():
    memo = MemoStore()
    phi = (1 + math.sqrt(5)) / 2
    cold_pairs = set()
    for n in range(22):
        cold_pairs.add((math.floor(n * phi), math.floor(n * phi) + n))
        cold_pairs.add((math.floor(n * phi) + n, math.floor(n * phi)))

    forms = {
        "nim": lambda x, y: x == y,
        "bishop": lambda x, y: min(x, y) == 0,
        "yama": lambda x, y: abs(x - y) <= 1,
        "wythoff": lambda x, y: (x, y) in cold_pairs,
    }
    cells = 0
    for name, is_cold in forms.items():
        expr = parse_expr(name)
        for (x, y) in box(2, 21):
            expected = Outcome.P if is_cold(x, y) else Outcome.N
            assert outcome(expr, (x, y), memo) is expected, (name, x, y)
            cells += 1
    assert cells == 1764
