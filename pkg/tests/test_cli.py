"""End-to-end command line checks (subprocess level)."""
import json
import subprocess
import sys

import pytest

from conftest import read_fixture

PKG = [sys.executable, "-m", "enforcegames"]


def run_cli(*args, stdin=""):
    return subprocess.run(
        PKG + list(args),
        input=stdin,
        capture_output=True,
        text=True,
        timeout=120,
    )


def test_grid_csv_matches_a_frozen_fixture():
    proc = run_cli(
        "grid", "--expr", "bishop.nim", "--analysis", "enforce-grundy",
        "--size", "6x6", "--format", "csv",
    )
    assert proc.returncode == 0
    assert proc.stdout == read_fixture("enforce-grundy_bishop.nim_6x6.csv")


def test_grid_out_file_and_figure(tmp_path):
    out = tmp_path / "grid.csv"
    fig = tmp_path / "grid.png"
    proc = run_cli(
        "grid", "--expr", "wythoff", "--analysis", "grundy",
        "--size", "6x6", "--format", "csv",
        "--out", str(out), "--figure", str(fig),
    )
    assert proc.returncode == 0
    assert proc.stdout == ""
    assert out.read_text().splitlines()[0] == "0,1,2,3,4,5"
    assert fig.stat().st_size > 1000


def test_grid_json_is_structured(tmp_path):
    proc = run_cli(
        "grid", "--expr", "nim", "--analysis", "outcome",
        "--size", "2x2", "--format", "json",
    )
    payload = json.loads(proc.stdout)
    assert payload["expr"] == "nim"
    assert payload["analysis"] == "outcome"
    assert payload["values"] == [["P", "N"], ["N", "P"]]


def test_grid_downgrades_enforce_analysis_on_plain_expressions():
    proc = run_cli(
        "grid", "--expr", "nim", "--analysis", "enforce-grundy",
        "--size", "3x3", "--format", "csv",
    )
    assert proc.returncode == 0
    assert "no enforce at the root; computing grundy" in proc.stderr
    assert proc.stdout == "0,1,2\n1,0,3\n2,3,0\n"


def test_grid_one_coordinate_default_height():
    proc = run_cli("grid", "--expr", "sub-even", "--analysis", "grundy",
                   "--format", "csv")
    assert proc.returncode == 0
    assert proc.stdout == "0,0,1,1,2,2,3,3,4,4,5\n"


def test_dominate_text_report_and_exit_zero():
    proc = run_cli("dominate", "--a", "bishop", "--b", "nim", "--region", "9")
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    assert lines[0] == "a: bishop"
    assert lines[1] == "b: nim"
    assert lines[2] == "relation: dominates"
    assert lines[3] == "region: box[9]^2 closed under joint moves (81 positions)"
    assert lines[4] == (
        "b over a fails: combined outcome differs at (0, 1); "
        "no one-move recovery at (0, 1)"
    )


def test_dominate_confused_pair_exits_one_and_explains_both_ways():
    proc = run_cli(
        "dominate", "--a", "yama", "--b", "bishop",
        "--region", "9", "--nimbers",
    )
    assert proc.returncode == 1
    assert "relation: confused" in proc.stdout
    assert "a over b fails: combined outcome differs at (0, 2)" in proc.stdout
    assert "b over a fails: combined outcome differs at (1, 1)" in proc.stdout
    assert "nimbers differ first at (0, 2): 1 vs 0" in proc.stdout


def test_dominate_json_output():
    proc = run_cli(
        "dominate", "--a", "sub-odd", "--b", "sub-one", "--region", "13",
        "--format", "json",
    )
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["relation"] == "similar"
    assert payload["a"] == "sub-odd"


def test_dominate_figure_renders_the_mismatch_map(tmp_path):
    fig = tmp_path / "map.png"
    proc = run_cli(
        "dominate", "--a", "yama", "--b", "bishop", "--region", "9",
        "--figure", str(fig),
    )
    assert proc.returncode == 1
    assert fig.stat().st_size > 1000


def test_laws_with_explicit_operands():
    proc = run_cli(
        "laws", "--a", "nim", "--b", "bishop", "--c", "knight", "--region", "6"
    )
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    assert lines[-1] == "8 checks, 0 failures"
    assert all(" -> ok (" in line for line in lines[:-1])


def test_laws_with_seeded_sampling_is_reproducible():
    args = ["laws", "--law", "enforce-identity", "--seed", "7",
            "--samples", "3", "--region", "5"]
    first, second = run_cli(*args), run_cli(*args)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    assert first.stdout.splitlines()[-1] == "3 checks, 0 failures"


def test_laws_rejects_missing_operands():
    proc = run_cli("laws", "--law", "enforce-distributes-over-select",
                   "--a", "nim")
    assert proc.returncode == 2
    assert "needs 3 operand(s)" in proc.stderr


def test_solve_reply_table_text():
    proc = run_cli("solve", "--sum", "bishop.nim@4;3,knight.nim@3;5")
    assert proc.returncode == 0
    assert proc.stdout == (
        "values: bishop.nim@4;3=3, knight.nim@3;5=0\n"
        "verdict: N for the player to move\n"
        "advice: announce component 1; then against each enforcement: "
        "bishop -> 1;0; nim -> 0;3\n"
    )


def test_solve_plain_component_with_oracle():
    proc = run_cli("solve", "--sum", "nim@2;3", "--oracle")
    assert proc.returncode == 0
    assert "advice: announce component 1 and move to 2;2" in proc.stdout
    assert "oracle verdict: N" in proc.stdout


def test_solve_losing_sum_text_and_json():
    text = run_cli("solve", "--sum", "nim@4;5,bishop.knight@5;4")
    assert text.returncode == 0
    assert "verdict: P for the player to move" in text.stdout
    assert "advice: no winning move" in text.stdout
    as_json = run_cli(
        "solve", "--sum", "nim@4;5,bishop.knight@5;4",
        "--format", "json", "--oracle",
    )
    payload = json.loads(as_json.stdout)
    assert payload["outcome"] == "P"
    assert payload["values"] == [1, 1]
    assert payload["oracle"] == "P"
    assert payload["components"][1] == {
        "expr": "bishop.knight",
        "position": [5, 4],
    }


def test_play_scripted_session_and_clean_exit():
    proc = run_cli(
        "play", "--sum", "bishop.nim@1;0,knight.nim@2;3", "--human", "first",
        stdin="2\n2;2\nbishop\n",
    )
    assert proc.returncode == 0
    assert "player 1 wins" in proc.stdout


def test_play_engine_only_session():
    proc = run_cli(
        "play", "--sum", "bishop.nim@3;1,knight.nim@5;4", "--human", "none"
    )
    assert proc.returncode == 0
    assert "player 2 wins" in proc.stdout


def test_play_aborts_on_missing_input():
    proc = run_cli("play", "--sum", "nim@1;1", "--human", "first", stdin="")
    assert proc.returncode == 2
    assert "session aborted: input ended" in proc.stderr


def test_check_reports_a_shortness_certificate():
    proc = run_cli("check", "--expr", "bishop.nim +s yama")
    assert proc.returncode == 0
    assert proc.stdout == (
        "bishop.nim +s yama is short from (8, 8): witness=measure, "
        "113 positions, 2136 moves checked\n"
    )


def test_config_rulesets_are_usable_everywhere(tmp_path):
    cfg = tmp_path / "extra.rules"
    cfg.write_text(
        "ruleset take-two\n"
        "dimension 1\n"
        "deltas (-1) (-2)\n"
    )
    grid = run_cli(
        "grid", "--config", str(cfg), "--expr", "take-two",
        "--analysis", "grundy", "--size", "7x1", "--format", "csv",
    )
    assert grid.returncode == 0
    assert grid.stdout == "0,1,2,0,1,2,0\n"
    solve = run_cli(
        "solve", "--config", str(cfg), "--sum", "take-two@4,sub-one@1"
    )
    assert solve.returncode == 0
    assert "values: take-two@4=1, sub-one@1=1" in solve.stdout


@pytest.mark.parametrize(
    "args, fragment",
    [
        (["grid", "--expr", "bishop..nim"], "expected a ruleset name"),
        (["grid", "--expr", "nosuch"], "unknown ruleset"),
        (["grid", "--expr", "nim", "--size", "wide"], "bad size"),
        (["solve", "--sum", "nim@"], "bad position"),
        (["solve", "--sum", "nim4;3"], "bad sum component"),
        (["solve", "--sum", "nim@1;2;3"], "must have 2 nonnegative coordinates"),
        (["dominate", "--a", "nim", "--b", "sub-one"], "dimension"),
    ],
)
def test_usage_errors_exit_two(args, fragment):
    proc = run_cli(*args)
    assert proc.returncode == 2
    assert fragment in proc.stderr


def test_termination_guard_exits_three(tmp_path):
    cfg = tmp_path / "loop.rules"
    cfg.write_text(
        "ruleset seesaw\n"
        "dimension 1\n"
        "when + deltas (-1) (1)\n"
        "witness dag\n"
    )
    proc = run_cli(
        "grid", "--config", str(cfg), "--expr", "seesaw",
        "--analysis", "outcome", "--size", "4x1",
    )
    assert proc.returncode == 3
    assert "termination guard: cycle detected" in proc.stderr


def test_budget_guard_exits_three():
    proc = run_cli("check", "--expr", "bishop.nim +s yama", "--budget", "10")
    assert proc.returncode == 3
    assert "termination guard: node budget of 10 exhausted" in proc.stderr
