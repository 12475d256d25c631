"""Impartial rulesets combined with enforce and selective operators.

The enforce combination lets the opponent pick which ruleset the mover
must use for each move; the selective combination lets the mover pick.
This package computes outcomes, nimbers, and enforce values of such
combinations, classifies domination between rulesets, checks the
algebraic laws the operators satisfy, and solves sums of combined games
with concrete move advice.
"""
from .engine import (
    DEFAULT_NODE_BUDGET,
    MemoStore,
    Outcome,
    Position,
    Ruleset,
    ShortnessReport,
    TerminationError,
    box,
    check_short,
    coordinate_sum,
    position_order,
)
from .rulesets import (
    BUILTIN_NAMES,
    CATALOG,
    ConfigError,
    SubtractionSpec,
    absorbing_ruleset,
    identity_ruleset,
    load_ruleset_file,
    make_builtin,
    make_from_spec,
    nim_heaps,
    parse_rulesets,
    ruleset_sum,
    serialize_rulesets,
)
from .exprs import (
    Base,
    Enforce,
    Expr,
    ExprSyntaxError,
    Select,
    base,
    canonical_text,
    canonicalize,
    check_jointly_short,
    dimension,
    enforce,
    joint_options,
    leaves,
    outcome,
    parse_expr,
    reachable_closure,
    select,
)
from .analysis import (
    LAW_ARITY,
    LAW_NAMES,
    DominationReport,
    LawReport,
    NimberComparisonReport,
    StrongDominationReport,
    ThreeCycleReport,
    check_law,
    classify_domination,
    compare_nimbers,
    default_candidates,
    enforce_grundy,
    falsify_strong_domination,
    grundy,
    mex,
    nim_sum,
    property1,
    three_cycle_check,
)
from .solver import (
    SAMPLE_COMPONENT_EXPRESSIONS,
    EnforcementAdvice,
    MoveAdvice,
    SumComponent,
    best_enforcement,
    best_move,
    component_value,
    make_sum,
    sum_outcome,
    sum_outcome_oracle,
    sum_values,
)
from .grids import (
    ANALYSES,
    FORMATS,
    GridRequest,
    emit_grid,
    grid_values,
    render_grid,
    save_domination_figure,
    save_grid_figure,
)
from .play import PlayAborted, PlayResult, PlaySession, Ply, run_play

__version__ = "0.1.0"

__all__ = [
    "ANALYSES",
    "BUILTIN_NAMES",
    "CATALOG",
    "DEFAULT_NODE_BUDGET",
    "FORMATS",
    "LAW_ARITY",
    "LAW_NAMES",
    "SAMPLE_COMPONENT_EXPRESSIONS",
    "Base",
    "ConfigError",
    "DominationReport",
    "Enforce",
    "EnforcementAdvice",
    "Expr",
    "ExprSyntaxError",
    "GridRequest",
    "LawReport",
    "MemoStore",
    "MoveAdvice",
    "NimberComparisonReport",
    "Outcome",
    "PlayAborted",
    "PlayResult",
    "PlaySession",
    "Ply",
    "Position",
    "Ruleset",
    "Select",
    "ShortnessReport",
    "StrongDominationReport",
    "SubtractionSpec",
    "SumComponent",
    "TerminationError",
    "ThreeCycleReport",
    "absorbing_ruleset",
    "base",
    "best_enforcement",
    "best_move",
    "box",
    "canonical_text",
    "canonicalize",
    "check_jointly_short",
    "check_law",
    "check_short",
    "classify_domination",
    "compare_nimbers",
    "component_value",
    "coordinate_sum",
    "default_candidates",
    "dimension",
    "emit_grid",
    "enforce",
    "enforce_grundy",
    "falsify_strong_domination",
    "grid_values",
    "grundy",
    "identity_ruleset",
    "joint_options",
    "leaves",
    "load_ruleset_file",
    "make_builtin",
    "make_from_spec",
    "make_sum",
    "mex",
    "nim_heaps",
    "nim_sum",
    "outcome",
    "parse_expr",
    "parse_rulesets",
    "position_order",
    "property1",
    "reachable_closure",
    "render_grid",
    "ruleset_sum",
    "run_play",
    "save_domination_figure",
    "save_grid_figure",
    "select",
    "serialize_rulesets",
    "sum_outcome",
    "sum_outcome_oracle",
    "sum_values",
    "three_cycle_check",
]
