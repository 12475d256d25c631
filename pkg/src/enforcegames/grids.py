"""Board-region grids: outcome and nimber tables as text, and as figures.

Orientation is fixed everywhere: columns are x = 0..width-1 left to right,
rows are y = 0..height-1 top to bottom, so the origin is the top-left
cell.  CSV output is exactly the cell values, one row per line, with no
header; JSON wraps the same rows with the request metadata.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .engine import DEFAULT_NODE_BUDGET, MemoStore, Outcome
from .exprs import Expr, canonical_text, dimension
from .analysis import analysis_value

ANALYSES = ("outcome", "grundy", "enforce-grundy")
FORMATS = ("ascii", "csv", "json")


@dataclass(frozen=True)
class GridRequest:
    expr: Expr
    analysis: str
    width: int
    height: int
    fmt: str = "csv"

    def __post_init__(self):
        if self.analysis not in ANALYSES:
            raise ValueError(
                f"analysis must be one of {', '.join(ANALYSES)}, got {self.analysis!r}"
            )
        if self.fmt not in FORMATS:
            raise ValueError(
                f"format must be one of {', '.join(FORMATS)}, got {self.fmt!r}"
            )
        if self.width < 1 or self.height < 1:
            raise ValueError("grid width and height must be positive")
        dim = dimension(self.expr)
        if dim == 1:
            if self.height != 1:
                raise ValueError(
                    "one-coordinate rulesets take a single row; use HEIGHT 1"
                )
        elif dim != 2:
            raise ValueError(f"grids need 1- or 2-coordinate rulesets, got {dim}")


def grid_values(
    request: GridRequest,
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> list[list]:
    """Cell values row-major: value[y][x] for position (x, y) (or (x,) when
    the ruleset is one-dimensional)."""
    if memo is None:
        memo = MemoStore()
    dim = dimension(request.expr)
    rows = []
    for y in range(request.height):
        row = []
        for x in range(request.width):
            pos = (x,) if dim == 1 else (x, y)
            row.append(
                analysis_value(
                    request.analysis, request.expr, pos, memo, node_budget=node_budget
                )
            )
        rows.append(row)
    return rows


def _cell_text(value) -> str:
    return value.value if isinstance(value, Outcome) else str(value)


def render_grid(request: GridRequest, values: list[list]) -> str:
    if request.fmt == "csv":
        return "".join(
            ",".join(_cell_text(v) for v in row) + "\n" for row in values
        )
    if request.fmt == "json":
        payload = {
            "expr": canonical_text(request.expr),
            "analysis": request.analysis,
            "width": request.width,
            "height": request.height,
            "values": [
                [v.value if isinstance(v, Outcome) else v for v in row]
                for row in values
            ],
        }
        return json.dumps(payload) + "\n"
    # ascii: labelled axes, origin top-left
    cells = [[_cell_text(v) for v in row] for row in values]
    w = max(
        max(len(s) for row in cells for s in row),
        len(str(request.width - 1)),
    )
    ylab = max(len(str(request.height - 1)), 1)
    lines = [
        " " * (ylab + 3)
        + " ".join(f"{x:>{w}}" for x in range(request.width))
        + "   x"
    ]
    for y, row in enumerate(cells):
        lines.append(f"{y:>{ylab}} | " + " ".join(f"{s:>{w}}" for s in row))
    lines.append("y")
    return "\n".join(lines) + "\n"


def emit_grid(
    request: GridRequest,
    memo: Optional[MemoStore] = None,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> str:
    """Evaluate the requested region and render it in the requested format."""
    return render_grid(
        request, grid_values(request, memo, node_budget=node_budget)
    )


def save_grid_figure(
    request: GridRequest,
    path: str,
    memo: Optional[MemoStore] = None,
    *,
    values: Optional[list[list]] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> None:
    """Render the grid as an annotated heatmap image.

    Outcome grids use two colors; nimber grids use a discrete colormap over
    the value range.  The file type follows the path suffix.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if values is None:
        values = grid_values(request, memo, node_budget=node_budget)
    if isinstance(values[0][0], Outcome):
        numeric = [[0 if v is Outcome.P else 1 for v in row] for row in values]
        vmax = 1
        cmap = plt.get_cmap("RdYlGn_r", 2)
    else:
        numeric = values
        vmax = max(max(row) for row in values)
        cmap = plt.get_cmap("viridis", vmax + 1)

    fig, ax = plt.subplots(
        figsize=(max(3.0, 0.5 * request.width), max(3.0, 0.5 * request.height))
    )
    im = ax.imshow(
        numeric, origin="upper", cmap=cmap, vmin=-0.5, vmax=vmax + 0.5
    )
    for y, row in enumerate(values):
        for x, v in enumerate(row):
            shade = numeric[y][x] / (vmax if vmax else 1)
            ax.text(
                x,
                y,
                _cell_text(v),
                ha="center",
                va="center",
                fontsize=9,
                color="white" if shade > 0.55 else "black",
            )
    ax.set_xticks(range(request.width))
    ax.set_yticks(range(request.height))
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"{request.analysis} of {canonical_text(request.expr)}")
    if not isinstance(values[0][0], Outcome):
        fig.colorbar(im, ax=ax, ticks=range(vmax + 1), shrink=0.8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_domination_figure(
    a: Expr,
    b: Expr,
    region_size: int,
    path: str,
    memo: Optional[MemoStore] = None,
) -> None:
    """Outcome map of the enforce combination with mismatch marks: ``x``
    where it differs from the first ruleset alone, ``o`` where it differs
    from the second."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .exprs import enforce, outcome

    if memo is None:
        memo = MemoStore()
    if dimension(a) != 2:
        raise ValueError("domination figures need 2-coordinate rulesets")
    combined = enforce(a, b)
    n = region_size
    numeric = [[0] * n for _ in range(n)]
    marks_a, marks_b = [], []
    for y in range(n):
        for x in range(n):
            oc = outcome(combined, (x, y), memo)
            numeric[y][x] = 0 if oc is Outcome.P else 1
            if oc is not outcome(a, (x, y), memo):
                marks_a.append((x, y))
            if oc is not outcome(b, (x, y), memo):
                marks_b.append((x, y))

    fig, ax = plt.subplots(figsize=(max(3.0, 0.5 * n),) * 2)
    ax.imshow(
        numeric,
        origin="upper",
        cmap=plt.get_cmap("RdYlGn_r", 2),
        vmin=-0.5,
        vmax=1.5,
    )
    if marks_a:
        ax.scatter(*zip(*marks_a), marker="x", s=90, c="black", label=f"differs from {canonical_text(a)}")
    if marks_b:
        ax.scatter(*zip(*marks_b), marker="o", s=90, facecolors="none", edgecolors="blue", label=f"differs from {canonical_text(b)}")
    ax.set_xticks(range(n))
    ax.set_yticks(range(n))
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"outcomes of {canonical_text(combined)}")
    if marks_a or marks_b:
        ax.legend(loc="upper right", fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
