"""Publication-style table rendering with round-trip parsers.

Three layouts: group descriptives (mean and SD per occupation, SD suppressed
for binary variables), correlation matrices (r with the p-value printed
beneath), and regression columns (estimate with significance stars, standard
error in parentheses, then N / log-likelihood / mean of the dependent
variable).  Every emitter has a parser that recovers the numbers at printed
precision, so emitted artifacts stay machine-checkable.
"""

from __future__ import annotations

import io
import re

import pandas as pd

PRECISION = 3
_CELL_RE = re.compile(r"^(-?\d+\.\d+)(\*{0,3})\s*\((\d+\.\d+)\)$")


def significance_stars(p: float) -> str:
    """1% / 5% / 10% convention: ***, **, *."""
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.1:
        return "*"
    return ""


def _fmt(x: float, precision: int = PRECISION) -> str:
    return f"{x:.{precision}f}"


# ---------------------------------------------------------------------------
# Descriptive statistics by group
# ---------------------------------------------------------------------------


def emit_descriptives(
    table: pd.DataFrame,
    group_col: str,
    value_cols: list[str],
    binary_cols: set[str] | frozenset[str] = frozenset(),
    groups: list[str] | None = None,
) -> str:
    """Group means and SDs as TSV; the SD cell is empty for binary variables."""
    groups = groups or sorted(table[group_col].unique(), key=str)
    header = ["variable"]
    for g in groups:
        header += [f"{g}:mean", f"{g}:sd"]
    lines = ["\t".join(header)]
    for col in value_cols:
        cells = [col]
        for g in groups:
            values = table.loc[table[group_col] == g, col].astype(float)
            cells.append(_fmt(values.mean()))
            cells.append("" if col in binary_cols else _fmt(values.std(ddof=0)))
        lines.append("\t".join(cells))
    n_cells = ["N"]
    for g in groups:
        n_cells += [str(int((table[group_col] == g).sum())), ""]
    lines.append("\t".join(n_cells))
    return "\n".join(lines) + "\n"


def parse_descriptives(text: str) -> pd.DataFrame:
    """Inverse of :func:`emit_descriptives`; SD is NaN where suppressed."""
    frame = pd.read_csv(io.StringIO(text), sep="\t", dtype=str).set_index("variable")
    return frame.apply(pd.to_numeric, errors="coerce")


# ---------------------------------------------------------------------------
# Correlation matrix with p-values beneath
# ---------------------------------------------------------------------------


def emit_correlations(matrix: pd.DataFrame) -> str:
    """Lower-triangular correlation table: r on one line, p on the next."""
    columns = list(matrix.columns)
    lines = ["\t".join(["variable"] + columns)]
    for i, name in enumerate(columns):
        r_cells, p_cells = [name], [""]
        for j, other in enumerate(columns):
            if j > i:
                r_cells.append("")
                p_cells.append("")
                continue
            r, p = matrix.loc[name, other]
            r_cells.append(_fmt(r))
            p_cells.append("" if i == j else _fmt(p))
        lines.append("\t".join(r_cells))
        if i > 0:
            lines.append("\t".join(p_cells))
    return "\n".join(lines) + "\n"


def parse_correlations(text: str) -> dict[tuple[str, str], tuple[float, float]]:
    """Recover {(row, col): (r, p)} for the strictly lower triangle."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    columns = lines[0].split("\t")[1:]
    out: dict[tuple[str, str], tuple[float, float]] = {}
    idx = 1
    for i, name in enumerate(columns):
        r_cells = lines[idx].split("\t")[1:]
        idx += 1
        p_cells = [""] * len(columns)
        if i > 0:
            p_cells = lines[idx].split("\t")[1:]
            idx += 1
        for j in range(i):
            out[(name, columns[j])] = (float(r_cells[j]), float(p_cells[j]))
    return out


# ---------------------------------------------------------------------------
# Regression columns (coefficients or AMEs with SEs in parentheses)
# ---------------------------------------------------------------------------


def regression_cell(estimate: float, se: float, p: float) -> str:
    return f"{_fmt(estimate)}{significance_stars(p)} ({_fmt(se)})"


def parse_regression_cell(cell: str) -> tuple[float, str, float]:
    m = _CELL_RE.match(cell.strip())
    if not m:
        raise ValueError(f"unparseable regression cell: {cell!r}")
    return float(m.group(1)), m.group(2), float(m.group(3))


def emit_regression_table(
    columns: list[dict],
    terms: list[str],
) -> str:
    """Side-by-side model columns as TSV.

    Each entry of ``columns`` describes one model: ``label``, ``rows`` (term
    -> (estimate, se, p)), ``n``, ``loglik``, ``mean_dep``.  Terms missing
    from a model render empty.
    """
    lines = ["\t".join(["term"] + [c["label"] for c in columns])]
    for term in terms:
        cells = [term]
        for c in columns:
            if term in c["rows"]:
                cells.append(regression_cell(*c["rows"][term]))
            else:
                cells.append("")
        lines.append("\t".join(cells))
    lines.append("\t".join(["N"] + [str(int(c["n"])) for c in columns]))
    lines.append("\t".join(["Log likelihood"] + [_fmt(c["loglik"]) for c in columns]))
    lines.append("\t".join(["Mean dep. variable"] + [_fmt(c["mean_dep"]) for c in columns]))
    return "\n".join(lines) + "\n"


def parse_regression_table(text: str) -> list[dict]:
    """Inverse of :func:`emit_regression_table` at printed precision."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    labels = lines[0].split("\t")[1:]
    columns = [{"label": lab, "rows": {}} for lab in labels]
    for line in lines[1:]:
        cells = line.split("\t")
        head, rest = cells[0], cells[1:]
        if head == "N":
            for c, v in zip(columns, rest):
                c["n"] = int(v)
        elif head == "Log likelihood":
            for c, v in zip(columns, rest):
                c["loglik"] = float(v)
        elif head == "Mean dep. variable":
            for c, v in zip(columns, rest):
                c["mean_dep"] = float(v)
        else:
            for c, v in zip(columns, rest):
                if v.strip():
                    est, stars, se = parse_regression_cell(v)
                    c["rows"][head] = (est, stars, se)
    return columns


def ame_column(label: str, fit, ame: pd.DataFrame) -> dict:
    """Regression-table column from a probit fit's marginal-effects table."""
    rows = {term: (row["ame"], row["se"], row["p"]) for term, row in ame.iterrows()}
    return {
        "label": label,
        "rows": rows,
        "n": fit.n,
        "loglik": fit.loglik,
        "mean_dep": fit.mean_outcome,
    }


def coefficient_column(label: str, fit) -> dict:
    """Regression-table column of raw probit coefficients."""
    frame = fit.summary_frame()
    rows = {term: (row["coef"], row["se"], row["p"]) for term, row in frame.iterrows()}
    return {
        "label": label,
        "rows": rows,
        "n": fit.n,
        "loglik": fit.loglik,
        "mean_dep": fit.mean_outcome,
    }
