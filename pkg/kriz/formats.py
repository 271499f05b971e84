"""Rendering of command results as JSON, CSV, LaTeX or plain text."""

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from kriz.cohomology import GrothHodgePoly, HodgePoly
from kriz.equivariance import IrrepMultiplicities

FORMATS = ("json", "csv", "latex", "text")


@dataclass
class Output:
    """A command result.

    Parameters:
        payload: The JSON document.
        rows: Table rows for CSV and the default LaTeX table.
        text: Plain-text rendering.
        latex: Optional LaTeX rendering replacing the default table.
    """

    payload: Dict[str, Any]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    text: str = ""
    latex: Optional[str] = None


def render(output: Output, fmt: str) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"Unknown format {fmt!r}, expected one of {FORMATS}.")
    if fmt == "json":
        return json.dumps(output.payload, indent=2, ensure_ascii=False)
    if fmt == "csv":
        return to_csv(output.rows)
    if fmt == "latex":
        return output.latex if output.latex is not None else latex_table(output.rows)
    return output.text


def to_csv(rows: Sequence[Mapping[str, Any]]) -> str:
    if not rows:
        return ""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue().rstrip("\n")


def _escape(value: Any) -> str:
    text = str(value)
    for char in ("_", "&", "%", "#"):
        text = text.replace(char, "\\" + char)
    return text


def latex_table(rows: Sequence[Mapping[str, Any]]) -> str:
    if not rows:
        return ""
    columns = list(rows[0])
    lines = [
        "\\begin{tabular}{" + "l" * len(columns) + "}",
        " & ".join(_escape(column) for column in columns) + " \\\\",
        "\\hline",
    ]
    for row in rows:
        lines.append(" & ".join(_escape(row[column]) for column in columns) + " \\\\")
    lines.append("\\end{tabular}")
    return "\n".join(lines)


def irreps_latex(value: IrrepMultiplicities) -> str:
    terms = []
    for k, m in value.mult.items():
        terms.append(f"V_{{{k}}}" if m == 1 else f"{m}V_{{{k}}}")
    return " + ".join(terms)


def hodge_grid(poly: Any) -> str:
    """LaTeX grid of a (Grothendieck-ring) Hodge polynomial.

    The entry at column p, row q is the coefficient of u^{p+q} v^{p+2q}. Rows run from
    the largest q down to 0.
    """
    entries: Dict[Tuple[int, int], str] = {}
    if isinstance(poly, GrothHodgePoly):
        for (i, k), value in poly.coeffs.items():
            entries[(2 * i - k, k - i)] = irreps_latex(value)
    elif isinstance(poly, HodgePoly):
        for (i, k), value in poly.coeffs.items():
            entries[(2 * i - k, k - i)] = str(value)
    else:
        raise TypeError(f"Expected a Hodge polynomial, got {type(poly)}")

    if not entries:
        return ""
    top_p = max(p for p, _ in entries)
    top_q = max(q for _, q in entries)
    lines = ["\\begin{array}{r|" + "c" * (top_p + 1) + "}"]
    for q in range(top_q, -1, -1):
        cells = [entries.get((p, q), "") for p in range(top_p + 1)]
        lines.append(f"{q} & " + " & ".join(cells) + " \\\\")
    lines.append("\\hline")
    lines.append(" & " + " & ".join(str(p) for p in range(top_p + 1)))
    lines.append("\\end{array}")
    return "\n".join(lines)
