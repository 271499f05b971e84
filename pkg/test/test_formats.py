"""Unit tests for `kriz.formats`."""

import json

import pytest

from kriz.cohomology import HodgePoly
from kriz.formats import Output, hodge_grid, latex_table, render, to_csv


def test_render_formats():
    output = Output({"n": 2}, [{"degree": 0, "betti": 1}], "1")
    assert json.loads(render(output, "json")) == {"n": 2}
    assert render(output, "csv") == "degree,betti\n0,1"
    assert render(output, "text") == "1"
    assert render(output, "latex").startswith("\\begin{tabular}{ll}")
    with pytest.raises(ValueError):
        render(output, "xml")


def test_render_prefers_explicit_latex():
    output = Output({}, [], "", latex="\\LaTeX")
    assert render(output, "latex") == "\\LaTeX"


def test_empty_tables():
    assert to_csv([]) == ""
    assert latex_table([]) == ""


def test_latex_table_escapes_underscores():
    table = latex_table([{"size_l": "a_1"}])
    assert "size\\_l" in table
    assert "a\\_1" in table


def test_hodge_grid_places_entries_by_bidegree():
    poly = HodgePoly({(0, 0): 1, (2, 3): 2, (3, 4): 1})
    lines = hodge_grid(poly).splitlines()
    assert lines[0] == "\\begin{array}{r|ccc}"
    assert lines[1] == "1 &  & 2 & 1 \\\\"
    assert lines[2] == "0 & 1 &  &  \\\\"
    assert lines[-2] == " & 0 & 1 & 2"
    assert hodge_grid(HodgePoly({})) == ""


def test_hodge_grid_rejects_other_objects():
    with pytest.raises(TypeError):
        hodge_grid({(0, 0): 1})
