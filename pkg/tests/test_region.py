import pytest

from mvrisk.core.errors import DimensionMismatchError
from mvrisk.core.models import ConfidenceLevel
from mvrisk.services.region import RegionRow, region_rows, render_region_csv


def test_anti_diagonal_region(anti_diagonal):
    rows = region_rows(anti_diagonal, ConfidenceLevel(0.6))
    assert len(rows) == 15
    assert [row.tag for row in rows if row.kind == "scenario"] == ["desirable"] * 5
    assert [(row.x1, row.x2) for row in rows if row.kind == "plep"] == [(3, 5), (4, 4), (5, 3)]
    boundary = [(row.x1, row.x2) for row in rows if row.kind == "boundary"]
    assert boundary == [(1, 5), (3, 5), (3, 4), (4, 4), (4, 3), (5, 3), (5, 1)]
    assert [row.tag for row in rows if row.kind == "boundary"] == [str(j) for j in range(1, 8)]


def test_undesirable_scenarios_are_tagged(heavy_middle):
    rows = region_rows(heavy_middle, ConfidenceLevel(0.9))
    tags = [row.tag for row in rows if row.kind == "scenario"]
    assert tags == ["undesirable", "desirable", "desirable", "desirable", "undesirable"]
    boundary = [(row.x1, row.x2) for row in rows if row.kind == "boundary"]
    assert boundary == [(1, 4), (4, 4), (4, 1)]


def test_region_needs_two_criteria(make_scenarios):
    with pytest.raises(DimensionMismatchError):
        region_rows(make_scenarios([(1, 2, 3)]), ConfidenceLevel(0.5))


def test_render_region_csv():
    text = render_region_csv([RegionRow("plep", 3.0, 0.5, "1"), RegionRow("scenario", 1.0, 2.0, "desirable")])
    assert text == "kind,x1,x2,tag\nplep,3.0,0.5,1\nscenario,1.0,2.0,desirable\n"


def test_render_anti_diagonal(anti_diagonal):
    lines = render_region_csv(region_rows(anti_diagonal, ConfidenceLevel(0.6))).splitlines()
    assert len(lines) == 16
    assert lines[0] == "kind,x1,x2,tag"
    assert lines[-1] == "boundary,5.0,1.0,7"
