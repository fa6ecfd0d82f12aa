import json
from fractions import Fraction

import pytest

from qcorr.tables import MATCH_TOL, TableReport, build_report, expected_values


@pytest.fixture(scope="module")
def report():
    return build_report()


def test_expected_values_are_exact_fractions():
    exp = expected_values()
    assert exp["GHZ3"][(1, 2, 3)] == 1
    assert exp["W3"][(1, 2)] == Fraction(88, 243)
    assert all(isinstance(v, Fraction) for cells in exp.values() for v in cells.values())


def test_pair_and_werner_rows_all_match(report):
    assert report.code_failures() == []
    werner = [r for r in report.rows if r.state.startswith("werner")]
    assert len(werner) == 10 and all(r.status == "match" for r in werner)


def test_row_errors_respect_tolerance(report):
    for r in report.rows:
        if r.status == "match":
            assert r.error is not None and r.error <= MATCH_TOL


def test_calibration_block(report):
    assert report.calibration["2"] == pytest.approx(3)
    assert report.calibration["3"] == pytest.approx(4)
    assert report.calibration["4"] == pytest.approx(12)


def test_json_round_trip(report):
    text = report.to_json()
    obj = json.loads(text)
    assert set(obj) == {"rows", "calibration"}
    assert set(obj["rows"][0]) == {"state", "subset", "m", "expected", "computed", "error", "status"}
    back = TableReport.from_json(text)
    assert [r.to_json() for r in back.rows] == [r.to_json() for r in report.rows]


def test_markdown_lists_hypothesis_failures(report):
    md = report.to_markdown()
    assert md.startswith("|") or md.startswith("#")
    for r in report.hypothesis_failures():
        assert r.state in md
