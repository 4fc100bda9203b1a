import json

import pytest

from minwise.sweep import SweepRow, default_orders, format_table, sweep


def test_default_orders():
    assert default_orders(4, 12) == [12, 6, 4, 3, 2, 1]
    assert default_orders(3, 12) == [6, 3, 2, 1]


def test_row_invariant():
    SweepRow("left", 2, 3, 2, 1, 1, 0).check()
    with pytest.raises(AssertionError):
        SweepRow("left", 2, 3, 2, 1, 0, 0).check()
    with pytest.raises(AssertionError):
        SweepRow("left", 2, 1, 2, 1, 1, 0).check()


@pytest.fixture(scope="module")
def report_12_4():
    return sweep(4, 4, 12, modes=("left", "right"), internal=True, time_limit=120)


def test_left_columns_12_4(report_12_4):
    got = {r.order: (r.existing, r.feasible, r.infeasible) for r in report_12_4.rows if r.mode == "left"}
    assert got == {12: (1, 1, 0), 6: (1, 0, 1), 4: (3, 2, 1), 3: (1, 1, 0), 2: (2, 1, 1), 1: (1, 1, 0)}


def test_right_columns_exist_and_decodes_verified(report_12_4):
    rows = {r.order: r for r in report_12_4.rows if r.mode == "right"}
    assert {q: r.existing for q, r in rows.items()} == {12: 1, 6: 4, 4: 7, 3: 4, 2: 9}
    for r in rows.values():
        r.check()
        assert all((run.family is not None) == (run.status == "sat") for run in r.runs)


def test_report_json_is_deterministic(report_12_4):
    again = sweep(4, 4, 12, modes=("left", "right"), internal=True, time_limit=120)
    assert again.to_json(timings=False) == report_12_4.to_json(timings=False)
    data = json.loads(report_12_4.to_json())
    assert data["schema"] == "minwise-sweep/1"
    assert data["H"] == 5
    assert "elapsed" not in json.loads(report_12_4.to_json(timings=False))["rows"][0]["runs"][0]


def test_parallel_sweep_matches_serial(report_12_4):
    par = sweep(4, 4, 12, modes=("left", "right"), internal=True, time_limit=120, jobs=4)
    assert par.to_json(timings=False) == report_12_4.to_json(timings=False)


def test_table_layout(report_12_4):
    text = format_table(report_12_4)
    lines = text.splitlines()
    assert "exst L" in lines[0] and "infeas R" in lines[0]
    assert len(lines) == 1 + 6


def test_pure_only_and_order_subset():
    rep = sweep(4, 3, 6, modes=("pure",), internal=True)
    assert [(r.mode, r.feasible) for r in rep.rows] == [("pure", 1)]
    rep = sweep(4, 4, 12, modes=("left",), orders=[6], internal=True)
    assert [(r.order, r.infeasible) for r in rep.rows] == [(6, 1)]


def test_timeouts_are_counted():
    rep = sweep(6, 4, 12, modes=("pure",), internal=True, time_limit=0.5)
    row = rep.rows[0]
    assert row.timeout == 1 and row.feasible == row.infeasible == 0
