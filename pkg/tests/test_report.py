import csv
import io
import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from elfsom.errors import NotOneDimensional
from elfsom.ingest import EmissionDataset, EmissionInstance, MeasurementPosition as P
from elfsom.report import (
    EmissionLevel,
    LevelReport,
    Safety,
    build_level_report,
    check_report,
    level_name,
    levels_from_labels,
    order_clusters,
    render_report,
    report_from_dict,
    safety_flag,
)
from elfsom.som import SomNetwork


def make_dataset(points, position=P.TOP):
    """points: iterable of (frequency, b_mean) for one adapter."""
    inst = tuple(sorted((EmissionInstance("AC1", f, b) for f, b in points), key=lambda i: i.frequency))
    freqs = [i.frequency for i in inst]
    return EmissionDataset(position, inst, (min(freqs), max(freqs)))


def test_order_clusters_example():
    mapping = order_clusters(SomNetwork([5.0, 0.1, 2.0, 9.0, 0.5]))
    assert mapping == {
        1: EmissionLevel.VERY_LOW,
        4: EmissionLevel.LOW,
        2: EmissionLevel.MIDDLE,
        0: EmissionLevel.HIGH,
        3: EmissionLevel.VERY_HIGH,
    }


def test_order_clusters_sorted_is_identity():
    assert order_clusters(SomNetwork([0.1, 0.2, 0.3, 0.4, 0.5])) == {i: i for i in range(5)}


def test_order_clusters_ties_by_index():
    assert order_clusters(SomNetwork([1.0, 1.0, 0.0])) == {2: 0, 0: 1, 1: 2}


def test_order_clusters_needs_one_dim():
    with pytest.raises(NotOneDimensional):
        order_clusters(SomNetwork([[0.0, 1.0]]))


def test_order_clusters_permutation_invariant():
    rng = np.random.default_rng(4)
    w = rng.uniform(0, 10, size=5)
    base = order_clusters(SomNetwork(w))
    for perm in itertools.permutations(range(5)):
        perm = list(perm)
        # neuron j of the permuted network is neuron perm[j] of the original
        mapped = order_clusters(SomNetwork(w[perm]))
        assert all(mapped[j] == base[perm[j]] for j in range(5))


def test_level_names():
    assert [level_name(r, 5) for r in range(5)] == ["VeryLow", "Low", "Middle", "High", "VeryHigh"]
    assert level_name(2, 3) == "Level2"
    assert EmissionLevel.VERY_HIGH.title == "VeryHigh"


@pytest.mark.parametrize(
    "lo,hi,flag",
    [
        (0.05, 0.1, Safety.BELOW),
        (0.1, 0.2, Safety.BELOW),
        (0.15, 0.25, Safety.BORDERLINE),
        (0.2, 0.3, Safety.BORDERLINE),
        (0.21, 0.3, Safety.ABOVE),
        (36.51, 49.99, Safety.ABOVE),
    ],
)
def test_safety_flag(lo, hi, flag):
    assert safety_flag(lo, hi, 0.2) is flag


def test_very_high_row_example():
    # two members in the top level plus four low ones
    ds = make_dataset([(50.0, 36.51), (60.0, 49.99), (200.0, 0.1), (210.0, 0.5), (220.0, 1.0), (230.0, 5.0)])
    net = SomNetwork([0.1, 0.5, 1.0, 5.0, 43.0])
    report = build_level_report(ds, net, 0.2)
    row = report.row("VeryHigh")
    assert (row.b_min, row.b_max) == (36.51, 49.99)
    assert (row.f_min, row.f_max) == (50.0, 60.0)
    assert row.safety is Safety.ABOVE
    assert row.member_count == 2


def test_all_below():
    ds = make_dataset([(f, 0.1) for f in (30.0, 40.0, 50.0)])
    report = build_level_report(ds, SomNetwork([0.1, 0.3, 0.5, 0.7, 0.9]))
    for row in report.rows:
        if row.member_count:
            assert row.safety is Safety.BELOW


def test_borderline():
    ds = make_dataset([(30.0, 0.15), (40.0, 0.25)])
    report = build_level_report(ds, SomNetwork([0.2]), 0.2)
    (row,) = report.rows
    assert row.safety is Safety.BORDERLINE
    assert row.level == "Level0"


def test_empty_levels_reported():
    ds = make_dataset([(30.0, 1.0), (40.0, 1.1)])
    report = build_level_report(ds, SomNetwork([1.05, 50.0, 60.0, 70.0, 80.0]))
    assert [r.member_count for r in report.rows] == [2, 0, 0, 0, 0]
    assert report.rows[1].b_min is None and report.rows[1].safety is None
    assert check_report(report, 2) == []


@given(
    st.lists(st.floats(0.0, 50.0), min_size=1, max_size=60),
    st.lists(st.floats(0.0, 50.0), min_size=1, max_size=7),
    st.floats(0.0, 10.0),
)
@settings(max_examples=150)
def test_report_invariants(values, protos, limit):
    ds = make_dataset([(30.0 + i, v) for i, v in enumerate(values)])
    net = SomNetwork(protos)
    report = build_level_report(ds, net, limit)
    assert report.member_total == len(ds)
    nonempty = [r for r in report.rows if r.member_count]
    for r in nonempty:
        assert r.b_min <= r.b_max and r.f_min <= r.f_max
        assert r.safety is safety_flag(r.b_min, r.b_max, limit)
    # prototypes of consecutive non-empty levels strictly increase
    for a, b in zip(nonempty, nonempty[1:]):
        assert b.prototype > a.prototype
    assert check_report(report, len(ds)) == []


# -- rendering ------------------------------------------------------------------


@pytest.fixture
def report():
    ds = make_dataset([(30.0, 12.5), (35.4, 4.0), (100.0, 0.15), (150.0, 0.25), (300.0, 0.1)])
    return build_level_report(ds, SomNetwork([0.12, 0.2, 1.0, 4.0, 12.0]))


def test_markdown_layout(report):
    text = render_report(report, "markdown").decode()
    lines = text.splitlines()
    assert lines[2].startswith("| Level | B min [µT] | B max [µT] | f min [Hz] | f max [Hz]")
    rows = [ln for ln in lines if ln.startswith("| ") and not ln.startswith("| Level")]
    assert [r.split("|")[1].strip() for r in rows] == ["VeryLow", "Low", "Middle", "High", "VeryHigh"]
    assert "**12.500**" in text
    assert "| 0.100 |" in text


def test_header_only_table():
    empty = LevelReport(P.TOP, 0.2, ())
    md = render_report(empty, "markdown").decode().splitlines()
    assert sum(1 for ln in md if ln.startswith("|")) == 2
    assert render_report(empty, "csv").decode().count("\n") == 1
    assert json.loads(render_report(empty, "json"))["rows"] == []


@pytest.mark.parametrize("fmt", ["markdown", "csv", "json"])
def test_render_deterministic(report, fmt):
    assert render_report(report, fmt) == render_report(report, fmt)


def test_json_round_trip(report):
    back = report_from_dict(json.loads(render_report(report, "json")))
    assert back == report


def test_csv_round_trip_numbers(report):
    rows = list(csv.DictReader(io.StringIO(render_report(report, "csv").decode())))
    assert len(rows) == 5
    for src, row in zip(report.rows, rows):
        assert int(row["members"]) == src.member_count
        if src.member_count:
            assert float(row["b_min_ut"]) == src.b_min
            assert float(row["f_max_hz"]) == src.f_max
            assert row["safety"] == src.safety.value


def test_unknown_format(report):
    with pytest.raises(ValueError):
        render_report(report, "xml")


def test_levels_from_labels_general_k():
    ds = make_dataset([(30.0, 1.0), (40.0, 2.0), (50.0, 3.0)])
    report = levels_from_labels(ds, [2, 1, 0], 3, method="equal-width")
    assert [r.level for r in report.rows] == ["Level0", "Level1", "Level2"]
    assert report.rows[0].f_min == 50.0
    assert report.method == "equal-width"
