import pytest
from hypothesis import given, settings, strategies as st

from elfsom.errors import (
    EmptyPosition,
    MalformedRow,
    MissingHeader,
    NegativeField,
    NonNumericField,
    NonPositiveFrequency,
    UnknownPosition,
)
from elfsom.ingest import (
    HEADER,
    MeasurementPosition as P,
    SpectrumSample,
    build_dataset,
    parse_spectrum_csv,
    summarize_adapters,
    write_spectrum_csv,
)

HEAD = ",".join(HEADER) + "\n"


def test_parse_single_row():
    samples = parse_spectrum_csv((HEAD + "AC1,top,50,0,4.910,,,\n").encode())
    assert samples == [SpectrumSample("AC1", P.TOP, 50.0, 0, 4.910)]
    assert samples[0].b_x is None and samples[0].b_z is None


def test_parse_header_only():
    assert parse_spectrum_csv(HEAD.encode()) == []


def test_parse_components_and_crlf():
    text = HEAD.replace("\n", "\r\n") + "AC2,BOTTOM,35.4,1700000000000,1.5,-0.3,0.9,1.1\r\n"
    (s,) = parse_spectrum_csv(text.encode())
    assert s.position is P.BOTTOM
    assert (s.b_x, s.b_y, s.b_z) == (-0.3, 0.9, 1.1)
    assert s.timestamp == 1700000000000


@pytest.mark.parametrize("token", ["top", "Bottom", "LEFT30", "right30", "Up30", "down30"])
def test_positions_case_insensitive(token):
    (s,) = parse_spectrum_csv(HEAD + f"A,{token},50,0,1,,,\n")
    assert s.position.value == token.lower()


def test_exactly_six_positions():
    assert len(P) == 6


@pytest.mark.parametrize(
    "content",
    [b"", b"\n", b"adapter,position\nAC1,top\n", b"AC1,top,50,0,4.910,,,\n"],
)
def test_missing_header(content):
    with pytest.raises(MissingHeader):
        parse_spectrum_csv(content)


def test_unknown_position_row_number():
    with pytest.raises(UnknownPosition) as exc:
        parse_spectrum_csv(HEAD + "AC1,front,50,0,4.910,,,\n")
    assert exc.value.row == 2


def test_non_numeric_field():
    text = HEAD + "AC1,top,50,0,1.0,,,\nAC1,top,fifty,0,1.0,,,\n"
    with pytest.raises(NonNumericField) as exc:
        parse_spectrum_csv(text)
    assert (exc.value.row, exc.value.column) == (3, "frequency_hz")


@pytest.mark.parametrize("token", ["nan", "inf", "1e400", "x"])
def test_non_finite_b_total(token):
    with pytest.raises(NonNumericField) as exc:
        parse_spectrum_csv(HEAD + f"AC1,top,50,0,{token},,,\n")
    assert exc.value.column == "b_total_ut"


def test_non_integer_timestamp():
    with pytest.raises(NonNumericField) as exc:
        parse_spectrum_csv(HEAD + "AC1,top,50,1.5,1.0,,,\n")
    assert exc.value.column == "timestamp_ms"


def test_negative_field():
    with pytest.raises(NegativeField) as exc:
        parse_spectrum_csv(HEAD + "AC1,top,50,0,1,,,\nAC1,top,55,0,-0.1,,,\n")
    assert exc.value.row == 3


def test_non_positive_frequency():
    with pytest.raises(NonPositiveFrequency):
        parse_spectrum_csv(HEAD + "AC1,top,0,0,1,,,\n")


def test_wrong_field_count():
    with pytest.raises(MalformedRow) as exc:
        parse_spectrum_csv(HEAD + "AC1,top,50,0,1\n")
    assert exc.value.row == 2


def test_first_error_aborts():
    text = HEAD + "AC1,front,50,0,1,,,\nAC1,top,50,0,-1,,,\n"
    with pytest.raises(UnknownPosition):
        parse_spectrum_csv(text)


# -- build_dataset ----------------------------------------------------------


def test_dataset_mean_of_two():
    samples = [
        SpectrumSample("AC1", P.TOP, 50.0, 0, 2.0),
        SpectrumSample("AC1", P.TOP, 50.0, 10, 4.0),
    ]
    ds = build_dataset(samples, P.TOP)
    assert len(ds) == 1
    assert ds.instances[0].b_mean == 3.0
    assert ds.frequency_band == (50.0, 50.0)


def test_dataset_single_sample():
    ds = build_dataset([SpectrumSample("AC1", P.TOP, 50.0, 0, 0.1234)], P.TOP)
    assert ds.instances[0].b_mean == 0.1234


def test_dataset_153_instances():
    freqs = [30 + 5.4 * j for j in range(51)]
    samples = [
        SpectrumSample(a, P.TOP, f, t, 1.0 + t)
        for a in ("AC1", "AC2", "AC3")
        for f in freqs
        for t in range(4)
    ]
    samples.append(SpectrumSample("AC1", P.BOTTOM, 50.0, 0, 9.0))
    ds = build_dataset(samples, P.TOP)
    assert len(ds) == 153
    assert all(i.b_mean == 2.5 for i in ds.instances)


def test_dataset_sorted_and_banded():
    samples = [
        SpectrumSample("B", P.UP30, 70.0, 0, 1.0),
        SpectrumSample("A", P.UP30, 90.0, 0, 1.0),
        SpectrumSample("A", P.UP30, 30.0, 0, 1.0),
    ]
    ds = build_dataset(samples, P.UP30)
    assert [(i.adapter_id, i.frequency) for i in ds.instances] == [
        ("A", 30.0), ("A", 90.0), ("B", 70.0)
    ]
    assert ds.frequency_band == (30.0, 90.0)


def test_duplicate_timestamps_averaged():
    samples = [
        SpectrumSample("AC1", P.TOP, 50.0, 0, 1.0),
        SpectrumSample("AC1", P.TOP, 50.0, 0, 2.0),
        SpectrumSample("AC1", P.TOP, 50.0, 5, 6.0),
    ]
    assert build_dataset(samples, P.TOP).instances[0].b_mean == 3.0


def test_empty_position():
    with pytest.raises(EmptyPosition):
        build_dataset([SpectrumSample("AC1", P.TOP, 50.0, 0, 1.0)], P.BOTTOM)


def test_components_ignored_in_aggregation():
    a = SpectrumSample("AC1", P.TOP, 50.0, 0, 1.0, 5.0, 5.0, 5.0)
    b = SpectrumSample("AC1", P.TOP, 50.0, 0, 1.0)
    assert build_dataset([a], P.TOP) == build_dataset([b], P.TOP)


# -- summarize_adapters -------------------------------------------------------


def test_summary_single_sample():
    (s,) = summarize_adapters([SpectrumSample("AC1", P.TOP, 50.0, 0, 4.910)])
    assert s.adapter_id == "AC1"
    assert (s[P.TOP].b_mean, s[P.TOP].b_max) == (4.910, 4.910)
    assert set(s.sides) == {P.TOP}


def test_summary_two_values():
    samples = [
        SpectrumSample("AC1", P.TOP, 50.0, 0, 2.0),
        SpectrumSample("AC1", P.TOP, 60.0, 0, 6.0),
    ]
    (s,) = summarize_adapters(samples)
    assert (s[P.TOP].b_mean, s[P.TOP].b_max) == (4.0, 6.0)


def test_summary_empty():
    assert summarize_adapters([]) == []


def test_summary_bundled_ac3_top(sample):
    by_id = {s.adapter_id: s for s in summarize_adapters(sample)}
    assert by_id["AC3"][P.TOP].b_max == 15.400


# -- properties ---------------------------------------------------------------

finite = st.floats(min_value=0.0, max_value=1e4, allow_nan=False, allow_infinity=False)
samples_strategy = st.lists(
    st.builds(
        SpectrumSample,
        adapter_id=st.sampled_from(["AC1", "AC2", "X-9"]),
        position=st.sampled_from(list(P)),
        frequency=st.sampled_from([30.0, 35.4, 40.8, 50.0, 300.0]),
        timestamp=st.integers(min_value=0, max_value=2**53),
        b_total=finite,
        b_x=st.one_of(st.none(), st.floats(-1e3, 1e3)),
        b_y=st.one_of(st.none(), st.floats(-1e3, 1e3)),
        b_z=st.one_of(st.none(), st.floats(-1e3, 1e3)),
    ),
    min_size=1,
    max_size=40,
)


@given(samples_strategy)
def test_csv_round_trip(samples):
    assert parse_spectrum_csv(write_spectrum_csv(samples)) == samples


@given(samples_strategy, st.randoms(use_true_random=False))
@settings(max_examples=50)
def test_build_dataset_permutation_invariant(samples, rnd):
    pos = samples[0].position
    shuffled = list(samples)
    rnd.shuffle(shuffled)
    assert build_dataset(samples, pos) == build_dataset(shuffled, pos)


@given(samples_strategy)
def test_instance_count_is_sum_of_distinct_frequencies(samples):
    pos = samples[0].position
    ds = build_dataset(samples, pos)
    distinct = {}
    for s in samples:
        if s.position is pos:
            distinct.setdefault(s.adapter_id, set()).add(s.frequency)
    assert len(ds) == sum(len(v) for v in distinct.values())
    for inst in ds.instances:
        lo, hi = ds.frequency_band
        assert lo <= inst.frequency <= hi


@given(samples_strategy)
def test_summary_mean_within_sample_range(samples):
    for summary in summarize_adapters(samples):
        for pos, stat in summary.sides.items():
            vals = [s.b_total for s in samples if s.adapter_id == summary.adapter_id and s.position is pos]
            assert min(vals) <= stat.b_mean <= max(vals)
            assert stat.b_max == max(vals)
            assert stat.b_max >= stat.b_mean >= 0


def test_bundled_file_matches_generator(sample):
    from elfsom.sample import generate_sample

    assert write_spectrum_csv(generate_sample()) == write_spectrum_csv(sample)


def test_bundled_shape(sample_datasets):
    assert len(sample_datasets) == 6
    for ds in sample_datasets.values():
        assert len(ds) == 153
        assert ds.frequency_band == (30.0, 300.0)
