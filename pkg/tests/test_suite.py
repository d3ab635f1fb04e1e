import numpy as np

from regwave.suite import (
    QUANTILE,
    TRAIN_SAMPLES,
    WINDOW,
    PreservationCase,
    preservation_suite,
    run_case,
)


def test_suite_covers_every_anomaly_kind():
    cases = preservation_suite()
    assert len(cases) >= 20
    kinds = {c.kind for c in cases}
    assert kinds == {"spike", "dropout", "drift"}
    assert len({c.name for c in cases}) == len(cases)
    assert len({c.seed for c in cases}) == len(cases)


def test_spikes_are_well_separated_from_the_noise():
    for case in preservation_suite():
        if case.kind != "spike":
            continue
        sigmas = (case.magnitude - 1.0) / case.jitter
        assert sigmas >= 8.0, case.name


def test_anomalies_fit_inside_the_evaluation_window():
    for case in preservation_suite():
        assert 0 < case.start
        assert case.start + case.length <= WINDOW, case.name
        anomaly = case.anomaly()
        # The first evaluation-window delta covers the polling interval that
        # starts at tick TRAIN_SAMPLES + 1.
        assert anomaly.t0 == 10.0 * (TRAIN_SAMPLES + case.start + 1)


def test_spike_indices_only_for_spikes():
    spike = PreservationCase("s", 1, 1000.0, 0.05, "spike", 2.0, 10, 5)
    assert spike.spike_indices() == (10, 11, 12, 13, 14)
    drift = PreservationCase("d", 1, 1000.0, 0.05, "drift", 2.0, 10, 5)
    assert drift.spike_indices() == ()


def test_one_spike_case_end_to_end():
    case = next(c for c in preservation_suite() if c.name == "spike-40sig")
    result = run_case(case)
    assert set(result.reports) == {"rx_bytes", "tx_bytes"}
    assert result.spikes_preserved()
    assert result.worst_jaccard >= 0.9
    for report in result.reports.values():
        assert report.compression_ratio == 0.5
        expected = set(case.spike_indices())
        # Flags beyond the injected span stay rare: a few edge-smeared
        # samples or sub-quantile noise at most.
        extra_orig = set(report.flags_original) - expected
        extra_syn = set(report.flags_synthesized) - expected
        assert len(extra_orig) <= 4
        assert len(extra_syn) <= 8


def test_one_dropout_case_flags_the_outage():
    case = next(c for c in preservation_suite() if c.name == "dropout-full-a")
    result = run_case(case)
    span = set(range(case.start, case.start + case.length))
    for report in result.reports.values():
        assert span <= set(report.flags_original)
        assert np.isclose(report.jaccard, 1.0, atol=0.1)
    assert result.worst_jaccard >= 0.9
