import json
import math

import pytest

from jacobibands import ConfigInvalid, new_periodic
from jacobibands.bounds import CONDITIONAL_NAMES, UNCONDITIONAL_NAMES
from jacobibands.ensemble import (
    EnsembleConfig,
    ensemble_to_jsonable,
    run_ensemble,
    run_trial,
    sample_operator,
    validate_config,
)


def test_sampling_is_deterministic():
    cfg = EnsembleConfig(trials=5, seed=77)
    first = sample_operator(cfg, 3)
    second = sample_operator(cfg, 3)
    assert first == second
    assert sample_operator(cfg, 4) != first


def test_sampling_respects_period_range():
    cfg = EnsembleConfig(trials=1, seed=1, p_min=2, p_max=2)
    for k in range(20):
        assert sample_operator(cfg, k).p == 2


def test_sampling_degenerate_offdiagonal_range():
    cfg = EnsembleConfig(trials=1, seed=1, a_lo=1.0, a_hi=1.0)
    for k in range(10):
        c = sample_operator(cfg, k)
        assert all(x == 1.0 for x in c.a)


def test_sampling_ranges():
    cfg = EnsembleConfig(trials=1, seed=5, p_min=3, p_max=7, a_lo=0.2, a_hi=5.0, b_lo=-1.0, b_hi=1.0)
    for k in range(30):
        c = sample_operator(cfg, k)
        assert 3 <= c.p <= 7
        assert all(0.2 <= x <= 5.0 for x in c.a)
        assert all(-1.0 <= x <= 1.0 for x in c.b)


def test_config_validation():
    with pytest.raises(ConfigInvalid):
        validate_config(EnsembleConfig(trials=0))
    with pytest.raises(ConfigInvalid):
        validate_config(EnsembleConfig(p_min=0))
    with pytest.raises(ConfigInvalid):
        validate_config(EnsembleConfig(p_min=5, p_max=2))
    with pytest.raises(ConfigInvalid):
        validate_config(EnsembleConfig(a_lo=0.0))
    with pytest.raises(ConfigInvalid):
        validate_config(EnsembleConfig(a_lo=2.0, a_hi=1.0))
    with pytest.raises(ConfigInvalid):
        validate_config(EnsembleConfig(b_lo=1.0, b_hi=-1.0))
    with pytest.raises(ConfigInvalid):
        run_ensemble(EnsembleConfig(trials=0))


def test_run_trial_period2_all_pass():
    report = run_trial(new_periodic([1.0, 1.0], [0.0, 2.0]))
    assert report.all_passed, {k: v.detail for k, v in report.families.items() if not v.passed}
    assert report.oracle_max_discrepancy < 1e-8
    assert report.capacity_rel_error < 1e-8
    assert len(report.bounds.records) == 13


def test_run_trial_single_band():
    report = run_trial(new_periodic([1.0], [0.0]))
    assert report.all_passed
    assert report.band_structure.p == 1


def test_run_trial_near_touching_completes():
    report = run_trial(new_periodic([1.0, 1.0], [0.0, 1e-7]))
    assert report.all_passed
    assert report.band_structure.closed_gap_flags == (False,)
    assert report.band_structure.min_gap == pytest.approx(1e-7, rel=1e-4)


def test_run_trial_records_every_family():
    report = run_trial(new_periodic([2.0, 0.5, 1.0], [1.0, 0.0, -1.0]))
    assert set(report.families) == {
        "discriminant",
        "bands",
        "oracle",
        "capacity",
        "alternation",
        "bounds_unconditional",
        "bounds_conditional",
    }


def test_unconditional_and_conditional_partition():
    assert len(UNCONDITIONAL_NAMES) == 11
    assert len(CONDITIONAL_NAMES) == 2
    assert not set(UNCONDITIONAL_NAMES) & set(CONDITIONAL_NAMES)


def test_ensemble_reports_are_reproducible():
    cfg = EnsembleConfig(trials=12, seed=99)
    first = json.dumps(ensemble_to_jsonable(run_ensemble(cfg)), indent=2)
    second = json.dumps(ensemble_to_jsonable(run_ensemble(cfg)), indent=2)
    assert first == second


def test_ensemble_aggregation_counts():
    cfg = EnsembleConfig(trials=10, seed=6)
    res = run_ensemble(cfg)
    assert res.all_passed
    assert all(count == 10 for count in res.family_pass_counts.values())
    assert math.isfinite(res.max_oracle_discrepancy)
    assert 0 <= res.condition_met_counts["min_band_upper"] <= 10
    assert [t.index for t in res.trials] == list(range(10))


def test_trial_serialization_excludes_wall_time():
    cfg = EnsembleConfig(trials=2, seed=8)
    res = run_ensemble(cfg)
    payload = ensemble_to_jsonable(res)
    text = json.dumps(payload)
    assert "wall_time" not in text
    assert payload["trials"][0]["operator"]["p"] == res.trials[0].coefficients.p
