from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from branchlab import analysis
from branchlab.analysis import (BranchSiteStats, PredictorReport, classify_bias,
                                compare_reports, critical_branches, improvement, simulate)
from branchlab.predictors import PredictorConfig
from branchlab.sites import BranchSite
from branchlab.trace import Trace


def report_of(occ, miss=None, taken=None):
    miss = miss or [0] * len(occ)
    taken = taken or [o // 2 for o in occ]
    sites = [BranchSiteStats(i, o, t, m, f"s_{i}", "k", i)
             for i, (o, t, m) in enumerate(zip(occ, taken, miss))]
    return PredictorReport(PredictorConfig("gshare"), sum(occ), sum(miss), sites)


def one_site_trace(outcomes):
    site = BranchSite(0, "tc", 58, 0x500380)
    return Trace([site], np.zeros(len(outcomes), np.uint16), np.array(outcomes, np.uint8))


@pytest.mark.parametrize("taken,expected", [(95, "biased"), (50, "unbiased"),
                                            (90, "unbiased"), (5, "biased"), (100, "biased")])
def test_classify_bias_examples(taken, expected):
    assert classify_bias((taken, 100)) == expected


def test_classify_bias_zero_occurrences():
    with pytest.raises(ValueError):
        classify_bias((0, 0))


@given(st.integers(1, 500), st.data())
def test_classify_bias_monotone(occ, data):
    a = data.draw(st.integers(0, occ // 2))
    b = data.draw(st.integers(a, occ // 2))
    if classify_bias((a, occ)) == "unbiased":
        assert classify_bias((b, occ)) == "unbiased"


def test_simulate_examples():
    t = one_site_trace([1] * 1000)
    r = simulate(t, "kind=one_bit")
    assert r.total_mispredictions == 1 and r.mpkb == pytest.approx(1.0)
    p = simulate(t, "kind=perfect")
    assert p.overall_miss_rate == 0 and p.mpkb == 0
    assert simulate(t, "kind=one_bit") == r


def test_simulate_truncation_equivalence():
    rng = np.random.default_rng(2)
    sites = [BranchSite(i, "bc", 70 + i, 0x400000 + 16 * i) for i in range(3)]
    t = Trace(sites, rng.integers(0, 3, 2000), rng.integers(0, 2, 2000))
    full = analysis.predictions(t, "kind=tage")
    for k in (1, 500, 1999):
        head = simulate(t.head(k), "kind=tage")
        assert head.total_mispredictions == int((full[:k] != t.outcomes[:k]).sum())


def test_simulate_skip_keeps_training():
    t = one_site_trace([1] * 1000)
    r = simulate(t, "kind=one_bit", skip=10)
    assert r.total_events == 990 and r.total_mispredictions == 0


def test_report_totals_are_checked():
    with pytest.raises(ValueError):
        PredictorReport(PredictorConfig("gshare"), 5, 0,
                        [BranchSiteStats(0, 4, 1, 0)])


@pytest.mark.parametrize("occ,coverage,rows", [
    ([70, 25, 5], 0.98, 3), ([990, 9, 1], 0.98, 1), ([70, 25, 5], 0.5, 1),
    ([7], 0.98, 1), ([93, 7], 0.93, 1), ([25, 25, 25, 25], 1.0, 4),
])
def test_critical_examples(occ, coverage, rows):
    out = critical_branches(report_of(occ), coverage)
    assert len(out) == rows
    assert out[-1]["cumulative_coverage"] >= coverage - 1e-12


def test_critical_flags_unbiased_members_only():
    r = report_of([60, 40], taken=[30, 1])
    out = critical_branches(r, 1.0)
    assert [row["critical"] for row in out] == [True, False]


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(1, 50), min_size=1, max_size=10),
       st.sampled_from([0.5, 0.8, 0.9, 0.95, 0.98, 1.0]))
def test_critical_prefix_is_minimal(occ, coverage):
    r = report_of(occ)
    out = critical_branches(r, coverage)
    total = sum(occ)
    need = coverage * total
    ranked = sorted(range(len(occ)), key=lambda i: (-occ[i], i))
    assert [row["stats"].site_id for row in out] == ranked[:len(out)]
    assert sum(occ[i] for i in ranked[:len(out)]) >= need - 1e-9
    # no subset of fewer sites reaches the threshold
    k = len(out) - 1
    if k:
        best = max(sum(occ[i] for i in c) for c in combinations(range(len(occ)), k))
        assert best < need - 1e-9


def test_improvement_formula():
    assert improvement(0.20, 0.19) == pytest.approx(5.0)
    assert improvement(0.0, 0.3) == 0.0


def test_compare_reports():
    t = one_site_trace(np.random.default_rng(0).integers(0, 2, 500))
    a, b = simulate(t, "kind=gshare"), simulate(t, "kind=one_bit")
    d = compare_reports(a, a)
    assert d.miss_rate_improvement == 0 and all(s.miss_rate_improvement == 0 for s in d.per_site)
    d = compare_reports(a, b)
    assert d.miss_rate_improvement == pytest.approx(
        improvement(a.overall_miss_rate, b.overall_miss_rate))
    perfect = simulate(t, "kind=perfect")
    assert compare_reports(perfect, b).mpkb_improvement == 0
    with pytest.raises(ValueError):
        compare_reports(a, simulate(t.head(100), "kind=gshare"))


def test_report_csv_round_trip():
    t = one_site_trace([1, 0, 1, 1] * 50)
    r = simulate(t, "kind=gshare")
    text = analysis.report_csv(r)
    assert text.splitlines()[0].split(",") == analysis.REPORT_COLUMNS
    back = analysis.read_report_csv(text)
    assert back.total_events == r.total_events
    assert back.total_mispredictions == r.total_mispredictions
    with pytest.raises(analysis.ReportFormatError):
        analysis.read_report_csv("a,b\n1,2\n")


def test_delta_csv_has_improvement_column():
    t = one_site_trace([1, 0] * 100)
    d = compare_reports(simulate(t, "kind=one_bit"), simulate(t, "kind=gshare"))
    lines = analysis.delta_csv(d).splitlines()
    assert lines[0].endswith("improvement_pct")
    assert lines[-1].startswith("TOTAL")
