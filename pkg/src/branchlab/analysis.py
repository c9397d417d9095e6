"""
Trace replay, per-site statistics, criticality and predictor comparison.

Misprediction density is reported as MPKB, mispredictions per 1000 *branch
events*: traces hold no non-branch instructions, so MPKI cannot be formed.
MPKB keeps the relative ordering of predictors on a fixed trace, but its
absolute values are not comparable with MPKI figures.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .predictors import PredictorConfig, make_predictor, parse_config
from .trace import Trace

BIAS_THRESHOLD = 0.10
BIASED, UNBIASED = "biased", "unbiased"

REPORT_COLUMNS = ["site", "kernel", "line_tag", "occurrences", "taken", "not_taken",
                  "bias", "mispredictions", "miss_rate", "mpkb"]
DELTA_COLUMNS = REPORT_COLUMNS + ["baseline_miss_rate", "variant_miss_rate",
                                  "improvement_pct"]


class ReportFormatError(ValueError):
    """A report CSV that :func:`read_report_csv` cannot parse."""


CRITICAL_COLUMNS = ["rank", "site", "kernel", "line_tag", "occurrences", "share",
                    "cumulative_coverage", "bias", "miss_rate", "critical"]


def classify_bias(stats: "BranchSiteStats | tuple[int, int]",
                  threshold: float = BIAS_THRESHOLD) -> str:
    """``biased`` iff the minority outcome is under ``threshold`` of occurrences.

    Accepts a :class:`BranchSiteStats` or a ``(taken, occurrences)`` pair. The
    inequality is strict, so a minority share of exactly 10% is unbiased.
    """
    if isinstance(stats, BranchSiteStats):
        taken, occ = stats.taken, stats.occurrences
    else:
        taken, occ = stats
    if occ <= 0:
        raise ValueError("cannot classify a branch with zero occurrences")
    minority = min(taken, occ - taken)
    return BIASED if minority / occ < threshold else UNBIASED


@dataclass
class BranchSiteStats:
    site_id: int
    occurrences: int
    taken: int
    mispredictions: int
    label: str = ""
    kernel: str = ""
    line_tag: int = 0

    def __post_init__(self):
        if not 0 <= self.taken <= self.occurrences:
            raise ValueError("taken must be within [0, occurrences]")
        if not 0 <= self.mispredictions <= self.occurrences:
            raise ValueError("mispredictions must be within [0, occurrences]")

    @property
    def not_taken(self) -> int:
        return self.occurrences - self.taken

    @property
    def miss_rate(self) -> float:
        return self.mispredictions / self.occurrences if self.occurrences else 0.0

    @property
    def bias_class(self) -> str | None:
        return classify_bias(self) if self.occurrences else None


@dataclass
class PredictorReport:
    config: PredictorConfig
    total_events: int
    total_mispredictions: int
    per_site: list[BranchSiteStats] = field(default_factory=list)

    def __post_init__(self):
        # aggregation consistency is part of the type
        if sum(s.occurrences for s in self.per_site) != self.total_events:
            raise ValueError("per-site occurrences do not sum to total_events")
        if sum(s.mispredictions for s in self.per_site) != self.total_mispredictions:
            raise ValueError("per-site mispredictions do not sum to the total")

    @property
    def overall_miss_rate(self) -> float:
        return self.total_mispredictions / self.total_events if self.total_events else 0.0

    @property
    def mpkb(self) -> float:
        return 1000.0 * self.overall_miss_rate

    def site_mpkb(self, s: BranchSiteStats) -> float:
        return 1000.0 * s.mispredictions / self.total_events if self.total_events else 0.0

    def site(self, label: str) -> BranchSiteStats:
        for s in self.per_site:
            if s.label == label:
                return s
        raise KeyError(label)


def site_stats(trace: Trace, mispredicted: np.ndarray) -> list[BranchSiteStats]:
    size = max((s.site_id for s in trace.sites), default=-1) + 1
    ids = trace.site_ids.astype(np.int64)
    occ = np.bincount(ids, minlength=size)
    taken = np.bincount(ids, weights=trace.outcomes, minlength=size)
    miss = np.bincount(ids, weights=mispredicted, minlength=size)
    return [
        BranchSiteStats(s.site_id, int(occ[s.site_id]), int(taken[s.site_id]),
                        int(miss[s.site_id]), s.name, s.kernel, s.line_tag)
        for s in sorted(trace.sites, key=lambda s: s.site_id)
    ]


def predictions(trace: Trace, config: PredictorConfig | str) -> np.ndarray:
    """Run the predictor online over the trace; returns per-event predictions."""
    predictor = make_predictor(config)
    return predictor.run(trace.pcs(), trace.outcomes)


def simulate(trace: Trace, config: PredictorConfig | str, skip: int = 0) -> PredictorReport:
    """Replay ``trace`` through a fresh predictor and tally the results.

    The first ``skip`` events still train the predictor but are left out of
    every count.
    """
    if isinstance(config, str):
        config = parse_config(config)
    if skip < 0:
        raise ValueError("skip must be >= 0")
    preds = predictions(trace, config)
    miss = (preds != trace.outcomes).astype(np.uint8)
    counted = trace if skip == 0 else Trace(trace.sites, trace.site_ids[skip:],
                                            trace.outcomes[skip:])
    miss = miss[skip:]
    per_site = site_stats(counted, miss)
    return PredictorReport(config, len(counted), int(miss.sum()), per_site)


def critical_branches(report: PredictorReport, coverage: float = 0.98) -> list[dict]:
    """Shortest occurrence-ranked prefix of sites covering ``coverage`` of events.

    Each row carries the site's share, the cumulative coverage, bias class and
    miss rate; ``critical`` flags unbiased members of the prefix.
    """
    if report.total_events == 0:
        raise ValueError("report has no events")
    if not 0 < coverage <= 1:
        raise ValueError("coverage must be in (0, 1]")
    ranked = sorted((s for s in report.per_site if s.occurrences),
                    key=lambda s: (-s.occurrences, s.site_id))
    # decimal reading of the threshold avoids 0.07 * 100 == 7.000000000000001
    need = Fraction(repr(float(coverage))) * report.total_events
    rows = []
    cum = 0
    for rank, s in enumerate(ranked, 1):
        cum += s.occurrences
        rows.append({
            "rank": rank,
            "stats": s,
            "share": s.occurrences / report.total_events,
            "cumulative_coverage": cum / report.total_events,
            "bias": s.bias_class,
            "miss_rate": s.miss_rate,
            "critical": s.bias_class == UNBIASED,
        })
        if cum >= need:
            break
    return rows


def improvement(baseline: float, variant: float) -> float:
    """Relative improvement in percent; positive means the variant is better."""
    if baseline == 0:
        return 0.0
    return (baseline - variant) / baseline * 100.0


@dataclass
class SiteDelta:
    stats: BranchSiteStats
    baseline_miss_rate: float
    variant_miss_rate: float
    miss_rate_improvement: float
    baseline_mpkb: float
    variant_mpkb: float
    mpkb_improvement: float


@dataclass
class DeltaReport:
    baseline: PredictorReport
    variant: PredictorReport
    per_site: list[SiteDelta]
    miss_rate_improvement: float
    mpkb_improvement: float


def compare_reports(baseline: PredictorReport, variant: PredictorReport) -> DeltaReport:
    """Per-site and aggregate improvement of ``variant`` over ``baseline``."""
    if baseline.total_events != variant.total_events:
        raise ValueError("reports come from traces of different length")
    key = [(s.site_id, s.label, s.occurrences, s.taken) for s in baseline.per_site]
    if key != [(s.site_id, s.label, s.occurrences, s.taken) for s in variant.per_site]:
        raise ValueError("reports come from different traces")
    rows = []
    for b, v in zip(baseline.per_site, variant.per_site):
        bm, vm = baseline.site_mpkb(b), variant.site_mpkb(v)
        rows.append(SiteDelta(v, b.miss_rate, v.miss_rate,
                              improvement(b.miss_rate, v.miss_rate),
                              bm, vm, improvement(bm, vm)))
    return DeltaReport(
        baseline, variant, rows,
        improvement(baseline.overall_miss_rate, variant.overall_miss_rate),
        improvement(baseline.mpkb, variant.mpkb),
    )


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _f(x: float) -> str:
    return f"{x:.6f}"


def _site_row(report: PredictorReport, s: BranchSiteStats) -> list:
    bias = s.bias_class or "na"
    return [s.label, s.kernel, s.line_tag, s.occurrences, s.taken, s.not_taken, bias,
            s.mispredictions, _f(s.miss_rate), _f(report.site_mpkb(s))]


def _total_row(report: PredictorReport) -> list:
    taken = sum(s.taken for s in report.per_site)
    bias = classify_bias((taken, report.total_events)) if report.total_events else "na"
    return ["TOTAL", "", "", report.total_events, taken, report.total_events - taken,
            bias, report.total_mispredictions, _f(report.overall_miss_rate),
            _f(report.mpkb)]


def report_csv(report: PredictorReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for s in report.per_site:
        w.writerow(_site_row(report, s))
    w.writerow(_total_row(report))
    return buf.getvalue()


def delta_csv(delta: DeltaReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DELTA_COLUMNS)
    for d in delta.per_site:
        w.writerow(_site_row(delta.variant, d.stats)
                   + [_f(d.baseline_miss_rate), _f(d.variant_miss_rate),
                      _f(d.miss_rate_improvement)])
    w.writerow(_total_row(delta.variant)
               + [_f(delta.baseline.overall_miss_rate), _f(delta.variant.overall_miss_rate),
                  _f(delta.miss_rate_improvement)])
    return buf.getvalue()


def critical_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CRITICAL_COLUMNS)
    for r in rows:
        s = r["stats"]
        w.writerow([r["rank"], s.label, s.kernel, s.line_tag, s.occurrences, _f(r["share"]),
                    _f(r["cumulative_coverage"]), r["bias"] or "na", _f(r["miss_rate"]),
                    int(r["critical"])])
    return buf.getvalue()


def read_report_csv(text: str, config: PredictorConfig | None = None) -> PredictorReport:
    """Rebuild a report from :func:`report_csv` output (TOTAL row is checked)."""
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows or list(rows[0].keys()) != REPORT_COLUMNS:
        raise ReportFormatError("not a report CSV")
    total = None
    per_site = []
    for i, r in enumerate(rows):
        if r["site"] == "TOTAL":
            total = r
            continue
        try:
            per_site.append(BranchSiteStats(
                i, int(r["occurrences"]), int(r["taken"]), int(r["mispredictions"]),
                r["site"], r["kernel"], int(r["line_tag"])))
        except (TypeError, ValueError) as exc:
            raise ReportFormatError(f"row {i + 2}: {exc}") from None
    if total is None:
        raise ReportFormatError("report CSV lacks a TOTAL row")
    try:
        return PredictorReport(config or PredictorConfig("perfect"),
                               int(total["occurrences"]), int(total["mispredictions"]),
                               per_site)
    except ValueError as exc:
        raise ReportFormatError(str(exc)) from None


def comparison_csv(reports: list[PredictorReport]) -> str:
    """One row per predictor: aggregate counts for a sweep."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["predictor", "config", "total_events", "mispredictions", "miss_rate", "mpkb"])
    for r in reports:
        w.writerow([r.config.slug, r.config.text, r.total_events, r.total_mispredictions,
                    _f(r.overall_miss_rate), _f(r.mpkb)])
    return buf.getvalue()
