"""Per-pair and cross-version aggregate reports.

Percentages are over alignment entries (the same denominator as WER), and
corpus figures are micro-averaged: counts are summed over files before any
ratio is formed.  The cross-pair category summary averages the two
directions of each unordered version pair first, then takes the mean and
population standard deviation over pairs.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .hypotheses import Attribution, Category
from .metrics import ErrorCounts, WerBreakdown, aggregate_counts, wer

__all__ = [
    "ConsistencyError",
    "MatrixReport",
    "PairReport",
    "build_matrix",
    "build_pair_report",
    "matrix_from_json",
    "render",
]

REPORT_CATEGORIES = (
    Category.MORPHOSYNTACTIC,
    Category.REDUCTION,
    Category.VERBATIM,
    Category.UNACCOUNTED,
)
CSV_METRICS = (
    "wer",
    "sub_rate",
    "ins_rate",
    "del_rate",
    "pct_morphosyntactic",
    "pct_reduction",
    "pct_verbatim",
    "pct_unaccounted",
)
FORMATS = ("json", "csv", "text")


class ConsistencyError(ValueError):
    pass


@dataclass(frozen=True)
class FileResult:
    file_id: str
    counts: ErrorCounts


@dataclass(frozen=True)
class PairReport:
    ref_version: str
    hyp_version: str
    counts: ErrorCounts
    category_counts: Mapping[Category, int]
    rule_counts: Mapping[str, int]
    file_count: int
    per_file: tuple[FileResult, ...] = ()

    @property
    def total_errors(self) -> int:
        return self.counts.errors

    @property
    def zero_error(self) -> bool:
        return self.total_errors == 0

    @property
    def breakdown(self) -> WerBreakdown | None:
        return wer(self.counts) if self.counts.n_ref else None

    @property
    def category_pcts(self) -> dict[Category, float]:
        total = self.total_errors
        if total == 0:
            return {c: 0.0 for c in REPORT_CATEGORIES}
        return {c: 100.0 * self.category_counts.get(c, 0) / total for c in REPORT_CATEGORIES}


def build_pair_report(
    per_file: Iterable[tuple[ErrorCounts, Attribution]],
    ref_version: str | None = None,
    hyp_version: str | None = None,
) -> PairReport:
    items = list(per_file)
    pairs = {(att.ref[1], att.hyp[1]) for _, att in items}
    if ref_version is not None or hyp_version is not None:
        pairs.add((ref_version, hyp_version))
    if len(pairs) != 1:
        if not pairs:
            raise ConsistencyError("no files given and no version pair declared")
        raise ConsistencyError(f"mixed version pairs in one pair report: {sorted(pairs)}")
    (ref_v, hyp_v), = pairs

    items.sort(key=lambda it: it[1].ref[0])
    file_ids = [att.ref[0] for _, att in items]
    if len(set(file_ids)) != len(file_ids):
        raise ConsistencyError("a file appears twice in one pair report")
    for counts, att in items:
        if len(att.entries) != counts.errors:
            raise ConsistencyError(
                f"{att.ref[0]}: attribution has {len(att.entries)} entries but counts show {counts.errors} errors"
            )

    cat_counts = {c: 0 for c in REPORT_CATEGORIES}
    rule_counts: dict[str, int] = {}
    for _, att in items:
        for cat, n in att.category_counts().items():
            cat_counts[cat] += n
        for rid, n in att.rule_counts().items():
            rule_counts[rid] = rule_counts.get(rid, 0) + n
    return PairReport(
        ref_version=ref_v,
        hyp_version=hyp_v,
        counts=aggregate_counts(c for c, _ in items),
        category_counts=cat_counts,
        rule_counts=dict(sorted(rule_counts.items())),
        file_count=len(items),
        per_file=tuple(FileResult(att.ref[0], c) for c, att in items),
    )


def _mean_pstdev(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / n
    return mean, math.sqrt(var)


@dataclass(frozen=True)
class MatrixReport:
    versions: tuple[str, ...]
    cells: Mapping[tuple[str, str], PairReport]
    category_summary: Mapping[Category, tuple[float, float]]
    ordered_summary: Mapping[Category, tuple[float, float]] = field(default_factory=dict)
    unordered_pcts: Mapping[tuple[str, str], Mapping[Category, float]] = field(default_factory=dict)
    assumptions: Mapping[str, object] = field(default_factory=dict)

    def ordered_pairs(self) -> list[tuple[str, str]]:
        rank = {v: i for i, v in enumerate(self.versions)}
        return sorted(self.cells, key=lambda k: (rank[k[0]], rank[k[1]]))


def build_matrix(
    pair_reports: Iterable[PairReport],
    versions: Sequence[str] | None = None,
    assumptions: Mapping[str, object] | None = None,
) -> MatrixReport:
    cells: dict[tuple[str, str], PairReport] = {}
    for pr in pair_reports:
        key = (pr.ref_version, pr.hyp_version)
        if key in cells:
            raise ConsistencyError(f"duplicate cell for pair {key[0]}|{key[1]}")
        if key[0] == key[1]:
            raise ConsistencyError(f"self-pair {key[0]}|{key[1]} is not a comparison")
        cells[key] = pr
    if versions is None:
        versions = sorted({v for k in cells for v in k})
    else:
        versions = list(versions)
        unknown = {v for k in cells for v in k} - set(versions)
        if unknown:
            raise ConsistencyError(f"pair versions not in the declared list: {sorted(unknown)}")

    unordered: dict[tuple[str, str], dict[Category, float]] = {}
    rank = {v: i for i, v in enumerate(versions)}
    groups: dict[tuple[str, str], list[PairReport]] = {}
    for (r, h), pr in cells.items():
        key = (r, h) if rank[r] < rank[h] else (h, r)
        groups.setdefault(key, []).append(pr)
    for key in sorted(groups, key=lambda k: (rank[k[0]], rank[k[1]])):
        prs = groups[key]
        unordered[key] = {
            c: math.fsum(p.category_pcts[c] for p in prs) / len(prs) for c in REPORT_CATEGORIES
        }

    summary = {}
    ordered = {}
    if cells:
        for c in REPORT_CATEGORIES:
            summary[c] = _mean_pstdev([u[c] for u in unordered.values()])
            ordered[c] = _mean_pstdev(
                [cells[k].category_pcts[c] for k in sorted(cells, key=lambda k: (rank[k[0]], rank[k[1]]))]
            )
    return MatrixReport(
        versions=tuple(versions),
        cells=cells,
        category_summary=summary,
        ordered_summary=ordered,
        unordered_pcts=unordered,
        assumptions=dict(assumptions or {}),
    )


# ------------------------------------------------------------------ output


def _ratio(x: float) -> float:
    return round(x, 6)


def _pct(x: float) -> float:
    return round(x, 2)


def _metrics_fragment(counts: ErrorCounts) -> dict:
    d = counts.to_dict()
    if counts.n_ref:
        b = wer(counts)
        d.update({k: _ratio(v) for k, v in b.to_dict().items()})
    else:
        d.update({"wer": None, "sub_rate": None, "ins_rate": None, "del_rate": None})
    return d


def pair_to_dict(pr: PairReport) -> dict:
    pcts = pr.category_pcts
    return {
        "ref_version": pr.ref_version,
        "hyp_version": pr.hyp_version,
        "file_count": pr.file_count,
        "zero_error": pr.zero_error,
        "metrics": _metrics_fragment(pr.counts),
        "category_counts": {c.value: pr.category_counts.get(c, 0) for c in REPORT_CATEGORIES},
        "category_pcts": {c.value: _pct(pcts[c]) for c in REPORT_CATEGORIES},
        "rule_counts": dict(sorted(pr.rule_counts.items())),
        "per_file": [{"file_id": f.file_id, **_metrics_fragment(f.counts)} for f in pr.per_file],
    }


def _summary_dict(summary: Mapping[Category, tuple[float, float]]) -> dict:
    return {
        c.value: {"mean_pct": _pct(summary[c][0]), "stddev_pct": _pct(summary[c][1])}
        for c in REPORT_CATEGORIES
        if c in summary
    }


def matrix_to_dict(m: MatrixReport) -> dict:
    return {
        "versions": list(m.versions),
        "cells": {f"{r}|{h}": pair_to_dict(m.cells[(r, h)]) for r, h in m.ordered_pairs()},
        "category_summary": _summary_dict(m.category_summary),
        "category_summary_ordered": _summary_dict(m.ordered_summary),
        "unordered_pairs": {
            f"{a}|{b}": {c.value: _pct(v) for c, v in pcts.items()} for (a, b), pcts in m.unordered_pcts.items()
        },
        "assumptions": m.assumptions,
    }


def _counts_from(d: dict) -> ErrorCounts:
    return ErrorCounts(d["n_ref"], d["matches"], d["subs"], d["inss"], d["dels"])


def matrix_from_json(text: str | bytes) -> MatrixReport:
    """Rebuild a MatrixReport from its JSON rendering (derived values are recomputed from counts)."""
    d = json.loads(text)
    cells = []
    for cell in d["cells"].values():
        cells.append(
            PairReport(
                ref_version=cell["ref_version"],
                hyp_version=cell["hyp_version"],
                counts=_counts_from(cell["metrics"]),
                category_counts={Category(k): v for k, v in cell["category_counts"].items()},
                rule_counts=dict(cell["rule_counts"]),
                file_count=cell["file_count"],
                per_file=tuple(FileResult(f["file_id"], _counts_from(f)) for f in cell["per_file"]),
            )
        )
    return build_matrix(cells, versions=d["versions"], assumptions=d.get("assumptions", {}))


def _render_json(m: MatrixReport) -> str:
    return json.dumps(matrix_to_dict(m), indent=2, ensure_ascii=False) + "\n"


def _render_csv(m: MatrixReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ref_version", "hyp_version", "metric", "value"])
    for r, h in m.ordered_pairs():
        pr = m.cells[(r, h)]
        b = pr.breakdown
        pcts = pr.category_pcts
        values = {
            "wer": b.wer if b else None,
            "sub_rate": b.sub_rate if b else None,
            "ins_rate": b.ins_rate if b else None,
            "del_rate": b.del_rate if b else None,
            "pct_morphosyntactic": pcts[Category.MORPHOSYNTACTIC],
            "pct_reduction": pcts[Category.REDUCTION],
            "pct_verbatim": pcts[Category.VERBATIM],
            "pct_unaccounted": pcts[Category.UNACCOUNTED],
        }
        for metric in CSV_METRICS:
            v = values[metric]
            if v is None:
                cell = ""
            elif metric.startswith("pct_"):
                cell = f"{v:.2f}"
            else:
                cell = f"{v:.6f}"
            w.writerow([r, h, metric, cell])
    return buf.getvalue()


def format_wer_line(b: WerBreakdown) -> str:
    return (
        f"WER {100 * b.wer:.1f}% "
        f"(S {100 * b.sub_rate:.1f} D {100 * b.del_rate:.1f} I {100 * b.ins_rate:.1f})"
    )


def _render_text(m: MatrixReport) -> str:
    header = ("ref", "hyp", "files", "N", "WER%", "S%", "D%", "I%", "MS%", "RED%", "VERB%", "UNACC%")
    rows = []
    for r, h in m.ordered_pairs():
        pr = m.cells[(r, h)]
        b = pr.breakdown
        pcts = pr.category_pcts
        rates = (
            [f"{100 * b.wer:.1f}", f"{100 * b.sub_rate:.1f}", f"{100 * b.del_rate:.1f}", f"{100 * b.ins_rate:.1f}"]
            if b
            else ["-"] * 4
        )
        rows.append(
            [r, h, str(pr.file_count), str(pr.counts.n_ref), *rates]
            + [f"{pcts[c]:.1f}" for c in REPORT_CATEGORIES]
        )
    widths = [max(len(header[i]), *(len(row[i]) for row in rows)) if rows else len(header[i]) for i in range(len(header))]

    def line(cols):
        return "  ".join(c.ljust(w) if i < 2 else c.rjust(w) for i, (c, w) in enumerate(zip(cols, widths))).rstrip()

    out = [line(header)]
    out.extend(line(row) for row in rows)
    if not rows:
        out.append("(no version pairs)")
    else:
        out.append("")
        out.append(f"category summary over {len(m.unordered_pcts)} unordered pair(s): mean% (population sd)")
        for c in REPORT_CATEGORIES:
            mean, sd = m.category_summary[c]
            out.append(f"  {c.value:<16} {mean:6.2f}  ({sd:.2f})")
    return "\n".join(out) + "\n"


def render(m: MatrixReport, format: str = "json") -> bytes:
    if format == "json":
        return _render_json(m).encode("utf-8")
    if format == "csv":
        return _render_csv(m).encode("utf-8")
    if format == "text":
        return _render_text(m).encode("utf-8")
    raise ValueError(f"unknown report format {format!r} (expected one of {', '.join(FORMATS)})")
