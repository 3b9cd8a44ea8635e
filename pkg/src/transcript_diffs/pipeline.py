"""Glue: compare transcript pairs and run a manifest through to a matrix report."""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .align import Alignment, CostModel, DEFAULT_CELL_BUDGET, align
from .corpus import NormalizationConfig, Token, read_transcript, tokenize_and_normalize
from .hypotheses import Attribution, CategoryRule, attribute
from .metrics import ErrorCounts, count_errors
from .report import MatrixReport, build_matrix, build_pair_report

__all__ = ["ManifestEntry", "ManifestError", "compare", "load_manifest", "run_matrix"]


class ManifestError(ValueError):
    def __init__(self, message: str, missing: Sequence[str] = ()):
        super().__init__(message)
        self.missing = list(missing)


class NoSharedFilesError(ValueError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    file_id: str
    version_id: str
    path: Path
    format: str = "auto"


def load_manifest(path: str | Path) -> list[ManifestEntry]:
    """Parse a manifest; relative paths resolve against the manifest's directory."""
    path = Path(path)
    try:
        rows = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ManifestError(f"manifest not found: {path}", [str(path)]) from None
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(rows, list):
        raise ManifestError(f"{path}: manifest must be a JSON array")
    entries = []
    seen = set()
    for i, row in enumerate(rows):
        try:
            e = ManifestEntry(
                file_id=str(row["file_id"]),
                version_id=str(row["version_id"]),
                path=(path.parent / row["path"]),
                format=row.get("format", "auto"),
            )
        except (KeyError, TypeError):
            raise ManifestError(f"{path}: row {i} needs file_id, version_id and path") from None
        if (e.file_id, e.version_id) in seen:
            raise ManifestError(f"{path}: duplicate transcript {e.file_id}/{e.version_id}")
        seen.add((e.file_id, e.version_id))
        entries.append(e)
    missing = sorted(str(e.path) for e in entries if not e.path.is_file())
    if missing:
        raise ManifestError("missing transcript file(s): " + ", ".join(missing), missing)
    return entries


def compare(
    ref_tokens: Sequence[Token],
    hyp_tokens: Sequence[Token],
    rules: Sequence[CategoryRule],
    costs: CostModel | None = None,
    ref_key: tuple[str, str] = ("", ""),
    hyp_key: tuple[str, str] = ("", ""),
    cell_budget: int = DEFAULT_CELL_BUDGET,
) -> tuple[Alignment, ErrorCounts, Attribution]:
    a = align(ref_tokens, hyp_tokens, costs, ref_key=ref_key, hyp_key=hyp_key, cell_budget=cell_budget)
    return a, count_errors(a), attribute(a, ref_tokens, hyp_tokens, rules)


def _task(args):
    ref_tokens, hyp_tokens, rules, costs, ref_key, hyp_key, cell_budget = args
    _, counts, att = compare(ref_tokens, hyp_tokens, rules, costs, ref_key, hyp_key, cell_budget)
    return counts, att


def run_matrix(
    entries: Sequence[ManifestEntry],
    rules: Sequence[CategoryRule],
    cfg: NormalizationConfig | None = None,
    costs: CostModel | None = None,
    jobs: int = 1,
    cell_budget: int = DEFAULT_CELL_BUDGET,
    assumptions: dict | None = None,
) -> MatrixReport:
    """Align every ordered version pair on every shared file, attribute and aggregate."""
    cfg = cfg or NormalizationConfig()
    costs = costs or CostModel()
    tokens: dict[tuple[str, str], list[Token]] = {}
    for e in sorted(entries, key=lambda e: (e.file_id, e.version_id)):
        t = read_transcript(e.path, e.file_id, e.version_id, e.format)
        tokens[(e.file_id, e.version_id)] = tokenize_and_normalize(t, cfg)

    versions = sorted({v for _, v in tokens})
    by_file: dict[str, set[str]] = {}
    for f, v in tokens:
        by_file.setdefault(f, set()).add(v)
    shared = sorted(f for f, vs in by_file.items() if len(vs) >= 2)
    if len(versions) < 2 or not shared:
        raise NoSharedFilesError("no file_id is transcribed by two or more versions")

    tasks, keys = [], []
    for r in versions:
        for h in versions:
            if r == h:
                continue
            for f in shared:
                if r in by_file[f] and h in by_file[f]:
                    keys.append((r, h))
                    tasks.append((tokens[(f, r)], tokens[(f, h)], rules, costs, (f, r), (f, h), cell_budget))

    if jobs == 0:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(tasks) <= 1:
        results = [_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))

    grouped: dict[tuple[str, str], list] = {}
    for key, res in zip(keys, results):
        grouped.setdefault(key, []).append(res)
    pair_reports = [build_pair_report(grouped[k], *k) for k in sorted(grouped)]
    return build_matrix(pair_reports, versions=versions, assumptions=assumptions)
