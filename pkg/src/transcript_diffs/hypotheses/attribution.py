"""Attribute alignment differences to source-hypothesis categories.

Differences are grouped into regions (maximal runs of non-MATCH entries).
Within a region every rule and built-in verbatim test proposes candidate
sub-spans; candidates are then claimed greedily by category precedence,
longer claims first, then rule order, then leftmost.  Whatever is left over
is UNACCOUNTED.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..align import AlignEntry, AlignOp, Alignment
from ..corpus import Token
from .dsl import Alternation, Category, CategoryRule, Empty, Literal, Stem, StemSuffix

__all__ = [
    "AttributedEntry",
    "Attribution",
    "DEFAULT_PRECEDENCE",
    "DiffRegion",
    "Match",
    "attribute",
    "builtin_verbatim_tests",
    "extract_regions",
    "match_rule",
]

DEFAULT_PRECEDENCE = (Category.MORPHOSYNTACTIC, Category.REDUCTION, Category.VERBATIM)
CONTEXT = 2

BUILTIN_SUBTYPES = (
    "filler_deletion",
    "filler_substitution",
    "restart_indication",
    "restart_deletion",
    "repetition_deletion",
)


@dataclass(frozen=True)
class DiffRegion:
    """A maximal run of non-MATCH entries plus up to two matched entries each side.

    ``left_context``/``right_context`` hold ``(ref_token, hyp_token)`` pairs of
    the adjacent MATCH entries, in document order.
    """

    start: int
    stop: int
    entries: tuple[AlignEntry, ...]
    ref_tokens: tuple[Token, ...]
    hyp_tokens: tuple[Token, ...]
    left_context: tuple[tuple[Token, Token], ...] = ()
    right_context: tuple[tuple[Token, Token], ...] = ()

    @property
    def entry_span(self) -> range:
        return range(self.start, self.stop)

    def __len__(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class Match:
    rule_id: str
    category: Category
    subtype: str
    start: int  # absolute alignment entry index, inclusive
    stop: int  # exclusive
    order: int = 0
    bindings: tuple[tuple[str, str], ...] = ()

    @property
    def length(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class AttributedEntry:
    entry_index: int
    category: Category
    rule_id: str | None
    subtype: str | None


@dataclass(frozen=True)
class Attribution:
    ref: tuple[str, str]
    hyp: tuple[str, str]
    entries: tuple[AttributedEntry, ...] = field(default_factory=tuple)

    def category_counts(self) -> dict[Category, int]:
        counts = {c: 0 for c in Category}
        for e in self.entries:
            counts[e.category] += 1
        return counts

    def rule_counts(self) -> dict[str, int]:
        return dict(Counter(e.rule_id for e in self.entries if e.rule_id is not None))

    def to_json(self) -> str:
        return json.dumps(
            [
                {
                    "entry_index": e.entry_index,
                    "category": e.category.value,
                    "rule_id": e.rule_id,
                    "subtype": e.subtype,
                }
                for e in self.entries
            ],
            ensure_ascii=False,
            indent=1,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str, ref=("", ""), hyp=("", "")) -> "Attribution":
        items = json.loads(text)
        return cls(
            tuple(ref),
            tuple(hyp),
            tuple(
                AttributedEntry(d["entry_index"], Category(d["category"]), d["rule_id"], d["subtype"])
                for d in items
            ),
        )


def extract_regions(
    a: Alignment, ref_tokens: Sequence[Token], hyp_tokens: Sequence[Token]
) -> list[DiffRegion]:
    entries = a.entries
    regions = []
    i = 0
    n = len(entries)
    while i < n:
        if entries[i].op is AlignOp.MATCH:
            i += 1
            continue
        start = i
        while i < n and entries[i].op is not AlignOp.MATCH:
            i += 1
        stop = i
        span = entries[start:stop]
        left = []
        k = start - 1
        while k >= 0 and len(left) < CONTEXT and entries[k].op is AlignOp.MATCH:
            left.append((ref_tokens[entries[k].ref_index], hyp_tokens[entries[k].hyp_index]))
            k -= 1
        right = []
        k = stop
        while k < n and len(right) < CONTEXT and entries[k].op is AlignOp.MATCH:
            right.append((ref_tokens[entries[k].ref_index], hyp_tokens[entries[k].hyp_index]))
            k += 1
        regions.append(
            DiffRegion(
                start=start,
                stop=stop,
                entries=span,
                ref_tokens=tuple(ref_tokens[e.ref_index] for e in span if e.ref_index is not None),
                hyp_tokens=tuple(hyp_tokens[e.hyp_index] for e in span if e.hyp_index is not None),
                left_context=tuple(reversed(left)),
                right_context=tuple(right),
            )
        )
    return regions


# ---------------------------------------------------------------- matching


def _bind(var: str, value: str, bindings: dict[str, str], min_stem: int) -> bool:
    if var in bindings:
        return bindings[var] == value
    if len(value) < min_stem:
        return False
    bindings[var] = value
    return True


def match_side(items, norms: Sequence[str], bindings: dict[str, str], min_stem: int = 1) -> bool:
    """Match pattern items against exactly ``norms``, extending ``bindings`` in place."""
    pos = 0
    for item in items:
        if isinstance(item, Empty):
            continue
        if pos + item.width > len(norms):
            return False
        tok = norms[pos]
        if isinstance(item, Literal):
            if tok != item.word:
                return False
        elif isinstance(item, Alternation):
            if tok not in item.words:
                return False
        elif isinstance(item, Stem):
            if not _bind(item.var, tok, bindings, min_stem):
                return False
        elif isinstance(item, StemSuffix):
            if item.attach == "spaced":
                if norms[pos + 1] != item.suffix or not _bind(item.var, tok, bindings, min_stem):
                    return False
            elif item.var in bindings:
                if tok != bindings[item.var] + item.glued:
                    return False
            else:
                glued = item.glued
                if not (len(tok) > len(glued) and tok.endswith(glued)):
                    return False
                if not _bind(item.var, tok[: -len(glued)], bindings, min_stem):
                    return False
        pos += item.width
    return pos == len(norms)


def _windows(region: DiffRegion, max_core: int):
    """Yield (core_start, core_stop, ref_norms, hyp_norms) over sub-spans and context extensions."""
    k = len(region.entries)
    # region-relative token offsets, so slicing a sub-span is cheap
    ref_pos = [0]
    hyp_pos = [0]
    for e in region.entries:
        ref_pos.append(ref_pos[-1] + (e.ref_index is not None))
        hyp_pos.append(hyp_pos[-1] + (e.hyp_index is not None))
    ref_norms = [t.norm for t in region.ref_tokens]
    hyp_norms = [t.norm for t in region.hyp_tokens]
    left = region.left_context
    right = region.right_context
    for s in range(k):
        for e in range(s + 1, min(k, s + max_core) + 1):
            core_ref = ref_norms[ref_pos[s]:ref_pos[e]]
            core_hyp = hyp_norms[hyp_pos[s]:hyp_pos[e]]
            for nl in range(len(left) + 1 if s == 0 else 1):
                lref = [p[0].norm for p in left[len(left) - nl:]]
                lhyp = [p[1].norm for p in left[len(left) - nl:]]
                for nr in range(len(right) + 1 if e == k else 1):
                    rref = [p[0].norm for p in right[:nr]]
                    rhyp = [p[1].norm for p in right[:nr]]
                    yield s, e, lref + core_ref + rref, lhyp + core_hyp + rhyp


def _try(rule: CategoryRule, mirrored: bool, ref_n, hyp_n) -> dict[str, str] | None:
    first, second = (rule.rhs, rule.lhs) if mirrored else (rule.lhs, rule.rhs)
    bindings: dict[str, str] = {}
    if match_side(first, ref_n, bindings, rule.min_stem) and match_side(
        second, hyp_n, bindings, rule.min_stem
    ):
        return bindings
    return None


def _orientations(rule: CategoryRule):
    yield rule.lhs_width, rule.rhs_width, False
    if rule.symmetric:
        yield rule.rhs_width, rule.lhs_width, True


def _match_windows(indexed, windows, region: DiffRegion) -> list[Match]:
    """``indexed`` maps (ref_width, hyp_width) to (order, rule, mirrored) triples."""
    out: list[Match] = []
    seen = set()
    for s, e, ref_n, hyp_n in windows:
        for order, rule, mirrored in indexed.get((len(ref_n), len(hyp_n)), ()):
            if (rule.rule_id, s, e) in seen:
                continue
            bindings = _try(rule, mirrored, ref_n, hyp_n)
            if bindings is None:
                continue
            seen.add((rule.rule_id, s, e))
            out.append(
                Match(
                    rule_id=rule.rule_id,
                    category=rule.category,
                    subtype=rule.subtype,
                    start=region.start + s,
                    stop=region.start + e,
                    order=order,
                    bindings=tuple(sorted(bindings.items())),
                )
            )
    return out


def _index(rules: Sequence[CategoryRule]):
    indexed: dict[tuple[int, int], list] = {}
    for order, rule in enumerate(rules):
        for ref_w, hyp_w, mirrored in _orientations(rule):
            indexed.setdefault((ref_w, hyp_w), []).append((order, rule, mirrored))
    return indexed


def match_rule(rule: CategoryRule, region: DiffRegion, order: int = 0) -> list[Match]:
    """Every sub-span of ``region`` the rule accounts for, in window order."""
    indexed = {}
    for ref_w, hyp_w, mirrored in _orientations(rule):
        indexed.setdefault((ref_w, hyp_w), []).append((order, rule, mirrored))
    windows = _windows(region, rule.lhs_width + rule.rhs_width)
    return _match_windows(indexed, windows, region)


def _side_sequences(region: DiffRegion):
    """Same-side token streams with context, each item tagged by its entry offset (None for context)."""
    ref_seq: list[tuple[Token, int | None]] = [(p[0], None) for p in region.left_context]
    hyp_seq: list[tuple[Token, int | None]] = [(p[1], None) for p in region.left_context]
    ri = hi = 0
    for off, e in enumerate(region.entries):
        if e.ref_index is not None:
            ref_seq.append((region.ref_tokens[ri], off))
            ri += 1
        if e.hyp_index is not None:
            hyp_seq.append((region.hyp_tokens[hi], off))
            hi += 1
    ref_seq += [(p[0], None) for p in region.right_context]
    hyp_seq += [(p[1], None) for p in region.right_context]
    return ref_seq, hyp_seq


def builtin_verbatim_tests(region: DiffRegion) -> list[tuple[str, Match]]:
    ref_seq, hyp_seq = _side_sequences(region)
    ref_at = {off: (tok, i) for i, (tok, off) in enumerate(ref_seq) if off is not None}
    hyp_at = {off: (tok, i) for i, (tok, off) in enumerate(hyp_seq) if off is not None}

    def repeated(seq, i):
        norm = seq[i][0].norm
        return (i > 0 and seq[i - 1][0].norm == norm) or (
            i + 1 < len(seq) and seq[i + 1][0].norm == norm
        )

    found: list[tuple[str, Match]] = []
    for off, e in enumerate(region.entries):
        subtypes = []
        if e.op is AlignOp.SUB:
            r, h = ref_at[off][0], hyp_at[off][0]
            if r.is_filler and h.is_filler:
                subtypes.append("filler_substitution")
            if r.norm == h.norm + "-" or h.norm == r.norm + "-":
                subtypes.append("restart_indication")
        else:
            seq, at = (ref_seq, ref_at) if e.op is AlignOp.DEL else (hyp_seq, hyp_at)
            tok, i = at[off]
            if tok.is_filler:
                subtypes.append("filler_deletion")
            if tok.is_restart_fragment:
                subtypes.append("restart_deletion")
            if repeated(seq, i):
                subtypes.append("repetition_deletion")
        for st in subtypes:
            idx = region.start + off
            found.append(
                (
                    st,
                    Match(
                        rule_id=f"builtin.{st}",
                        category=Category.VERBATIM,
                        subtype=st,
                        start=idx,
                        stop=idx + 1,
                        order=BUILTIN_SUBTYPES.index(st) - len(BUILTIN_SUBTYPES),
                    ),
                )
            )
    found.extend(_phrase_repetitions(region, ref_seq, hyp_seq, ref_at, hyp_at))
    return found


def _phrase_repetitions(region, ref_seq, hyp_seq, ref_at, hyp_at) -> list[tuple[str, Match]]:
    """Runs of k >= 2 dropped tokens that repeat the k tokens next to them ("the kids the kids")."""
    st = "repetition_deletion"
    order = BUILTIN_SUBTYPES.index(st) - len(BUILTIN_SUBTYPES)
    entries = region.entries
    found = []
    for s in range(len(entries)):
        op = entries[s].op
        if op not in (AlignOp.DEL, AlignOp.INS):
            continue
        seq, at = (ref_seq, ref_at) if op is AlignOp.DEL else (hyp_seq, hyp_at)
        e = s + 1
        while e < len(entries) and entries[e].op is op:
            e += 1
            k = e - s
            i = at[s][1]
            span = [t.norm for t, _ in seq[i:i + k]]
            before = [t.norm for t, _ in seq[max(0, i - k):i]]
            after = [t.norm for t, _ in seq[i + k:i + 2 * k]]
            if span == before or span == after:
                found.append(
                    (
                        st,
                        Match(
                            rule_id=f"builtin.{st}",
                            category=Category.VERBATIM,
                            subtype=st,
                            start=region.start + s,
                            stop=region.start + e,
                            order=order,
                        ),
                    )
                )
    return found


def _candidates(region: DiffRegion, indexed, max_core: int) -> list[Match]:
    cands = [m for _, m in builtin_verbatim_tests(region)]
    if indexed:
        cands.extend(_match_windows(indexed, _windows(region, max_core), region))
    return cands


def attribute(
    a: Alignment,
    ref_tokens: Sequence[Token],
    hyp_tokens: Sequence[Token],
    ruleset: Iterable[CategoryRule],
    precedence: Sequence[Category] = DEFAULT_PRECEDENCE,
) -> Attribution:
    rules = list(ruleset)
    indexed = _index(rules)
    max_core = max((r.lhs_width + r.rhs_width for r in rules), default=0)
    rank = {c: i for i, c in enumerate(precedence)}
    out: list[AttributedEntry] = []
    for region in extract_regions(a, ref_tokens, hyp_tokens):
        cands = [m for m in _candidates(region, indexed, max_core) if m.category in rank]
        cands.sort(key=lambda m: (rank[m.category], -m.length, m.order, m.start))
        claimed: dict[int, Match] = {}
        for m in cands:
            if any(i in claimed for i in range(m.start, m.stop)):
                continue
            for i in range(m.start, m.stop):
                claimed[i] = m
        for i in region.entry_span:
            m = claimed.get(i)
            if m is None:
                out.append(AttributedEntry(i, Category.UNACCOUNTED, None, None))
            else:
                out.append(AttributedEntry(i, m.category, m.rule_id, m.subtype))
    return Attribution(a.ref, a.hyp, tuple(out))
