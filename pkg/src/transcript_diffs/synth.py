"""Synthesize transcript variants with known, labelled differences.

Used to build fixtures with ground truth for attribution.  Each injection
subtype has an eligibility test over the original token list; sites are
sampled with a seeded RNG and kept apart so that every injected edit ends up
in its own alignment region with at least one matched token around it.
"""
from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from typing import Callable, Mapping, Sequence

from .corpus import NormalizationConfig, Token, _make_token
from .hypotheses import Category

__all__ = ["CapacityError", "InjectedEdit", "SUBTYPES", "inject_differences"]

PRONOUNS = frozenset({"i", "you", "he", "she", "we", "they", "it"})
NEG_AUX = frozenset({"do", "does", "did", "is", "was", "are", "were", "could", "should", "would", "has", "have", "had"})
REDUCED = {
    ("going", "to"): "gonna",
    ("want", "to"): "wanna",
    ("got", "to"): "gotta",
    ("kind", "of"): "kinda",
    ("sort", "of"): "sorta",
    ("out", "of"): "outta",
    ("trying", "to"): "tryna",
    ("let", "me"): "lemme",
    ("give", "me"): "gimme",
}
NEG_CONCORD = {"any": "no", "anything": "nothing", "anybody": "nobody", "ever": "never"}
AINT_FROM = frozenset({"isn't", "aren't", "don't", "doesn't", "didn't", "haven't", "hasn't"})


class CapacityError(ValueError):
    def __init__(self, subtype: str, requested: int, available: int):
        super().__init__(
            f"{subtype}: requested {requested} injections but only {available} eligible sites"
        )
        self.subtype = subtype
        self.requested = requested
        self.available = available


@dataclass(frozen=True)
class InjectedEdit:
    category: Category
    subtype: str
    ref_start: int
    ref_stop: int
    hyp_start: int
    hyp_stop: int
    old: tuple[str, ...]
    new: tuple[str, ...]

    @property
    def n_entries(self) -> int:
        """Alignment entries this edit produces when aligned in isolation."""
        return max(len(self.old), len(self.new))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["category"] = self.category.value
        d["old"] = list(self.old)
        d["new"] = list(self.new)
        d["n_entries"] = self.n_entries
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "InjectedEdit":
        return cls(
            Category(d["category"]),
            d["subtype"],
            d["ref_start"],
            d["ref_stop"],
            d["hyp_start"],
            d["hyp_stop"],
            tuple(d["old"]),
            tuple(d["new"]),
        )


@dataclass(frozen=True)
class _Site:
    start: int  # ref span replaced: [start, stop); start == stop is an insertion gap
    stop: int
    new: tuple[str, ...]

    def zone(self) -> range:
        # the replaced span plus one untouched neighbour each side
        return range(self.start - 1, self.stop + 1)


class _Ctx:
    def __init__(self, tokens: Sequence[Token], reserved: frozenset[str]):
        self.t = tokens
        self.n = len(tokens)
        self.reserved = reserved

    def norm(self, i: int) -> str | None:
        return self.t[i].norm if 0 <= i < self.n else None

    def plain(self, i: int) -> bool:
        """An ordinary word: alphabetic, not a filler/fragment, not mentioned by any rule."""
        if not 0 <= i < self.n:
            return False
        tok = self.t[i]
        return (
            tok.norm.isalpha()
            and len(tok.norm) >= 2
            and not tok.is_filler
            and not tok.is_restart_fragment
            and not tok.is_nonspeech_tag
            and tok.norm not in self.reserved
        )

    def inner(self, i: int, width: int = 1) -> bool:
        return i >= 1 and i + width < self.n


def _filler_insertions(c: _Ctx, rng: random.Random) -> list[_Site]:
    sites = []
    for g in range(1, c.n):
        if c.plain(g - 1) and c.plain(g):
            sites.append(_Site(g, g, (rng.choice(("um", "uh")),)))
    return sites


def _filler_deletions(c: _Ctx, rng) -> list[_Site]:
    return [
        _Site(i, i + 1, ())
        for i in range(1, c.n - 1)
        if c.t[i].is_filler and c.plain(i - 1) and c.plain(i + 1)
    ]


def _filler_substitutions(c: _Ctx, rng) -> list[_Site]:
    swap = {"um": "uh", "uh": "um"}
    return [
        _Site(i, i + 1, (swap[c.t[i].norm],))
        for i in range(1, c.n - 1)
        if c.t[i].norm in swap and c.plain(i - 1) and c.plain(i + 1)
    ]


def _repetition_insertions(c: _Ctx, rng) -> list[_Site]:
    return [
        _Site(i + 1, i + 1, (c.t[i].norm,))
        for i in range(1, c.n - 1)
        if c.plain(i) and c.plain(i - 1) and c.plain(i + 1) and c.norm(i - 1) != c.norm(i) != c.norm(i + 1)
    ]


def _restart_insertions(c: _Ctx, rng) -> list[_Site]:
    sites = []
    for i in range(1, c.n - 1):
        if c.plain(i) and c.plain(i - 1):
            w = c.t[i].norm
            frag = (w if len(w) <= 3 else w[: (len(w) + 1) // 2]) + "-"
            sites.append(_Site(i, i, (frag,)))
    return sites


def _restart_indications(c: _Ctx, rng) -> list[_Site]:
    return [
        _Site(i, i + 1, (c.t[i].norm + "-",))
        for i in range(1, c.n - 1)
        if c.plain(i) and c.plain(i - 1) and c.plain(i + 1)
    ]


def _contraction_swaps(c: _Ctx, rng) -> list[_Site]:
    sites = []
    for i in range(1, c.n - 2):
        a, b = c.norm(i), c.norm(i + 1)
        if a in PRONOUNS and b == "will":
            sites.append(_Site(i, i + 2, (a + "'ll",)))
        elif a in PRONOUNS and b == "have":
            sites.append(_Site(i, i + 2, (a + "'ve",)))
        elif a in NEG_AUX and b == "not":
            sites.append(_Site(i, i + 2, (a + "n't",)))
    return sites


def _reduced_form_swaps(c: _Ctx, rng) -> list[_Site]:
    sites = []
    for i in range(1, c.n - 2):
        red = REDUCED.get((c.norm(i), c.norm(i + 1)))
        if red and c.norm(i - 1) != red and c.norm(i + 2) != red:
            sites.append(_Site(i, i + 2, (red,)))
    return sites


def _copula_deletions(c: _Ctx, rng) -> list[_Site]:
    return [
        _Site(i, i + 1, ())
        for i in range(1, c.n - 1)
        if c.norm(i) in ("is", "are")
        and c.t[i - 1].norm.isalpha()
        and c.norm(i - 1) not in ("is", "are")
        and c.norm(i + 1) not in ("is", "are", "not")
    ]


def _substitution_sites(mapping: Mapping[str, str]) -> Callable:
    def sites(c: _Ctx, rng) -> list[_Site]:
        return [
            _Site(i, i + 1, (mapping[c.norm(i)],))
            for i in range(1, c.n - 1)
            if c.norm(i) in mapping and c.norm(i + 1) != mapping[c.norm(i)]
        ]

    return sites


def _aint_negation(c: _Ctx, rng) -> list[_Site]:
    return [_Site(i, i + 1, ("ain't",)) for i in range(1, c.n - 1) if c.norm(i) in AINT_FROM]


# canonical order: sites are drawn subtype by subtype in this order
SUBTYPES: dict[str, tuple[Category, Callable]] = {
    "copula_deletions": (Category.MORPHOSYNTACTIC, _copula_deletions),
    "invariant_be": (Category.MORPHOSYNTACTIC, _substitution_sites({"is": "be", "are": "be"})),
    "negative_concord": (Category.MORPHOSYNTACTIC, _substitution_sites(NEG_CONCORD)),
    "was_were": (Category.MORPHOSYNTACTIC, _substitution_sites({"was": "were", "were": "was"})),
    "them_those": (Category.MORPHOSYNTACTIC, _substitution_sites({"those": "them", "them": "those"})),
    "dont_doesnt": (Category.MORPHOSYNTACTIC, _substitution_sites({"don't": "doesn't", "doesn't": "don't"})),
    "aint_negation": (Category.MORPHOSYNTACTIC, _aint_negation),
    "contraction_swaps": (Category.REDUCTION, _contraction_swaps),
    "reduced_form_swaps": (Category.REDUCTION, _reduced_form_swaps),
    "filler_deletions": (Category.VERBATIM, _filler_deletions),
    "filler_substitutions": (Category.VERBATIM, _filler_substitutions),
    "filler_insertions": (Category.VERBATIM, _filler_insertions),
    "repetition_insertions": (Category.VERBATIM, _repetition_insertions),
    "restart_insertions": (Category.VERBATIM, _restart_insertions),
    "restart_indications": (Category.VERBATIM, _restart_indications),
}


def inject_differences(
    tokens: Sequence[Token],
    plan: Mapping[str, int],
    seed: int,
    *,
    cfg: NormalizationConfig | None = None,
    reserved: frozenset[str] = frozenset(),
) -> tuple[list[Token], list[InjectedEdit]]:
    """Apply ``plan`` (subtype -> count) at seeded random, mutually separated sites.

    ``reserved`` words are never used as sites for the generic verbatim
    injections; pass the ruleset vocabulary so that no rule can claim them.
    """
    cfg = cfg or NormalizationConfig()
    unknown = sorted(set(plan) - set(SUBTYPES))
    if unknown:
        raise ValueError(f"unknown injection subtype(s): {', '.join(unknown)}")
    rng = random.Random(seed)
    ctx = _Ctx(tokens, frozenset(reserved))
    used: set[int] = set()
    chosen: list[tuple[_Site, str, Category]] = []
    for subtype, (category, finder) in SUBTYPES.items():
        want = plan.get(subtype, 0)
        if want < 0:
            raise ValueError(f"{subtype}: negative count")
        if want == 0:
            continue
        sites = finder(ctx, rng)
        if len(sites) < want:
            raise CapacityError(subtype, want, len(sites))
        rng.shuffle(sites)
        got = 0
        for site in sites:
            if any(i in used for i in site.zone()):
                continue
            used.update(site.zone())
            chosen.append((site, subtype, category))
            got += 1
            if got == want:
                break
        if got < want:
            raise CapacityError(subtype, want, got)

    chosen.sort(key=lambda item: (item[0].start, item[0].stop))
    out: list[Token] = []
    edits: list[InjectedEdit] = []
    pos = 0
    for site, subtype, category in chosen:
        out.extend(tokens[pos:site.start])
        hyp_start = len(out)
        for w in site.new:
            out.append(_make_token(w, w, 0, cfg))
        edits.append(
            InjectedEdit(
                category=category,
                subtype=subtype,
                ref_start=site.start,
                ref_stop=site.stop,
                hyp_start=hyp_start,
                hyp_stop=len(out),
                old=tuple(t.norm for t in tokens[site.start:site.stop]),
                new=site.new,
            )
        )
        pos = site.stop
    out.extend(tokens[pos:])
    out = [Token(t.surface, t.norm, i, t.is_filler, t.is_restart_fragment, t.is_nonspeech_tag) for i, t in enumerate(out)]
    return out, edits


def ground_truth_to_json(edits: Sequence[InjectedEdit], plan: Mapping[str, int], seed: int) -> str:
    return json.dumps(
        {"seed": seed, "plan": dict(sorted(plan.items())), "edits": [e.to_dict() for e in edits]},
        indent=1,
        ensure_ascii=False,
    ) + "\n"


def ground_truth_from_json(text: str) -> list[InjectedEdit]:
    return [InjectedEdit.from_dict(d) for d in json.loads(text)["edits"]]
