"""Line-oriented rule language for difference-source tests.

One rule per line::

    <CAT> <rule_id> [SYM] [MINSTEM=n]: <lhs> => <rhs>

``CAT`` is ``MS``, ``RED`` or ``VERB-EXTRA``.  Sides are space-separated
pattern items:

    word          literal token
    {a|b|c}       any one of the listed tokens
    $x            stem variable (one token)
    $x+suf        token equal to the stem with ``suf`` fused on
    $x+'suf       stem + apostrophe + suf as one token
    $x+_suf       stem token followed by a separate ``suf`` token
    _             the whole side is empty (pure insertion/deletion)

``lhs`` is matched against reference tokens and ``rhs`` against hypothesis
tokens; ``SYM`` also tries the mirror.  ``MINSTEM=n`` rejects stem bindings
shorter than ``n`` characters.  ``#`` starts a comment.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Alternation",
    "Category",
    "CategoryRule",
    "Empty",
    "Literal",
    "RuleSyntaxError",
    "Stem",
    "StemSuffix",
    "load_reduced_forms",
    "parse_ruleset",
]


class Category(str, enum.Enum):
    MORPHOSYNTACTIC = "MORPHOSYNTACTIC"
    REDUCTION = "REDUCTION"
    VERBATIM = "VERBATIM"
    UNACCOUNTED = "UNACCOUNTED"


CATEGORY_CODES = {
    "MS": Category.MORPHOSYNTACTIC,
    "RED": Category.REDUCTION,
    "VERB-EXTRA": Category.VERBATIM,
}


class RuleSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Literal:
    word: str
    width = 1


@dataclass(frozen=True)
class Alternation:
    words: frozenset[str]
    width = 1


@dataclass(frozen=True)
class Stem:
    var: str
    width = 1


@dataclass(frozen=True)
class StemSuffix:
    var: str
    suffix: str
    attach: str  # "fused" | "apostrophe" | "spaced"

    @property
    def width(self) -> int:
        return 2 if self.attach == "spaced" else 1

    @property
    def glued(self) -> str:
        return "'" + self.suffix if self.attach == "apostrophe" else self.suffix


@dataclass(frozen=True)
class Empty:
    width = 0


PatternItem = Union[Literal, Alternation, Stem, StemSuffix, Empty]


@dataclass(frozen=True)
class CategoryRule:
    rule_id: str
    category: Category
    subtype: str
    lhs: tuple[PatternItem, ...]
    rhs: tuple[PatternItem, ...]
    symmetric: bool = False
    min_stem: int = 1
    line: int = 0

    @property
    def lhs_width(self) -> int:
        return sum(item.width for item in self.lhs)

    @property
    def rhs_width(self) -> int:
        return sum(item.width for item in self.rhs)

    def variables(self) -> set[str]:
        return {item.var for item in self.lhs + self.rhs if isinstance(item, (Stem, StemSuffix))}

    def vocabulary(self) -> set[str]:
        """Every literal token the rule can mention."""
        words: set[str] = set()
        for item in self.lhs + self.rhs:
            if isinstance(item, Literal):
                words.add(item.word)
            elif isinstance(item, Alternation):
                words |= item.words
        return words


_HEADER = re.compile(r"^(?P<cat>\S+)\s+(?P<id>\S+)(?P<flags>(?:\s+\S+)*)\s*$")
_STEM = re.compile(r"^\$([A-Za-z])$")
_STEM_SUFFIX = re.compile(r"^\$([A-Za-z])\+(.*)$")
_MINSTEM = re.compile(r"^MINSTEM=(\d+)$")


def _strip_comment(line: str) -> str:
    m = re.search(r"(^|\s)#", line)
    return line[: m.start()] if m else line


def _parse_item(raw: str, lineno: int, col: int) -> PatternItem:
    if raw == "_":
        return Empty()
    if raw.startswith("{"):
        if not raw.endswith("}") or len(raw) < 3:
            raise RuleSyntaxError(f"unterminated alternation {raw!r}", lineno, col)
        words = raw[1:-1].split("|")
        if any(not w or w != w.strip() or "{" in w or "}" in w for w in words):
            raise RuleSyntaxError(f"malformed alternation {raw!r}", lineno, col)
        return Alternation(frozenset(words))
    if raw.startswith("$"):
        m = _STEM.match(raw)
        if m:
            return Stem(m.group(1))
        m = _STEM_SUFFIX.match(raw)
        if not m:
            raise RuleSyntaxError(f"stem variables are a single letter: {raw!r}", lineno, col)
        var, tail = m.groups()
        if tail.startswith("_"):
            attach, suffix = "spaced", tail[1:]
        elif tail.startswith("'"):
            attach, suffix = "apostrophe", tail[1:]
        else:
            attach, suffix = "fused", tail
        if not suffix:
            raise RuleSyntaxError(f"empty suffix in {raw!r}", lineno, col)
        return StemSuffix(var, suffix, attach)
    if any(c in raw for c in "{}|$"):
        raise RuleSyntaxError(f"unexpected character in {raw!r}", lineno, col)
    return Literal(raw)


def _parse_side(text: str, lineno: int, col0: int) -> tuple[PatternItem, ...]:
    items = []
    for m in re.finditer(r"\S+", text):
        items.append(_parse_item(m.group(0), lineno, col0 + m.start()))
    if not items:
        raise RuleSyntaxError("empty pattern side (use _ for an empty side)", lineno, col0)
    if any(isinstance(i, Empty) for i in items) and len(items) > 1:
        raise RuleSyntaxError("_ must be the entire side", lineno, col0)
    return tuple(items)


def parse_rule_line(line: str, lineno: int) -> CategoryRule | None:
    body = _strip_comment(line)
    if not body.strip():
        return None
    colon = body.find(":")
    if colon < 0:
        raise RuleSyntaxError("expected ':' after rule header", lineno, len(body.rstrip()) + 1)
    header = body[:colon]
    m = _HEADER.match(header.strip())
    if not m:
        raise RuleSyntaxError("expected '<CAT> <rule_id> [SYM]'", lineno, 1)
    cat = m.group("cat")
    if cat not in CATEGORY_CODES:
        col = header.find(cat) + 1
        raise RuleSyntaxError(f"unknown category {cat!r} (expected MS, RED or VERB-EXTRA)", lineno, col)
    rule_id = m.group("id")
    symmetric = False
    min_stem = 1
    for flag in m.group("flags").split():
        col = header.find(flag) + 1
        if flag == "SYM":
            symmetric = True
        elif _MINSTEM.match(flag):
            min_stem = int(_MINSTEM.match(flag).group(1))
        else:
            raise RuleSyntaxError(f"unknown flag {flag!r}", lineno, col)

    rest = body[colon + 1:]
    arrow = rest.find("=>")
    if arrow < 0:
        raise RuleSyntaxError("expected '=>' between sides", lineno, colon + 2)
    if rest.find("=>", arrow + 2) >= 0:
        raise RuleSyntaxError("more than one '=>'", lineno, colon + 2 + rest.find("=>", arrow + 2))
    lhs = _parse_side(rest[:arrow], lineno, colon + 2)
    rhs = _parse_side(rest[arrow + 2:], lineno, colon + 2 + arrow + 2)
    if isinstance(lhs[0], Empty) and isinstance(rhs[0], Empty):
        raise RuleSyntaxError("both sides are empty", lineno, colon + 2)

    lhs_vars = {i.var for i in lhs if isinstance(i, (Stem, StemSuffix))}
    rhs_vars = {i.var for i in rhs if isinstance(i, (Stem, StemSuffix))}
    for var in sorted(rhs_vars - lhs_vars) + sorted(lhs_vars - rhs_vars):
        raise RuleSyntaxError(f"unbound variable ${var} in rule {rule_id}", lineno, colon + 2)

    return CategoryRule(
        rule_id=rule_id,
        category=CATEGORY_CODES[cat],
        subtype=rule_id.split(".", 1)[0],
        lhs=lhs,
        rhs=rhs,
        symmetric=symmetric,
        min_stem=min_stem,
        line=lineno,
    )


def parse_ruleset(text: str) -> list[CategoryRule]:
    rules: list[CategoryRule] = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        rule = parse_rule_line(line, lineno)
        if rule is None:
            continue
        if rule.rule_id in seen:
            raise RuleSyntaxError(
                f"duplicate rule_id {rule.rule_id!r} (first defined on line {seen[rule.rule_id]})",
                lineno,
            )
        seen[rule.rule_id] = lineno
        rules.append(rule)
    return rules


def load_reduced_forms(text: str) -> list[CategoryRule]:
    """Turn a two-column ``reduced<TAB>full form`` table into symmetric REDUCTION rules."""
    rules = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = _strip_comment(line).strip()
        if not body:
            continue
        cols = body.split("\t")
        if len(cols) != 2 or not cols[0].strip() or not cols[1].strip():
            raise RuleSyntaxError("expected two tab-separated columns: reduced, full form", lineno)
        reduced, full = cols[0].strip(), cols[1].split()
        if len(reduced.split()) != 1:
            raise RuleSyntaxError(f"reduced form must be one token: {reduced!r}", lineno)
        rule_id = f"coraal.{reduced}.{'_'.join(full)}"
        if rule_id in seen:
            raise RuleSyntaxError(f"duplicate row (first on line {seen[rule_id]})", lineno)
        seen[rule_id] = lineno
        rules.append(
            CategoryRule(
                rule_id=rule_id,
                category=Category.REDUCTION,
                subtype="coraal_reduced_form",
                lhs=tuple(Literal(w) for w in full),
                rhs=(Literal(reduced),),
                symmetric=True,
                line=lineno,
            )
        )
    return rules
