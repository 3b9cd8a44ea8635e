"""Difference-source hypotheses: the rule language, shipped rules and attribution."""
from __future__ import annotations

import hashlib
from importlib import resources
from pathlib import Path

from .attribution import (
    DEFAULT_PRECEDENCE,
    AttributedEntry,
    Attribution,
    DiffRegion,
    Match,
    attribute,
    builtin_verbatim_tests,
    extract_regions,
    match_rule,
)
from .dsl import (
    Alternation,
    Category,
    CategoryRule,
    Empty,
    Literal,
    RuleSyntaxError,
    Stem,
    StemSuffix,
    load_reduced_forms,
    parse_ruleset,
)

__all__ = [
    "DEFAULT_PRECEDENCE",
    "Alternation",
    "AttributedEntry",
    "Attribution",
    "Category",
    "CategoryRule",
    "DiffRegion",
    "Empty",
    "Literal",
    "Match",
    "RuleSyntaxError",
    "Ruleset",
    "Stem",
    "StemSuffix",
    "attribute",
    "builtin_verbatim_tests",
    "default_rules_text",
    "extract_regions",
    "load_reduced_forms",
    "load_ruleset",
    "match_rule",
    "parse_ruleset",
]


def default_rules_text() -> str:
    return resources.files("transcript_diffs.data").joinpath("default_rules.txt").read_text("utf-8")


def default_reduced_forms_text() -> str:
    return resources.files("transcript_diffs.data").joinpath("reduced_forms.tsv").read_text("utf-8")


class Ruleset(tuple):
    """Parsed rules plus the sha256 of the texts they came from."""

    sha256: str = ""

    def __new__(cls, rules, sha256: str = ""):
        obj = super().__new__(cls, rules)
        obj.sha256 = sha256
        return obj

    def vocabulary(self) -> frozenset[str]:
        words: set[str] = set()
        for rule in self:
            words |= rule.vocabulary()
        return frozenset(words)


def load_ruleset(rules_path: str | Path | None = None, reduced_forms_path: str | Path | None = None) -> Ruleset:
    """Rule file rules followed by reduced-form table rules; shipped defaults when paths are None."""
    rules_text = default_rules_text() if rules_path is None else Path(rules_path).read_text("utf-8")
    table_text = (
        default_reduced_forms_text()
        if reduced_forms_path is None
        else Path(reduced_forms_path).read_text("utf-8")
    )
    rules = parse_ruleset(rules_text)
    table = load_reduced_forms(table_text)
    ids = {r.rule_id for r in rules}
    for r in table:
        if r.rule_id in ids:
            raise RuleSyntaxError(f"reduced-form rule {r.rule_id!r} collides with a rule file id", r.line)
    digest = hashlib.sha256()
    digest.update(rules_text.encode("utf-8"))
    digest.update(b"\0")
    digest.update(table_text.encode("utf-8"))
    return Ruleset(rules + table, digest.hexdigest())
