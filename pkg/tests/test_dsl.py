import pytest

from transcript_diffs.hypotheses import (
    Category,
    RuleSyntaxError,
    load_reduced_forms,
    load_ruleset,
    parse_ruleset,
)
from transcript_diffs.hypotheses.dsl import Alternation, Empty, Literal, Stem, StemSuffix, parse_rule_line


def test_parse_full_rule():
    r = parse_rule_line("MS copula.absence SYM: $p {is|are} => $p   # trailing comment", 4)
    assert r.rule_id == "copula.absence" and r.subtype == "copula"
    assert r.category is Category.MORPHOSYNTACTIC and r.symmetric and r.line == 4
    assert r.lhs == (Stem("p"), Alternation(frozenset({"is", "are"})))
    assert r.rhs == (Stem("p"),)
    assert (r.lhs_width, r.rhs_width) == (2, 1)


def test_stem_suffix_attach_kinds():
    rs = parse_ruleset(
        "RED a: $x will => $x+'ll\nMS b MINSTEM=3: $x => $x+s\nMS c: $x $n => $x+_'s $n\n"
    )
    assert rs[0].rhs == (StemSuffix("x", "ll", "apostrophe"),)
    assert rs[1].rhs == (StemSuffix("x", "s", "fused"),) and rs[1].min_stem == 3
    assert rs[2].rhs[0] == StemSuffix("x", "'s", "spaced") and rs[2].rhs_width == 3


def test_empty_side():
    r = parse_rule_line("VERB-EXTRA like.filler: like => _", 1)
    assert r.category is Category.VERBATIM and r.rhs == (Empty(),) and r.rhs_width == 0


def test_comments_and_blank_lines_ignored():
    assert parse_ruleset("# header\n\n   \nRED x: a => b\n")[0].line == 4


def test_hash_inside_word_is_not_a_comment():
    r = parse_rule_line("RED x: c# => csharp", 1)
    assert r.lhs == (Literal("c#"),)


@pytest.mark.parametrize(
    "line, message, column",
    [
        ("XX r: a => b", "unknown category", 1),
        ("MS r FAST: a => b", "unknown flag", 6),
        ("MS r a => b", "expected ':'", None),
        ("MS r: a b", "expected '=>'", None),
        ("MS r: _ => _", "both sides are empty", None),
        ("MS r: {a|b => c", "unterminated alternation", 7),
        ("MS bad: $x => $y", "unbound variable $y in rule bad", None),
        ("MS r: a => b => c", "more than one", None),
        ("MS r: => b", "empty pattern side", None),
    ],
)
def test_syntax_errors_carry_position(line, message, column):
    with pytest.raises(RuleSyntaxError, match=message.replace("$", r"\$")) as exc:
        parse_ruleset("# ok\n" + line)
    assert exc.value.line == 2
    if column is not None:
        assert exc.value.column == column
    assert str(exc.value).startswith("line 2, column ")


def test_duplicate_rule_id():
    with pytest.raises(RuleSyntaxError, match="first defined on line 1"):
        parse_ruleset("RED a: x => y\nRED a: p => q\n")


def test_reduced_form_table():
    rules = load_reduced_forms("gonna\tgoing to\n# comment\n'cause\tbecause\n")
    assert [r.rule_id for r in rules] == ["coraal.gonna.going_to", "coraal.'cause.because"]
    assert rules[0].lhs == (Literal("going"), Literal("to")) and rules[0].rhs == (Literal("gonna"),)
    assert all(r.category is Category.REDUCTION and r.symmetric for r in rules)
    with pytest.raises(RuleSyntaxError):
        load_reduced_forms("only-one-column\n")


def test_default_ruleset_loads_with_hash():
    rs = load_ruleset()
    assert len(rs) == 54
    assert len(rs.sha256) == 64
    ms = {r.subtype for r in rs if r.category is Category.MORPHOSYNTACTIC}
    assert len(ms) == 16
    assert {"will", "gonna", "ain't"} <= rs.vocabulary()


def test_replacement_files_change_hash(tmp_path):
    p = tmp_path / "r.txt"
    p.write_text("RED only.one: a => b\n")
    rs = load_ruleset(p)
    assert rs[0].rule_id == "only.one"
    assert rs.sha256 != load_ruleset().sha256
