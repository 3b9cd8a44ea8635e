import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_cost, random_pair
from transcript_diffs import _kernels
from transcript_diffs.align import (
    AlignEntry,
    AlignOp,
    AlignmentBudgetError,
    CostModel,
    align,
    alignment_from_json,
    alignment_to_json,
    swap_roles,
)
from transcript_diffs.corpus import tokens_from_words

M, S, D, I = AlignOp.MATCH, AlignOp.SUB, AlignOp.DEL, AlignOp.INS

words = st.lists(st.sampled_from("abcd"), max_size=9)


def ops(a):
    return [e.op for e in a.entries]


def check_consistent(al, n, m):
    """Entries consume both sequences in order, exactly once."""
    ri = [e.ref_index for e in al.entries if e.ref_index is not None]
    hi = [e.hyp_index for e in al.entries if e.hyp_index is not None]
    assert ri == list(range(n)) and hi == list(range(m))
    for e in al.entries:
        assert (e.op is I) == (e.ref_index is None)
        assert (e.op is D) == (e.hyp_index is None)


# frozen hand cases ----------------------------------------------------------


def test_contraction_tie_break_sub_then_del():
    a = align(tokens_from_words("she will go"), tokens_from_words("she'll go"))
    assert ops(a) == [S, D, M]
    assert a.cost == 2


def test_identical_is_all_match():
    a = align(list("abc"), list("abc"))
    assert ops(a) == [M, M, M] and a.cost == 0


def test_empty_sides():
    assert ops(align([], list("ab"))) == [I, I]
    assert ops(align(list("ab"), [])) == [D, D]
    a = align([], [])
    assert a.entries == () and a.cost == 0


def test_classic_distance():
    assert align(list("kitten"), list("sitting")).cost == 3


def test_match_preferred_over_sub_on_ties():
    # "a b" vs "b": DEL(a), MATCH(b) rather than SUB(a->b), DEL(b)
    assert ops(align(list("ab"), list("b"))) == [D, M]


def test_custom_costs_change_script():
    # substitution dearer than delete+insert
    a = align(list("a"), list("b"), CostModel(3, 1, 1))
    assert sorted(e.op.value for e in a.entries) == ["DEL", "INS"]
    assert a.cost == 2


def test_cost_model_parse():
    assert CostModel.parse("2,1,1") == CostModel(2, 1, 1)
    for bad in ("1,1", "a,b,c", "-1,1,1"):
        with pytest.raises(ValueError):
            CostModel.parse(bad)


def test_budget():
    with pytest.raises(AlignmentBudgetError):
        align(list("abc"), list("abc"), cell_budget=8)


def test_json_round_trip():
    a = align(tokens_from_words("she will go home"), tokens_from_words("she'll go um home"), ref_key=("f", "A"), hyp_key=("f", "B"))
    text = alignment_to_json(a)
    assert alignment_from_json(text) == a
    assert alignment_to_json(alignment_from_json(text)) == text


def test_golden_alignment_json(fixtures):
    from transcript_diffs.corpus import read_transcript, tokenize_and_normalize

    ref = tokenize_and_normalize(read_transcript(fixtures / "category_mix" / "ref.txt", "ref", "A"))
    hyp = tokenize_and_normalize(read_transcript(fixtures / "category_mix" / "hyp.txt", "hyp", "B"))
    a = align(ref, hyp, ref_key=("ref", "A"), hyp_key=("hyp", "B"))
    assert alignment_to_json(a) == (fixtures / "golden" / "category_mix_alignment.json").read_text()


def test_swap_roles():
    a = align(list("abc"), list("xbcd"))
    b = swap_roles(a)
    assert b.count(I) == a.count(D) and b.count(D) == a.count(I)
    assert swap_roles(b) == a


def test_swap_roles_recosts_asymmetric_model():
    a = align(list("ab"), list("b"), CostModel(1, 1, 3))
    assert a.cost == 3
    assert swap_roles(a).cost == 3 and swap_roles(a).costs == CostModel(1, 3, 1)


# oracle and properties ---------------------------------------------------------


def test_random_pairs_match_brute_force():
    rng = np.random.default_rng(7)
    for _ in range(300):
        a, b = random_pair(rng)
        al = align(a, b)
        assert al.cost == brute_force_cost(a, b)
        check_consistent(al, len(a), len(b))


@pytest.mark.parametrize("costs", [(2, 1, 1), (1, 2, 3), (3, 1, 1), (1, 1, 2)])
def test_weighted_costs_match_brute_force(costs):
    rng = np.random.default_rng(sum(costs))
    cm = CostModel(*costs)
    for _ in range(100):
        a, b = random_pair(rng, max_len=6)
        assert align(a, b, cm).cost == brute_force_cost(a, b, *costs)


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_duality(a, b):
    ab, ba = align(a, b), align(b, a)
    assert ab.count(I) == ba.count(D)
    assert ab.count(D) == ba.count(I)
    assert ab.count(S) == ba.count(S)
    assert ab.cost == ba.cost


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_backends_agree(a, b):
    x = align(a, b, use_numba=True)
    y = align(a, b, use_numba=False)
    assert x == y


@settings(max_examples=100, deadline=None)
@given(words, words, words)
def test_triangle_inequality(a, b, c):
    assert align(a, c).cost <= align(a, b).cost + align(b, c).cost


def test_env_flag_disables_numba(monkeypatch):
    monkeypatch.setenv("TRANSCRIPT_DIFFS_NUMBA", "0")
    assert not _kernels.numba_enabled()
    monkeypatch.setenv("TRANSCRIPT_DIFFS_NUMBA", "1")
    assert _kernels.numba_enabled() == _kernels.HAVE_NUMBA


def test_long_sequences_backends_agree():
    rng = np.random.default_rng(3)
    a = rng.integers(0, 50, 400)
    b = np.concatenate([a[:150], rng.integers(0, 50, 30), a[170:]])
    x = _kernels.edit_ops(a, b, use_numba=True)
    y = _kernels.edit_ops(a, b, use_numba=False)
    assert x[0] == y[0] and np.array_equal(x[1], y[1])
