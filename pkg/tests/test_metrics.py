import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import hand_wer
from transcript_diffs.align import align
from transcript_diffs.metrics import ErrorCounts, UndefinedWERError, aggregate_counts, count_errors, wer


def counts(ref, hyp):
    return count_errors(align(ref.split(), hyp.split()))


def test_one_deletion_in_three():
    c = counts("a b c", "a c")
    assert c == ErrorCounts(n_ref=3, matches=2, subs=0, inss=0, dels=1)
    b = wer(c)
    assert b.wer == pytest.approx(hand_wer(3, 0, 1, 0))
    assert (b.sub_rate, b.del_rate, b.ins_rate) == (0.0, pytest.approx(1 / 3), 0.0)


def test_wer_can_exceed_one():
    b = wer(counts("a", "x y z"))
    assert b.wer == 3.0


def test_empty_reference_is_undefined():
    with pytest.raises(UndefinedWERError):
        wer(counts("", "a"))


def test_counts_validate():
    with pytest.raises(ValueError):
        ErrorCounts(n_ref=3, matches=1, subs=0, inss=0, dels=0)
    with pytest.raises(ValueError):
        ErrorCounts(n_ref=0, matches=0, subs=0, inss=-1, dels=0)


def test_micro_aggregation_differs_from_macro():
    per_file = [counts("a b c d", "a b c d"), counts("a", "b")]
    total = aggregate_counts(per_file)
    assert total.n_ref == 5 and total.errors == 1
    assert wer(total).wer == pytest.approx(0.2)  # macro average would be 0.5


def test_aggregate_empty():
    assert aggregate_counts([]) == ErrorCounts(0, 0, 0, 0, 0)


def test_rates_sum_to_wer():
    b = wer(counts("a b c d e", "a x c e f g"))
    assert b.sub_rate + b.del_rate + b.ins_rate == pytest.approx(b.wer)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from("abcde"), min_size=1, max_size=12))
def test_self_wer_zero(t):
    assert wer(count_errors(align(t, t))).wer == 0.0
