import pytest
from hypothesis import given, settings, strategies as st

from lorenz_invariants.errors import MalformedSequenceError, ParseError
from lorenz_invariants.seqcore import (EPSeq, canonicalize, common_prefix_len, digit_at, is_cyclic_shift,
                                       lex_compare, one_frequency, parse_epseq, primitive_root, shift,
                                       substitute)
from fractions import Fraction

words = st.text(alphabet="01", max_size=8)
periods = st.text(alphabet="01", min_size=1, max_size=6)


@st.composite
def seqs(draw):
    return canonicalize(draw(words), draw(periods))


def test_canonical_forms():
    assert canonicalize("10", "10") == EPSeq("", "10")
    assert str(canonicalize("100", "010")) == "10(001)"
    assert str(canonicalize("", "1010")) == "(10)"


def test_empty_period_rejected():
    with pytest.raises(MalformedSequenceError):
        canonicalize("10", "")


def test_parse_literals():
    s = parse_epseq("1000110001(110)")
    assert s.pre == "1000110001" and s.per == "110"
    assert parse_epseq("(10)") == EPSeq("", "10")


@pytest.mark.parametrize("text,pos", [("10(2)", 3), ("1x(0)", 1), ("10()", 2)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_epseq(text)
    assert exc.value.position == pos


def test_primitive_root_and_rotation():
    assert primitive_root("101010") == "10"
    assert primitive_root("100") == "100"
    assert is_cyclic_shift("100101", "010110")
    assert not is_cyclic_shift("100", "0110")


def test_example_prefix_lengths():
    # the two pairs of sequences from the metric example
    f = EPSeq.parse("(10001)")
    g = EPSeq.parse("1000110001(110)")
    assert common_prefix_len(f, g) == 11
    assert common_prefix_len(EPSeq.parse("(01100)"), EPSeq.parse("0110001100(01)")) == 12
    assert common_prefix_len(f, f) is None


def test_digits_are_one_based_in_digit_at():
    s = EPSeq.parse("1(0)")
    assert digit_at(s, 1) == 1 and digit_at(s, 2) == 0
    with pytest.raises(IndexError):
        digit_at(s, 0)


def test_substitute_and_frequency():
    assert substitute(EPSeq.parse("(100)"), "10", "01") == EPSeq.parse("(100101)")
    assert one_frequency(EPSeq.parse("1(001)")) == Fraction(1, 3)


@given(words, periods)
def test_canonicalize_is_idempotent_and_preserves_stream(pre, per):
    s = canonicalize(pre, per)
    assert canonicalize(s.pre, s.per) == s
    n = len(pre) + 3 * len(per)
    assert s.prefix(n) == (pre + per * 4)[:n]


@given(seqs(), seqs())
def test_lex_compare_matches_long_prefixes(a, b):
    c = lex_compare(a, b)
    assert c == -lex_compare(b, a)
    k = common_prefix_len(a, b)
    if k is None:
        assert c == 0 and a == b
    else:
        x, y = a.prefix(k + 1), b.prefix(k + 1)
        assert (x < y) == (c < 0)


@given(seqs(), st.integers(0, 20), st.integers(0, 20))
def test_shift_composes(s, m, n):
    assert shift(shift(s, m), n) == shift(s, m + n)
    assert s.prefix(m + n + 5)[m:] == shift(s, m).prefix(n + 5)


@settings(max_examples=50)
@given(seqs())
def test_orbit_is_all_distinct_shifts(s):
    orb = s.orbit()
    assert len(set(orb)) == len(orb)
    assert set(orb) == {shift(s, n) for n in range(len(s.pre) + len(s.per) + 2)}
