"""Avoidance counting against the naive filter, growth estimates, and
merge membership."""

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permx.avoidance import (
    MergeQuery,
    avoiders,
    count_avoiders,
    merge_coloring,
    merge_member,
    merge_count_upper_check,
    sw_estimate_sequence,
    verify_jv_inclusion,
)
from permx.core import Permutation, avoids, complement, contains, inverse, parse_permutation, reverse
from permx.errors import EmptyPattern, PreconditionViolated, ResourceLimit

THREE_PATTERNS = ["123", "132", "213", "231", "312", "321"]


def perm(text):
    return parse_permutation(text)


def catalan(n):
    return math.comb(2 * n, n) // (n + 1)


def naive_count(pattern, n):
    return sum(
        1
        for values in itertools.permutations(range(1, n + 1))
        if avoids(Permutation(values), pattern)
    )


@st.composite
def permutations_upto(draw, max_n, min_n=1):
    n = draw(st.integers(min_n, max_n))
    return Permutation(tuple(draw(st.permutations(tuple(range(1, n + 1))))))


# -- counting ---------------------------------------------------------------

def test_count_known_values():
    assert count_avoiders(perm("123"), 4) == 14
    assert count_avoiders(perm("132"), 5) == 42
    assert count_avoiders(perm("1"), 3) == 0
    for n in range(1, 7):
        assert count_avoiders(perm("12"), n) == 1


def test_count_trivial_lengths():
    assert count_avoiders(perm("123"), 0) == 1
    assert count_avoiders(perm("123"), 2) == 2
    assert count_avoiders(perm("4231"), 3) == 6


@pytest.mark.parametrize("text", THREE_PATTERNS)
def test_catalan_all_three_patterns(text):
    for n in range(0, 9):
        assert count_avoiders(perm(text), n) == catalan(n)


@pytest.mark.parametrize(
    "text",
    ["12", "21", *THREE_PATTERNS, "1234", "1432", "2143", "3142", "2413", "4231"],
)
def test_count_matches_naive_filter(text):
    pattern = perm(text)
    for n in range(0, 7):
        assert count_avoiders(pattern, n) == naive_count(pattern, n)


@pytest.mark.parametrize("text", ["2413", "3142", "1342", "2431"])
def test_count_symmetry_invariance(text):
    p = perm(text)
    base = count_avoiders(p, 6)
    for image in (reverse(p), complement(p), inverse(p)):
        assert count_avoiders(image, 6) == base


def test_count_validation():
    with pytest.raises(EmptyPattern):
        count_avoiders(Permutation(()), 3)
    with pytest.raises(PreconditionViolated):
        count_avoiders(perm("123"), -1)
    with pytest.raises(ResourceLimit):
        count_avoiders(perm("123"), 13)
    with pytest.raises(ResourceLimit):
        count_avoiders(perm("123"), 9, node_budget=10)


def test_avoiders_enumeration():
    found = list(avoiders(perm("21"), 3))
    assert found == [(1, 2, 3)]
    found = list(avoiders(perm("123"), 4))
    assert len(found) == 14
    assert found == sorted(found)
    for values in found:
        assert avoids(Permutation(values), perm("123"))


@given(permutations_upto(4, min_n=2), st.integers(0, 5))
@settings(max_examples=30)
def test_avoiders_agree_with_count(pattern, n):
    listed = list(avoiders(pattern, n))
    assert len(listed) == count_avoiders(pattern, n)
    assert len(set(listed)) == len(listed)


# -- growth estimates -------------------------------------------------------

def test_sw_estimates_catalan():
    seq = sw_estimate_sequence(perm("123"), 5)
    assert [e.count for e in seq] == [1, 2, 5, 14, 42]
    assert seq[-1].value == pytest.approx(42 ** 0.2, rel=1e-9)
    assert seq[0].value == 1.0


def test_sw_estimates_monotone_pattern():
    seq = sw_estimate_sequence(perm("12"), 5)
    assert all(e.value == 1.0 for e in seq)


def test_sw_estimates_zero_counts():
    seq = sw_estimate_sequence(perm("1"), 3)
    assert all(e.count == 0 and e.value == 0.0 for e in seq)


def test_sw_estimates_validation():
    with pytest.raises(PreconditionViolated):
        sw_estimate_sequence(perm("123"), 0)


@given(permutations_upto(3, min_n=2), st.integers(1, 6))
@settings(max_examples=25)
def test_sw_estimate_at_least_one_when_nonempty(pattern, n):
    seq = sw_estimate_sequence(pattern, n)
    for e in seq:
        if e.count >= 1:
            assert e.value >= 1.0


# -- merge membership -------------------------------------------------------

def test_merge_known_negative():
    assert not merge_member(MergeQuery(perm("123"), perm("12"), perm("12")))


def test_merge_known_positive_with_witness():
    q = MergeQuery(perm("2143"), perm("12"), perm("12"))
    coloring = merge_coloring(q)
    assert coloring is not None
    host = q.host.entries
    red = [v for v, col in zip(host, coloring) if col == "red"]
    blue = [v for v, col in zip(host, coloring) if col == "blue"]
    assert not contains_seq(red, (1, 2))
    assert not contains_seq(blue, (1, 2))


def contains_seq(values, pvals):
    from permx.core import contains_values

    return contains_values(tuple(values), pvals)


def test_merge_all_red_shortcut():
    assert merge_member(MergeQuery(perm("321"), perm("12"), perm("123")))
    assert merge_member(MergeQuery(perm("321"), perm("12"), perm("1")))


def test_merge_single_pattern_blocks_everything():
    assert not merge_member(MergeQuery(perm("1"), perm("1"), perm("1")))
    assert merge_member(MergeQuery(Permutation(()), perm("1"), perm("1")))


def test_merge_validation():
    with pytest.raises(EmptyPattern):
        MergeQuery(perm("1"), Permutation(()), perm("1"))
    with pytest.raises(ResourceLimit):
        merge_member(
            MergeQuery(Permutation(tuple(range(1, 16))), perm("12"), perm("21"))
        )


def oracle_merge(host, red_p, blue_p):
    n = host.n
    for mask in range(1 << n):
        red = [v for i, v in enumerate(host.entries) if mask >> i & 1]
        blue = [v for i, v in enumerate(host.entries) if not mask >> i & 1]
        if not contains_seq(red, red_p.entries) and not contains_seq(
            blue, blue_p.entries
        ):
            return True
    return False


@given(permutations_upto(5), permutations_upto(3), permutations_upto(3))
@settings(max_examples=40)
def test_merge_matches_coloring_oracle(host, red_p, blue_p):
    q = MergeQuery(host, red_p, blue_p)
    assert merge_member(q) == oracle_merge(host, red_p, blue_p)


@given(permutations_upto(5, min_n=2), permutations_upto(3), permutations_upto(3))
@settings(max_examples=30)
def test_merge_closed_under_entry_deletion(host, red_p, blue_p):
    if not merge_member(MergeQuery(host, red_p, blue_p)):
        return
    from permx.core import pattern_of

    for i in range(host.n):
        smaller = Permutation(
            pattern_of(host.entries[:i] + host.entries[i + 1:])
        )
        assert merge_member(MergeQuery(smaller, red_p, blue_p))


# -- inclusion verifier -----------------------------------------------------

def test_jv_inclusion_triple_ones():
    report = verify_jv_inclusion(perm("1"), perm("1"), perm("1"), 5)
    assert report.holds
    assert report.checked == catalan(5)
    assert report.combined == perm("123")
    assert report.counterexample is None


def test_jv_inclusion_longer_first_part():
    report = verify_jv_inclusion(perm("12"), perm("1"), perm("1"), 4)
    assert report.holds
    assert report.combined == perm("1234")
    assert report.red_pattern == perm("123")
    assert report.blue_pattern == perm("12")


def test_jv_inclusion_validation():
    with pytest.raises(EmptyPattern):
        verify_jv_inclusion(perm("1"), Permutation(()), perm("1"), 3)


def test_jv_report_serializes():
    report = verify_jv_inclusion(perm("1"), perm("1"), perm("1"), 3)
    data = report.to_jsonable()
    assert data["holds"] is True
    assert data["counterexample"] is None
    assert data["combined"] == "123"


# -- merge counting bound ---------------------------------------------------

def test_merge_count_small_example():
    report = merge_count_upper_check(perm("12"), perm("12"), 4)
    assert report.lhs == 14
    assert report.rhs == 16
    assert report.holds and report.holds_refined


def test_merge_count_identity_patterns():
    report = merge_count_upper_check(perm("123"), perm("123"), 3)
    assert report.lhs == 6


def test_merge_count_single_blockers():
    report = merge_count_upper_check(perm("1"), perm("1"), 2)
    assert report.lhs == 0


def test_merge_count_plain_rhs_can_fail():
    # at length 8 the plain product form drops below the true count; the
    # squared-binomial side stays above it
    report = merge_count_upper_check(perm("12"), perm("12"), 8)
    assert report.lhs == catalan(8)
    assert report.rhs == 2 ** 8
    assert not report.holds
    assert report.holds_refined


@given(
    st.integers(0, 5),
    permutations_upto(3),
    permutations_upto(3),
)
@settings(max_examples=20)
def test_merge_count_refined_is_upper_bound(n, red_p, blue_p):
    report = merge_count_upper_check(red_p, blue_p, n)
    assert report.lhs <= report.rhs_refined
