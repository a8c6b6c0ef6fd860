import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hbruhat.core import (
    GroundParams,
    SetFamily,
    closure,
    colex_rank,
    colex_unrank,
    is_closed,
    is_consistent,
    restrict,
    subset_codec,
)
from hbruhat.errors import InvalidRestrictionError, InvalidSubsetError

import oracles

P4 = GroundParams(4, 2)
P5 = GroundParams(5, 2)


def fam(params, text):
    return SetFamily.parse(params, text)


def as_tuples(f: SetFamily) -> set:
    return set(f)


# codec ---------------------------------------------------------------------


def test_codec_examples():
    assert subset_codec((1, 2, 3), P4).rank == 0
    assert subset_codec((2, 3, 4), P4).rank == 3
    assert subset_codec(2, P5).members == (1, 3, 4)


def test_codec_matches_colex_listing():
    listing = sorted(itertools.combinations(range(1, 6), 3), key=lambda s: s[::-1])
    assert [subset_codec(r, P5).members for r in range(10)] == listing


@pytest.mark.parametrize("bad", [(0, 1, 2), (1, 2), (3, 2, 1), (1, 2, 6), (1, 1, 2)])
def test_codec_rejects_bad_subsets(bad):
    with pytest.raises(InvalidSubsetError):
        subset_codec(bad, P5)


def test_codec_rejects_bad_rank():
    with pytest.raises(InvalidSubsetError):
        subset_codec(10, P5)


@given(st.integers(2, 10).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, min(4, n - 1)))), st.data())
def test_codec_round_trip(nd, data):
    n, d = nd
    params = GroundParams(n, d)
    r = data.draw(st.integers(0, params.size - 1))
    code = subset_codec(r, params)
    assert subset_codec(code.members, params) == code
    assert colex_rank(colex_unrank(r, d + 1)) == r


def test_ground_params_validation():
    with pytest.raises(InvalidSubsetError):
        GroundParams(3, 3)
    with pytest.raises(InvalidSubsetError):
        GroundParams(4, 0)


# closure and consistency -------------------------------------------------


def test_closure_examples():
    c = closure(fam(P4, "123,134"))
    assert (1, 2, 4) in c
    assert c == fam(P4, "123,124,134")
    assert closure(SetFamily.empty(P4)) == SetFamily.empty(P4)


def test_consistency_examples():
    res = is_consistent(fam(P4, "123,134"))
    assert not res
    assert res.violation.support == (1, 2, 3, 4)
    assert is_consistent(fam(P5, "124,134,135,234,235"))
    for n in range(3, 8):
        assert is_consistent(SetFamily.full(GroundParams(n, 2)))


def test_consistency_in_higher_dimension():
    p = GroundParams(5, 3)
    assert is_consistent(fam(p, "1234"))
    assert not is_consistent(fam(p, "1235"))


small_params = st.sampled_from([(4, 2), (5, 2), (5, 3), (6, 2), (6, 3), (5, 1)])


def families(draw_params):
    return draw_params.flatmap(
        lambda nd: st.integers(0, (1 << GroundParams(*nd).size) - 1).map(
            lambda bits: SetFamily(GroundParams(*nd), bits)
        )
    )


@settings(max_examples=200)
@given(families(small_params))
def test_closure_is_extensive_and_idempotent(f):
    c = closure(f)
    assert f <= c
    assert closure(c) == c
    assert is_closed(c)


@settings(max_examples=200)
@given(families(small_params), st.data())
def test_closure_is_monotone(f, data):
    g = SetFamily(f.params, f.bits & data.draw(st.integers(0, (1 << f.params.size) - 1)))
    assert closure(g) <= closure(f)


@settings(max_examples=200)
@given(families(small_params))
def test_closure_matches_bruteforce(f):
    n, d = f.params.n, f.params.d
    assert as_tuples(closure(f)) == oracles.closure(as_tuples(f), n, d)


@settings(max_examples=200)
@given(families(small_params))
def test_consistency_matches_packet_oracle(f):
    n, d = f.params.n, f.params.d
    assert bool(is_consistent(f)) == oracles.is_consistent(as_tuples(f), n, d)


@pytest.mark.parametrize("n,d", [(4, 2), (5, 2), (5, 3), (4, 1)])
def test_consistent_iff_doubly_closed_exhaustive(n, d):
    params = GroundParams(n, d)
    for bits in range(1 << params.size):
        f = SetFamily(params, bits)
        assert bool(is_consistent(f)) == (is_closed(f) and is_closed(f.complement()))


@settings(max_examples=200)
@given(families(st.sampled_from([(5, 2), (6, 2), (6, 3)])), st.data())
def test_consistency_is_hereditary_under_restriction(f, data):
    if not is_consistent(f):
        return
    n, d = f.params.n, f.params.d
    size = data.draw(st.integers(d + 1, n))
    labels = data.draw(st.lists(st.integers(1, n), min_size=size, max_size=size, unique=True))
    assert is_consistent(restrict(f, labels))


# restriction ---------------------------------------------------------------


def test_restrict_examples():
    f = fam(P5, "124,134,135,234,235")
    r = restrict(f, [1, 2, 3, 4])
    assert r.params == P4
    assert r == fam(P4, "124,134,234")
    assert restrict(f, range(1, 6)) == f
    assert restrict(SetFamily.empty(P5), [2, 4, 5]) == SetFamily.empty(GroundParams(3, 2))


def test_restrict_relabels():
    assert restrict(fam(P5, "245"), [2, 4, 5]) == fam(GroundParams(3, 2), "123")


def test_restrict_rejects_small_sets():
    with pytest.raises(InvalidRestrictionError):
        restrict(SetFamily.empty(P5), [1, 2])


# family text ---------------------------------------------------------------


def test_text_round_trip():
    f = fam(P5, "124,134,135,234,235")
    assert SetFamily.parse(P5, f.to_text()) == f
    assert SetFamily.parse(P5, str(f)) == f
    assert SetFamily.parse(P5, " 124, 134 ") == fam(P5, "124,134")
    assert SetFamily.parse(P5, "") == SetFamily.empty(P5)


def test_parse_rejects_bad_members():
    with pytest.raises(InvalidSubsetError):
        SetFamily.parse(P5, "126")
    with pytest.raises(InvalidSubsetError):
        SetFamily.parse(P5, "12x")
