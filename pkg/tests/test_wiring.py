import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hbruhat.core import GroundParams, SetFamily, is_consistent
from hbruhat.errors import InconsistentFamilyError, PreconditionError, UnsupportedDimensionError
from hbruhat.poset import ascents
from hbruhat.wiring import (
    ascent_blocks,
    block_flip_check,
    build_network,
    elementary_blocks,
    floor_info,
    inversion_set,
    is_flippable,
    local_sequences,
    max_height_ascent,
)


def fam(n, text):
    return SetFamily.parse(GroundParams(n, 2), text)


def empty(n):
    return SetFamily.empty(GroundParams(n, 2))


def full(n):
    return SetFamily.full(GroundParams(n, 2))


SAMPLE_SET = "124,134,135,234,235"


def test_local_sequence_examples():
    pi = local_sequences(empty(3))
    assert (pi[1], pi[2], pi[3]) == ((3, 2), (3, 1), (2, 1))
    pi = local_sequences(fam(3, "123"))
    assert (pi[1], pi[2], pi[3]) == ((2, 3), (1, 3), (1, 2))
    for n in (4, 5, 6):
        pi = local_sequences(full(n))
        assert all(list(pi[w]) == sorted(pi[w]) for w in range(1, n + 1))


def test_local_sequences_reject_inconsistent_family():
    with pytest.raises(InconsistentFamilyError) as err:
        local_sequences(fam(4, "123,134"))
    assert err.value.wire == 1 and err.value.cycle is not None


@settings(max_examples=300)
@given(st.integers(0, (1 << 10) - 1))
def test_inconsistency_shows_as_a_three_cycle(bits):
    f = SetFamily(GroundParams(5, 2), bits)
    if is_consistent(f):
        local_sequences(f)
        return
    with pytest.raises(InconsistentFamilyError) as err:
        local_sequences(f)
    w, (a, b, c) = err.value.wire, err.value.cycle

    def before(p, q):
        inv = (tuple(sorted((w, p, q))) in f)
        return inv if p < q else not inv

    assert before(a, b) and before(b, c) and before(c, a)


def test_network_examples():
    with pytest.raises(ValueError):
        empty(2)
    net = build_network(empty(3))
    assert [(c.column, c.level, c.pair) for c in net.crossings] == [(1, 1, (2, 3)), (2, 2, (1, 3)), (3, 1, (1, 2))]
    net = build_network(empty(4))
    assert len(net.crossings) == 6
    c = net.crossing(1, 4)
    assert c.level > net.level(2, c.column) and c.level > net.level(3, c.column)
    assert inversion_set(net) == empty(4)
    net = build_network(fam(5, SAMPLE_SET))
    assert len(net.crossings) == 10
    assert inversion_set(net) == fam(5, SAMPLE_SET)


def test_network_is_simple_and_complete():
    net = build_network(fam(5, SAMPLE_SET))
    assert sorted(c.pair for c in net.crossings) == list(itertools.combinations(range(1, 6), 2))
    assert [c.column for c in net.crossings] == list(range(1, 11))
    # right edge shows 1..n top to bottom; left edge reversed
    assert [net.level(w, 0) for w in range(1, 6)] == [5, 4, 3, 2, 1]
    assert [net.level(w, 10) for w in range(1, 6)] == [1, 2, 3, 4, 5]


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_round_trip_all_elements(stores, n):
    s = stores(n)
    for i in range(len(s)):
        assert inversion_set(build_network(s.family(i))) == s.family(i)


def test_local_sequences_follow_the_crossings(stores):
    s = stores(5)
    for i in range(len(s)):
        net = build_network(s.family(i))
        for w in range(1, 6):
            met = [c.pair[0] + c.pair[1] - w for c in net.crossings if w in c.pair]
            assert tuple(met) == net.local[w]


def test_floor_examples():
    f = floor_info(empty(3), (1, 2, 3))
    assert f.elementary and f.height == 0
    f = floor_info(empty(4), (1, 2, 4))
    assert not f.elementary and f.height is None
    f = floor_info(empty(4), (2, 3, 4))
    assert f.elementary and f.height == 0
    with pytest.raises(PreconditionError):
        floor_info(fam(4, "123"), (1, 2, 3))


def test_wiring_rejects_other_dimensions():
    with pytest.raises(UnsupportedDimensionError):
        local_sequences(SetFamily.empty(GroundParams(5, 3)))


def test_block_examples():
    blocks = ascent_blocks(empty(5), full(5))
    assert len(blocks) == 1
    assert blocks[0].support == (1, 2, 3, 4, 5)
    assert blocks[0].windows == ((1, 2, 3), (2, 3, 4), (3, 4, 5))
    y = fam(5, "123,345")
    assert is_consistent(y)
    asc = ascents(empty(5), y)
    assert [c.members for c in asc] == [(1, 2, 3), (3, 4, 5)]
    assert [b.support for b in ascent_blocks(empty(5), y)] == [(1, 2, 3), (3, 4, 5)]
    assert ascent_blocks(y, y) == []


def test_block_flip_examples(stores):
    x = fam(5, "123")
    for code in ascents(x, full(5)):
        flip = block_flip_check(x, code.members)
        assert flip.addable and flip.witness is None
    flip = block_flip_check(empty(4), (1, 2, 3, 4))
    assert flip.addable and flip.witness is None
    with pytest.raises(PreconditionError):
        block_flip_check(empty(4), (1, 2, 4))


def test_block_cut_by_sixth_wire(stores):
    s = stores(6)
    found = None
    for i in range(len(s)):
        x = s.family(i)
        for bl in elementary_blocks(x, full(6)):
            if len(bl.support) == 4:
                flip = block_flip_check(x, bl.support)
                if not flip.addable:
                    found = (x, bl.support, flip)
                    break
        if found:
            break
    assert found is not None
    x, support, flip = found
    assert flip.witness is not None and flip.witness not in support
    assert 1 <= flip.witness <= 6


def test_max_height_examples():
    assert max_height_ascent(empty(4), full(4)).members == (1, 2, 3)
    y = fam(4, "123")
    assert max_height_ascent(empty(4), y).members == (1, 2, 3)
    with pytest.raises(PreconditionError):
        max_height_ascent(y, y)


@pytest.mark.parametrize("n", [4, 5])
def test_max_height_ascent_is_addable(stores, n):
    s = stores(n)
    for a in range(len(s)):
        x = s.family(a)
        for b in range(a + 1, len(s)):
            y = s.family(b)
            if x <= y:
                code = max_height_ascent(x, y)
                assert code.members in y and code.members not in x
                assert is_consistent(x.add(code.members))


@pytest.mark.parametrize("n", [4, 5])
def test_flippable_triangles_are_the_ascents(stores, n):
    s = stores(n)
    for i in range(len(s)):
        x = s.family(i)
        flips = {t for t in itertools.combinations(range(1, n + 1), 3) if is_flippable(x, t)}
        assert flips == {c.members for c in ascents(x, full(n))}
