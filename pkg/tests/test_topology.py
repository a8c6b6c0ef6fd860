import itertools

import numpy as np
import pytest

from hbruhat.core import GroundParams, SetFamily, closure, is_consistent
from hbruhat.errors import InvalidIntervalError, PreconditionError, ResourceLimitError
from hbruhat.poset import ascents, interval_elements
from hbruhat.scan import check_theorem, scan_intervals
from hbruhat.topology import (
    asc_complex,
    chain_counts,
    classify_interval,
    cone_certificate,
    euler_oracle,
    mobius,
    omega_poset,
    reduced_euler,
)
from hbruhat.wiring import max_height_ascent

import oracles


def fam(n, text):
    return SetFamily.parse(GroundParams(n, 2), text)


def first_non_facial(store, asc_count=None):
    for r in scan_intervals(store):
        if not r.facial and (asc_count is None or r.asc_count == asc_count):
            return r
    return None


# Moebius and Euler ---------------------------------------------------------


def test_mobius_examples(stores):
    s = stores(4)
    for i in range(len(s)):
        assert mobius(i, i, s) == 1
    for a, b in s.cover_pairs():
        assert mobius(a, b, s) == -1
    assert mobius(s.bottom, s.top, s) == 1
    with pytest.raises(InvalidIntervalError):
        mobius(fam(4, "123"), fam(4, "234"), s)


@pytest.mark.parametrize("n,mu", [(4, 1), (5, -1), (6, 1)])
def test_mobius_of_full_interval(stores, n, mu):
    s = stores(n)
    assert mobius(s.bottom, s.top, s) == mu


def test_mobius_matches_definition_oracle(stores):
    s = stores(5)
    elements = [frozenset(s.family(i)) for i in range(len(s))]
    leq = lambda a, b: a <= b
    for a in range(0, len(s), 5):
        for b in range(len(s)):
            if elements[a] <= elements[b]:
                assert mobius(a, b, s) == oracles.mobius_by_definition(elements[a], elements[b], elements, leq)


def test_euler_examples(stores):
    s = stores(4)
    a, b = s.cover_pairs()[0]
    assert euler_oracle(a, b, s) == -1
    assert euler_oracle(s.bottom, s.top, s) == 1
    for x in range(len(s)):
        for y in range(len(s)):
            if x != y and s.zeta[x, y] and len(interval_elements(x, y, s)) == 3:
                assert euler_oracle(x, y, s) == 0
    with pytest.raises(InvalidIntervalError):
        euler_oracle(0, 0, s)


def test_euler_matches_explicit_chains(stores):
    s = stores(5)
    elements = [frozenset(s.family(i)) for i in range(len(s))]
    leq = lambda a, b: a <= b
    for a, b in [(0, s.top), (0, 30), (3, s.top), (1, 40)]:
        if s.zeta[a, b]:
            assert euler_oracle(a, b, s) == oracles.reduced_euler_by_chains(elements[a], elements[b], elements, leq)


def test_chain_counts_budget():
    strict = np.triu(np.ones((12, 12), dtype=bool), 1)
    assert chain_counts(strict)[:2] == [12, 66]
    assert reduced_euler(chain_counts(strict)) == 0
    with pytest.raises(ResourceLimitError):
        chain_counts(strict, max_chains=100)


@pytest.mark.parametrize("n", [4, 5])
def test_hall_agreement_exhaustive(stores, n):
    s = stores(n)
    z = s.zeta
    for a, b in np.argwhere(z & ~np.eye(len(s), dtype=bool)):
        assert mobius(int(a), int(b), s) == euler_oracle(int(a), int(b), s)


# ascent complexes ----------------------------------------------------------


def test_asc_complex_examples(stores):
    s = stores(4)
    a, b = s.cover_pairs()[0]
    cx = asc_complex(a, b, s)
    assert len(cx.faces) == 1
    cx = asc_complex(s.bottom, s.top, s)
    assert [v.members for v in cx.vertices] == [(1, 2, 3), (2, 3, 4)]
    assert len(cx.faces) == 3 and cx.is_full_simplex()
    assert closure(fam(4, "123,234")) == SetFamily.full(GroundParams(4, 2))


def test_asc_complex_budget(stores):
    s = stores(5)
    with pytest.raises(ResourceLimitError):
        asc_complex(s.bottom, s.top, s, max_ascents=2)


def test_first_non_facial_b6_complex(stores):
    s = stores(6)
    r = first_non_facial(s)
    assert (s.family(r.x_id).to_text(), s.family(r.y_id).to_text()) == ("", "123,124")
    cx = asc_complex(r.x_id, r.y_id, s)
    # one ascent, so the complex is a full simplex; non-facial because Y is larger than X + closure(Asc)
    assert cx.is_full_simplex() and [v.members for v in cx.vertices] == [(1, 2, 3)]
    proper = next(q for q in scan_intervals(s)
                  if not q.facial and not asc_complex(q.x_id, q.y_id, s).is_full_simplex())
    cx = asc_complex(proper.x_id, proper.y_id, s)
    assert cx.has_all_singletons() and cx.is_downward_closed()
    assert len(cx.faces) < 2 ** len(cx.vertices) - 1


def test_consistent_ascent_sets_need_not_be_downward_closed(stores):
    """The raw family of consistent ascent unions is not a simplicial complex."""
    s = stores(5)
    x = fam(5, "123,124")
    y = fam(5, "123,124,134,125,135,145,345")
    cx = asc_complex(x, y, s)
    names = lambda fs: {tuple(sorted(c.members for c in f)) for f in fs}
    assert sorted(v.members for v in cx.vertices) == [(1, 2, 5), (1, 3, 4), (3, 4, 5)]
    raw = names(cx.consistent_sets)
    assert ((1, 2, 5), (1, 3, 4), (3, 4, 5)) in raw
    assert ((1, 3, 4), (3, 4, 5)) not in raw
    assert is_consistent(x | closure(fam(5, "134,125,345")))
    assert not is_consistent(x | closure(fam(5, "134,345")))
    assert cx.is_downward_closed()
    apex = max_height_ascent(x, y)
    assert cx.is_cone(apex) and cx.is_cone(apex, raw=True)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_hereditary_faces_recover_their_ascents(stores, n):
    """For a face S of Asc(X), the ascents of [X, X + closure(S)] are exactly S."""
    s = stores(n)
    full = SetFamily.full(s.params)
    for i in range(len(s)):
        x = s.family(i)
        asc = list(ascents(x, full))
        good = {}
        for k in range(1, len(asc) + 1):
            for combo in itertools.combinations(asc, k):
                sub_ok = all(good.get(frozenset(c), True) for c in itertools.combinations(combo, k - 1) if c)
                top = x | closure(SetFamily.from_members(s.params, [c.members for c in combo]))
                ok = sub_ok and bool(is_consistent(top))
                good[frozenset(combo)] = ok
                if ok:
                    assert set(ascents(x, top)) == set(combo)


# classification ------------------------------------------------------------


def test_classify_examples(stores):
    s5 = stores(5)
    rep = classify_interval(s5.bottom, s5.top, s5)
    assert (rep.facial, rep.asc_count, rep.sphere_dim, rep.mobius) == (True, 3, 1, -1)
    assert rep.certificate is None
    for a, b in s5.cover_pairs()[:20]:
        rep = classify_interval(a, b, s5)
        assert (rep.facial, rep.asc_count, rep.sphere_dim, rep.mobius) == (True, 1, -1, -1)
    rep = classify_interval(7, 7, s5)
    assert (rep.facial, rep.asc_count, rep.mobius) == (True, 0, 1)


def test_classify_first_non_facial_b6(stores):
    s = stores(6)
    r = first_non_facial(s)
    rep = classify_interval(r.x_id, r.y_id, s)
    assert not rep.facial and rep.mobius == 0 and rep.sphere_dim is None
    assert rep.certificate == cone_certificate(r.x_id, r.y_id, s)
    assert rep.certificate.rank == r.apex


def test_non_facial_intervals_appear_at_n4(stores):
    s = stores(4)
    r = first_non_facial(s)
    assert r is not None and r.mobius == 0
    assert s.rank(r.y_id) - s.rank(r.x_id) == 2 and r.asc_count == 1


def _missing_doubleton(cx):
    k = len(cx.vertices)
    return sum(1 for f in cx.faces if len(f) == 2) < k * (k - 1) // 2


def test_cone_certificate_with_missing_doubleton(stores):
    s = stores(6)
    hits = []
    for r in scan_intervals(s):
        if not r.facial and r.asc_count >= 2:
            cx = asc_complex(r.x_id, r.y_id, s)
            if _missing_doubleton(cx):
                hits.append((r, cx))
    # no two-ascent interval of B(6,2) misses its doubleton; the smallest have three
    assert min(r.asc_count for r, _ in hits) == 3
    r, cx = next(h for h in hits if h[0].asc_count == 3)
    assert (s.family(r.x_id).to_text(), s.family(r.y_id).to_text()) == ("123,124", "123,124,134,125,135,145,345")
    apex = cone_certificate(r.x_id, r.y_id, s)
    assert apex == max_height_ascent(s.family(r.x_id), s.family(r.y_id))
    assert frozenset([apex]) in cx.faces
    assert all(f | {apex} in cx.faces for f in cx.faces)
    missing = [frozenset(p) for p in itertools.combinations(cx.vertices, 2) if frozenset(p) not in cx.faces]
    assert missing and all(apex not in m for m in missing)


def test_cone_certificate_needs_ascents(stores):
    s = stores(4)
    with pytest.raises(PreconditionError):
        cone_certificate(3, 3, s)


@pytest.mark.parametrize("n", [4, 5])
def test_classification_agrees_with_scan(stores, n):
    s = stores(n)
    for r in scan_intervals(s):
        rep = classify_interval(r.x_id, r.y_id, s)
        assert (rep.facial, rep.asc_count, rep.mobius) == (r.facial, r.asc_count, r.mobius)
        assert (rep.certificate.rank if rep.certificate else None) == r.apex


@pytest.mark.parametrize("n,cells", [
    (4, {(True, 1): 9, (True, -1): 8, (False, 0): 10}),
    (5, {(True, 1): 102, (True, -1): 101, (False, 0): 502}),
])
def test_scan_cells(stores, n, cells):
    summary = check_theorem(scan_intervals(stores(n)))
    assert summary.ok
    assert dict(summary.cells) == cells


def test_facial_sub_intervals_are_facial(stores):
    s = stores(5)
    facial = {(r.x_id, r.y_id) for r in scan_intervals(s) if r.facial}
    for a, b in facial:
        x = s.family(a)
        asc = list(ascents(x, s.family(b)))
        for k in range(1, len(asc) + 1):
            for combo in itertools.combinations(asc, k):
                z = x | closure(SetFamily.from_members(s.params, [c.members for c in combo]))
                assert (a, s.id_of(z)) in facial


# facial-interval poset -----------------------------------------------------


@pytest.mark.parametrize("n,count,chi", [(4, 17, -1), (5, 203, 1)])
def test_omega(stores, n, count, chi):
    s = stores(n)
    om = omega_poset(s)
    assert len(om.intervals) == count
    assert om.reduced_euler == chi == (-1) ** (n - 3)
    assert om.top == (s.bottom, s.top)
    assert om.top in om.intervals
    assert all((i, i) in om.intervals for i in range(len(s)))
    assert all(p in om.intervals for p in s.cover_pairs())
