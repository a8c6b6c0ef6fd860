"""Named invariant suites, shared by the CLI ``verify`` command and the tests.

Each suite returns a SuiteResult; a suite never raises on a failed
invariant, it records the witness instead.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .core import (
    GroundParams,
    SetFamily,
    SubsetCode,
    closure_bits,
    consistent_bits,
    tables,
)
from .errors import BruhatError, ResourceLimitError
from .poset import (
    PosetStore,
    ascent_components,
    ascent_ranks,
    enumerate_poset,
    find_non_lattice_witness,
    verify_inclusion_equals_singlestep,
)
from .scan import check_theorem, scan_intervals
from .topology import euler_oracle, mobius, omega_poset
from .wiring import (
    ascent_blocks,
    block_flip_check,
    build_network,
    elementary_blocks,
    inversion_set,
    max_height_ascent,
    _floor,
)

EXHAUSTIVE_WIDTH = 22


@dataclass
class SuiteResult:
    name: str
    ok: bool = True
    lines: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def check(self, label: str, ok: bool, detail: str = ""):
        self.lines.append(f"{label}: {'OK' if ok else 'FAIL'}{' ' + detail if detail else ''}")
        self.ok = self.ok and ok
        return ok

    def __str__(self):
        return "\n".join([f"[{self.name}] {'PASS' if self.ok else 'FAIL'}"] + ["  " + s for s in self.lines])


def exhaustive_consistent(n: int, d: int) -> np.ndarray:
    """All consistent families as bit-vectors, by testing every family.

    Uses only the definition: a family and its complement are both closed.
    The closure rules are rebuilt here from labels, not taken from the tables.
    """
    k = d + 1
    subsets = sorted(itertools.combinations(range(1, n + 1), k), key=lambda s: s[::-1])
    width = len(subsets)
    if width > EXHAUSTIVE_WIDTH:
        raise ResourceLimitError(f"2^{width} families is too many to test exhaustively")
    pos = {s: r for r, s in enumerate(subsets)}
    fams = np.arange(1 << width, dtype=np.uint32)
    bad = np.zeros(1 << width, dtype=bool)
    for base in itertools.combinations(range(1, n + 1), d - 1):
        rest = [a for a in range(1, n + 1) if a not in base]
        for i, j, l in itertools.combinations(rest, 3):
            a = (fams >> pos[tuple(sorted(base + (i, j)))]) & 1
            b = (fams >> pos[tuple(sorted(base + (j, l)))]) & 1
            c = (fams >> pos[tuple(sorted(base + (i, l)))]) & 1
            bad |= (a & b & (1 - c)).astype(bool)
            bad |= ((1 - a) & (1 - b) & c).astype(bool)
    return fams[~bad]


def enumeration_suite(n: int, d: int = 2) -> SuiteResult:
    res = SuiteResult(f"enumeration n={n} d={d}")
    params = GroundParams(n, d)
    store = enumerate_poset(params, max_n=max(n, 7))
    res.stats["elements"] = len(store)
    if comb(n, d + 1) <= EXHAUSTIVE_WIDTH:
        oracle = exhaustive_consistent(n, d)
        same = sorted(int(b) for b in oracle) == sorted(store.elements)
        res.check("BFS element set equals exhaustive consistency scan", same,
                  f"({len(store)} vs {len(oracle)})")
    down = enumerate_poset(params, max_n=max(n, 7), direction="down")
    res.check("upward and downward BFS agree",
              down.elements == store.elements and down.covers_up == store.covers_up,
              f"({len(store)} elements)")
    graded = all(store.rank(b) == store.rank(a) + 1 for a, b in store.cover_pairs())
    res.check("every cover adds exactly one member", graded)
    res.check("bottom is empty and top is full",
              store.elements[0] == 0 and store.elements[-1] == tables(n, d).full)
    return res


def inclusion_suite(store: PosetStore) -> SuiteResult:
    res = SuiteResult(f"inclusion-order n={store.params.n}")
    res.check("inclusion order equals cover reachability on every pair",
              verify_inclusion_equals_singlestep(store), f"({len(store) ** 2} pairs)")
    return res


def theorem_suite(store: PosetStore, workers: int = 1) -> SuiteResult:
    res = SuiteResult(f"theorem-main n={store.params.n}")
    summary = check_theorem(scan_intervals(store, workers=workers))
    res.stats = summary.as_record()
    res.violations = summary.violations
    detail = ", ".join(f"{k}: {v}" for k, v in res.stats["cells"].items())
    res.check(f"facial ⇔ μ≠0 over all {summary.intervals} intervals", summary.ok, f"({detail})")
    if summary.violations:
        r, problems = summary.violations[0]
        res.lines.append(f"first violation: [{store.family(r.x_id)}, {store.family(r.y_id)}] {problems}")
    return res


def proper_pairs(store: PosetStore) -> np.ndarray:
    z = store.zeta
    return np.argwhere(z & ~np.eye(len(store), dtype=bool))


def sample_pairs(store: PosetStore, count: int | None, seed: int) -> list[tuple[int, int]]:
    """All proper comparable pairs, or ``count`` of them drawn without replacement."""
    pairs = [(int(a), int(b)) for a, b in proper_pairs(store)]
    if count is None or count >= len(pairs):
        return pairs
    rng = random.Random(seed)
    return sorted(rng.sample(pairs, count))


def hall_suite(store: PosetStore, samples: int | None = None, seed: int = 0,
               max_chains: int = 1 << 40) -> SuiteResult:
    res = SuiteResult(f"hall n={store.params.n}")
    pairs = sample_pairs(store, samples, seed)
    bad = []
    skipped = 0
    for a, b in pairs:
        try:
            chi = euler_oracle(a, b, store, max_chains=max_chains)
        except ResourceLimitError:
            skipped += 1
            continue
        if chi != mobius(a, b, store):
            bad.append((a, b))
    res.violations = bad
    res.stats = {"checked": len(pairs) - skipped, "skipped": skipped, "seed": seed}
    res.check("Moebius recursion equals chain-count Euler characteristic", not bad,
              f"({len(pairs) - skipped} intervals, {skipped} over budget)")
    return res


def sphere_suite(store: PosetStore, omega: bool = True) -> SuiteResult:
    n = store.params.n
    res = SuiteResult(f"sphere n={n}")
    mu = mobius(store.bottom, store.top, store)
    res.check("mu of the full interval is (-1)^(n-4)", mu == (-1) ** (n - 4), f"(mu={mu})")
    if omega:
        om = omega_poset(store)
        res.stats = {"facial_intervals": len(om.intervals), "reduced_euler": om.reduced_euler}
        res.check("facial-interval poset proper part has reduced Euler (-1)^(n-3)",
                  om.reduced_euler == (-1) ** (n - 3),
                  f"({len(om.intervals)} facial intervals, chi={om.reduced_euler})")
    return res


def roundtrip_suite(store: PosetStore, samples: int | None = None, seed: int = 0) -> SuiteResult:
    res = SuiteResult(f"roundtrip n={store.params.n}")
    ids = list(range(len(store)))
    if samples is not None and samples < len(ids):
        ids = sorted(random.Random(seed).sample(ids, samples))
    bad = [i for i in ids if inversion_set(build_network(store.family(i))) != store.family(i)]
    res.violations = bad
    res.check("inversion set of the built network equals the family", not bad, f"({len(ids)} elements)")
    return res


def non_lattice_suite(store: PosetStore) -> SuiteResult:
    res = SuiteResult(f"non-lattice n={store.params.n}")
    w = find_non_lattice_witness(store)
    if w is None:
        res.check("a pair with two minimal upper bounds exists", False)
        return res
    a, b, mubs = w
    res.stats = {"pair": (store.family(a).to_text(), store.family(b).to_text()),
                 "minimal_upper_bounds": [store.family(u).to_text() for u in mubs]}
    res.check("a pair with two minimal upper bounds exists", True,
              f"({store.family(a)} and {store.family(b)}: "
              + " | ".join(str(store.family(u)) for u in mubs) + ")")
    return res


# structural lemmas -------------------------------------------------------


def _codes(ranks, params):
    subsets = tables(params.n, params.d).subsets
    return [SubsetCode(r, subsets[r]) for r in ranks]


def check_ascent_decomposition(store: PosetStore) -> list:
    """Ascent chains are the contiguous windows of their supports and
    members of distinct chains share fewer than d labels."""
    params = store.params
    d = params.d
    top = store.elements[-1]
    bad = []
    for x in range(len(store)):
        codes = _codes(ascent_ranks(store.elements[x], top, params), params)
        comps = ascent_components(codes, d)
        for comp in comps:
            support = sorted(set().union(*(c.members for c in comp)))
            windows = [tuple(support[t:t + d + 1]) for t in range(len(support) - d)]
            if [c.members for c in comp] != windows:
                bad.append((x, "not windows", comp))
        for s, t in itertools.combinations(range(len(comps)), 2):
            for i in comps[s]:
                for j in comps[t]:
                    if len(set(i.members) & set(j.members)) >= d:
                        bad.append((x, "cross intersection", (i, j)))
        if d == 2 and comps:
            net = build_network(store.family(x))
            for comp in comps:
                hs = {_floor(net, c).height for c in comp}
                if len(hs) != 1 or None in hs:
                    bad.append((x, "unequal heights", comp))
    return bad


def check_ascent_closure_disjoint(store: PosetStore) -> list:
    params = store.params
    top = store.elements[-1]
    bad = []
    for x, bits in enumerate(store.elements):
        asc = sum(1 << r for r in ascent_ranks(bits, top, params))
        if bits & closure_bits(asc, params):
            bad.append(x)
    return bad


def check_overlapping_blocks(store: PosetStore) -> tuple[list, int]:
    """Two ascent blocks overlapping in two or more labels: the overlap is
    the two ends of the higher block and the lower block is not addable."""
    params = store.params
    full = SetFamily.full(params)
    bad = []
    hits = 0
    for x in range(len(store)):
        fx = store.family(x)
        blocks = ascent_blocks(fx, full)
        for bs, bt in itertools.permutations(blocks, 2):
            common = set(bs.support) & set(bt.support)
            if len(common) < 2 or bs.height > bt.height:
                continue
            hits += 1
            if common != {bt.support[0], bt.support[-1]}:
                bad.append((x, bs.support, bt.support, "overlap"))
            members = sum(1 << c.rank for c in bs.members)
            if consistent_bits(fx.bits | closure_bits(members, params), params):
                bad.append((x, bs.support, bt.support, "lower block addable"))
    return bad, hits


def check_witness_wire(store: PosetStore) -> tuple[list, dict]:
    """For every block of non-inversions with elementary floor, the closure
    test and the cutting-wire test agree."""
    n = store.params.n
    bad = []
    tally = {"blocks": 0, "cut": 0}
    for x in range(len(store)):
        fx = store.family(x)
        net = build_network(fx)
        rank = tables(n, 2).rank
        for size in range(3, n + 1):
            for s in itertools.combinations(range(1, n + 1), size):
                windows = [s[t:t + 3] for t in range(size - 2)]
                if any(fx.bits >> rank[w] & 1 for w in windows):
                    continue
                if not all(_floor(net, SubsetCode(rank[w], w)).elementary for w in windows):
                    continue
                tally["blocks"] += 1
                try:
                    flip = block_flip_check(fx, s)
                except BruhatError as e:
                    bad.append((x, s, str(e)))
                    continue
                tally["cut"] += not flip.addable
    return bad, tally


def check_difference_floors(store: PosetStore, pairs) -> list:
    """Some member of Y - X has an elementary floor, and every one of
    maximal height among those is an ascent."""
    params = store.params
    bad = []
    for a, b in pairs:
        fx = store.family(a)
        net = build_network(fx)
        diff = _codes(SetFamily(params, store.elements[b] & ~fx.bits).ranks(), params)
        infos = [_floor(net, c) for c in diff]
        elem = [f for f in infos if f.elementary]
        if not elem:
            bad.append((a, b, "no elementary floor"))
            continue
        top_h = max(f.height for f in elem)
        for f in elem:
            if f.height == top_h and not consistent_bits(fx.bits | 1 << f.triple.rank, params):
                bad.append((a, b, f"max-height {f.triple} not addable"))
    return bad


def check_max_height_blocks(store: PosetStore, pairs) -> list:
    params = store.params
    bad = []
    for a, b in pairs:
        fx = store.family(a)
        blocks = elementary_blocks(fx, store.family(b))
        if not blocks:
            bad.append((a, b, "no elementary block"))
            continue
        top_h = max(bl.height for bl in blocks)
        for bl in blocks:
            if bl.height != top_h:
                continue
            members = sum(1 << c.rank for c in bl.members)
            if not consistent_bits(fx.bits | closure_bits(members, params), params):
                bad.append((a, b, bl.support))
    return bad


def check_cone_property(store: PosetStore, pairs) -> tuple[list, int]:
    """Adding the max-height ascent keeps every consistent ascent union consistent."""
    params = store.params
    bad = []
    count = 0
    for a, b in pairs:
        fx, fy = store.family(a), store.family(b)
        apex = max_height_ascent(fx, fy)
        asc = _codes(ascent_ranks(fx.bits, fy.bits, params), params)
        for k in range(1, len(asc) + 1):
            for combo in itertools.combinations(asc, k):
                members = sum(1 << c.rank for c in combo)
                if not consistent_bits(fx.bits | closure_bits(members, params), params):
                    continue
                count += 1
                if not consistent_bits(fx.bits | closure_bits(members | 1 << apex.rank, params), params):
                    bad.append((a, b, combo))
    return bad, count


def lemma_suite(store: PosetStore, samples: int | None = None, seed: int = 0) -> SuiteResult:
    """Structural lemmas; per-element checks are always exhaustive,
    per-interval checks use ``samples`` random pairs when given."""
    res = SuiteResult(f"lemmas n={store.params.n}")
    m = len(store)
    bad = check_ascent_decomposition(store)
    res.check("ascent chains are contiguous windows of equal height", not bad, f"({m} elements)")
    res.violations += bad
    bad = check_ascent_closure_disjoint(store)
    res.check("X is disjoint from the closure of its ascents", not bad, f"({m} elements)")
    res.violations += bad
    bad, tally = check_witness_wire(store)
    res.check("closure test agrees with the cutting-wire test", not bad,
              f"({tally['blocks']} blocks, {tally['cut']} cut)")
    res.violations += bad
    bad, hits = check_overlapping_blocks(store)
    res.check("overlapping ascent blocks meet at the ends of the higher one", not bad,
              f"({hits} overlapping pairs)")
    res.violations += bad
    pairs = sample_pairs(store, samples, seed)
    bad = check_difference_floors(store, pairs)
    res.check("max-height elementary difference triple is an ascent", not bad, f"({len(pairs)} intervals)")
    res.violations += bad
    bad = check_max_height_blocks(store, pairs)
    res.check("max-height elementary difference block is addable", not bad, f"({len(pairs)} intervals)")
    res.violations += bad
    bad, count = check_cone_property(store, pairs)
    res.check("max-height ascent cones every consistent ascent union", not bad,
              f"({len(pairs)} intervals, {count} unions)")
    res.violations += bad
    res.stats = {"pairs": len(pairs), "seed": seed}
    return res
