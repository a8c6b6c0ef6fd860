"""Wiring diagrams of consistent subsets of C([n],3).

Conventions. Wires are read from the right, where they appear as 1..n
top-to-bottom; the sweep proceeds leftwards and crossing ``t`` (1-based)
occupies column ``t``. Gap ``g`` is the vertical slice after ``g``
crossings, so gap 0 is the right edge. Wire levels run 1..n from the
bottom; a crossing at level ``L`` swaps the wires at levels ``L`` and
``L+1``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import NamedTuple

from .core import (
    GroundParams,
    SetFamily,
    SubsetCode,
    closure_bits,
    consistent_bits,
    subset_codec,
    tables,
)
from .errors import (
    InconsistentFamilyError,
    PreconditionError,
    TheoremViolation,
    UnsupportedDimensionError,
)
from .poset import ascent_components, ascent_ranks


@dataclass(frozen=True)
class LocalSequences:
    n: int
    pi: tuple[tuple[int, ...], ...]

    def __getitem__(self, wire: int) -> tuple[int, ...]:
        return self.pi[wire - 1]

    @functools.cached_property
    def positions(self) -> tuple[dict[int, int], ...]:
        return tuple({a: t for t, a in enumerate(seq)} for seq in self.pi)

    def between(self, wire: int, p: int, a: int, b: int) -> bool:
        """Whether ``wire`` meets ``p`` strictly between meeting ``a`` and ``b``."""
        pos = self.positions[wire - 1]
        lo, hi = sorted((pos[a], pos[b]))
        return lo < pos[p] < hi


@dataclass(frozen=True)
class Crossing:
    column: int
    level: int
    pair: tuple[int, int]


@dataclass(frozen=True)
class WiringNetwork:
    n: int
    crossings: tuple[Crossing, ...]
    trajectory: tuple[tuple[int, ...], ...]
    local: LocalSequences

    @functools.cached_property
    def by_pair(self) -> dict[tuple[int, int], Crossing]:
        return {c.pair: c for c in self.crossings}

    def crossing(self, a: int, b: int) -> Crossing:
        return self.by_pair[(min(a, b), max(a, b))]

    def level(self, wire: int, gap: int) -> int:
        return self.trajectory[wire - 1][gap]


@dataclass(frozen=True)
class SegmentInfo:
    triple: SubsetCode
    elementary: bool
    height: int | None


@dataclass(frozen=True)
class AscentBlock:
    support: tuple[int, ...]
    members: tuple[SubsetCode, ...]
    height: int | None

    @property
    def windows(self) -> tuple[tuple[int, ...], ...]:
        s = self.support
        return tuple(s[t:t + 3] for t in range(len(s) - 2))


class BlockFlip(NamedTuple):
    addable: bool
    witness: int | None


def _check_d2(family: SetFamily):
    if family.params.d != 2:
        raise UnsupportedDimensionError("wiring diagrams model d=2 only")


def _find_three_cycle(labels, before):
    for a, b, c in itertools.permutations(labels, 3):
        if before(a, b) and before(b, c) and before(c, a):
            return (a, b, c)
    return None


@functools.lru_cache(maxsize=8192)
def local_sequences(family: SetFamily) -> LocalSequences:
    """For labels a < b other than w: a precedes b in pi_w iff {w,a,b} is in X."""
    _check_d2(family)
    n = family.params.n
    bits = family.bits
    rank = tables(n, 2).rank
    pis = []
    for w in range(1, n + 1):
        others = [a for a in range(1, n + 1) if a != w]

        def before(a, b, w=w):
            lo, hi = (a, b) if a < b else (b, a)
            inv = bool(bits >> rank[tuple(sorted((w, lo, hi)))] & 1)
            return inv if a < b else not inv

        wins = {a: sum(before(a, b) for b in others if b != a) for a in others}
        seq = sorted(others, key=lambda a: -wins[a])
        if any(not before(a, b) for a, b in itertools.combinations(seq, 2)):
            cycle = _find_three_cycle(others, before)
            raise InconsistentFamilyError(
                f"{family} is inconsistent: local order of wire {w} has cycle {cycle}",
                wire=w,
                cycle=cycle,
            )
        pis.append(tuple(seq))
    return LocalSequences(n, tuple(pis))


@functools.lru_cache(maxsize=8192)
def build_network(family: SetFamily) -> WiringNetwork:
    """Greedy sweep realising ``family`` as a simple wiring diagram.

    Fires the lowest fireable adjacent pair at each step.
    """
    local = local_sequences(family)
    n = family.params.n
    order = list(range(1, n + 1))  # top to bottom
    nxt = {w: 0 for w in order}
    crossings = []
    trajectory = {w: [n - p] for p, w in enumerate(order)}
    for column in range(1, n * (n - 1) // 2 + 1):
        for p in range(n - 2, -1, -1):
            u, v = order[p], order[p + 1]
            pu, pv = local[u], local[v]
            if nxt[u] < n - 1 and nxt[v] < n - 1 and pu[nxt[u]] == v and pv[nxt[v]] == u:
                break
        else:
            raise InconsistentFamilyError(f"no fireable pair in column {column} for {family}")
        order[p], order[p + 1] = v, u
        nxt[u] += 1
        nxt[v] += 1
        crossings.append(Crossing(column, n - 1 - p, (min(u, v), max(u, v))))
        for q, w in enumerate(order):
            trajectory[w].append(n - q)
    traj = tuple(tuple(trajectory[w]) for w in range(1, n + 1))
    return WiringNetwork(n, tuple(crossings), traj, local)


def inversion_set(network: WiringNetwork) -> SetFamily:
    """Triples i<j<k whose i,k crossing lies below wire j."""
    n = network.n
    params = GroundParams(n, 2)
    members = []
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        c = network.crossing(i, k)
        if c.level < network.level(j, c.column):
            members.append((i, j, k))
    return SetFamily.from_members(params, members)


def _as_network(x) -> WiringNetwork:
    return x if isinstance(x, WiringNetwork) else build_network(x)


def floor_info(family: SetFamily, triple) -> SegmentInfo:
    """Floor of a non-inversion {i<j<k}: the piece of wire j between i and k."""
    _check_d2(family)
    code = triple if isinstance(triple, SubsetCode) else subset_codec(triple, family.params)
    if family.bits >> code.rank & 1:
        raise PreconditionError(f"{code} is an inversion of {family}")
    return _floor(build_network(family), code)


def _floor(net: WiringNetwork, code: SubsetCode) -> SegmentInfo:
    i, j, k = code.members
    pos = net.local.positions[j - 1]
    # non-inversion: wire j meets k before i
    elementary = pos[i] == pos[k] + 1
    height = None
    if elementary:
        height = net.level(j, net.crossing(j, k).column) - 1
    return SegmentInfo(code, elementary, height)


def is_flippable(family: SetFamily, triple) -> bool:
    """Non-inversion whose three pairwise crossings bound an empty triangle."""
    code = triple if isinstance(triple, SubsetCode) else subset_codec(triple, family.params)
    if family.bits >> code.rank & 1:
        return False
    local = local_sequences(family)
    i, j, k = code.members
    adjacent = lambda w, a, b: abs(local.positions[w - 1][a] - local.positions[w - 1][b]) == 1
    return adjacent(i, j, k) and adjacent(j, i, k) and adjacent(k, i, j)


def heights(family: SetFamily, codes) -> dict[SubsetCode, int | None]:
    net = build_network(family)
    return {c: _floor(net, c).height for c in codes}


def ascent_blocks(x: SetFamily, y: SetFamily) -> list[AscentBlock]:
    """Ascents of (X, Y) grouped into chains of triples sharing two labels."""
    _check_d2(x)
    subsets = tables(x.params.n, 2).subsets
    codes = [SubsetCode(r, subsets[r]) for r in ascent_ranks(x.bits, y.bits, x.params)]
    net = build_network(x) if codes else None
    blocks = []
    for comp in ascent_components(codes, 2):
        support = tuple(sorted(set().union(*(c.members for c in comp))))
        blocks.append(AscentBlock(support, comp, _floor(net, comp[0]).height))
    return blocks


def _block_windows(support, params):
    rank = tables(params.n, 2).rank
    return [SubsetCode(rank[w], w) for w in (tuple(support[t:t + 3]) for t in range(len(support) - 2))]


def witness_wire(family: SetFamily, support) -> int | None:
    """A wire outside the block cutting both outer floor segments.

    With support i_0 < ... < i_m, these are the piece of i_0 between i_1 and
    i_m, and the piece of i_m between i_0 and i_{m-1}.
    """
    local = local_sequences(family)
    s = tuple(sorted(support))
    first, last = s[0], s[-1]
    for p in range(1, family.params.n + 1):
        if p in s:
            continue
        if local.between(first, p, s[1], last) and local.between(last, p, first, s[-2]):
            return p
    return None


def block_flip_check(family: SetFamily, support) -> BlockFlip:
    """Whether X + closure(block) is consistent, cross-checked against the wire criterion."""
    _check_d2(family)
    s = tuple(sorted(support))
    if len(s) < 3:
        raise PreconditionError(f"a block needs at least three labels, got {s}")
    net = build_network(family)
    windows = _block_windows(s, family.params)
    for w in windows:
        if family.bits >> w.rank & 1:
            raise PreconditionError(f"window {w} is an inversion of {family}")
        if not _floor(net, w).elementary:
            raise PreconditionError(f"window {w} has a non-elementary floor")
    block_bits = sum(1 << w.rank for w in windows)
    addable = consistent_bits(family.bits | closure_bits(block_bits, family.params), family.params)
    witness = witness_wire(family, s)
    if addable != (witness is None):
        raise TheoremViolation(
            f"closure test says addable={addable} but witness wire is {witness} for block {s} of {family}",
            witness=(family, s),
        )
    return BlockFlip(addable, witness)


def elementary_blocks(x: SetFamily, y: SetFamily) -> list[AscentBlock]:
    """Every block inside Y - X whose floor is elementary in the diagram of X."""
    _check_d2(x)
    net = build_network(x)
    diff = y.bits & ~x.bits
    n = x.params.n
    out = []
    for size in range(3, n + 1):
        for s in itertools.combinations(range(1, n + 1), size):
            windows = _block_windows(s, x.params)
            if not all(diff >> w.rank & 1 for w in windows):
                continue
            infos = [_floor(net, w) for w in windows]
            if all(f.elementary for f in infos):
                out.append(AscentBlock(s, tuple(windows), infos[0].height))
    return out


def max_height_ascent(x: SetFamily, y: SetFamily) -> SubsetCode:
    """An ascent of (X, Y) of maximum floor height; ties go to the colex-least."""
    _check_d2(x)
    subsets = tables(x.params.n, 2).subsets
    ranks = ascent_ranks(x.bits, y.bits, x.params)
    if not ranks:
        raise PreconditionError(f"no ascents between {x} and {y}")
    net = build_network(x)
    codes = [SubsetCode(r, subsets[r]) for r in ranks]
    floors = {c: _floor(net, c) for c in codes}
    flat = [c for c, f in floors.items() if not f.elementary]
    if flat:
        raise TheoremViolation(f"ascent {flat[0]} of {x} has a non-elementary floor", witness=(x, flat[0]))
    return max(codes, key=lambda c: (floors[c].height, -c.rank))
