"""Enumeration of B(n,d) and order, interval and ascent queries."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .core import (
    GroundParams,
    SetFamily,
    SubsetCode,
    addable_bits,
    removable_bits,
    tables,
)
from .errors import (
    InvalidIntervalError,
    ResourceLimitError,
    UnsupportedDimensionError,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_N = {1: 8, 2: 7}
# Dense order matrices above this many elements are refused.
MAX_DENSE_ELEMENTS = 12_000


def default_ceiling(d: int) -> int:
    return DEFAULT_MAX_N.get(d, d + 4)


@dataclass
class PosetStore:
    """Graded element table of B(n,d) with its Hasse diagram.

    Element ids are positions in ``elements``, which is sorted by rank and,
    within a rank, by the integer value of the bit-vector (colex order).
    """

    params: GroundParams
    elements: list[int]
    covers_up: list[tuple[int, ...]]
    index: dict[int, int] = field(default_factory=dict)
    _zeta: np.ndarray | None = field(default=None, repr=False)
    _reach: np.ndarray | None = field(default=None, repr=False)
    _covers_down: list[tuple[int, ...]] | None = field(default=None, repr=False)
    _mobius: object = field(default=None, repr=False)

    def __post_init__(self):
        if not self.index:
            self.index = {b: i for i, b in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.elements) - 1

    def rank(self, i: int) -> int:
        return self.elements[i].bit_count()

    def family(self, i: int) -> SetFamily:
        return SetFamily(self.params, self.elements[i])

    def id_of(self, x) -> int:
        """Element id of a SetFamily, a raw bit-vector, or an id (passed through)."""
        if isinstance(x, SetFamily):
            if x.params != self.params:
                raise InvalidIntervalError("family belongs to a different ground set")
            bits = x.bits
        elif isinstance(x, (int, np.integer)):
            return int(x) if 0 <= x < len(self.elements) else self._missing(x)
        else:
            raise TypeError(f"cannot interpret {x!r} as an element")
        try:
            return self.index[bits]
        except KeyError:
            raise InvalidIntervalError(f"{SetFamily(self.params, bits)} is not an element of the store") from None

    def _missing(self, x):
        raise InvalidIntervalError(f"element id {x} out of range")

    @property
    def covers_down(self) -> list[tuple[int, ...]]:
        if self._covers_down is None:
            down = [[] for _ in self.elements]
            for a, ups in enumerate(self.covers_up):
                for b in ups:
                    down[b].append(a)
            self._covers_down = [tuple(sorted(x)) for x in down]
        return self._covers_down

    def cover_pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a, ups in enumerate(self.covers_up) for b in ups]

    def rank_slices(self) -> list[range]:
        out, start = [], 0
        for i in range(1, len(self.elements) + 1):
            if i == len(self.elements) or self.rank(i) != self.rank(start):
                out.append(range(start, i))
                start = i
        return out

    # dense order matrices

    def _check_dense(self):
        if len(self.elements) > MAX_DENSE_ELEMENTS:
            raise ResourceLimitError(
                f"dense order matrix for {len(self.elements)} elements exceeds {MAX_DENSE_ELEMENTS}"
            )

    def bit_matrix(self) -> np.ndarray:
        """Boolean (elements x subsets) membership matrix."""
        size = self.params.size
        return np.array(
            [[b >> r & 1 for r in range(size)] for b in self.elements], dtype=bool
        ).reshape(len(self.elements), size)

    def inclusion_matrix(self) -> np.ndarray:
        self._check_dense()
        e = self.bit_matrix().astype(np.int32)
        return (e @ (1 - e).T) == 0

    def reachability(self) -> np.ndarray:
        """``R[a, b]`` iff b is reachable from a along cover edges."""
        if self._reach is None:
            self._check_dense()
            m = len(self.elements)
            reach = np.zeros((m, m), dtype=bool)
            for a in range(m - 1, -1, -1):
                reach[a, a] = True
                for b in self.covers_up[a]:
                    reach[a] |= reach[b]
            self._reach = reach
        return self._reach

    @property
    def zeta(self) -> np.ndarray:
        """``Z[a, b]`` iff a <= b in the single-step order."""
        if self._zeta is None:
            # d=2 is ordered by inclusion; the equality itself is checked elsewhere.
            self._zeta = self.inclusion_matrix() if self.params.d == 2 else self.reachability()
        return self._zeta


def _bfs(params: GroundParams, downward: bool):
    tab = tables(params.n, params.d)
    size = len(tab.subsets)
    start = tab.full if downward else 0
    step = removable_bits if downward else addable_bits
    ranks = [[start]]
    edges = {}
    frontier = [start]
    for _ in range(size):
        nxt = set()
        for x in frontier:
            targets = []
            for r in range(size):
                has = x >> r & 1
                if has != downward:
                    continue
                if step(x, r, params):
                    y = x ^ (1 << r)
                    targets.append(y)
                    nxt.add(y)
            edges[x] = targets
        frontier = sorted(nxt)
        ranks.append(frontier)
    return ranks, edges


def enumerate_poset(params: GroundParams, max_n: int | None = None, direction: str = "up") -> PosetStore:
    """Breadth-first enumeration of B(n,d) by rank.

    ``direction="up"`` grows from the empty family by consistent single
    additions; ``"down"`` shrinks from the full family by consistent single
    removals. Both give the same store when the order is connected.
    """
    ceiling = default_ceiling(params.d) if max_n is None else max_n
    if params.n > ceiling:
        raise ResourceLimitError(f"n={params.n} exceeds the ceiling {ceiling} for d={params.d}")
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', not {direction!r}")
    downward = direction == "down"
    ranks, edges = _bfs(params, downward)
    if downward:
        ranks = ranks[::-1]
    elements = [b for level in ranks for b in level]
    index = {b: i for i, b in enumerate(elements)}
    ups = [[] for _ in elements]
    for x, targets in edges.items():
        for y in targets:
            lo, hi = (y, x) if downward else (x, y)
            ups[index[lo]].append(index[hi])
    covers_up = [tuple(sorted(u)) for u in ups]
    log.debug("enumerated B(%d,%d): %d elements", params.n, params.d, len(elements))
    return PosetStore(params, elements, covers_up, index)


@dataclass(frozen=True)
class AscentSet:
    members: tuple[SubsetCode, ...]
    relative_to: tuple[SetFamily, SetFamily]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def ascent_ranks(x_bits: int, y_bits: int, params: GroundParams) -> list[int]:
    diff = y_bits & ~x_bits
    out = []
    r = 0
    while diff:
        if diff & 1 and addable_bits(x_bits, r, params):
            out.append(r)
        diff >>= 1
        r += 1
    return out


def ascents(x: SetFamily, y: SetFamily, store: PosetStore | None = None) -> AscentSet:
    """Members I of Y - X for which X + {I} is consistent."""
    if store is not None:
        x, y = store.family(store.id_of(x)), store.family(store.id_of(y))
    if not x.issubset(y):
        raise InvalidIntervalError(f"{x} is not contained in {y}")
    subsets = tables(x.params.n, x.params.d).subsets
    members = tuple(SubsetCode(r, subsets[r]) for r in ascent_ranks(x.bits, y.bits, x.params))
    return AscentSet(members, (x, y))


def ascent_components(codes, d: int) -> list[tuple[SubsetCode, ...]]:
    """Split ascents into chains linked by members sharing d labels.

    Components come out ordered by their colex-least member; each component
    is sorted lexicographically by labels.
    """
    codes = sorted(codes)
    parent = list(range(len(codes)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(len(codes)):
        for j in range(i + 1, len(codes)):
            if len(set(codes[i].members) & set(codes[j].members)) == d:
                parent[find(i)] = find(j)
    groups = {}
    for i, c in enumerate(codes):
        groups.setdefault(find(i), []).append(c)
    comps = [tuple(sorted(g, key=lambda c: c.members)) for g in groups.values()]
    comps.sort(key=lambda g: min(c.rank for c in g))
    return comps


def leq(x, y, store: PosetStore) -> bool:
    """Single-step order; inclusion for d=2, cover reachability otherwise."""
    a, b = store.id_of(x), store.id_of(y)
    if store.params.d == 2:
        return store.elements[a] & ~store.elements[b] == 0
    return bool(store.reachability()[a, b])


def witness_chain(x, y, store: PosetStore) -> list[int] | None:
    """A saturated chain of cover edges from x up to y, or None."""
    a, b = store.id_of(x), store.id_of(y)
    target = store.elements[b]
    parent = {a: None}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        if u == b:
            chain = []
            while u is not None:
                chain.append(u)
                u = parent[u]
            return chain[::-1]
        for v in store.covers_up[u]:
            if v not in parent and store.elements[v] & ~target == 0:
                parent[v] = u
                queue.append(v)
    return None


def interval_elements(x, y, store: PosetStore) -> list[int]:
    a, b = store.id_of(x), store.id_of(y)
    if not leq(a, b, store):
        raise InvalidIntervalError(f"{store.family(a)} is not below {store.family(b)}")
    if store.params.d == 2:
        lo, hi = store.elements[a], store.elements[b]
        return [
            i
            for i in range(a, b + 1)
            if store.elements[i] & lo == lo and store.elements[i] & ~hi == 0
        ]
    reach = store.reachability()
    return [int(i) for i in np.flatnonzero(reach[a] & reach[:, b])]


def verify_inclusion_equals_singlestep(store: PosetStore) -> bool:
    """Every inclusion X <= Y between elements is realised by a cover path.

    Uses cover reachability computed from the Hasse diagram only.
    """
    if store.params.d != 2:
        raise UnsupportedDimensionError("the inclusion check is defined for d=2 only")
    return bool(np.array_equal(store.inclusion_matrix(), store.reachability()))


def minimal_upper_bounds(a: int, b: int, store: PosetStore) -> list[int]:
    z = store.zeta
    ub = np.flatnonzero(z[a] & z[b])
    sub = z[np.ix_(ub, ub)]
    # u is minimal iff it is above no other upper bound
    strictly_below = sub.sum(axis=0) - 1
    return [int(u) for u, k in zip(ub, strictly_below) if k == 0]


def find_non_lattice_witness(store: PosetStore):
    """First pair (a, b) in id order with two or more minimal upper bounds."""
    z = store.zeta
    m = len(store)
    for a in range(m):
        for b in range(a + 1, m):
            if z[a, b] or z[b, a]:
                continue
            mubs = minimal_upper_bounds(a, b, store)
            if len(mubs) >= 2:
                return a, b, mubs
    return None
