"""Moebius function, reduced Euler characteristics and interval classification."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import SetFamily, SubsetCode, closure_bits, consistent_bits
from .errors import (
    InvalidIntervalError,
    PreconditionError,
    ResourceLimitError,
    TheoremViolation,
    UnsupportedDimensionError,
)
from .poset import AscentSet, PosetStore, ascents, leq
from .wiring import max_height_ascent

DEFAULT_MAX_CHAINS = 1 << 20


class MobiusTable:
    """Memoised Moebius values of one store, filled a whole row at a time.

    ``mu(x, z)`` for every z above x comes from the recursion
    mu(x, z) = -sum of mu(x, w) over x <= w < z.
    """

    def __init__(self, store: PosetStore):
        self.store = store
        self.memo: dict[tuple[int, int], int] = {}
        self._rows: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def row(self, x: int) -> tuple[np.ndarray, np.ndarray]:
        """(ids of the up-set of x, Moebius values on them), ids in rank order."""
        if x not in self._rows:
            z = self.store.zeta
            up = np.flatnonzero(z[x])
            sub = z[np.ix_(up, up)].astype(np.int64)
            mu = np.zeros(len(up), dtype=np.int64)
            mu[0] = 1
            for t in range(1, len(up)):
                mu[t] = -(mu[:t] @ sub[:t, t])
            self._rows[x] = (up, mu)
        return self._rows[x]

    def __call__(self, x: int, y: int) -> int:
        key = (x, y)
        if key not in self.memo:
            up, mu = self.row(x)
            t = np.searchsorted(up, y)
            if t == len(up) or up[t] != y:
                raise InvalidIntervalError(f"element {x} is not below {y}")
            self.memo[key] = int(mu[t])
        return self.memo[key]


def mobius_table(store: PosetStore) -> MobiusTable:
    if store._mobius is None:
        store._mobius = MobiusTable(store)
    return store._mobius


def mobius(x, y, store: PosetStore) -> int:
    a, b = store.id_of(x), store.id_of(y)
    if not leq(a, b, store):
        raise InvalidIntervalError(f"{store.family(a)} is not below {store.family(b)}")
    return mobius_table(store)(a, b)


def chain_counts(strict: np.ndarray, max_chains: int = DEFAULT_MAX_CHAINS) -> list[int]:
    """Number of chains with 1, 2, ... elements of a poset.

    ``strict[u, v]`` means u < v. Raises ResourceLimitError once the
    running total passes ``max_chains``.
    """
    m = strict.shape[0]
    if m == 0:
        return []
    a = strict.astype(np.int64)
    col = np.ones(m, dtype=np.int64)
    counts = []
    total = 0
    while col.any():
        c = int(col.sum())
        total += c
        if total > max_chains:
            raise ResourceLimitError(f"more than {max_chains} chains")
        counts.append(c)
        col = col @ a
    return counts


def reduced_euler(counts: list[int]) -> int:
    return -1 + sum((-1) ** k * c for k, c in enumerate(counts))


def euler_oracle(x, y, store: PosetStore, max_chains: int = DEFAULT_MAX_CHAINS) -> int:
    """Reduced Euler characteristic of the open interval by counting its chains."""
    a, b = store.id_of(x), store.id_of(y)
    if a == b or not leq(a, b, store):
        raise InvalidIntervalError("euler_oracle needs x < y")
    z = store.zeta
    inner = np.flatnonzero(z[a] & z[:, b])
    inner = inner[(inner != a) & (inner != b)]
    sub = z[np.ix_(inner, inner)].copy()
    np.fill_diagonal(sub, False)
    return reduced_euler(chain_counts(sub, max_chains))


@dataclass(frozen=True)
class AscComplex:
    """Simplicial complex on the ascents of an interval.

    ``consistent_sets`` holds every nonempty set of ascents whose closure
    joins X consistently; this family need not be closed under subsets.
    ``faces`` keeps the sets all of whose nonempty subsets are consistent,
    i.e. exactly the ascent sets of the facial intervals [X, Z] below Y.
    """

    base: AscentSet
    faces: frozenset[frozenset[SubsetCode]]
    consistent_sets: frozenset[frozenset[SubsetCode]]

    @property
    def vertices(self) -> tuple[SubsetCode, ...]:
        return self.base.members

    @staticmethod
    def _closed(family) -> bool:
        for f in family:
            for g in itertools.combinations(sorted(f), len(f) - 1):
                if g and frozenset(g) not in family:
                    return False
        return True

    def is_downward_closed(self) -> bool:
        return self._closed(self.faces)

    def has_all_singletons(self) -> bool:
        return all(frozenset([v]) in self.faces for v in self.vertices)

    def is_full_simplex(self) -> bool:
        return len(self.faces) == 2 ** len(self.vertices) - 1

    def is_cone(self, apex: SubsetCode, raw: bool = False) -> bool:
        family = self.consistent_sets if raw else self.faces
        return all(f | {apex} in family for f in family)


def _require_d2(store: PosetStore):
    if store.params.d != 2:
        raise UnsupportedDimensionError("interval classification is defined for d=2 only")


def asc_complex(x, y, store: PosetStore, max_ascents: int | None = None) -> AscComplex:
    """Walk the subsets of Asc(X, Y), memoising closure unions."""
    _require_d2(store)
    a, b = store.id_of(x), store.id_of(y)
    if not leq(a, b, store):
        raise InvalidIntervalError(f"{store.family(a)} is not below {store.family(b)}")
    fx, fy = store.family(a), store.family(b)
    asc = ascents(fx, fy)
    k = len(asc)
    limit = 2 * store.params.n if max_ascents is None else max_ascents
    if k > limit:
        raise ResourceLimitError(f"{k} ascents exceed the budget {limit}")
    params = store.params
    consistent = [False] * (1 << k)
    hereditary = [True] * (1 << k)
    for mask in range(1, 1 << k):
        bits = closure_bits(sum(1 << asc.members[t].rank for t in range(k) if mask >> t & 1), params)
        consistent[mask] = consistent_bits(fx.bits | bits, params)
        hereditary[mask] = consistent[mask] and all(
            hereditary[mask & ~(1 << t)] for t in range(k) if mask >> t & 1
        )

    def as_set(mask):
        return frozenset(asc.members[t] for t in range(k) if mask >> t & 1)

    faces = frozenset(as_set(m) for m in range(1, 1 << k) if hereditary[m])
    raw = frozenset(as_set(m) for m in range(1, 1 << k) if consistent[m])
    return AscComplex(asc, faces, raw)


@dataclass(frozen=True)
class IntervalReport:
    x: SetFamily
    y: SetFamily
    asc_count: int
    facial: bool
    sphere_dim: int | None
    mobius: int
    certificate: SubsetCode | None = None

    def as_record(self) -> dict:
        rec = {
            "x": self.x.to_text(),
            "y": self.y.to_text(),
            "asc": self.asc_count,
            "facial": self.facial,
            "mobius": self.mobius,
        }
        if self.certificate is not None:
            rec["apex"] = "".join(str(a) for a in self.certificate.members)
        return rec


def _closure_union(fx: SetFamily, members) -> int:
    return fx.bits | closure_bits(sum(1 << c.rank for c in members), fx.params)


def cone_certificate(x, y, store: PosetStore, complex_: AscComplex | None = None) -> SubsetCode:
    """Max-height ascent, checked to be a cone point of the ascent complex."""
    _require_d2(store)
    a, b = store.id_of(x), store.id_of(y)
    cx = complex_ if complex_ is not None else asc_complex(a, b, store)
    if not cx.vertices:
        raise PreconditionError("an interval without ascents has no cone point")
    fx = store.family(a)
    apex = max_height_ascent(fx, store.family(b))
    if not (cx.is_cone(apex) and cx.is_cone(apex, raw=True)):
        raise TheoremViolation(
            f"max-height ascent {apex} is not a cone point for [{fx}, {store.family(b)}]",
            witness=(a, b, apex),
        )
    return apex


def classify_interval(x, y, store: PosetStore) -> IntervalReport:
    """Facial or contractible, with the Moebius value checked against the verdict."""
    _require_d2(store)
    a, b = store.id_of(x), store.id_of(y)
    fx, fy = store.family(a), store.family(b)
    cx = asc_complex(a, b, store)
    k = len(cx.vertices)
    top = _closure_union(fx, cx.vertices)
    facial = top == fy.bits and cx.is_full_simplex()
    mu = mobius(a, b, store)
    if facial:
        if mu != (-1) ** k:
            raise TheoremViolation(f"facial [{fx}, {fy}] has mu={mu}, expected {(-1) ** k}", witness=(a, b))
        return IntervalReport(fx, fy, k, True, k - 2, mu)
    apex = cone_certificate(a, b, store, cx)
    if mu != 0:
        raise TheoremViolation(f"non-facial [{fx}, {fy}] has mu={mu}", witness=(a, b))
    return IntervalReport(fx, fy, k, False, None, mu, apex)


@dataclass
class OmegaPoset:
    intervals: list[tuple[int, int]]
    top: tuple[int, int]
    reduced_euler: int


def facial_intervals(store: PosetStore) -> list[tuple[int, int]]:
    from .scan import scan_intervals

    return [(r.x_id, r.y_id) for r in scan_intervals(store) if r.facial]


def omega_poset(store: PosetStore, max_chains: int = 1 << 40) -> OmegaPoset:
    """Facial intervals under inclusion, with the Euler characteristic of its proper part."""
    _require_d2(store)
    faces = facial_intervals(store)
    top = (store.bottom, store.top)
    if top not in faces:
        raise TheoremViolation("the full interval is not facial")
    faces.sort(key=lambda p: (store.rank(p[1]) - store.rank(p[0]), p))
    proper = [p for p in faces if p != top]
    z = store.zeta
    xs = np.array([p[0] for p in proper])
    ys = np.array([p[1] for p in proper])
    # [x, y] inside [x', y'] iff x' <= x and y <= y'
    inside = z[np.ix_(xs, xs)].T & z[np.ix_(ys, ys)]
    np.fill_diagonal(inside, False)
    chi = reduced_euler(chain_counts(inside, max_chains))
    return OmegaPoset(faces, top, chi)
