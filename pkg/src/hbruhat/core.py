"""Subsets of [n], set families, closure and the packet consistency test.

Families of (d+1)-subsets are stored as Python integers: bit ``r`` is set
iff the subset of colexicographic rank ``r`` belongs to the family. Numeric
order on these integers is colex order on families, which gives every
enumeration a canonical order for free.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, NamedTuple

from .errors import InvalidRestrictionError, InvalidSubsetError

# Families are plain ints; 2**MAX_INDEX_WIDTH bounds the table sizes we build.
MAX_INDEX_WIDTH = 1 << 16


@dataclass(frozen=True)
class GroundParams:
    n: int
    d: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and isinstance(self.d, int)):
            raise InvalidSubsetError("n and d must be integers")
        if not 1 <= self.d <= self.n - 1:
            raise InvalidSubsetError(f"need 1 <= d <= n-1, got n={self.n}, d={self.d}")
        if comb(self.n, self.d + 1) > MAX_INDEX_WIDTH:
            raise InvalidSubsetError(f"C({self.n},{self.d + 1}) exceeds the index width")

    @property
    def size(self) -> int:
        """Number of (d+1)-subsets, i.e. the bit-vector length."""
        return comb(self.n, self.d + 1)


@dataclass(frozen=True, order=True)
class SubsetCode:
    rank: int
    members: tuple[int, ...]

    def __str__(self):
        return format_members(self.members, max(self.members))


def colex_rank(members: tuple[int, ...]) -> int:
    return sum(comb(c - 1, t) for t, c in enumerate(members, start=1))


def colex_unrank(rank: int, k: int) -> tuple[int, ...]:
    out = []
    for t in range(k, 0, -1):
        c = t - 1
        while comb(c + 1, t) <= rank:
            c += 1
        out.append(c + 1)
        rank -= comb(c, t)
    return tuple(reversed(out))


def subset_codec(value, params: GroundParams) -> SubsetCode:
    """Pair a (d+1)-subset with its colex rank; accepts either side."""
    k = params.d + 1
    if isinstance(value, int):
        if not 0 <= value < params.size:
            raise InvalidSubsetError(f"rank {value} out of range 0..{params.size - 1}")
        return SubsetCode(value, colex_unrank(value, k))
    members = tuple(value)
    if len(members) != k:
        raise InvalidSubsetError(f"expected {k} labels, got {members}")
    if any(not isinstance(a, int) or a < 1 or a > params.n for a in members):
        raise InvalidSubsetError(f"labels of {members} must lie in 1..{params.n}")
    if any(a >= b for a, b in zip(members, members[1:])):
        raise InvalidSubsetError(f"{members} is not strictly increasing")
    return SubsetCode(colex_rank(members), members)


class _Tables:
    """Index tables for one (n, d); built once and shared."""

    def __init__(self, n: int, d: int):
        self.n, self.d = n, d
        k = d + 1
        self.subsets = [colex_unrank(r, k) for r in range(comb(n, k))]
        self.rank = {s: r for r, s in enumerate(self.subsets)}
        self.full = (1 << len(self.subsets)) - 1

        # Packets in colex order of support; sequence P\i_{d+1}, ..., P\i_0.
        supports = sorted(itertools.combinations(range(1, n + 1), d + 2), key=lambda s: s[::-1])
        self.packets = []
        self.packet_masks = []
        self.packet_valid = []
        self.member_packets = [[] for _ in self.subsets]
        for p, support in enumerate(supports):
            seq = tuple(
                self.rank[support[:t] + support[t + 1:]] for t in range(d + 1, -1, -1)
            )
            bits = [1 << r for r in seq]
            mask = sum(bits)
            valid = set()
            for t in range(len(seq) + 1):
                valid.add(sum(bits[:t]))
                valid.add(sum(bits[t:]))
            self.packets.append((support, seq))
            self.packet_masks.append(mask)
            self.packet_valid.append(frozenset(valid))
            for r in seq:
                self.member_packets[r].append((mask, self.packet_valid[-1]))

        # Closure rules (a, b, c): a, b in X forces c in X.
        self.rules = []
        for base in itertools.combinations(range(1, n + 1), d - 1):
            rest = [a for a in range(1, n + 1) if a not in base]
            for i, j, k3 in itertools.combinations(rest, 3):
                a = self.rank[tuple(sorted(base + (i, j)))]
                b = self.rank[tuple(sorted(base + (j, k3)))]
                c = self.rank[tuple(sorted(base + (i, k3)))]
                self.rules.append((a, b, c))
        self.rules_by_member = [[] for _ in self.subsets]
        for a, b, c in self.rules:
            self.rules_by_member[a].append((b, c))
            self.rules_by_member[b].append((a, c))


@functools.lru_cache(maxsize=None)
def tables(n: int, d: int) -> _Tables:
    return _Tables(n, d)


def _tables(params: GroundParams) -> _Tables:
    return tables(params.n, params.d)


def format_members(members: Iterable[int], n: int) -> str:
    sep = "" if n <= 9 else "."
    return sep.join(str(a) for a in members)


@dataclass(frozen=True)
class SetFamily:
    params: GroundParams
    bits: int = 0

    # construction

    @classmethod
    def from_members(cls, params: GroundParams, members: Iterable) -> SetFamily:
        bits = 0
        for m in members:
            bits |= 1 << subset_codec(m, params).rank
        return cls(params, bits)

    @classmethod
    def empty(cls, params: GroundParams) -> SetFamily:
        return cls(params, 0)

    @classmethod
    def full(cls, params: GroundParams) -> SetFamily:
        return cls(params, _tables(params).full)

    @classmethod
    def parse(cls, params: GroundParams, text: str) -> SetFamily:
        """Read the comma-separated text form, e.g. ``"124,134"`` or ``"1.2.10"``.

        Surrounding braces, as printed by ``str``, are accepted.
        """
        members = []
        body = text.strip()
        if body.startswith("{") and body.endswith("}"):
            body = body[1:-1]
        for token in body.replace(" ", "").split(","):
            if not token:
                continue
            try:
                if "." in token:
                    labels = tuple(int(a) for a in token.split("."))
                else:
                    if params.n > 9:
                        raise InvalidSubsetError(f"labels must be '.'-separated for n={params.n}: {token!r}")
                    labels = tuple(int(a) for a in token)
            except ValueError:
                raise InvalidSubsetError(f"cannot read subset {token!r}") from None
            members.append(labels)
        return cls.from_members(params, members)

    # views

    def ranks(self) -> Iterator[int]:
        bits, r = self.bits, 0
        while bits:
            if bits & 1:
                yield r
            bits >>= 1
            r += 1

    def codes(self) -> list[SubsetCode]:
        subsets = _tables(self.params).subsets
        return [SubsetCode(r, subsets[r]) for r in self.ranks()]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        subsets = _tables(self.params).subsets
        return (subsets[r] for r in self.ranks())

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, member) -> bool:
        code = member if isinstance(member, SubsetCode) else subset_codec(member, self.params)
        return bool(self.bits >> code.rank & 1)

    def to_text(self) -> str:
        return ",".join(format_members(m, self.params.n) for m in self)

    def __str__(self):
        return "{" + self.to_text() + "}"

    # set algebra

    def _check(self, other: SetFamily):
        if other.params != self.params:
            raise InvalidSubsetError("families over different ground sets")

    def __or__(self, other: SetFamily) -> SetFamily:
        self._check(other)
        return SetFamily(self.params, self.bits | other.bits)

    def __and__(self, other: SetFamily) -> SetFamily:
        self._check(other)
        return SetFamily(self.params, self.bits & other.bits)

    def __sub__(self, other: SetFamily) -> SetFamily:
        self._check(other)
        return SetFamily(self.params, self.bits & ~other.bits)

    def complement(self) -> SetFamily:
        return SetFamily(self.params, _tables(self.params).full & ~self.bits)

    def issubset(self, other: SetFamily) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    __le__ = issubset

    def add(self, member) -> SetFamily:
        return SetFamily(self.params, self.bits | 1 << subset_codec(member, self.params).rank)


@dataclass(frozen=True)
class Packet:
    support: tuple[int, ...]
    sequence: tuple[SubsetCode, ...]


class Consistency(NamedTuple):
    ok: bool
    violation: Packet | None

    def __bool__(self):
        return self.ok


def closure_bits(bits: int, params: GroundParams) -> int:
    """Least closed superset of ``bits``, by worklist over the closure rules."""
    tab = _tables(params)
    work = [r for r in SetFamily(params, bits).ranks()]
    by_member = tab.rules_by_member
    while work:
        r = work.pop()
        for other, forced in by_member[r]:
            if bits >> other & 1 and not bits >> forced & 1:
                bits |= 1 << forced
                work.append(forced)
    return bits


def closure(family: SetFamily) -> SetFamily:
    return SetFamily(family.params, closure_bits(family.bits, family.params))


def consistent_bits(bits: int, params: GroundParams) -> bool:
    tab = _tables(params)
    return all(bits & m in v for m, v in zip(tab.packet_masks, tab.packet_valid))


def is_consistent(family: SetFamily) -> Consistency:
    """Packet test; reports the first violating packet in colex order of support."""
    tab = _tables(family.params)
    bits = family.bits
    for p, (mask, valid) in enumerate(zip(tab.packet_masks, tab.packet_valid)):
        if bits & mask not in valid:
            support, seq = tab.packets[p]
            return Consistency(False, Packet(support, tuple(SubsetCode(r, tab.subsets[r]) for r in seq)))
    return Consistency(True, None)


def addable_bits(bits: int, rank: int, params: GroundParams) -> bool:
    """Whether ``bits | {rank}`` is consistent, given ``bits`` is.

    Only the n-d-1 packets containing the new member can change.
    """
    new = bits | 1 << rank
    return all(new & m in v for m, v in _tables(params).member_packets[rank])


def removable_bits(bits: int, rank: int, params: GroundParams) -> bool:
    new = bits & ~(1 << rank)
    return all(new & m in v for m, v in _tables(params).member_packets[rank])


def is_closed(family: SetFamily) -> bool:
    tab = _tables(family.params)
    bits = family.bits
    return all(not (bits >> a & 1 and bits >> b & 1) or bits >> c & 1 for a, b, c in tab.rules)


def restrict(family: SetFamily, labels: Iterable[int]) -> SetFamily:
    """Members contained in ``labels``, relabelled order-preservingly onto [|labels|]."""
    support = sorted(set(labels))
    n, d = family.params.n, family.params.d
    if len(support) <= d:
        raise InvalidRestrictionError(f"restriction needs at least {d + 1} labels, got {support}")
    if support[0] < 1 or support[-1] > n:
        raise InvalidRestrictionError(f"labels {support} outside 1..{n}")
    relabel = {a: i for i, a in enumerate(support, start=1)}
    target = GroundParams(len(support), d)
    members = [tuple(relabel[a] for a in m) for m in family if all(a in relabel for a in m)]
    return SetFamily.from_members(target, members)
