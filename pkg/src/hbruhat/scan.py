"""Full interval scans of B(n,2).

All intervals sharing a lower end X share the ascent list of X, so the
closure unions X + closure(S) for every subset S of Asc(X) are computed
once per X and every interval [X, Y] reads its ascent subset off the order
matrix. Work is partitioned by X across processes; records are merged into
the canonical order (rank difference, colex X, colex Y).
"""

from __future__ import annotations

import multiprocessing
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import SubsetCode, closure_bits, consistent_bits, tables
from .errors import ResourceLimitError, TheoremViolation, UnsupportedDimensionError
from .poset import PosetStore
from .topology import IntervalReport, mobius_table
from .wiring import build_network, _floor


@dataclass(frozen=True)
class ScanRecord:
    x_id: int
    y_id: int
    asc_count: int
    facial: bool
    mobius: int
    apex: int | None  # colex rank of the cone point, non-facial only
    cone_ok: bool | None  # apex cones the hereditary complex
    raw_cone_ok: bool | None  # apex extends every consistent ascent set
    singletons_ok: bool


class _XContext:
    def __init__(self, store: PosetStore, x: int, max_ascents: int):
        params = store.params
        self.store = store
        self.x = x
        fx = store.elements[x]
        covers = sorted(store.covers_up[x], key=lambda c: store.elements[c] ^ fx)
        self.asc_ids = covers
        self.asc_ranks = [(store.elements[c] ^ fx).bit_length() - 1 for c in covers]
        k = len(covers)
        if k > max_ascents:
            raise ResourceLimitError(f"{k} ascents exceed the budget {max_ascents}")
        self.union = [fx] * (1 << k)
        self.face = [True] * (1 << k)
        for mask in range(1, 1 << k):
            members = sum(1 << self.asc_ranks[t] for t in range(k) if mask >> t & 1)
            u = fx | closure_bits(members, params)
            self.union[mask] = u
            self.face[mask] = consistent_bits(u, params)
        # full[mask]: every nonempty subset of mask is a face
        self.full = [True] * (1 << k)
        for mask in range(1, 1 << k):
            self.full[mask] = self.face[mask] and all(
                self.full[mask & ~(1 << t)] for t in range(k) if mask >> t & 1
            )
        self.heights = []
        if k:
            net = build_network(store.family(x))
            subsets = tables(params.n, 2).subsets
            for r in self.asc_ranks:
                info = _floor(net, SubsetCode(r, subsets[r]))
                if not info.elementary:
                    raise TheoremViolation(f"ascent {subsets[r]} of element {x} has a non-elementary floor")
                self.heights.append(info.height)
        self._cone = {}

    def cone(self, mask: int):
        """(apex index, cone ok, raw cone ok, singletons ok) for the ascents in mask."""
        if mask not in self._cone:
            bits = [t for t in range(len(self.asc_ids)) if mask >> t & 1]
            if not bits:
                raise TheoremViolation(f"proper interval above element {self.x} without ascents")
            apex = max(bits, key=lambda t: (self.heights[t], -self.asc_ranks[t]))
            ok = raw_ok = True
            with_apex = 1 << apex
            sub = mask
            while sub:
                if self.full[sub] and not self.full[sub | with_apex]:
                    ok = False
                if self.face[sub] and not self.face[sub | with_apex]:
                    raw_ok = False
                sub = (sub - 1) & mask
            singles = all(self.face[1 << t] for t in bits)
            self._cone[mask] = (apex, ok, raw_ok, singles)
        return self._cone[mask]

    def records(self) -> list[ScanRecord]:
        store = self.store
        up, mu = mobius_table(store).row(self.x)
        z = store.zeta
        k = len(self.asc_ids)
        if k:
            weights = 1 << np.arange(k, dtype=np.int64)
            masks = weights @ z[np.ix_(self.asc_ids, up)].astype(np.int64)
        else:
            masks = np.zeros(len(up), dtype=np.int64)
        out = []
        for y, m, mask in zip(up.tolist(), mu.tolist(), masks.tolist()):
            facial = self.full[mask] and self.union[mask] == store.elements[y]
            if facial:
                out.append(ScanRecord(self.x, y, mask.bit_count(), True, m, None, None, True, True))
            else:
                apex, ok, raw_ok, singles = self.cone(mask)
                out.append(ScanRecord(
                    self.x, y, mask.bit_count(), False, m, self.asc_ranks[apex], ok, raw_ok, singles
                ))
        return out


_WORKER_STORE: PosetStore | None = None


def _init_worker(store: PosetStore):
    global _WORKER_STORE
    _WORKER_STORE = store


def _worker(args):
    xs, max_ascents = args
    return [r for x in xs for r in _XContext(_WORKER_STORE, x, max_ascents).records()]


def scan_intervals(store: PosetStore, workers: int = 1, xs=None, max_ascents: int | None = None) -> list[ScanRecord]:
    """Classify every interval [X, Y] with X in ``xs`` (default: all elements)."""
    if store.params.d != 2:
        raise UnsupportedDimensionError("interval scans are defined for d=2 only")
    limit = 2 * store.params.n if max_ascents is None else max_ascents
    xs = list(range(len(store))) if xs is None else list(xs)
    store.zeta  # build before forking
    if workers <= 1:
        records = [r for x in xs for r in _XContext(store, x, limit).records()]
    else:
        chunks = [(xs[i::workers * 4], limit) for i in range(workers * 4)]
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(workers, mp_context=ctx, initializer=_init_worker, initargs=(store,)) as pool:
            records = [r for part in pool.map(_worker, chunks) for r in part]
    el = store.elements
    records.sort(key=lambda r: (el[r.y_id].bit_count() - el[r.x_id].bit_count(), el[r.x_id], el[r.y_id]))
    return records


def to_report(store: PosetStore, rec: ScanRecord) -> IntervalReport:
    subsets = tables(store.params.n, 2).subsets
    apex = None if rec.apex is None else SubsetCode(rec.apex, subsets[rec.apex])
    sphere = rec.asc_count - 2 if rec.facial else None
    return IntervalReport(store.family(rec.x_id), store.family(rec.y_id), rec.asc_count,
                          rec.facial, sphere, rec.mobius, apex)


@dataclass
class TheoremSummary:
    intervals: int = 0
    cells: Counter = field(default_factory=Counter)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_record(self) -> dict:
        return {
            "summary": True,
            "intervals": self.intervals,
            "cells": {f"facial={f},mobius={m}": c for (f, m), c in sorted(self.cells.items())},
            "violations": len(self.violations),
        }


def check_theorem(records) -> TheoremSummary:
    """Every interval: mu in {-1,0,1}; mu != 0 iff facial; facial mu = (-1)^|Asc|;
    non-facial intervals carry a verified cone point, both for the ascent
    complex and for every consistent set of ascents; singletons are faces."""
    s = TheoremSummary()
    for r in records:
        s.intervals += 1
        s.cells[(r.facial, r.mobius)] += 1
        problems = []
        if r.mobius not in (-1, 0, 1):
            problems.append("mobius out of range")
        if r.facial and r.mobius != (-1) ** r.asc_count:
            problems.append("facial sign")
        if not r.facial and r.mobius != 0:
            problems.append("non-facial with nonzero mobius")
        if not r.facial and not (r.cone_ok and r.raw_cone_ok):
            problems.append("cone point fails")
        if not r.singletons_ok:
            problems.append("singleton ascent set is not a face")
        if problems:
            s.violations.append((r, problems))
    return s
