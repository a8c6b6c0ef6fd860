"""Full interval scans of B(n,2): cell counts, first non-facial interval,
and how often raw consistent ascent families fail to be subset-closed."""

import argparse
import json
import time
from collections import Counter
from pathlib import Path

from hbruhat.core import GroundParams
from hbruhat.poset import enumerate_poset
from hbruhat.scan import check_theorem, scan_intervals, to_report
from hbruhat.topology import asc_complex


def report(n: int, workers: int) -> dict:
    store = enumerate_poset(GroundParams(n, 2))
    t = time.perf_counter()
    records = scan_intervals(store, workers=workers)
    elapsed = time.perf_counter() - t
    summary = check_theorem(records)
    first = next((r for r in records if not r.facial), None)
    raw_not_closed = Counter()
    for r in records:
        if not r.facial and r.asc_count >= 3:
            cx = asc_complex(r.x_id, r.y_id, store)
            if cx.faces != cx.consistent_sets:
                raw_not_closed[r.asc_count] += 1
    return {
        "n": n,
        "elements": len(store),
        "scan_seconds": round(elapsed, 2),
        **summary.as_record(),
        "asc_histogram": dict(sorted(Counter(r.asc_count for r in records).items())),
        "first_non_facial": to_report(store, first).as_record() if first else None,
        "raw_family_not_subset_closed_by_asc": dict(sorted(raw_not_closed.items())),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[4, 5, 6])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--output", type=Path, default=None, help="write the reports as JSON")
    args = ap.parse_args()
    out = [report(n, args.workers) for n in args.n]
    for rec in out:
        print(json.dumps(rec))
    if args.output:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_text(json.dumps(out, indent=2) + "\n")


if __name__ == "__main__":
    main()
