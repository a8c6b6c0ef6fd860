"""Sizes of B(n,d) within the default ceilings, with enumeration times."""

import argparse
import time

from hbruhat.core import GroundParams
from hbruhat.poset import default_ceiling, enumerate_poset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-d", type=int, default=4)
    ap.add_argument("--both-directions", action="store_true", help="also run the downward BFS and compare")
    args = ap.parse_args()
    print(f"{'n':>3} {'d':>3} {'elements':>10} {'covers':>10} {'seconds':>8}")
    for d in range(1, args.max_d + 1):
        for n in range(d + 1, default_ceiling(d) + 1):
            t = time.perf_counter()
            store = enumerate_poset(GroundParams(n, d))
            elapsed = time.perf_counter() - t
            line = f"{n:>3} {d:>3} {len(store):>10} {len(store.cover_pairs()):>10} {elapsed:>8.2f}"
            if args.both_directions:
                down = enumerate_poset(GroundParams(n, d), direction="down")
                line += "  agree" if down.elements == store.elements else "  DISAGREE"
            print(line, flush=True)


if __name__ == "__main__":
    main()
