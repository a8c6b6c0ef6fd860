"""Render the wiring diagram and rhombic tiling of a consistent set, and the
Hasse diagram of B(4,2) as DOT."""

import argparse
from pathlib import Path

from hbruhat.core import GroundParams, SetFamily
from hbruhat.formats import poset_to_dot, tiling_svg, wiring_svg
from hbruhat.poset import enumerate_poset
from hbruhat.wiring import build_network


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--set", default="124,134,135,234,235")
    ap.add_argument("--outdir", type=Path, default=Path("figures"))
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    net = build_network(SetFamily.parse(GroundParams(args.n, 2), args.set))
    (args.outdir / "wiring.svg").write_text(wiring_svg(net))
    (args.outdir / "tiling.svg").write_text(tiling_svg(net))
    (args.outdir / "B_4_2.dot").write_text(poset_to_dot(enumerate_poset(GroundParams(4, 2))))
    for name in ("wiring.svg", "tiling.svg", "B_4_2.dot"):
        print(args.outdir / name)


if __name__ == "__main__":
    main()
