"""Poset cache files, DOT Hasse diagrams and SVG drawings.

Every writer here is byte-deterministic for identical input.
"""

from __future__ import annotations

import json
import math
from math import comb
from pathlib import Path

from .core import GroundParams, SetFamily, consistent_bits, tables
from .errors import InconsistentFamilyError
from .poset import PosetStore
from .wiring import WiringNetwork

FORMAT_VERSION = 1


def bits_to_hex(bits: int, params: GroundParams) -> str:
    """Little-endian bytes: byte 0 holds colex ranks 0..7, ranks 0 in its low bit."""
    nbytes = max(1, (params.size + 7) // 8)
    return bits.to_bytes(nbytes, "little").hex()


def hex_to_bits(text: str) -> int:
    return int.from_bytes(bytes.fromhex(text), "little")


def poset_to_json(store: PosetStore) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "n": store.params.n,
        "d": store.params.d,
        "elements": [bits_to_hex(b, store.params) for b in store.elements],
        "covers": [[a, b] for a, b in store.cover_pairs()],
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def save_poset(store: PosetStore, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(poset_to_json(store))
    return path


def poset_from_json(text: str) -> PosetStore:
    doc = json.loads(text)
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported cache format {doc.get('format_version')!r}")
    params = GroundParams(int(doc["n"]), int(doc["d"]))
    elements = [hex_to_bits(h) for h in doc["elements"]]
    ups = [[] for _ in elements]
    for a, b in doc["covers"]:
        if elements[b] & ~elements[a] == 0 or (elements[b] ^ elements[a]).bit_count() != 1:
            raise InconsistentFamilyError(f"cover {a}->{b} does not add exactly one member")
        ups[a].append(b)
    full = tables(params.n, params.d).full
    if not elements or elements[0] != 0 or elements[-1] != full:
        raise InconsistentFamilyError("cache must start at the empty family and end at the full one")
    stride = 100
    for i in list(range(0, len(elements), stride)) + [len(elements) - 1]:
        if not consistent_bits(elements[i], params):
            raise InconsistentFamilyError(f"cached element {i} is inconsistent")
    return PosetStore(params, elements, [tuple(sorted(u)) for u in ups])


def load_poset(path) -> PosetStore:
    return poset_from_json(Path(path).read_text())


def cache_path(cache_dir, params: GroundParams) -> Path:
    return Path(cache_dir) / f"B_{params.n}_{params.d}.json"


def _dot_label(store: PosetStore, i: int) -> str:
    if store.params.n <= 5:
        text = SetFamily(store.params, store.elements[i]).to_text()
        return text or "{}"
    return bits_to_hex(store.elements[i], store.params)


def poset_to_dot(store: PosetStore) -> str:
    p = store.params
    lines = [f"digraph B_{p.n}_{p.d} {{", "  rankdir=BT;", "  node [shape=box, fontsize=10];"]
    for level in store.rank_slices():
        ids = " ".join(f"e{i};" for i in level)
        lines.append(f"  {{ rank=same; {ids} }}")
    for i in range(len(store)):
        lines.append(f'  e{i} [label="{_dot_label(store, i)}"];')
    for a, b in store.cover_pairs():
        lines.append(f"  e{a} -> e{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# SVG ---------------------------------------------------------------------

UNIT = 40
MARGIN = 40


def _gap_x(net: WiringNetwork, gap: int) -> int:
    total = comb(net.n, 2)
    return MARGIN + UNIT * (total - gap)


def _level_y(net: WiringNetwork, level: int) -> int:
    return MARGIN + UNIT * (net.n - level)


def wiring_svg(net: WiringNetwork, labels: bool = True) -> str:
    """Wires as polylines through integer points, one column per crossing,
    with the right edge showing wires 1..n top-to-bottom."""
    total = comb(net.n, 2)
    width = 2 * MARGIN + UNIT * total
    height = 2 * MARGIN + UNIT * (net.n - 1)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + MARGIN}" height="{height}" '
        f'viewBox="0 0 {width + MARGIN} {height}">',
        '<g fill="none" stroke="black" stroke-width="2">',
    ]
    for w in range(1, net.n + 1):
        pts = " ".join(f"{_gap_x(net, g)},{_level_y(net, net.level(w, g))}" for g in range(total + 1))
        out.append(f'<polyline data-wire="{w}" points="{pts}"/>')
    out.append("</g>")
    if labels:
        out.append('<g font-family="sans-serif" font-size="14">')
        for w in range(1, net.n + 1):
            x = _gap_x(net, 0) + 8
            y = _level_y(net, net.level(w, 0)) + 5
            out.append(f'<text x="{x}" y="{y}">{w}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def parse_wiring_svg(text: str) -> dict[int, list[tuple[int, int]]]:
    """Wire label -> polyline points, as written by ``wiring_svg``."""
    import xml.etree.ElementTree as ET

    root = ET.fromstring(text)
    wires = {}
    for el in root.iter():
        if el.tag.endswith("polyline"):
            pts = [tuple(int(v) for v in p.split(",")) for p in el.get("points").split()]
            wires[int(el.get("data-wire"))] = pts
    return wires


def _direction(n: int, k: int) -> tuple[float, float]:
    angle = math.pi * k / n
    return (UNIT * math.cos(angle), -UNIT * math.sin(angle))


def tiling_svg(net: WiringNetwork) -> str:
    """Dual rhombic tiling of the zonogon: one rhombus per crossing.

    The region above a crossing of a and b sits at the vertex summing the
    edge vectors of the wires above it; the rhombus spans that vertex plus
    the vectors of a and b.
    """
    n = net.n
    vec = {k: _direction(n, k) for k in range(1, n + 1)}
    total = comb(n, 2)
    order_at = []
    for g in range(total + 1):
        order_at.append(sorted(range(1, n + 1), key=lambda w: -net.level(w, g)))
    polys = []
    for c in net.crossings:
        before = order_at[c.column - 1]
        top = next(w for w in before if w in c.pair)
        bottom = c.pair[1] if top == c.pair[0] else c.pair[0]
        above = before[: before.index(top)]
        x0 = sum(vec[w][0] for w in above)
        y0 = sum(vec[w][1] for w in above)
        va, vb = vec[top], vec[bottom]
        pts = [(x0, y0), (x0 + va[0], y0 + va[1]), (x0 + va[0] + vb[0], y0 + va[1] + vb[1]),
               (x0 + vb[0], y0 + vb[1])]
        polys.append((c.pair, pts))
    xs = [p[0] for _, pts in polys for p in pts] or [0.0]
    ys = [p[1] for _, pts in polys for p in pts] or [0.0]
    dx, dy = MARGIN - min(xs), MARGIN - min(ys)
    width = max(xs) - min(xs) + 2 * MARGIN
    height = max(ys) - min(ys) + 2 * MARGIN
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.3f} {height:.3f}">',
        '<g fill="#dde6f0" stroke="black" stroke-width="1.5">',
    ]
    for pair, pts in polys:
        s = " ".join(f"{x + dx:.3f},{y + dy:.3f}" for x, y in pts)
        out.append(f'<polygon data-pair="{pair[0]},{pair[1]}" points="{s}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
