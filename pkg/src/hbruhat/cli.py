"""Command-line entry point: ``hbruhat <command> [options]``.

Exit codes: 0 success, 2 usage error, 3 resource ceiling, 4 invariant
violation (the witness is printed).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .core import GroundParams, SetFamily
from .errors import (
    BruhatError,
    InconsistentFamilyError,
    InvalidIntervalError,
    InvalidSubsetError,
    ResourceLimitError,
    TheoremViolation,
    UnsupportedDimensionError,
)
from .formats import (
    cache_path,
    load_poset,
    poset_to_dot,
    poset_to_json,
    save_poset,
    tiling_svg,
    wiring_svg,
)
from .poset import PosetStore, enumerate_poset
from .scan import check_theorem, scan_intervals, to_report
from .topology import classify_interval, euler_oracle, mobius, omega_poset
from . import verify as suites
from .wiring import build_network, inversion_set, local_sequences

log = logging.getLogger("hbruhat")

EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_VIOLATION = 4

SUITES = ("enumeration", "inclusion-order", "theorem-main", "hall", "sphere", "roundtrip",
          "lemmas", "non-lattice", "all")


@dataclass
class RunConfig:
    command: str
    n: int
    d: int = 2
    cache_dir: Path | None = None
    output: Path | None = None
    max_n: int | None = None
    max_chains: int = 1 << 20
    max_ascents: int | None = None
    workers: int = 1
    seed: int = 0
    samples: int | None = None

    def __post_init__(self):
        for name in ("max_chains", "workers"):
            if getattr(self, name) < 1:
                raise InvalidSubsetError(f"--{name.replace('_', '-')} must be positive")
        if self.max_n is not None and self.max_n < 1:
            raise InvalidSubsetError("--max-n must be positive")


def _cache_root(arg) -> Path | None:
    if arg:
        return Path(arg)
    env = os.environ.get("BRUHAT_CACHE_DIR")
    return Path(env) if env else None


def get_store(cfg: RunConfig) -> PosetStore:
    params = GroundParams(cfg.n, cfg.d)
    if cfg.cache_dir is not None:
        path = cache_path(cfg.cache_dir, params)
        if path.exists():
            log.info("loading %s", path)
            return load_poset(path)
    store = enumerate_poset(params, max_n=cfg.max_n)
    if cfg.cache_dir is not None:
        save_poset(store, cache_path(cfg.cache_dir, params))
    return store


def _family(params: GroundParams, text: str | None, default: SetFamily) -> SetFamily:
    return default if text is None else SetFamily.parse(params, text)


def _emit(cfg: RunConfig, text: str):
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        cfg.output.parent.mkdir(parents=True, exist_ok=True)
        cfg.output.write_text(text)


def cmd_enumerate(cfg, args):
    params = GroundParams(cfg.n, cfg.d)
    store = enumerate_poset(params, max_n=cfg.max_n)
    root = cfg.cache_dir if cfg.cache_dir is not None else Path(".")
    path = save_poset(store, cfg.output or cache_path(root, params))
    print(f"B({cfg.n},{cfg.d}): {len(store)} elements, {len(store.cover_pairs())} covers -> {path}")
    return 0


def cmd_classify(cfg, args):
    store = get_store(cfg)
    params = store.params
    if args.x is not None or args.y is not None:
        x = _family(params, args.x, SetFamily.empty(params))
        y = _family(params, args.y, SetFamily.full(params))
        rep = classify_interval(x, y, store)
        print(json.dumps(rep.as_record()))
        return 0
    records = scan_intervals(store, workers=cfg.workers, max_ascents=cfg.max_ascents)
    summary = check_theorem(records)
    lines = [json.dumps(to_report(store, r).as_record()) for r in records]
    tail = summary.as_record()
    tail["seed"] = cfg.seed
    lines.append(json.dumps(tail))
    _emit(cfg, "\n".join(lines) + "\n")
    if not summary.ok:
        r, problems = summary.violations[0]
        print(f"violation: [{store.family(r.x_id)}, {store.family(r.y_id)}] {problems}", file=sys.stderr)
        return EXIT_VIOLATION
    return 0


def cmd_mobius(cfg, args):
    store = get_store(cfg)
    params = store.params
    x = _family(params, args.x, SetFamily.empty(params))
    y = _family(params, args.y, SetFamily.full(params))
    mu = mobius(x, y, store)
    if args.check and x != y:
        chi = euler_oracle(x, y, store, max_chains=cfg.max_chains)
        if chi != mu:
            print(f"mobius {mu} disagrees with chain count {chi}", file=sys.stderr)
            return EXIT_VIOLATION
    print(mu)
    return 0


def cmd_wiring(cfg, args):
    params = GroundParams(cfg.n, 2)
    family = SetFamily.parse(params, args.set or "")
    local = local_sequences(family)
    net = build_network(family)
    if inversion_set(net) != family:
        print(f"round trip failed for {family}", file=sys.stderr)
        return EXIT_VIOLATION
    for w in range(1, cfg.n + 1):
        print(f"pi_{w} = {' '.join(map(str, local[w]))}")
    print("crossings: " + " ".join(f"{c.pair[0]}{c.pair[1]}@{c.level}" for c in net.crossings))
    if args.svg:
        Path(args.svg).write_text(wiring_svg(net))
    if args.tiling:
        Path(args.tiling).write_text(tiling_svg(net))
    return 0


def cmd_omega(cfg, args):
    store = get_store(cfg)
    om = omega_poset(store)
    print(f"facial intervals: {len(om.intervals)}")
    print(f"reduced Euler characteristic of the proper part: {om.reduced_euler}")
    print(f"sphere prediction (-1)^(n-3): {(-1) ** (cfg.n - 3)}")
    return 0 if om.reduced_euler == (-1) ** (cfg.n - 3) else EXIT_VIOLATION


def run_suite(name: str, cfg: RunConfig) -> list[suites.SuiteResult]:
    if name == "enumeration":
        return [suites.enumeration_suite(cfg.n, cfg.d)]
    store = get_store(cfg)
    if name == "all":
        names = [s for s in SUITES if s not in ("all", "enumeration")]
        return [suites.enumeration_suite(cfg.n, cfg.d)] + [r for s in names for r in run_suite(s, cfg)]
    if name == "inclusion-order":
        return [suites.inclusion_suite(store)]
    if name == "theorem-main":
        return [suites.theorem_suite(store, workers=cfg.workers)]
    if name == "hall":
        return [suites.hall_suite(store, samples=cfg.samples, seed=cfg.seed, max_chains=cfg.max_chains)]
    if name == "sphere":
        return [suites.sphere_suite(store, omega=cfg.n <= 5)]
    if name == "roundtrip":
        return [suites.roundtrip_suite(store, samples=cfg.samples, seed=cfg.seed)]
    if name == "lemmas":
        return [suites.lemma_suite(store, samples=cfg.samples, seed=cfg.seed)]
    if name == "non-lattice":
        return [suites.non_lattice_suite(store)]
    raise InvalidSubsetError(f"unknown suite {name!r}")


def cmd_verify(cfg, args):
    results = run_suite(args.suite, cfg)
    for r in results:
        print(r)
    print(f"seed: {cfg.seed}")
    if all(r.ok for r in results):
        return 0
    for r in results:
        if r.violations:
            print(f"witness ({r.name}): {r.violations[0]}", file=sys.stderr)
    return EXIT_VIOLATION


def cmd_export(cfg, args):
    store = get_store(cfg)
    text = poset_to_dot(store) if args.format == "dot" else poset_to_json(store)
    _emit(cfg, text)
    return 0


COMMANDS = {
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
    "mobius": cmd_mobius,
    "wiring": cmd_wiring,
    "omega": cmd_omega,
    "verify": cmd_verify,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True)
    common.add_argument("--d", type=int, default=2)
    common.add_argument("--cache-dir", default=None, help="defaults to $BRUHAT_CACHE_DIR")
    common.add_argument("--output", "-o", default=None)
    common.add_argument("--max-n", type=int, default=None, help="enumeration ceiling (default 7 for d=2)")
    common.add_argument("--max-chains", type=int, default=1 << 20)
    common.add_argument("--max-ascents", type=int, default=None)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="hbruhat", description="Higher Bruhat orders B(n,d).")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("enumerate", parents=[common], help="enumerate B(n,d) and write the cache file")
    p = sub.add_parser("classify", parents=[common], help="classify intervals as JSON lines")
    p.add_argument("--x")
    p.add_argument("--y")
    p = sub.add_parser("mobius", parents=[common], help="print the Moebius value of [x, y]")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--check", action="store_true", help="cross-check against chain counting")
    p = sub.add_parser("wiring", parents=[common], help="local sequences and SVG of a consistent set")
    p.add_argument("--set", default="")
    p.add_argument("--svg")
    p.add_argument("--tiling", help="write the dual rhombic tiling as SVG")
    sub.add_parser("omega", parents=[common], help="facial-interval poset statistics")
    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("--suite", choices=SUITES, default="all")
    p = sub.add_parser("export", parents=[common], help="write the poset as DOT or JSON")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig(
            command=args.command, n=args.n, d=args.d, cache_dir=_cache_root(args.cache_dir),
            output=Path(args.output) if args.output else None, max_n=args.max_n,
            max_chains=args.max_chains, max_ascents=args.max_ascents, workers=args.workers,
            seed=args.seed, samples=args.samples,
        )
        return COMMANDS[args.command](cfg, args)
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except TheoremViolation as e:
        print(f"invariant violation: {e}\nwitness: {e.witness}", file=sys.stderr)
        return EXIT_VIOLATION
    except (InvalidSubsetError, InvalidIntervalError, InconsistentFamilyError,
            UnsupportedDimensionError, BruhatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
