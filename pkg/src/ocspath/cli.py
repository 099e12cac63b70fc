"""Command-line interface.

Exit codes: 0 success, 1 unreachable / empty language, 2 input error,
3 internal assertion (a violated bound, which would be a bug).
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

from . import generators, io
from .core import Config, Ocs
from .errors import InvariantError, PreconditionError, ResourceError, Unreachable
from .normalizer import Normalizer
from .reachability import SearchCaps, distances_from, min_zero_path, shortest_path
from .words import Oca, shortest_word
from .zcounter import ZConfig, ZOcs, embed, z_shortest_path

EXIT_OK, EXIT_NONE, EXIT_INPUT, EXIT_BUG = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_system(path: str):
    return io.parse_system(_read(path))


def _config(system, text: str, allow_negative: bool = False):
    state, sep, counter = text.rpartition(":")
    if not sep:
        raise InputError(f"expected STATE:COUNTER, got {text!r}")
    try:
        c = int(counter)
    except ValueError:
        raise InputError(f"counter in {text!r} is not an integer") from None
    if c < 0 and not allow_negative:
        raise InputError(f"counter in {text!r} must be nonnegative")
    try:
        return Config(system.index(state), c)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None


def _as_ocs(system, what: str) -> Ocs:
    if isinstance(system, Oca):
        return system.ocs
    if isinstance(system, ZOcs):
        raise InputError(f"{what} needs a one-counter system, not kind 'zocs'")
    return system


def cmd_gen(args) -> int:
    if args.family == "example1":
        inst = generators.example1(args.n)
    elif args.family == "example2":
        inst = generators.example2(args.k, args.m)
    elif args.family == "example3":
        inst = generators.example3(args.n, args.c_alpha, args.c_beta)
    elif args.family == "tower":
        inst = generators.random_tower_ocs(args.gadgets, args.seed)
    else:
        if args.kind == "oca":
            system = generators.random_oca(args.n, args.pos_density, args.zero_density, args.seed)
        elif args.kind == "zocs":
            system = generators.random_zocs(args.n, args.pos_density, args.seed, args.zero_density)
        else:
            system = generators.random_ocs(args.n, args.pos_density, args.zero_density, args.seed)
        sys.stdout.write(io.serialize_system(system))
        return EXIT_OK
    names = inst.ocs.names
    sys.stdout.write(io.serialize_system(inst.ocs))
    print(
        f"source {names[inst.source.state]}:{inst.source.counter} "
        f"target {names[inst.target.state]}:{inst.target.counter}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_reach(args) -> int:
    system = _load_system(args.file)
    ocs = _as_ocs(system, "reach")
    alpha, beta = _config(ocs, args.src), _config(ocs, args.dst)
    if args.minimize == "zeros":
        if alpha.counter or beta.counter:
            raise InputError("--minimize zeros needs counter value 0 at both ends")
        rho = min_zero_path(ocs, alpha, beta)
    else:
        rho = shortest_path(ocs, alpha, beta)
    if rho is None:
        print("unreachable")
        return EXIT_NONE
    sys.stdout.write(io.serialize_path(rho, ocs))
    return EXIT_OK


def _arc_report(arc, d) -> dict:
    if d is None:
        return {"kind": "low", "length": len(arc)}
    return {
        "kind": "normal",
        "length": len(arc),
        "S": d.S,
        "T": d.T,
        "A": d.A,
        "B": d.B,
        "a": d.a,
        "b": d.b,
        "K": d.K,
        "L": d.L,
        "parts": {name: len(p) for name, p in zip(("pref", "up", "cap", "down", "suff"), d.parts)},
    }


def cmd_normalize(args) -> int:
    system = _load_system(args.file)
    ocs = _as_ocs(system, "normalize")
    alpha, beta = _config(ocs, args.src), _config(ocs, args.dst)
    if alpha.counter or beta.counter:
        raise InputError("normalize needs counter value 0 at both ends")
    try:
        rho, pieces = Normalizer(ocs).normalize_path_detailed(alpha, beta)
    except Unreachable:
        print("unreachable")
        return EXIT_NONE
    doc = {"path": io.path_to_doc(rho, ocs), "arcs": [_arc_report(a, d) for a, d in pieces]}
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_shortest_word(args) -> int:
    system = _load_system(args.file)
    if not isinstance(system, Oca):
        raise InputError("shortest-word needs a document of kind 'oca'")
    res = shortest_word(system)
    if res is None:
        print("empty language")
        return EXIT_NONE
    doc = {"word": list(res.word), "length": len(res.word), "path": io.path_to_doc(res.path, system)}
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_zreach(args) -> int:
    system = _load_system(args.file)
    if isinstance(system, Oca):
        system = system.ocs
    z = system if isinstance(system, ZOcs) else embed(system)
    alpha = ZConfig(*_config(z, args.src, allow_negative=True))
    beta = ZConfig(*_config(z, args.dst, allow_negative=True))
    rho = z_shortest_path(z, alpha, beta)
    if rho is None:
        print("unreachable")
        return EXIT_NONE
    sys.stdout.write(io.serialize_path(rho, z))
    return EXIT_OK


DENSITIES = (0.1, 0.3, 0.6)


def verify_trial(n_max: int, seed: int, trial: int) -> dict:
    """One sweep trial: a random system, all zero-zero pairs and a few lifted pairs."""
    rng = generators.SplitMix64(generators.mix64(seed) ^ trial)
    n = 1 + rng.below(n_max)
    ocs = generators.random_ocs(n, DENSITIES[rng.below(3)], DENSITIES[rng.below(3)], rng.next_u64())
    ratios = []
    violations = []
    bound = 14 * n * n
    for p in range(n):
        # twice the proven cap, so an overlong shortest path would show up
        dist = distances_from(ocs, Config(p, 0), SearchCaps(2 * bound, 2 * bound))
        for q in range(n):
            d = dist.get(Config(q, 0))
            if d is None:
                continue
            ratios.append(d / (n * n))
            if d > bound:
                violations.append(f"n={n} ({p},0)->({q},0): {d} > {bound}")
        ca = rng.below(7)
        depth = 2 * (bound + n * 6)
        dist = distances_from(ocs, Config(p, ca), SearchCaps(depth, ca + depth))
        for (q, cb), d in dist.items():
            if cb <= 6 and d > bound + n * max(ca, cb):
                violations.append(f"n={n} ({p},{ca})->({q},{cb}): {d} > {bound + n * max(ca, cb)}")
    return {"ratios": ratios, "violations": violations}


def cmd_verify(args) -> int:
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        results = list(pool.map(lambda t: verify_trial(args.n_max, args.seed, t), range(args.trials)))
    ratios = [r for res in results for r in res["ratios"]]
    violations = [v for res in results for v in res["violations"]]
    hist = Counter(min(int(r), 14) for r in ratios)
    print(f"trials: {args.trials}  reachable zero-zero pairs: {len(ratios)}")
    print(f"max len/n^2: {max(ratios, default=0.0):.4f}")
    print("histogram of len/n^2:")
    width = max(hist.values(), default=1)
    for b in range(15):
        count = hist.get(b, 0)
        bar = "#" * (40 * count // width) if count else ""
        print(f"  [{b:2d},{b + 1:2d}) {count:7d} {bar}")
    if violations:
        for v in violations[:20]:
            print(f"VIOLATION {v}", file=sys.stderr)
        return EXIT_BUG
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ocspath", description="Shortest paths in one-counter systems.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="emit a generated system document")
    g.add_argument("family", choices=["example1", "example2", "example3", "tower", "random"])
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--c-alpha", type=int, default=0)
    g.add_argument("--c-beta", type=int, default=0)
    g.add_argument("--gadgets", type=int, default=1, help="tower family only")
    g.add_argument("--pos-density", type=float, default=0.3)
    g.add_argument("--zero-density", type=float, default=0.3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--kind", choices=["ocs", "oca", "zocs"], default="ocs")
    g.set_defaults(func=cmd_gen)

    for name, func, helptext in (
        ("reach", cmd_reach, "shortest (or fewest-zero) path"),
        ("normalize", cmd_normalize, "normalized zero-to-zero path with arc report"),
        ("zreach", cmd_zreach, "shortest path with an integer counter"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file", help="system document, or - for stdin")
        p.add_argument("--from", dest="src", required=True, metavar="STATE:COUNTER")
        p.add_argument("--to", dest="dst", required=True, metavar="STATE:COUNTER")
        if name == "reach":
            p.add_argument("--minimize", choices=["length", "zeros"], default="length")
        p.set_defaults(func=func)

    w = sub.add_parser("shortest-word", help="shortest accepted word of an automaton")
    w.add_argument("file")
    w.set_defaults(func=cmd_shortest_word)

    v = sub.add_parser("verify", help="random sweep checking the length bounds")
    v.add_argument("--n-max", type=int, default=8)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, io.SchemaError, PreconditionError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_BUG


def main() -> None:
    sys.exit(run())
