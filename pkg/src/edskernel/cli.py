"""Command-line entry point.

Exit codes: 0 success or yes, 1 negative answer (no, no-poly-kernel family,
failed verification), 2 usage or parse error, 3 size cap exceeded,
4 kernelization returned a trivial yes certificate instead of a reduced instance.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from . import config
from .atlas import atlas
from .exact import decide_eds
from .graph import (
    NAMED,
    FamilyMismatch,
    Graph,
    GraphFormatError,
    ModInstance,
    canonical_key,
    connected_components,
    format_instance,
    parse_graph,
    parse_instance,
)
from .harness import verify_kernel
from .kernel import NoPolyKernel, PreconditionError, kernelize
from .profile import NO_POLY, classify_family, find_control_pair, profile
from .reductions import (
    CnfFormula,
    MccInstance,
    compose_control_pair,
    compose_cost,
    compose_p3,
    gen_random_instance,
    sat_to_eds,
    vc_to_eds,
)

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_CAP, EXIT_TRIVIAL = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _emit(args, payload: dict, human: str) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n" if args.json else human.rstrip("\n") + "\n")


def load_graph(spec: str) -> Graph:
    """A built-in name (P5, K4, E, FIG2, ...) or a graph file."""
    if spec.upper() in NAMED:
        return NAMED[spec.upper()]()
    return parse_graph(_read(spec))


def load_family(specs: list[str] | None) -> tuple[Graph, ...]:
    """Family members are the distinct connected components of the given graphs."""
    if not specs:
        raise UsageError("a family is required (--family FILE_OR_NAME ...)")
    out, seen = [], set()
    for spec in specs:
        g = load_graph(spec)
        for cv in connected_components(g):
            key = canonical_key(cv.local)
            if key not in seen:
                seen.add(key)
                out.append(cv.local)
    return tuple(out)


def _instance(args) -> tuple[ModInstance, list]:
    inst, wit = parse_instance(_read(args.input))
    if getattr(args, "family", None):
        inst = ModInstance(inst.graph, inst.k, inst.X, load_family(args.family))
    return inst, wit


# ------------------------------------------------------------------ commands

def cmd_analyze(args) -> int:
    g = load_graph(args.input if args.input else args.graph)
    p = profile(g)
    d = p.to_json()
    cp = find_control_pair(g)
    d["control_pair"] = None if cp is None else {"C": sorted(cp.C), "B": sorted(cp.B), "strategy": cp.strategy}
    human = "\n".join(f"{k}: {v}" for k, v in d.items())
    _emit(args, d, human)
    return EXIT_OK


def cmd_classify(args) -> int:
    fam = load_family(args.family or ([args.input] if args.input else None))
    v = classify_family(fam)
    d = {"verdict": v.tag, "item": v.item, "d": v.d, "member": v.member, "witness": list(v.witness) if v.witness else None}
    _emit(args, d, v.describe())
    return EXIT_NO if v.tag == NO_POLY else EXIT_OK


def cmd_atlas(args) -> int:
    rows = atlas(args.n_max)
    if args.json:
        text = "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in rows)
    else:
        head = f"{'key':<16} {'n':>2} {'m':>3} {'meds':>4} {'q':>2} {'w':>2} {'u':>2} {'d':>2}  verdict\n"
        text = head + "".join(
            f"{r.key:<16} {r.n:>2} {r.m:>3} {r.meds:>4} {r.q:>2} {r.w:>2} {r.u:>2} {r.d:>2}  {r.verdict}{' ' + r.item if r.item else ''}\n"
            for r in rows
        )
    _write(args.output, text)
    return EXIT_OK


def cmd_kernelize(args) -> int:
    inst, _ = _instance(args)
    if not inst.family:
        raise UsageError("kernelize needs --family")
    rep = kernelize(inst, prefer_p5=not args.no_p5, general=args.general)
    trace = rep.to_json()
    if rep.trivial_yes:
        _emit(args, trace, "trivial yes: k - MEDS(G - X) >= |X|")
        return EXIT_TRIVIAL
    _write(args.output, format_instance(rep.reduced, comment=f"kernel ({rep.algorithm}) of a {inst.graph.n}-vertex instance"))
    if args.trace:
        Path(args.trace).write_text(json.dumps(trace, indent=1, sort_keys=True) + "\n")
    if args.json:
        _emit(args, trace, "")
    elif args.output not in (None, "-"):
        sys.stdout.write(f"{rep.algorithm}: {rep.size_before} -> {rep.size_after}, k {inst.k} -> {rep.reduced.k}\n")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst, _ = _instance(args)
    ok, wit = decide_eds(inst.graph, inst.k)
    d = {"answer": "yes" if ok else "no", "k": inst.k, "witness": [[u + 1, v + 1] for u, v in wit] if wit else None}
    _emit(args, d, d["answer"])
    if ok and args.output:
        _write(args.output, format_instance(inst, wit))
    return EXIT_OK if ok else EXIT_NO


def _random_mcc(r: random.Random, k: int, n: int, p: float) -> MccInstance:
    edges = [(u, v) for u in range(k * n) for v in range(u + 1, k * n) if u // n != v // n and r.random() < p]
    return MccInstance(Graph(k * n, edges), k)


def _random_cnf(r: random.Random, n: int, m: int) -> CnfFormula:
    return CnfFormula(n, [tuple((r.randrange(n), r.random() < 0.5) for _ in range(3)) for _ in range(m)])


def cmd_generate(args) -> int:
    r = random.Random(args.seed)
    kind = args.reduction
    manifest: dict = {"reduction": kind, "seed": args.seed}
    if kind in ("p3", "control", "cost"):
        mcc = [_random_mcc(r, args.k, args.n, args.edge_prob) for _ in range(args.t)]
        if kind == "p3":
            out = compose_p3(mcc)
        elif kind == "control":
            h = load_graph(args.host)
            cp = find_control_pair(h)
            if cp is None:
                raise UsageError("host graph has no control pair")
            out = compose_control_pair(h, cp, mcc)
            manifest["control_pair"] = {"C": sorted(cp.C), "B": sorted(cp.B)}
        else:
            h = load_graph(args.host)
            sb = profile(h).strongly_beneficial
            big = [b for b, _ in sb if len(b) >= 2]
            if not big:
                raise UsageError("host graph has no strongly beneficial set of size >= 2")
            B = max(big, key=lambda b: (len(b), sorted(b)))
            out = compose_cost(h, B, mcc)
            manifest["B"] = sorted(B)
        inst = out.instance
        manifest.update(out.manifest())
        text = format_instance(inst)
    elif kind == "sat":
        f = _random_cnf(r, args.vars, args.clauses)
        gad = sat_to_eds(f)
        inst = ModInstance(gad.graph, gad.target, frozenset())
        manifest.update(n=gad.graph.n, m=gad.graph.m, target=gad.target, matching=[[u + 1, v + 1] for u, v in gad.matching],
                        clauses=[[(v + 1) * (1 if s else -1) for v, s in c] for c in f.clauses])
        text = format_instance(inst)
    elif kind == "vc":
        g = load_graph(args.input) if args.input else load_graph(args.host)
        g2, k = vc_to_eds(g, args.vc_k)
        inst = ModInstance(g2, k, frozenset(range(g2.n)))
        manifest.update(n=g2.n, m=g2.m, k=k)
        text = format_instance(inst)
    else:
        fam = load_family(args.family)
        inst = gen_random_instance(fam, args.x_size, args.components, args.density, args.seed)
        manifest.update(n=inst.graph.n, m=inst.graph.m, k=inst.k, modulator=len(inst.X))
        text = format_instance(inst)
    _write(args.output, text)
    if args.manifest:
        Path(args.manifest).write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    elif args.output not in (None, "-"):
        sys.stdout.write(json.dumps(manifest, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = []
    if args.input:
        inst, _ = _instance(args)
        reports.append(verify_kernel(inst, args.input, prefer_p5=not args.no_p5, general=args.general))
    else:
        fam = load_family(args.family)
        for i in range(args.count):
            seed = args.seed + i
            inst = gen_random_instance(fam, args.x_size, args.components, args.density, seed)
            reports.append(verify_kernel(inst, f"seed-{seed}", prefer_p5=not args.no_p5, general=args.general))
    bad = [rep for rep in reports if not rep.passed]
    if args.json:
        for rep in reports:
            sys.stdout.write(json.dumps(rep.to_json(), sort_keys=True) + "\n")
    else:
        for rep in reports:
            mark = "pass" if rep.passed else "FAIL"
            sys.stdout.write(f"{mark} {rep.instance_id} {rep.algorithm} {rep.original_answer}/{rep.reduced_answer} {rep.note}\n")
        sys.stdout.write(f"{len(reports) - len(bad)}/{len(reports)} passed\n")
    return EXIT_OK if not bad else EXIT_NO


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i")
    common.add_argument("--output", "-o")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-component-size", type=int)
    common.add_argument("--oracle-cap", type=int)
    common.add_argument("--verbose", "-v", action="store_true")

    p = argparse.ArgumentParser(prog="edskernel", description="Edge dominating set kernels for component modulators")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="profile one connected graph")
    a.add_argument("graph", nargs="?", default="P5")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("classify", parents=[common], help="classify a finite family")
    c.add_argument("--family", nargs="+")
    c.set_defaults(func=cmd_classify)

    at = sub.add_parser("atlas", parents=[common], help="profile all small connected graphs")
    at.add_argument("--n-max", type=int, default=6)
    at.set_defaults(func=cmd_atlas)

    for name, func, helptext in (
        ("kernelize", cmd_kernelize, "reduce an instance"),
        ("verify", cmd_verify, "check kernels against the exact oracle"),
    ):
        k = sub.add_parser(name, parents=[common], help=helptext)
        k.add_argument("--family", nargs="+")
        k.add_argument("--general", action="store_true", help="use the general kernel even when a simpler one applies")
        k.add_argument("--no-p5", action="store_true", help="skip the dedicated {P5} kernel")
        k.set_defaults(func=func)
        if name == "kernelize":
            k.add_argument("--trace", help="write the JSON rule trace here")
        else:
            k.add_argument("--count", type=int, default=10)
            k.add_argument("--x-size", type=int, default=4)
            k.add_argument("--components", type=int, default=3)
            k.add_argument("--density", type=float, default=0.2)

    s = sub.add_parser("solve", parents=[common], help="decide an instance exactly")
    s.add_argument("--family", nargs="+")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("generate", parents=[common], help="build reduction outputs and random instances")
    g.add_argument("--reduction", choices=["p3", "control", "cost", "sat", "vc", "random"], required=True)
    g.add_argument("--manifest")
    g.add_argument("--t", type=int, default=2)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--n", type=int, default=2)
    g.add_argument("--edge-prob", type=float, default=0.7)
    g.add_argument("--host", default="P3")
    g.add_argument("--vars", type=int, default=3)
    g.add_argument("--clauses", type=int, default=3)
    g.add_argument("--vc-k", type=int, default=1)
    g.add_argument("--family", nargs="+", default=["P5"])
    g.add_argument("--x-size", type=int, default=3)
    g.add_argument("--components", type=int, default=5)
    g.add_argument("--density", type=float, default=0.2)
    g.set_defaults(func=cmd_generate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    caps = {}
    if args.max_component_size is not None:
        caps.update(max_component_size=args.max_component_size, enumeration=args.max_component_size)
    if args.oracle_cap is not None:
        caps.update(oracle=args.oracle_cap, exact=max(config.CAPS.exact, args.oracle_cap))
    try:
        with config.override(**caps):
            return args.func(args)
    except config.CapExceeded as exc:
        sys.stderr.write(f"cap exceeded: {exc}\n")
        return EXIT_CAP
    except NoPolyKernel as exc:
        sys.stderr.write(f"no polynomial kernel: {exc}\n")
        return EXIT_NO
    except (GraphFormatError, FamilyMismatch, PreconditionError, UsageError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
