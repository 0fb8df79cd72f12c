"""Command line front end.

Exit codes: 0 pass, 1 refuted or failed check, 2 inconclusive, 3 input error.
All outputs are JSON with sorted keys, so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import catalog
from .certify import (
    FarkasRefutation,
    MalformedCertificateError,
    MembershipCertificate,
    decide_membership,
    is_thick,
    is_weakly_thick,
    thickness_problem,
    verify_certificate,
)
from .complex import BHypergraph, ReflectionComplex, fmt_set, is_k_reducible, pair
from .graphs import Hypergraph, TargetGraph
from .homcount import sidorenko_check, sweep_targets
from .measures import DEFAULT_MAX_STATE, DEFAULT_TOL, evaluate_scheme, supermodularity_probe, witness_check
from .setfun import SetFunction

log = logging.getLogger("sidocert")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3


class InputError(ValueError):
    pass


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _emit(data, out: str | None):
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def load_complex(path: str) -> ReflectionComplex:
    """Trace files carry ``trace``; hand-made b-hypergraphs carry ``edges`` and ``relation``."""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise InputError("complex files hold a JSON object")
    if "trace" in data:
        return ReflectionComplex.from_json(data)
    try:
        k = int(data.get("arity", 2))
        edges = [frozenset(e) for e in data["edges"]]
        verts = data.get("vertices") or sorted(set().union(*edges))
        rel = [pair(a, b) for a, b in data.get("relation", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed complex file: {exc}") from None
    base = BHypergraph(tuple(verts), frozenset(edges), frozenset(rel))
    red = is_k_reducible(base, k)
    if not red:
        raise InputError(f"b-hypergraph is not {k}-reducible: edge {fmt_set(red.edge)} has no proper split")
    return ReflectionComplex(base, k, ())


def load_graph(path: str) -> Hypergraph:
    data = _read_json(path)
    if isinstance(data, dict) and "trace" in data:
        return ReflectionComplex.from_json(data).frame()
    try:
        return Hypergraph.from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed graph file: {exc}") from None


def _problem(M: ReflectionComplex, weak: bool):
    return thickness_problem(M, weak=weak)


def cmd_certify(args) -> int:
    M = load_complex(args.complex)
    weak = args.weak or M.arity != 2
    problem = _problem(M, weak)
    if M.trace or len(M.vertices) == M.arity:
        fn = is_weakly_thick if weak else is_thick
        res = fn(M, mode=args.mode, max_ground=args.max_ground)
    else:
        # hand-made complex without a trace: only the LP applies
        mode = "restricted" if args.mode == "restricted" else "full"
        res = decide_membership(problem, mode, max_ground=args.max_ground)
        print("note: no trace given; the result concerns this b-hypergraph, which is not checked to be a reflection complex", file=sys.stderr)
    out = res.to_json(problem)
    out["complex"] = M.to_json() if M.trace or len(M.vertices) == M.arity else _base_json(M)
    _emit(out, args.out)
    if isinstance(res, MembershipCertificate):
        print(f"PASS: {problem.label} certificate with {len(res.cone_coeffs)} cone terms", file=sys.stderr)
        return EXIT_PASS
    if isinstance(res, FarkasRefutation):
        print(f"REFUTED: {problem.label} membership fails", file=sys.stderr)
        return EXIT_FAIL
    print(f"INCONCLUSIVE: {res.reason}", file=sys.stderr)
    return EXIT_INCONCLUSIVE


def _base_json(M: ReflectionComplex) -> dict:
    b = M.base
    return {
        "arity": M.arity,
        "vertices": list(b.vertices),
        "edges": sorted(sorted(e) for e in b.edges),
        "relation": sorted([sorted(a), sorted(c)] for a, c in b.relation),
    }


def cmd_verify_cert(args) -> int:
    M = load_complex(args.complex)
    data = _read_json(args.cert)
    if not isinstance(data, dict) or data.get("kind") != "certificate":
        raise InputError("certificate file does not hold a certificate")
    label = data.get("problem", "weakly-thick" if M.arity != 2 else "thick")
    if label not in ("thick", "weakly-thick"):
        raise InputError(f"unknown problem label {label!r}")
    problem = _problem(M, label == "weakly-thick")
    if "target" in data:
        stated = SetFunction.from_records(problem.ground, data["target"])
        if stated != problem.target:
            print("FAIL: stated target differs from the complex's target", file=sys.stderr)
            return EXIT_FAIL
    cert = MembershipCertificate.from_json(data)
    try:
        ok = verify_certificate(problem, cert)
    except MalformedCertificateError as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(("PASS" if ok else "FAIL") + f": {label} certificate", file=sys.stderr)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_scheme(args) -> int:
    M = load_complex(args.complex)
    G = TargetGraph.of(load_graph(args.g))
    mu = evaluate_scheme(M, G, max_state=args.max_state)
    report: dict = {"coords": list(mu.coords), "support": len(mu)}
    ok = True
    if args.check_witness:
        w = witness_check(mu, M.frame(), G, tol=args.tol)
        report["witness"] = w.to_json()
        ok &= w.ok
    if args.probe:
        p = supermodularity_probe(M, G, samples=args.samples, seed=args.seed, tol=args.tol, max_state=args.max_state)
        report["probe"] = {
            "ok": p.ok,
            "relation_max_abs": repr(p.relation_max_abs),
            "sampled_min": repr(p.sampled_min),
            "s_inner": repr(p.s_inner),
            "samples": p.sampled_pairs,
        }
        ok &= p.ok
    if args.table:
        report["table"] = mu.to_json()["table"]
    report["ok"] = ok
    _emit(report, args.out)
    print("PASS" if ok else "FAIL", file=sys.stderr)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_sidorenko(args) -> int:
    H = load_graph(args.h)
    G = load_graph(args.g)
    r = sidorenko_check(H, G)
    _emit(r.to_json(), args.out)
    print("PASS" if r.ok else "FAIL", file=sys.stderr)
    return EXIT_PASS if r.ok else EXIT_FAIL


def cmd_sweep(args) -> int:
    H = load_graph(args.h)
    r = sweep_targets(
        H,
        args.max_g_vertices,
        arity=args.arity,
        random_count=args.random,
        random_vertices=args.random_vertices,
        seed=args.seed,
        workers=args.workers,
        keep_results=args.all,
    )
    _emit(r.to_json(), args.out)
    print(f"{r.checked} targets, {len(r.violations)} violations", file=sys.stderr)
    return EXIT_PASS if r.ok else EXIT_FAIL


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name, e in catalog.CATALOG.items():
            print(f"{name:20s} {e.params:12s} {e.doc}")
        return EXIT_PASS
    if not args.name:
        raise InputError("catalog emit needs an entry name")
    M = catalog.build(args.name, *args.params)
    out = M.to_json()
    out["frame"] = M.frame().to_json()
    _emit(out, args.out)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sidocert", description="Certify thickness of reflection complexes and check Sidorenko's inequality.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", help="certify (weak) thickness of a complex")
    c.add_argument("complex")
    c.add_argument("--weak", action="store_true", help="certify s_H(V) instead of h_H(V)")
    c.add_argument("--mode", choices=["auto", "restricted", "full", "lp"], default="auto")
    c.add_argument("--max-ground", type=int, default=None)
    c.add_argument("--out")
    c.set_defaults(func=cmd_certify)

    v = sub.add_parser("verify-cert", help="re-check a certificate against a complex")
    v.add_argument("complex")
    v.add_argument("cert")
    v.set_defaults(func=cmd_verify_cert)

    s = sub.add_parser("scheme", help="evaluate the coupling measure of a complex in a target")
    s.add_argument("complex")
    s.add_argument("--g", required=True)
    s.add_argument("--check-witness", action="store_true")
    s.add_argument("--probe", action="store_true")
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--table", action="store_true", help="include the probability table")
    s.add_argument("--tol", type=float, default=DEFAULT_TOL)
    s.add_argument("--max-state", type=int, default=DEFAULT_MAX_STATE)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_scheme)

    h = sub.add_parser("sidorenko", help="exact check of t(H,G) >= t(e,G)^|E(H)|")
    h.add_argument("--h", required=True)
    h.add_argument("--g", required=True)
    h.add_argument("--out")
    h.set_defaults(func=cmd_sidorenko)

    w = sub.add_parser("sidorenko-sweep", help="check all labeled targets on N vertices")
    w.add_argument("--h", required=True)
    w.add_argument("--max-g-vertices", type=int, required=True)
    w.add_argument("--arity", type=int, default=None)
    w.add_argument("--random", type=int, default=0, help="extra seeded random targets")
    w.add_argument("--random-vertices", type=int, default=None)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--workers", type=int, default=1)
    w.add_argument("--all", action="store_true", help="report every target, not just violations")
    w.add_argument("--out")
    w.set_defaults(func=cmd_sweep)

    g = sub.add_parser("catalog", help="list or emit built-in complexes")
    g.add_argument("action", choices=["list", "emit"])
    g.add_argument("name", nargs="?")
    g.add_argument("params", nargs="*")
    g.add_argument("--out")
    g.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except catalog.UnsupportedError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
