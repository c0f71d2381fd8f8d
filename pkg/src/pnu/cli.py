"""Command line: ``pnu analyze``, ``pnu nu`` and ``pnu verify``."""

from __future__ import annotations

import argparse
import logging
import sys
import time

from . import pgroups as pg
from .cosets import DEFAULT_MAX_COSETS, ResourceExceeded
from .harness import SUITES, load_corpus, report_json, run_corpus, summarize, group_presentation
from .nu import ORACLE_MAX_ORDER, build_nu
from .permgroup import RegularGroup, abelian_invariants, derived_subgroup, group_exponent, quotient
from .presentations import CatalogError, PresentationSyntaxError


def _group(spec: str, max_cosets: int):
    _, pres = group_presentation(spec)
    return pres, RegularGroup.from_presentation(pres, max_cosets).whole()


def cmd_analyze(args) -> int:
    pres, G = _group(args.group, args.max_cosets)
    prof = pg.profile(G, args.p)
    p = prof.p
    print(f"group        {args.group}")
    print(f"presentation {pres.format().strip().replace(chr(10), '; ')}")
    print(f"order        {p}^{prof.n} = {G.order()}")
    print(f"class        {prof.c}")
    print(f"coclass      {prof.r}")
    print(f"exponent     {prof.exponent}")
    print(f"lower central series orders {prof.series_orders}")
    Gab, _ = quotient(G, derived_subgroup(G))
    print(f"abelianization invariants {abelian_invariants(Gab)}")
    print(f"powerful     {pg.is_powerful(G, p)}")
    print(f"potent       {pg.is_potent(G, p)}")
    if prof.r >= 1:
        print(f"m(p, r)      {pg.m_of(p, prof.r).m}")
    if prof.r == 1 and prof.n >= 4:
        G1 = pg.maximal_class_G1(G, p)
        print(f"G_1          order {G1.order()}, exponent {group_exponent(G1)}")
    return 0


def cmd_nu(args) -> int:
    pres, G = _group(args.group, args.max_cosets)
    t0 = time.perf_counter()
    nu = build_nu(pres, args.max_cosets, oracle=G.order() <= ORACLE_MAX_ORDER and not args.no_oracle)
    rows = [("nu(G)", nu.nu), ("[G,G^phi]", nu.tensor), ("Delta(G)", nu.delta), ("mu(G)", nu.mu),
            ("Theta(G)", nu.theta), ("M(G)", nu.schur)]
    print(f"group {args.group}  |G| = {G.order()}  exp(G) = {group_exponent(G)}")
    print(f"{'subgroup':<12}{'order':>12}{'exponent':>10}")
    for name, H in rows:
        print(f"{name:<12}{H.order():>12}{group_exponent(H):>10}")
    print(f"M(G) invariants {nu.schur_invariants()}")
    print(f"class of nu(G)  {len(nu.nu_series()) - 1}")
    if nu.oracle:
        print(f"oracle ({nu.oracle.method}): element-indexed order {nu.oracle.element_order}")
    print(f"built in {time.perf_counter() - t0:.1f} s")
    return 0


def cmd_verify(args) -> int:
    entries = load_corpus(args.corpus)
    suites = None if "all" in args.suite else tuple(args.suite)

    def progress(entry, verdicts):
        c = summarize(verdicts)
        print(f"{entry.spec:<32} " + "  ".join(f"{k}={v}" for k, v in c.items()), file=sys.stderr, flush=True)
        for v in verdicts:
            if v.status == "fail":
                print(f"  FAIL {v.claim} {v.subject} {v.witness}", file=sys.stderr, flush=True)

    t0 = time.perf_counter()
    verdicts = run_corpus(entries, suites, args.seed, args.jobs, args.max_cosets, progress)
    text = report_json(verdicts, args.timings)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    counts = summarize(verdicts)
    print("total " + "  ".join(f"{k}={v}" for k, v in counts.items()) + f"  ({time.perf_counter() - t0:.0f} s)",
          file=sys.stderr)
    return 1 if counts["fail"] else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pnu", description="Tensor squares and nu(G) for small p-groups")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)

    a = sub.add_parser("analyze", help="profile and predicates of a group")
    a.add_argument("group", help="group spec, e.g. dihedral:16 or file:path")
    a.add_argument("--p", type=int)
    common(a)
    a.set_defaults(func=cmd_analyze)

    n = sub.add_parser("nu", help="build nu(G) and print its canonical subgroups")
    n.add_argument("group")
    n.add_argument("--no-oracle", action="store_true", help="skip the element-indexed check for |G| <= 16")
    common(n)
    n.set_defaults(func=cmd_nu)

    v = sub.add_parser("verify", help="run the verification suites over a corpus")
    v.add_argument("--corpus", help="corpus file (INI); default: the shipped corpus")
    v.add_argument("--suite", action="append", choices=SUITES + ("all",), default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--out", help="write the JSON report here")
    v.add_argument("--timings", action="store_true", help="include wall times (reports then differ run to run)")
    common(v)
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "suite", None) is None and args.command == "verify":
        args.suite = ["all"]
    if args.command == "verify" and not 0 <= args.seed < 2 ** 64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CatalogError, PresentationSyntaxError, pg.NotAPGroup, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceExceeded as exc:
        print(f"resource exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
