"""Command-line interface: JSON on stdout, a short summary on stderr.

Exit codes: 0 success (identity holds), 1 identity violated, 2 usage or input
error (including exceeded enumeration budgets).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .corpus import builtin, corpus
from .flows import BudgetError, enumerate_flows, kernel_census
from .ground import Instance, InstanceError, parse_instance
from .groups import GroupError, parse_group
from .invariants import SizeCapError, char_poly, chromatic_poly, flow_poly, rank_gen_poly, tutte
from .parcels import (
    SETOP_ALIASES,
    hamming_census,
    inner_product_census,
    prop25_census,
    setop_census,
    support_census,
    support_diff_enumerator,
    tuple_census,
    weight_enumerator,
)
from .registry import (
    IDENTITY_IDS,
    REGISTRY,
    UNITS_PER_SECOND,
    CheckError,
    cell_cost,
    skipped_report,
    verify,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FAMILIES = ("hamming", "hamming-nonzero", "support", "setop", "inner-product", "tuple", "prop25")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def load_instance(source: str, trust_tu: bool = False) -> Instance:
    """``builtin:NAME`` or a path to an instance JSON file ("-" reads stdin)."""
    if source.startswith("builtin:"):
        return builtin(source[len("builtin:"):])
    if source == "-":
        return parse_instance(sys.stdin.read(), "stdin", trust_tu)
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {source}: {exc.strerror}") from exc
    name = os.path.splitext(os.path.basename(source))[0]
    return parse_instance(text, name, trust_tu)


def _sigma(text: Optional[str]) -> Optional[int]:
    if text is None or text in ("inf", "oo", "infinity"):
        return None
    try:
        value = int(text)
    except ValueError:
        raise UsageError(f"--sigma must be a positive integer or 'inf', got {text!r}") from None
    if value < 1:
        raise UsageError("--sigma must be positive")
    return value


def _group(args, inst: Instance):
    if not args.group:
        raise UsageError("--group is required (cyclic:q, gfp:p:d or product:<base>:m)")
    return parse_group(args.group)


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _say(message: str) -> None:
    print(message, file=sys.stderr)


# -- subcommands ---------------------------------------------------------------

def cmd_rankpoly(args) -> int:
    inst = load_instance(args.instance, args.trust_tu)
    r = rank_gen_poly(inst)
    _emit({"instance": inst.label(), "ground_size": inst.ncols, "rank": inst.rank,
           "rank_generating_polynomial": r.to_json(), "tutte": tutte(inst).to_json()})
    _say(f"{inst.label()}: |E|={inst.ncols} r={inst.rank}, {len(r.terms)} terms")
    return EXIT_OK


def cmd_charpoly(args) -> int:
    inst = load_instance(args.instance, args.trust_tu)
    chi = char_poly(inst)
    out = {"instance": inst.label(), "characteristic_polynomial": chi.to_json()}
    if inst.is_graph:
        out["chromatic_polynomial"] = chromatic_poly(inst).to_json()
        out["flow_polynomial"] = flow_poly(inst).to_json()
    if args.at is not None:
        out["value"] = str(chi.evaluate(args.at))
    _emit(out)
    _say(f"{inst.label()}: chi = {chi!r}")
    return EXIT_OK


def cmd_flows(args) -> int:
    inst = load_instance(args.instance, args.trust_tu)
    group = _group(args, inst)
    flows = enumerate_flows(inst, group)
    out = {"instance": inst.label(), "group": str(group), "count": str(len(flows)),
           "kernel_census": {str(k): str(v) for k, v in sorted(kernel_census(inst, group).items())}}
    if args.list:
        out["flows"] = [[int(x) for x in row] for row in flows[: args.limit]]
    _emit(out)
    _say(f"{inst.label()} over {group}: {len(flows)} flows")
    return EXIT_OK


def cmd_census(args) -> int:
    inst = load_instance(args.instance, args.trust_tu)
    sigma = _sigma(args.sigma)
    family = args.family
    tier = args.tier
    if family == "prop25":
        if args.q is None:
            raise UsageError("prop25 needs --q")
        census = prop25_census(inst, args.q, tier)
    else:
        group = _group(args, inst)
        if family == "hamming":
            census = hamming_census(inst, group, sigma, tier=tier)
        elif family == "hamming-nonzero":
            census = hamming_census(inst, group, sigma, nonzero=True, tier=tier)
        elif family == "support":
            census = support_census(inst, group, args.alpha, args.beta, sigma, tier)
        elif family == "setop":
            if args.op not in SETOP_ALIASES:
                raise UsageError("--op must be one of union, intersection, symdiff, sheffer, implication")
            census = setop_census(inst, group, args.op, sigma, tier)
        elif family == "inner-product":
            census = inner_product_census(inst, group, tier)
        else:
            census = tuple_census(inst, group, args.m, sigma, tier)
    _emit(dict(census.to_json(), instance=inst.label()))
    _say(f"{inst.label()} {census.family}: {len(census.bins)} bins, total {census.total()}, tier {census.tier}")
    return EXIT_OK


def cmd_enumerator(args) -> int:
    inst = load_instance(args.instance, args.trust_tu)
    group = _group(args, inst)
    if args.kind == "weight":
        counts = weight_enumerator(inst, group)
        out = {"kind": "weight", "terms": [{"x": k, "c": str(v)} for k, v in counts.items()]}
    else:
        out = dict(support_diff_enumerator(inst, group, args.tier).to_json(), kind="support-difference")
    _emit(dict(out, instance=inst.label(), group=str(group)))
    _say(f"{inst.label()} over {group}: {args.kind} enumerator, {len(out['terms'])} terms")
    return EXIT_OK


PARAM_FLAGS = ("group", "sigma", "rho", "alpha", "beta", "tau", "m", "op", "p", "q")


def _check_params(args) -> dict:
    out = {}
    for key in PARAM_FLAGS:
        value = getattr(args, key, None)
        if value is not None:
            out[key] = value
    if args.tier != "auto":
        out["tier"] = args.tier
    return out


def cmd_verify(args) -> int:
    inst = load_instance(args.instance, args.trust_tu)
    if args.theorem not in REGISTRY:
        raise UsageError(f"unknown theorem {args.theorem!r}; known: {', '.join(IDENTITY_IDS)}")
    rep = verify(inst, args.theorem, _check_params(args))
    _emit(rep.to_json())
    _say(f"{rep.theorem} on {rep.instance}: {rep.status} ({rep.wall_time:.3f}s)")
    return EXIT_OK if rep.equal else EXIT_FAIL


def _run_group(job: Tuple[str, Instance, List[dict], float]) -> List[dict]:
    """Run all cells of one (check, instance) pair; returns report JSON."""
    cid, inst, cells, cap = job
    out = []
    for cell in cells:
        if cap and cell_cost(inst, cid, cell) / UNITS_PER_SECOND > cap:
            out.append(skipped_report(cid, inst, cell, "estimated time exceeds the cap").to_json())
            continue
        try:
            rep = verify(inst, cid, cell)
        except (BudgetError, SizeCapError) as exc:
            rep = skipped_report(cid, inst, cell, str(exc))
        except CheckError as exc:
            rep = skipped_report(cid, inst, cell, f"not applicable: {exc}")
        out.append(rep.to_json())
    return out


def _corpus_instances(args) -> List[Instance]:
    if args.instance:
        return [load_instance(s, args.trust_tu) for s in args.instance]
    if args.corpus == "builtin":
        return list(corpus())
    raise UsageError(f"--corpus must be 'builtin' (or pass --instance), got {args.corpus!r}")


def cmd_verify_all(args) -> int:
    instances = _corpus_instances(args)
    ids = args.theorem or list(IDENTITY_IDS)
    unknown = [t for t in ids if t not in REGISTRY]
    if unknown:
        raise UsageError(f"unknown theorem ids: {', '.join(unknown)}")
    jobs = []
    for cid in sorted(ids, key=IDENTITY_IDS.index):
        for inst in sorted(instances, key=lambda i: i.name):
            cells = REGISTRY[cid].grid(inst)
            if cells:
                jobs.append((cid, inst, cells, args.time_cap))
    start = time.perf_counter()
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_group, jobs))  # map keeps submission order
    else:
        results = [_run_group(job) for job in jobs]
    reports = [rep for group in results for rep in group]
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for rep in reports:
        counts[rep["status"]] += 1
    shown = [r for r in reports if r["status"] != "pass"] if args.failures_only else reports
    _emit({"summary": {k: str(v) for k, v in counts.items()}, "reports": shown})
    elapsed = time.perf_counter() - start
    _say(f"verify-all: {counts['pass']} passed, {counts['fail']} failed, {counts['skipped']} skipped "
         f"over {len(instances)} instances in {elapsed:.1f}s")
    for rep in reports:
        if rep["status"] == "fail":
            _say(f"  FAIL {rep['theorem']} {rep['instance']} {json.dumps(rep['params'])}")
    return EXIT_FAIL if counts["fail"] else EXIT_OK


def cmd_corpus(args) -> int:
    out = []
    for inst in corpus():
        entry = {"name": inst.name, "kind": inst.kind, "ground_size": inst.ncols, "rank": inst.rank}
        if inst.p is not None:
            entry["p"] = inst.p
        if args.full:
            entry["instance"] = inst.to_json()
        out.append(entry)
    _emit(out)
    _say(f"{len(out)} built-in instances")
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------

def _add_instance(p):
    p.add_argument("--instance", required=True, help="builtin:NAME or a JSON file path ('-' for stdin)")
    p.add_argument("--trust-tu", action="store_true", help="accept large int-tu matrices without the TU check")


def _add_tier(p):
    p.add_argument("--tier", type=lambda s: s if s == "auto" else int(s), default="auto",
                   choices=("auto", 1, 2), help="1: enumerate function tuples; 2: enumerate flows")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parcelforge", description="Flow parcels and rank-polynomial identities.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("rankpoly", help="rank generating and Tutte polynomials")
    _add_instance(p)
    p.set_defaults(func=cmd_rankpoly)

    p = sub.add_parser("charpoly", help="characteristic (and chromatic/flow) polynomials")
    _add_instance(p)
    p.add_argument("--at", type=int, help="also evaluate at this integer")
    p.set_defaults(func=cmd_charpoly)

    p = sub.add_parser("flows", help="count flows over a group")
    _add_instance(p)
    p.add_argument("--group", help="cyclic:q, gfp:p:d or product:<group>:m")
    p.add_argument("--list", action="store_true", help="include the flows (element codes)")
    p.add_argument("--limit", type=int, default=1000)
    p.set_defaults(func=cmd_flows)

    p = sub.add_parser("census", help="parcel census of one family")
    _add_instance(p)
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--group")
    p.add_argument("--sigma", help="modulus, or 'inf' for raw values")
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--beta", type=int, default=1)
    p.add_argument("--op", default="union")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--q", type=int)
    _add_tier(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("enumerator", help="weight or support-difference enumerator")
    _add_instance(p)
    p.add_argument("--group")
    p.add_argument("--kind", choices=("weight", "support-difference"), default="weight")
    _add_tier(p)
    p.set_defaults(func=cmd_enumerator)

    p = sub.add_parser("verify", help="check one identity on one instance")
    _add_instance(p)
    p.add_argument("--theorem", required=True, help="registry id, e.g. thm3.1 (see verify-all output)")
    p.add_argument("--group", help="cyclic:q, gfp:p:d or product:<group>:m")
    p.add_argument("--sigma", type=int)
    p.add_argument("--rho", type=int, help="Galois exponent, coprime to sigma (default 1)")
    p.add_argument("--alpha", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--tau", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--op")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    _add_tier(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-all", help="run every registered identity over a corpus")
    p.add_argument("--instance", action="append", help="repeatable; overrides --corpus")
    p.add_argument("--trust-tu", action="store_true")
    p.add_argument("--corpus", default="builtin")
    p.add_argument("--theorem", action="append", help="restrict to these ids (repeatable)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--time-cap", type=float, default=0.0,
                   help="skip cells whose estimated run time exceeds this many seconds")
    p.add_argument("--failures-only", action="store_true", help="omit passing reports from the JSON")
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("corpus", help="list the built-in instances")
    p.add_argument("--full", action="store_true", help="include each instance's JSON")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        message = str(exc)
    except (InstanceError, GroupError, CheckError) as exc:
        message = str(exc)
    except (BudgetError, SizeCapError) as exc:
        message = f"budget exceeded: {exc}"
    except ValueError as exc:
        message = str(exc)
    _emit({"error": message})
    _say(f"error: {message}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
