"""Command-line front end.

Exit codes: 0 valid/accepted, 1 invalid/rejected/unprovable, 2 resource cap
exceeded, 3 input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from typing import Optional

from . import serialize as ser
from .calculus import SearchBudgetExceeded, prove_formula
from .compress import compress
from .dag import StructureError, ThreadLimitExceeded, from_tree, open_assumptions, to_dot
from .formula import ParseError, parse_formula
from .generators import (fib_size_bound, fibonacci_closed_goal, fibonacci_dag,
                         fibonacci_instance, random_tautologies, two_branch_instance)
from . import ndtree as nd
from .oracle import OracleBudgetExceeded, minimal_valid
from .pipeline import run_pipeline
from .unfold import NodeCapExceeded, unfold
from .verify import discharge_bits, encode, open_assumptions_encoded, verify

OK, REJECTED, CAPPED, BAD_INPUT = 0, 1, 2, 3


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def _emit(obj: dict, args) -> None:
    _write(ser.dumps(obj), args.out)


def cmd_parse(args) -> int:
    f = parse_formula(args.formula)
    if args.format == "json":
        _emit({"formula": f.text, "arrows": f.arrows}, args)
    else:
        _write(f.text, args.out)
    return OK


def cmd_prove(args) -> int:
    f = parse_formula(args.formula)
    proof = prove_formula(f, budget=args.budget)
    if proof is None:
        _write(f"unprovable: {f.text}", args.out)
        return REJECTED
    if args.format == "json":
        _emit(ser.proof_to_obj(proof), args)
    else:
        _write(f"provable: {f.text}", args.out)
    return OK


def cmd_oracle(args) -> int:
    f = parse_formula(args.formula)
    ok = minimal_valid(f, budget=args.budget)
    _write(f"{'valid' if ok else 'invalid'}: {f.text}", args.out)
    return OK if ok else REJECTED


def cmd_embed(args) -> int:
    f = parse_formula(args.formula)
    proof = prove_formula(f, budget=args.budget)
    if proof is None:
        _write(f"unprovable: {f.text}", args.out)
        return REJECTED
    tree = nd.embed(proof)
    if args.pad:
        tree = nd.pad_uniform(tree)
    _emit(ser.tree_to_obj(tree), args)
    return OK


def cmd_compress(args) -> int:
    obj = ser.load(args.input)
    tree = ser.tree_from_obj(obj)
    dag = compress(from_tree(nd.pad_uniform(tree)))
    bits = discharge_bits(dag) if args.bits else None
    if args.format == "dot":
        _write(to_dot(dag), args.out)
    else:
        _emit(ser.dag_to_obj(dag, bits), args)
    return OK


def cmd_unfold(args) -> int:
    obj = ser.load(args.input)
    dag, _bits = ser.dag_from_obj(obj)
    tree = unfold(dag, cap=args.cap_nodes)
    _emit(ser.tree_to_obj(tree), args)
    return OK


def cmd_verify(args) -> int:
    obj = ser.load(args.input)
    if obj.get("format") == ser.DAG_FORMAT:
        dag, bits = ser.dag_from_obj(obj)
        enc = encode(dag, bits)
        goal = None
    else:
        enc, goal = ser.cert_from_obj(obj)
    if args.goal:
        goal = parse_formula(args.goal)
    if goal is None:
        print("no goal formula: pass --goal or store one in the certificate",
              file=sys.stderr)
        return BAD_INPUT
    assumptions = [parse_formula(t) for t in args.assume]
    verdict = verify(enc, goal, assumptions)
    report = {
        "goal": goal.text,
        "accepted": verdict.accepted,
        "failures": [{"condition": f.index, "description": f.description,
                      "witnesses": list(f.witnesses)} for f in verdict.failures],
        "weights": enc.weight_report(),
    }
    _emit(report, args)
    return OK if verdict.accepted else REJECTED


def cmd_pipeline(args) -> int:
    f = parse_formula(args.formula)
    res = run_pipeline(f, budget=args.budget, cap_nodes=args.cap_nodes,
                       cap_threads=args.cap_threads, want_unfold=args.unfold,
                       keep_trace=args.trace, check_plain=args.plain)
    _emit(res.report.as_dict(), args)
    if res.report.status == "unprovable":
        return REJECTED
    if res.report.status == "error":
        return CAPPED if "cap" in res.report.detail or "budget" in res.report.detail else BAD_INPUT
    return OK if res.report.all_passed else REJECTED


def cmd_gen(args) -> int:
    if args.family == "fib":
        if args.dag:
            dag = fibonacci_dag(args.n, closed=args.closed)
            bits = discharge_bits(dag)
            obj = ser.dag_to_obj(dag, bits)
            if args.closed:
                obj["goal"] = fibonacci_closed_goal(args.n).text
            _emit(obj, args)
        else:
            assumptions, goal, tree = fibonacci_instance(args.n)
            obj = ser.tree_to_obj(tree)
            obj["assumptions"] = [a.text for a in assumptions]
            obj["goal"] = goal.text
            obj["size_bound"] = fib_size_bound(args.n)
            _emit(obj, args)
        return OK
    if args.family == "gilbert":
        names = [parse_formula(t) for t in args.atoms.split(",")] if args.atoms else []
        goal, tree = two_branch_instance(*names)
        obj = ser.tree_to_obj(tree)
        obj["goal"] = goal.text
        _emit(obj, args)
        return OK
    if args.family == "random":
        fs = random_tautologies(args.seed, args.count, args.max_imp)
        _emit({"seed": args.seed, "count": len(fs),
               "formulas": [f.text for f in fs]}, args)
        return OK
    print(f"unknown family {args.family!r}", file=sys.stderr)
    return BAD_INPUT


def cmd_bench(args) -> int:
    fs = random_tautologies(args.seed, args.count, args.max_imp)
    rows = []
    memo: dict = {}
    for i, f in enumerate(fs):
        t0 = time.perf_counter()
        res = run_pipeline(f, budget=args.budget, memo=memo)
        dt = time.perf_counter() - t0
        rep = res.report
        rows.append({
            "index": i,
            "formula": f.text,
            "arrows": f.arrows,
            "status": rep.status,
            "all_passed": rep.all_passed,
            "proof_size": rep.stage_metrics.get("proof").size if "proof" in rep.stage_metrics else "",
            "padded_size": rep.stage_metrics.get("padded").size if "padded" in rep.stage_metrics else "",
            "compressed_size": rep.stage_metrics.get("compressed").size if "compressed" in rep.stage_metrics else "",
            "seconds": round(dt, 6),
        })
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            w.writeheader()
            w.writerows(rows)
    ok = all(r["all_passed"] for r in rows)
    _write(json.dumps({"count": len(rows), "all_passed": ok}), args.out)
    return OK if ok else REJECTED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="minimp",
                                 description="prover, proof compressor and "
                                             "certificate verifier for minimal "
                                             "implicational logic")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write output to this file")
        p.add_argument("--format", default="json", choices=("json", "text", "dot"))
        p.add_argument("--budget", type=int, default=1_000_000,
                       help="search budget (visited sequents)")
        p.add_argument("--cap-nodes", type=int, default=1_000_000)
        p.add_argument("--cap-threads", type=int, default=1_000_000)

    p = sub.add_parser("parse", help="parse and normalise a formula")
    p.add_argument("formula")
    common(p)
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("prove", help="backward proof search")
    p.add_argument("formula")
    common(p)
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("oracle", help="independent validity check")
    p.add_argument("formula")
    common(p)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("embed", help="prove and translate to a deduction tree")
    p.add_argument("formula")
    p.add_argument("--pad", action="store_true", help="pad leaves to uniform height")
    common(p)
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("compress", help="compress a stored deduction tree")
    p.add_argument("input", help="tree JSON file")
    p.add_argument("--bits", action="store_true", help="attach discharge bits")
    common(p)
    p.set_defaults(fn=cmd_compress)

    p = sub.add_parser("unfold", help="unfold a stored dag to a tree")
    p.add_argument("input", help="dag JSON file")
    common(p)
    p.set_defaults(fn=cmd_unfold)

    p = sub.add_parser("verify", help="check a certificate or dag file")
    p.add_argument("input", help="certificate or dag JSON file")
    p.add_argument("--goal", help="goal formula (overrides the stored one)")
    p.add_argument("--assume", action="append", default=[],
                   help="formula allowed to stay open (repeatable)")
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("pipeline", help="full tool chain with bound report")
    p.add_argument("formula")
    p.add_argument("--unfold", action="store_true")
    p.add_argument("--trace", action="store_true", help="keep collapse traces")
    p.add_argument("--plain", action="store_true",
                   help="also check openness by thread enumeration")
    common(p)
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("gen", help="generate example instances")
    p.add_argument("family", choices=("fib", "gilbert", "random"))
    p.add_argument("--n", type=int, default=5, help="fib: chain length")
    p.add_argument("--dag", action="store_true", help="fib: emit the compressed dag")
    p.add_argument("--closed", action="store_true",
                   help="fib: discharge the chain assumptions too")
    p.add_argument("--atoms", help="gilbert: five comma-separated formulas")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--max-imp", type=int, default=8)
    common(p)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("bench", help="run the pipeline over a random corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--max-imp", type=int, default=8)
    p.add_argument("--csv", help="write per-item metrics to this CSV file")
    common(p)
    p.set_defaults(fn=cmd_bench)

    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (FileNotFoundError, json.JSONDecodeError, ser.FormatError,
            StructureError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (SearchBudgetExceeded, OracleBudgetExceeded, ThreadLimitExceeded,
            NodeCapExceeded) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return CAPPED


if __name__ == "__main__":
    sys.exit(main())
