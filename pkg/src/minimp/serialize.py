"""JSON forms for proofs, deduction trees, dags and certificates.

Formats carry a ``format`` tag:

* ``minimp-proof/1``   sequent-calculus proof trees
* ``minimp-tree/1``    deduction trees
* ``minimp-dag/1``     dag deductions with signs and optional discharge bits
* ``minimp-cert/1``    relational encodings (certificates)

Field names are part of the interface; see the README for the full schema.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from .calculus import SCProof, Sequent
from .dag import DagDeduction, make_dag
from .formula import Formula, parse_formula
from . import ndtree as nd
from .verify import Bits, RelationalEncoding

PROOF_FORMAT = "minimp-proof/1"
TREE_FORMAT = "minimp-tree/1"
DAG_FORMAT = "minimp-dag/1"
CERT_FORMAT = "minimp-cert/1"


class FormatError(ValueError):
    pass


def _expect(obj: dict, tag: str) -> None:
    if obj.get("format") != tag:
        raise FormatError(f"expected format {tag}, found {obj.get('format')!r}")


# -- sequent proofs --------------------------------------------------------


def proof_to_obj(p: SCProof) -> dict:
    def conv(node: SCProof) -> dict:
        out: dict[str, Any] = {
            "sequent": {"antecedent": [f.text for f in node.conclusion.antecedent],
                        "succedent": node.conclusion.succedent.text},
            "rule": node.rule,
        }
        if node.principal is not None:
            out["principal"] = node.principal.text
        if node.premises:
            out["premises"] = [conv(q) for q in node.premises]
        return out

    return {"format": PROOF_FORMAT, "proof": conv(p)}


def proof_from_obj(obj: dict) -> SCProof:
    _expect(obj, PROOF_FORMAT)

    def conv(node: dict) -> SCProof:
        seq = Sequent.make([parse_formula(t) for t in node["sequent"]["antecedent"]],
                           parse_formula(node["sequent"]["succedent"]))
        return SCProof(
            seq, node["rule"],
            tuple(conv(q) for q in node.get("premises", ())),
            parse_formula(node["principal"]) if "principal" in node else None)

    return conv(obj["proof"])


# -- deduction trees --------------------------------------------------------


def tree_to_obj(t: nd.NDTree) -> dict:
    def conv(node: nd.NDTree) -> dict:
        out: dict[str, Any] = {"formula": node.formula.text, "rule": node.rule}
        if node.label is not None:
            out["label"] = node.label
        if node.discharge is not None:
            out["discharge"] = node.discharge
        if node.groups is not None:
            out["groups"] = [list(g) for g in node.groups]
        if node.children:
            out["children"] = [conv(c) for c in node.children]
        return out

    return {"format": TREE_FORMAT, "tree": conv(t)}


def tree_from_obj(obj: dict) -> nd.NDTree:
    _expect(obj, TREE_FORMAT)

    def conv(node: dict) -> nd.NDTree:
        return nd.NDTree(
            parse_formula(node["formula"]), node["rule"],
            tuple(conv(c) for c in node.get("children", ())),
            node.get("label"), node.get("discharge"),
            tuple(tuple(g) for g in node["groups"]) if "groups" in node else None)

    return conv(obj["tree"])


# -- dag deductions ----------------------------------------------------------


def dag_to_obj(d: DagDeduction, bits: Optional[Bits] = None) -> dict:
    out: dict[str, Any] = {
        "format": DAG_FORMAT,
        "root": d.root,
        "vertices": [{"id": u, "level": d.level[u], "formula": d.label[u].text}
                     for u in sorted(d.vertices)],
        "edges": sorted([u, v] for (u, v) in d.edges()),
        "groups": {str(u): [[g] if isinstance(g, int) else list(g) for g in gs]
                   for u, gs in sorted(d.groups.items()) if gs},
        "signs": sorted([u, v, sorted(s)] for (u, v), s in d.signs.items()),
    }
    if bits is not None:
        out["discharge"] = sorted(
            [u, v, sorted(f.text for f in ones)] for (u, v), ones in bits.items())
    return out


def dag_from_obj(obj: dict) -> tuple[DagDeduction, Optional[Bits]]:
    _expect(obj, DAG_FORMAT)
    level = {v["id"]: v["level"] for v in obj["vertices"]}
    label = {v["id"]: parse_formula(v["formula"]) for v in obj["vertices"]}
    edges = [(u, v) for u, v in obj["edges"]]
    groups = {}
    for u, gs in obj.get("groups", {}).items():
        groups[int(u)] = tuple(g[0] if len(g) == 1 else (g[0], g[1]) for g in gs)
    signs = {(u, v): frozenset(s) for u, v, s in obj.get("signs", [])}
    d = make_dag(obj["root"], level, edges, groups, label, signs)
    bits: Optional[Bits] = None
    if "discharge" in obj:
        bits = {e: frozenset() for e in d.edges()}
        for u, v, fs in obj["discharge"]:
            bits[(u, v)] = frozenset(parse_formula(t) for t in fs)
    return d, bits


# -- certificates -------------------------------------------------------------


def cert_to_obj(enc: RelationalEncoding, rho: Optional[Formula] = None) -> dict:
    out: dict[str, Any] = {
        "format": CERT_FORMAT,
        "vertices": enc.n_vertices,
        "root": 0,
        "formulas": list(enc.formulas),
        "H": sorted(list(p) for p in enc.heights),
        "E": sorted(list(p) for p in enc.edges),
        "D1": sorted(enc.one_parent),
        "S1": sorted(list(p) for p in enc.s_one),
        "S2": sorted(list(p) for p in enc.s_two),
        "K": sorted(list(p) for p in enc.chain),
        "Lf": sorted(list(p) for p in enc.labels),
        "Lg": sorted(list(p) for p in enc.sign_rel),
        "Ld": sorted(list(p) for p in enc.bit_rel),
    }
    if rho is not None:
        out["goal"] = rho.text
    return out


def cert_from_obj(obj: dict) -> tuple[RelationalEncoding, Optional[Formula]]:
    _expect(obj, CERT_FORMAT)
    enc = RelationalEncoding(
        n_vertices=obj["vertices"],
        formulas=tuple(obj["formulas"]),
        heights=frozenset((u, i) for u, i in obj["H"]),
        edges=frozenset((u, v) for u, v in obj["E"]),
        one_parent=frozenset(obj["D1"]),
        s_one=frozenset((u, x) for u, x in obj["S1"]),
        s_two=frozenset((u, x, y) for u, x, y in obj["S2"]),
        chain=frozenset((u, x) for u, x in obj["K"]),
        labels=frozenset((u, f) for u, f in obj["Lf"]),
        sign_rel=frozenset((u, v, x) for u, v, x in obj["Lg"]),
        bit_rel=frozenset((u, v, f) for u, v, f in obj["Ld"]),
    )
    goal = parse_formula(obj["goal"]) if "goal" in obj else None
    return enc, goal


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def save(obj: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))
        fh.write("\n")


def load(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
