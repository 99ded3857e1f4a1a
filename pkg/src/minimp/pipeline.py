"""End-to-end pipeline: prove, embed, pad, compress, encode, verify, unfold.

Every stage reports its size metrics, and each quantitative guarantee along
the way is recorded as a named bound with observed and allowed values, so a
report is machine-checkable on its own.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Optional

from .calculus import (SCProof, check_proof, degree_strictly_decreases,
                       proof_formulas, proof_metrics, prove_formula)
from .compress import CollapseTrace, compress
from .dag import DagDeduction, check_local_correctness, dag_metrics, from_tree, open_assumptions
from .formula import Formula, imp, imp_count, semi_subformulas, var, var_set
from .metrics import MetricsReport
from . import ndtree as nd
from .unfold import unfold
from .verify import discharge_bits, encode, open_assumptions_encoded, verify


@dataclass(frozen=True)
class BoundCheck:
    name: str
    observed: float
    allowed: float
    strict: bool = False

    @property
    def passed(self) -> bool:
        return self.observed < self.allowed if self.strict else self.observed <= self.allowed

    def as_dict(self) -> dict:
        return {"name": self.name, "observed": self.observed,
                "allowed": self.allowed,
                "comparison": "<" if self.strict else "<=",
                "passed": self.passed}


@dataclass
class PipelineReport:
    formula: str
    status: str = "ok"  # ok | unprovable | error
    detail: str = ""
    stage_metrics: dict[str, MetricsReport] = field(default_factory=dict)
    bounds: list[BoundCheck] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)
    verdict_accepted: Optional[bool] = None
    verdict_failures: list[int] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    traces: list[CollapseTrace] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return (self.status == "ok" and all(b.passed for b in self.bounds)
                and all(self.checks.values())
                and (self.verdict_accepted is not False))

    def as_dict(self) -> dict:
        return {
            "formula": self.formula,
            "status": self.status,
            "detail": self.detail,
            "stages": {k: m.as_dict() for k, m in self.stage_metrics.items()},
            "bounds": [b.as_dict() for b in self.bounds],
            "checks": self.checks,
            "verdict": {"accepted": self.verdict_accepted,
                        "failed_conditions": self.verdict_failures},
            "timings_ms": {k: round(v * 1000, 3) for k, v in self.timings.items()},
            "all_passed": self.all_passed,
        }


@dataclass
class PipelineResult:
    report: PipelineReport
    proof: Optional[SCProof] = None
    tree: Optional[nd.NDTree] = None
    padded: Optional[nd.NDTree] = None
    dag: Optional[DagDeduction] = None
    bits: Optional[dict] = None
    encoding: Optional[Any] = None
    unfolded: Optional[nd.NDTree] = None


def run_pipeline(rho: Formula, budget: int = 1_000_000,
                 cap_nodes: int = 1_000_000, cap_threads: int = 1_000_000,
                 want_unfold: bool = False, keep_trace: bool = False,
                 check_plain: bool = False,
                 memo: Optional[dict] = None) -> PipelineResult:
    """Run the full tool chain on one formula and collect every bound check."""
    rep = PipelineReport(formula=rho.text)
    res = PipelineResult(report=rep)
    k = imp_count(rho)

    def timed(name, fn, *args, **kw):
        t0 = time.perf_counter()
        out = fn(*args, **kw)
        rep.timings[name] = time.perf_counter() - t0
        return out

    try:
        proof = timed("prove", prove_formula, rho, budget, memo)
    except Exception as exc:
        rep.status, rep.detail = "error", f"prove: {exc}"
        return res
    if proof is None:
        rep.status = "unprovable"
        return res
    res.proof = proof
    rep.checks["proof_wellformed"] = not check_proof(proof)
    rep.checks["degree_decreases"] = degree_strictly_decreases(proof)
    sm = proof_metrics(proof)
    rep.stage_metrics["proof"] = sm
    rep.bounds += [
        BoundCheck("proof height <= 3*arrows", sm.height, 3 * k),
        BoundCheck("proof foundation <= (arrows+1)^2", sm.foundation, (k + 1) ** 2),
        BoundCheck("proof max formula <= arrows", sm.max_arrows, k),
    ]
    rep.checks["proof_semi_subformulas"] = proof_formulas(proof) <= semi_subformulas(rho)

    tree = timed("embed", nd.embed, proof, True)
    res.tree = tree
    tm = nd.tree_metrics(tree)
    rep.stage_metrics["embedded"] = tm
    rep.checks["embedded_wellformed"] = not nd.check_tree(tree)
    rep.checks["embedded_closed"] = not nd.open_assumptions_tree(tree)
    rep.bounds += [
        BoundCheck("embedded height <= 6*proof height", tm.height, 6 * sm.height),
        BoundCheck("embedded height <= 18*arrows", tm.height, 18 * k),
        BoundCheck("embedded foundation < (arrows+1)^2*(arrows+2)",
                   tm.foundation, (k + 1) ** 2 * (k + 2), strict=True),
        BoundCheck("embedded max formula <= 2*arrows", tm.max_arrows, 2 * k),
    ]
    extended = set(semi_subformulas(rho))
    for g in list(extended):
        for q in var_set(rho):
            extended.add(imp(g, var(q)))
    rep.checks["embedded_semi_subformulas"] = nd.tree_formulas(tree) <= extended

    padded = timed("pad", nd.pad_uniform, tree)
    res.padded = padded
    pm = nd.tree_metrics(padded)
    rep.stage_metrics["padded"] = pm
    rep.checks["pad_preserves_measures"] = (
        (pm.height, pm.foundation, pm.max_arrows)
        == (tm.height, tm.foundation, tm.max_arrows))

    traces = [] if keep_trace else None
    dag = timed("compress", lambda: compress(from_tree(padded), traces=traces))
    if keep_trace:
        rep.traces = traces
    res.dag = dag
    dm = dag_metrics(dag)
    rep.stage_metrics["compressed"] = dm
    rep.checks["compressed_wellformed"] = not check_local_correctness(dag)
    rep.bounds += [
        BoundCheck("compressed size <= height*foundation",
                   dm.size, pm.height * pm.foundation),
        BoundCheck("compressed size < 18*arrows*(arrows+1)^2*(arrows+2)",
                   dm.size, 18 * k * (k + 1) ** 2 * (k + 2), strict=True),
        BoundCheck("compression keeps max formula", dm.max_arrows, pm.max_arrows),
        BoundCheck("compression keeps foundation", dm.foundation, pm.foundation),
    ]
    if check_plain:
        try:
            gamma = timed("plain_open", open_assumptions, dag, cap_threads)
            rep.checks["compressed_closed_plain"] = not gamma
        except Exception as exc:
            rep.checks["compressed_closed_plain"] = False
            rep.detail = f"plain openness: {exc}"

    bits = timed("discharge", discharge_bits, dag)
    res.bits = bits
    rep.checks["compressed_closed_encoded"] = not open_assumptions_encoded(dag, bits)
    enc = timed("encode", encode, dag, bits)
    res.encoding = enc
    verdict = timed("verify", verify, enc, rho)
    rep.verdict_accepted = verdict.accepted
    rep.verdict_failures = list(verdict.failed_conditions())

    if want_unfold:
        try:
            unfolded = timed("unfold", unfold, dag, cap_nodes)
        except Exception as exc:
            rep.checks["unfold_ok"] = False
            rep.detail = f"unfold: {exc}"
            return res
        res.unfolded = unfolded
        rep.stage_metrics["unfolded"] = nd.tree_metrics(unfolded)
        rep.checks["unfold_ok"] = (not nd.check_tree(unfolded)
                                   and unfolded.formula is rho
                                   and not nd.open_assumptions_tree(unfolded))
    return res
