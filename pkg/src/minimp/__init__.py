"""Minimal implicational logic: proving, proof compression, verification.

The pipeline: backward sequent-calculus search (`calculus`), translation to
tree-like natural deduction (`ndtree`), padding and horizontal dag
compression (`dag`, `compress`), dag-to-tree unfolding (`unfold`), and
locally checkable discharge certificates (`verify`).
"""

from .formula import (Formula, ParseError, imp, imp_chain, imp_count,
                      parse_formula, render, semi_subformulas, ssf_count, var,
                      var_set)
from .calculus import (SCProof, SearchBudgetExceeded, Sequent, check_proof,
                       degree, proof_metrics, prove, prove_formula)
from .metrics import MetricsReport
from .oracle import OracleBudgetExceeded, minimal_valid
from .ndtree import (NDTree, check_tree, embed, open_assumptions_tree,
                     pad_uniform, tree_metrics)
from .dag import (DagDeduction, StructureError, ThreadLimitExceeded,
                  check_local_correctness, dag_metrics, from_tree,
                  open_assumptions, threads, to_dot, to_tree)
from .compress import CollapseTrace, collapse_level, collapse_same_formula, compress
from .unfold import NodeCapExceeded, unfold, unfold_level, unfold_to_dag, unfold_vertex
from .verify import (RelationalEncoding, Verdict, decode, discharge_bits,
                     encode, open_assumptions_encoded, semantics_agree, verify)
from .pipeline import PipelineReport, PipelineResult, run_pipeline

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
