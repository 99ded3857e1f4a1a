"""Independent validity oracle for minimal implicational logic.

Exhaustive backward search in a plain single-succedent calculus with *set*
antecedents and loop checking: right implication is applied eagerly, left
implication keeps its principal formula and branches.  Termination comes
from the loop check alone; no degree measure is involved, so this is a
genuinely independent cross-check for the main prover.
"""

from __future__ import annotations

from .formula import Formula


class OracleBudgetExceeded(RuntimeError):
    """The oracle visited more states than its budget allows."""


class _Oracle:
    def __init__(self, budget: int):
        self.budget = budget
        self.visited = 0
        self.memo: dict[tuple, bool] = {}

    def holds(self, ant: frozenset[Formula], goal: Formula,
              history: frozenset) -> tuple[bool, bool]:
        """Returns (provable, clean).

        ``clean`` is False when the verdict relied on a loop-check cut
        against an ancestor sequent; such verdicts are path-dependent and
        must not be cached.  Successes are always genuine derivations.
        """
        key = (ant, goal)
        hit = self.memo.get(key)
        if hit is not None:
            return hit, True
        if key in history:
            return False, False
        self.visited += 1
        if self.visited > self.budget:
            raise OracleBudgetExceeded(f"oracle budget {self.budget} exhausted")
        history = history | {key}
        clean = True
        if not goal.is_var:
            result, clean = self.holds(ant | {goal.left}, goal.right, history)
        elif goal in ant:
            result = True
        else:
            result = False
            for f in ant:
                if f.is_var:
                    continue
                ok_major, c1 = self.holds(ant, f.left, history)
                clean = clean and c1
                if not ok_major:
                    continue
                ok_rest, c2 = self.holds((ant - {f}) | {f.right}, goal, history)
                clean = clean and c2
                if ok_rest:
                    result = True
                    break
        if result or clean:
            self.memo[key] = result
        return result, result or clean


def minimal_valid(rho: Formula, budget: int = 2_000_000) -> bool:
    """Decide validity of ``rho`` in minimal (= intuitionistic) implicational logic."""
    return _Oracle(budget).holds(frozenset(), rho, frozenset())[0]
