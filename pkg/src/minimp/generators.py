"""Example families and randomised corpora for tests and benchmarks.

The chained-implication family grows tree proofs of Fibonacci size whose
compressed dags stay quadratic; the two-branch example exercises merge
points whose road signs must keep the branches apart; the random
generators supply seeded tautology and deduction-tree corpora.
"""

from __future__ import annotations

import random
from typing import Callable, Iterable, Optional

from .formula import Formula, imp, imp_chain, var
from . import ndtree as nd
from .dag import DagDeduction, Edge, Entry, make_dag, propagate_signs
from .oracle import minimal_valid


# -- chained-implication family (Fibonacci-sized trees) ---------------------


def fib_alpha(k: int) -> Formula:
    return var(f"a{k}")


def fib_assumptions(n: int) -> list[Formula]:
    """eta = a1->a2 and sigma_k = a_{k-2} -> (a_{k-1} -> a_k) for 3 <= k <= n."""
    out = [imp(fib_alpha(1), fib_alpha(2))]
    for k in range(3, n + 1):
        out.append(imp(fib_alpha(k - 2), imp(fib_alpha(k - 1), fib_alpha(k))))
    return out


def fib_size_bound(n: int) -> int:
    """The reported lower-bound size: l(2)=1, l(3)=2, l(k)=l(k-1)+l(k-2)+2."""
    if n < 2:
        raise ValueError("defined for n >= 2")
    a, b = 1, 2  # l(2), l(3)
    if n == 2:
        return a
    for _ in range(n - 3):
        a, b = b, a + b + 2
    return b


def fibonacci_number(n: int) -> int:
    a, b = 1, 1
    for _ in range(n - 1):
        a, b = b, a + b
    return a


def fibonacci_instance(n: int) -> tuple[list[Formula], Formula, nd.NDTree]:
    """Assumptions, goal ``a1 -> a_n`` and the recursive tree proof.

    The derivation of ``a_k`` reuses full copies of the derivations of
    ``a_{k-1}`` and ``a_{k-2}``, so the tree grows like the Fibonacci
    numbers while using only linearly many distinct formulas.
    """
    if n < 2:
        raise ValueError("needs n >= 2")
    assumptions = fib_assumptions(n)
    goal = imp(fib_alpha(1), fib_alpha(n))
    label = 1

    def pi(k: int) -> nd.NDTree:
        if k == 1:
            return nd.assumption(fib_alpha(1), discharge=label)
        if k == 2:
            return nd.elim(fib_alpha(2), pi(1), nd.assumption(assumptions[0]))
        sigma = assumptions[k - 2]
        minor = pi(k - 2)
        step = nd.elim(imp(fib_alpha(k - 1), fib_alpha(k)), minor,
                       nd.assumption(sigma))
        return nd.elim(fib_alpha(k), pi(k - 1), step)

    tree = nd.intro(goal, pi(n), label=label)
    return assumptions, goal, tree


def all_parent_signs(d: DagDeduction) -> DagDeduction:
    """Fill road signs with the full parent set of the junction below.

    Base edges (leaf or junction child) over an off-root junction get all
    of that junction's parents; interior edges take unions from above.
    """
    base: dict[Edge, frozenset[int]] = {}
    for (u, v) in d.edges():
        if not d.is_signed_edge((u, v)):
            continue
        if d.kids.get(v) and len(d.pars[v]) == 1:
            continue
        base[(u, v)] = frozenset(d.pars[d.junction_below(u)])
    d.signs.clear()
    d.signs.update(propagate_signs(d, base))
    return d


def fibonacci_dag(n: int, closed: bool = False) -> DagDeduction:
    """The level-compressed dag of the chained-implication proof, built directly.

    One vertex per (level, formula): the ``a_k`` and ``a_k -> a_{k+1}``
    vertices trail down diagonally, each assumption leaf hangs over a
    repetition chain, and every ``a_k`` with two parents is a merge point.
    With ``closed`` the assumptions are discharged by a chain of
    introductions below the old root, making the dag a closed proof of
    ``eta -> sigma_3 -> ... -> sigma_n -> (a1 -> a_n)``.
    """
    if n < 2:
        raise ValueError("needs n >= 2")
    assumptions = fib_assumptions(n)
    open_goal = imp(fib_alpha(1), fib_alpha(n))

    shift = (n - 1) if closed else 0
    level: dict[int, int] = {}
    label: dict[int, Formula] = {}
    edges: list[Edge] = []
    groups: dict[int, tuple[Entry, ...]] = {}
    ids: dict[str, int] = {}
    counter = 0

    def add(name: str, lvl: int, f: Formula) -> int:
        nonlocal counter
        vid = counter
        counter += 1
        ids[name] = vid
        level[vid] = lvl + shift
        label[vid] = f
        return vid

    root = add("goal", 0, open_goal)
    for k in range(n, 1, -1):
        add(f"A{k}", n - k + 1, fib_alpha(k))
    add("A1", n, fib_alpha(1))
    add("B1", n, assumptions[0])
    for k in range(2, n):
        add(f"B{k}", n - k + 1, imp(fib_alpha(k), fib_alpha(k + 1)))
    for k in range(3, n + 1):
        sigma = assumptions[k - 2]
        prev = None
        for lvl in range(n, n - k + 2, -1):
            vid = add(f"S{k}@{lvl}", lvl, sigma)
            if prev is not None:
                edges.append((vid, prev))
                groups[vid] = (prev,)
            prev = vid

    groups[root] = (ids[f"A{n}"],)
    edges.append((root, ids[f"A{n}"]))
    for k in range(3, n + 1):
        u = ids[f"A{k}"]
        pair = (ids[f"A{k-1}"], ids[f"B{k-1}"])
        groups[u] = (pair,)
        edges.extend(((u, pair[0]), (u, pair[1])))
    u = ids["A2"]
    groups[u] = ((ids["A1"], ids["B1"]),)
    edges.extend(((u, ids["A1"]), (u, ids["B1"])))
    for k in range(2, n):
        u = ids[f"B{k}"]
        pair = (ids[f"A{k-1}"], ids[f"S{k+1}@{n - k + 2}"])
        groups[u] = (pair,)
        edges.extend(((u, pair[0]), (u, pair[1])))

    if closed:
        # Introduction chain discharging eta, sigma_3 .. sigma_n below the root.
        goal_closed = open_goal
        for f in reversed(assumptions):
            goal_closed = imp(f, goal_closed)
        cur = goal_closed
        prev_vid = None
        for j, f in enumerate(assumptions):
            vid = add(f"close@{j}", 0, cur)
            level[vid] = j
            if prev_vid is not None:
                edges.append((prev_vid, vid))
                groups[prev_vid] = (vid,)
            prev_vid = vid
            cur = cur.right
        edges.append((prev_vid, root))
        groups[prev_vid] = (root,)
        d = make_dag(ids["close@0"], level, edges, groups, label, {})
    else:
        d = make_dag(root, level, edges, groups, label, {})
    return all_parent_signs(d)


def fibonacci_closed_goal(n: int) -> Formula:
    goal = imp(fib_alpha(1), fib_alpha(n))
    for f in reversed(fib_assumptions(n)):
        goal = imp(f, goal)
    return goal


# -- two-branch merge example -------------------------------------------------


def two_branch_instance(p1: Optional[Formula] = None, p2: Optional[Formula] = None,
                        q: Optional[Formula] = None, r: Optional[Formula] = None,
                        s: Optional[Formula] = None) -> tuple[Formula, nd.NDTree]:
    """A closed tree proof with two symmetric branches that compression merges.

    Both branches derive ``q -> r`` from private assumptions ``p_i`` and
    ``p_i -> r``; merging the shared ``r`` and ``q -> r`` vertices is only
    sound because the road signs steer each leaf back to its own branch.
    Returns the goal ``xi -> s`` and its proof tree.
    """
    p1 = p1 or var("p1")
    p2 = p2 or var("p2")
    q = q or var("q")
    r = r or var("r")
    s = s or var("s")
    qr = imp(q, r)
    a1 = imp_chain(p1, p1, imp(imp(p1, r), qr))
    a2 = imp_chain(p2, imp(imp(p2, r), qr))
    xi = imp_chain(a2, a1, s)

    lab = iter(range(1, 10)).__next__

    def branch(p: Formula) -> tuple[nd.NDTree, int, int]:
        lp, lpr = lab(), lab()
        v = nd.elim(r, nd.assumption(p, discharge=lp),
                    nd.assumption(imp(p, r), discharge=lpr))
        u = nd.intro(qr, v, label=lab())
        x = nd.intro(imp(imp(p, r), qr), u, label=lpr)
        return x, lp, lpr

    x1, lp1, _ = branch(p1)
    m1 = nd.intro(imp(p1, imp(imp(p1, r), qr)), x1, label=lp1)
    big1 = nd.intro(a1, m1, label=lab())
    x2, lp2, _ = branch(p2)
    big2 = nd.intro(a2, x2, label=lp2)
    lxi = lab()
    w = nd.elim(imp(a1, s), big2, nd.assumption(xi, discharge=lxi))
    s_node = nd.elim(s, big1, w)
    return imp(xi, s), nd.intro(imp(xi, s), s_node, label=lxi)


# -- randomised corpora -------------------------------------------------------


def _random_formula(rng: random.Random, vars_: list[Formula], arrows: int) -> Formula:
    if arrows == 0:
        return rng.choice(vars_)
    left = rng.randrange(arrows)
    return imp(_random_formula(rng, vars_, left),
               _random_formula(rng, vars_, arrows - 1 - left))


_TEMPLATES: list[Callable[..., Formula]] = [
    lambda f, g, h: imp(f, f),
    lambda f, g, h: imp_chain(f, g, f),
    lambda f, g, h: imp(imp_chain(f, g, h), imp_chain(imp(f, g), f, h)),
    lambda f, g, h: imp(imp(g, h), imp_chain(imp(f, g), f, h)),
    lambda f, g, h: imp(imp_chain(f, g, h), imp_chain(g, f, h)),
    lambda f, g, h: imp(imp_chain(f, f, g), imp(f, g)),
    lambda f, g, h: imp_chain(f, imp(f, g), g),
    lambda f, g, h: imp(imp_chain(f, g), imp_chain(imp(h, f), h, g)),
]


def random_tautologies(seed: int, count: int, max_arrows: int,
                       variables: Iterable[str] = ("p", "q", "r"),
                       oracle_budget: int = 400_000) -> list[Formula]:
    """A deterministic list of oracle-validated tautologies.

    Samples both raw random formulas and instantiated combinator shapes,
    keeps those the independent oracle validates, and deduplicates.  All
    outputs have at most ``max_arrows`` arrows.
    """
    rng = random.Random(seed)
    vars_ = [var(v) for v in variables]
    out: list[Formula] = []
    seen: set[Formula] = set()
    attempts = 0
    while len(out) < count and attempts < 200 * count:
        attempts += 1
        if rng.random() < 0.45:
            f = _random_formula(rng, vars_, rng.randint(1, max_arrows))
        else:
            args = [_random_formula(rng, vars_, rng.randint(0, max(0, (max_arrows - 3) // 3)))
                    for _ in range(3)]
            f = rng.choice(_TEMPLATES)(*args)
        if f.arrows > max_arrows or f in seen:
            continue
        seen.add(f)
        try:
            if minimal_valid(f, budget=oracle_budget):
                out.append(f)
        except Exception:
            continue
    if len(out) < count:
        raise RuntimeError(f"only found {len(out)} of {count} tautologies")
    return out


def random_deduction_tree(rng: random.Random, max_depth: int = 5,
                          variables: Iterable[str] = ("p", "q"),
                          max_arrows: int = 2) -> nd.NDTree:
    """A random well-formed deduction tree, open assumptions allowed."""
    vars_ = [var(v) for v in variables]

    def formula() -> Formula:
        return _random_formula(rng, vars_, rng.randint(0, max_arrows))

    def grow(f: Formula, depth: int) -> nd.NDTree:
        if depth <= 0 or rng.random() < 0.25:
            return nd.assumption(f)
        kind = rng.random()
        if kind < 0.25:
            return nd.rep(f, grow(f, depth - 1))
        if kind < 0.55 and not f.is_var:
            return nd.intro(f, grow(f.right, depth - 1), label=rng.randrange(1 << 30))
        minor = formula()
        return nd.elim(f, grow(minor, depth - 1),
                       grow(imp(minor, f), depth - 1))

    return grow(formula(), rng.randint(1, max_depth))


def random_padded_trees(seed: int, count: int, max_depth: int = 5,
                        variables: Iterable[str] = ("p", "q"),
                        max_arrows: int = 2) -> list[nd.NDTree]:
    rng = random.Random(seed)
    return [nd.pad_uniform(random_deduction_tree(rng, max_depth, variables, max_arrows))
            for _ in range(count)]
