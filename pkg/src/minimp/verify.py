"""Encoded dag deductions and their polynomial-time certificate check.

A dag deduction becomes *encoded* by adding per-edge discharge bits: for an
edge ``(u, v)`` and a formula ``a``, the bit is 1 exactly when every thread
descending through that edge crosses an introduction of ``a``.  The bits
satisfy a local recursion (down the single-parent chain, then across the
road signs at the junction below), so they can be recomputed and checked
locally; closedness of the whole deduction then reads off the top edges.

``encode`` lowers an encoded deduction to flat relation tables; ``verify``
checks an arbitrary such table set against twenty-five local conditions
and accepts exactly the well-formed encoded proofs of the given formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .formula import Formula, imp, parse_formula
from .dag import DagDeduction, Edge, StructureError, make_dag, open_assumptions

Bits = dict[Edge, frozenset[Formula]]


def _chain_intros(d: DagDeduction, e: Edge) -> frozenset[Formula]:
    """Formulas introduced on the forced descent through ``e``.

    The steps are the edge itself followed by the single-parent chain below
    its tail, down to the first junction or the root.
    """
    u, v = e
    out = set()
    a = d.intro_formula(u, v)
    if a is not None:
        out.add(a)
    chain, _end = d.chain_down(u)
    for i in range(len(chain) - 1):
        a = d.intro_formula(chain[i + 1], chain[i])
        if a is not None:
            out.add(a)
    return frozenset(out)


def discharge_bits(d: DagDeduction) -> Bits:
    """The 1-bits of every edge, as sets of formulas.

    ``bits[e]`` contains ``a`` iff ``a`` is introduced on the forced descent
    through ``e``, or the junction below lies off-root and every road-sign
    continuation already carries the bit.  Computed by recursion on the
    level of the edge's tail.
    """
    bits: Bits = {}
    edges = sorted(d.edges(), key=lambda e: d.level[e[0]])
    for (u, v) in edges:
        ones = set(_chain_intros(d, (u, v)))
        end = d.junction_below(u)
        if end != d.root:
            sign = d.signs.get((u, v), frozenset())
            if sign:
                common = None
                for w in sign:
                    ws = bits[(w, end)]
                    common = ws if common is None else common & ws
                ones |= common
        bits[(u, v)] = frozenset(ones)
    return bits


def open_assumptions_encoded(d: DagDeduction,
                             bits: Optional[Bits] = None) -> frozenset[Formula]:
    """A leaf formula is open iff some top edge into such a leaf lacks its bit."""
    if bits is None:
        bits = discharge_bits(d)
    out = set()
    for (u, v) in d.top_edges():
        a = d.label[v]
        if a not in bits[(u, v)]:
            out.add(a)
    return frozenset(out)


def semantics_agree(d: DagDeduction, cap: int = 1_000_000) -> bool:
    """Thread-based and bit-based open assumptions coincide (cross-check)."""
    return open_assumptions(d, cap) == open_assumptions_encoded(d)


@dataclass(frozen=True)
class RelationalEncoding:
    """Flat relation tables for an encoded dag deduction.

    Vertices are ``0 .. n-1`` with 0 the root; formulas are indices into
    ``formulas``.  ``s_one``/``s_two`` split the premise grouping into
    singleton and pair entries; ``chain`` holds the reflexive descent
    relation through single-parent vertices.
    """

    n_vertices: int
    formulas: tuple[str, ...]
    heights: frozenset[tuple[int, int]]
    edges: frozenset[Edge]
    one_parent: frozenset[int]
    s_one: frozenset[tuple[int, int]]
    s_two: frozenset[tuple[int, int, int]]
    chain: frozenset[tuple[int, int]]
    labels: frozenset[tuple[int, int]]
    sign_rel: frozenset[tuple[int, int, int]]
    bit_rel: frozenset[tuple[int, int, int]]

    def weight_report(self) -> dict:
        """Table sizes alongside their cubic-in-weight allowances."""
        size = self.n_vertices
        weight = sum(len(t) for t in self.formulas) + size
        n_edges = len(self.edges)
        return {
            "size": size,
            "weight": weight,
            "edges": n_edges,
            "tables": {
                "heights": len(self.heights),
                "one_parent": len(self.one_parent),
                "s": len(self.s_one) + 2 * len(self.s_two),
                "chain": len(self.chain),
                "labels": len(self.labels),
                "signs": len(self.sign_rel),
                "bits": len(self.bit_rel),
            },
            "bounds": {
                "s < 2*size^3": len(self.s_one) + 2 * len(self.s_two) < 2 * size ** 3,
                "signs <= edges*size": len(self.sign_rel) <= n_edges * size,
                "chain <= size^2": len(self.chain) <= size ** 2,
                "string length": self.string_length(),
                "string O(weight^3)": self.string_length() <= 8 * weight ** 3 + 64,
            },
        }

    def string_length(self) -> int:
        """Length of a flat textual spelling of all tables."""
        per_vertex = len(str(self.n_vertices)) + 1
        total = 0
        total += len(self.heights) * 2 * per_vertex
        total += len(self.edges) * 2 * per_vertex
        total += len(self.one_parent) * per_vertex
        total += len(self.s_one) * 2 * per_vertex + len(self.s_two) * 3 * per_vertex
        total += len(self.chain) * 2 * per_vertex
        for (u, fi) in self.labels:
            total += per_vertex + len(self.formulas[fi]) + 1
        total += len(self.sign_rel) * 3 * per_vertex
        for (u, v, fi) in self.bit_rel:
            total += 2 * per_vertex + len(self.formulas[fi]) + 1
        return total


def encode(d: DagDeduction, bits: Optional[Bits] = None) -> RelationalEncoding:
    """Lower a deduction (with its discharge bits) to relation tables."""
    if bits is None:
        bits = discharge_bits(d)
    order = [d.root] + sorted(u for u in d.vertices if u != d.root)
    index = {u: i for i, u in enumerate(order)}
    formulas = tuple(sorted({f.text for f in d.label.values()}))
    fidx = {t: i for i, t in enumerate(formulas)}

    heights = frozenset((index[u], d.level[u]) for u in d.vertices)
    edges = frozenset((index[u], index[v]) for (u, v) in d.edges())
    one_parent = frozenset(index[u] for u in d.vertices if len(d.pars[u]) == 1)
    s_one = set()
    s_two = set()
    for u, gs in d.groups.items():
        for g in gs:
            if isinstance(g, int):
                s_one.add((index[u], index[g]))
            else:
                s_two.add((index[u], index[g[0]], index[g[1]]))
    chain = set()
    for u in d.vertices:
        for x in d.chain_down(u)[0]:
            chain.add((index[u], index[x]))
    labels = frozenset((index[u], fidx[d.label[u].text]) for u in d.vertices)
    sign_rel = frozenset((index[u], index[v], index[w])
                         for (u, v), s in d.signs.items() for w in s)
    bit_rel = set()
    for (u, v), ones in bits.items():
        for a in ones:
            i = fidx.get(a.text)
            if i is not None:
                bit_rel.add((index[u], index[v], i))
    return RelationalEncoding(
        n_vertices=len(order), formulas=formulas, heights=heights,
        edges=edges, one_parent=one_parent, s_one=frozenset(s_one),
        s_two=frozenset(s_two), chain=frozenset(chain), labels=labels,
        sign_rel=sign_rel, bit_rel=frozenset(bit_rel))


def decode(enc: RelationalEncoding) -> tuple[DagDeduction, Bits]:
    """Rebuild a dag deduction and its bit sets from relation tables.

    Performs only shape-level validation; run :func:`verify` for the full
    condition check.
    """
    level = {}
    for (u, i) in enc.heights:
        if u in level:
            raise StructureError(f"vertex {u} has two heights")
        level[u] = i
    if set(level) != set(range(enc.n_vertices)):
        raise StructureError("height table does not cover the vertices")
    fs = [parse_formula(t) for t in enc.formulas]
    label = {}
    for (u, fi) in enc.labels:
        if u in label:
            raise StructureError(f"vertex {u} has two labels")
        label[u] = fs[fi]
    if set(label) != set(level):
        raise StructureError("label table does not cover the vertices")
    groups: dict[int, list] = {}
    for (u, x) in enc.s_one:
        groups.setdefault(u, []).append(x)
    for (u, x, y) in enc.s_two:
        groups.setdefault(u, []).append((x, y))
    signs: dict[Edge, set[int]] = {}
    for (u, v, w) in enc.sign_rel:
        signs.setdefault((u, v), set()).add(w)
    d = make_dag(0, level, enc.edges,
                 {u: tuple(sorted(gs, key=repr)) for u, gs in groups.items()},
                 label, {e: frozenset(s) for e, s in signs.items()})
    bits: Bits = {e: frozenset() for e in d.edges()}
    grouped: dict[Edge, set[Formula]] = {}
    for (u, v, fi) in enc.bit_rel:
        grouped.setdefault((u, v), set()).add(fs[fi])
    for e, s in grouped.items():
        bits[e] = frozenset(s)
    return d, bits


@dataclass(frozen=True)
class ConditionFailure:
    index: int
    description: str
    witnesses: tuple[str, ...]


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    failures: tuple[ConditionFailure, ...]

    def failed_conditions(self) -> tuple[int, ...]:
        return tuple(f.index for f in self.failures)


_DESCRIPTIONS = {
    1: "every vertex has a height",
    2: "height 0 exactly at the root",
    3: "leaves sit at the top height",
    4: "heights are unique per vertex",
    5: "children sit one level above their parents",
    6: "pair entries are pairs of children",
    7: "premise groups cover the children exactly",
    8: "one-parent vertices have a parent",
    9: "the one-parent table matches the parent counts",
    10: "the chain relation is reflexive",
    11: "the chain relation matches single-parent descent",
    12: "the root is labelled with the goal formula",
    13: "every vertex has exactly one formula label",
    14: "singleton premises repeat or introduce the conclusion",
    15: "pair premises form an elimination",
    16: "signs sit on real edges",
    17: "signs point at parents of the junction below",
    18: "edges over an off-root junction carry a nonempty sign",
    19: "conjugate premises carry equal signs",
    20: "signs through interior one-parent vertices are unions from above",
    21: "every parent of a junction is covered by some sign",
    22: "bits sit on real edges",
    23: "root-edge bits are exactly the root introductions",
    24: "bits satisfy the discharge recursion",
    25: "every top edge discharges its leaf formula",
}


def verify(enc: RelationalEncoding, rho: Formula,
           assumptions: Iterable[Formula] = (),
           max_witnesses: int = 4) -> Verdict:
    """Check the twenty-five certificate conditions against ``rho``.

    ``assumptions`` relaxes the final closedness condition: formulas listed
    there may remain open.  Malformed tables fail the relevant conditions
    rather than raising.
    """
    allowed_open = {f.text for f in assumptions}
    fails: dict[int, list[str]] = {}

    def flag(idx: int, witness: str) -> None:
        fails.setdefault(idx, []).append(witness)

    V = range(enc.n_vertices)
    root = 0
    heights: dict[int, Optional[int]] = {u: None for u in V}
    for (u, i) in enc.heights:
        if u not in heights:
            flag(1, f"height entry for unknown vertex {u}")
            continue
        if heights[u] is not None:
            flag(4, f"vertex {u} has heights {heights[u]} and {i}")
        heights[u] = i
    for u in V:
        if heights[u] is None:
            flag(1, f"vertex {u} has no height")
    hmax = max((i for i in heights.values() if i is not None), default=0)

    kids: dict[int, set[int]] = {u: set() for u in V}
    pars: dict[int, set[int]] = {u: set() for u in V}
    for (u, v) in enc.edges:
        if u not in kids or v not in kids:
            flag(5, f"edge ({u},{v}) mentions unknown vertices")
            continue
        kids[u].add(v)
        pars[v].add(u)

    for u in V:
        if (heights[u] == 0) != (u == root):
            flag(2, f"vertex {u} has height {heights[u]}")
    leaves = {u for u in V if not kids[u]}
    for u in leaves:
        if heights[u] != hmax:
            flag(3, f"leaf {u} has height {heights[u]}, top is {hmax}")
    for (u, v) in enc.edges:
        if u in kids and v in kids and heights[u] is not None:
            if heights[v] != heights[u] + 1:
                flag(5, f"edge ({u},{v}) joins heights {heights[u]} and {heights[v]}")

    mentioned: dict[int, set[int]] = {u: set() for u in V}
    for (u, x, y) in enc.s_two:
        if u not in kids or x not in kids[u] or y not in kids[u]:
            flag(6, f"pair ({x},{y}) of {u} is not a pair of children")
        if u in mentioned:
            mentioned[u].update((x, y))
    for (u, x) in enc.s_one:
        if u not in kids or x not in kids[u]:
            flag(7, f"singleton entry {x} of {u} is not a child")
        if u in mentioned:
            mentioned[u].add(x)
    for u in V:
        if mentioned[u] != kids[u]:
            flag(7, f"groups of {u} cover {sorted(mentioned[u])}, "
                    f"children are {sorted(kids[u])}")

    for x in enc.one_parent:
        if x not in pars or not pars[x]:
            flag(8, f"{x} is listed one-parent but has none")
    for x in V:
        if (x in enc.one_parent) != (len(pars[x]) == 1):
            flag(9, f"{x} has {len(pars[x])} parents, table says "
                    f"{'one' if x in enc.one_parent else 'not one'}")

    # Expected chains from the edge structure.
    def chain_of(u: int) -> list[int]:
        out = [u]
        cur = u
        while len(pars.get(cur, ())) == 1:
            cur = next(iter(pars[cur]))
            out.append(cur)
            if len(out) > enc.n_vertices:
                break
        return out

    chains = {u: chain_of(u) for u in V}
    expected_chain = {(u, x) for u in V for x in chains[u]}
    for (u, u2) in ((u, u) for u in V):
        if (u, u2) not in enc.chain:
            flag(10, f"({u},{u}) missing from the chain relation")
    for pair in expected_chain - set(enc.chain):
        flag(11, f"{pair} missing from the chain relation")
    for pair in set(enc.chain) - expected_chain:
        if pair[0] != pair[1]:
            flag(11, f"{pair} wrongly present in the chain relation")

    junction = {u: chains[u][-1] for u in V}

    labels: dict[int, Optional[Formula]] = {u: None for u in V}
    try:
        fs = [parse_formula(t) for t in enc.formulas]
    except Exception as exc:  # malformed table text
        fs = []
        flag(13, f"formula table unreadable: {exc}")
    for (u, fi) in enc.labels:
        if u not in labels or not (0 <= fi < len(fs)):
            flag(13, f"label entry ({u},{fi}) is out of range")
            continue
        if labels[u] is not None:
            flag(13, f"vertex {u} has two labels")
        labels[u] = fs[fi]
    for u in V:
        if labels[u] is None:
            flag(13, f"vertex {u} has no label")
    if labels.get(root) is not rho and not any(i == 13 for i in fails):
        flag(12, f"root is labelled {labels[root]}, expected {rho.text}")

    def is_intro(parent: int, child: int, a: Formula) -> bool:
        fp, fc = labels.get(parent), labels.get(child)
        if fp is None or fc is None or fp.is_var:
            return False
        return (fp.left is a and fp.right is fc and fp is not fc
                and (parent, child) in enc.s_one)

    for (u, x) in enc.s_one:
        fu, fx = labels.get(u), labels.get(x)
        if fu is None or fx is None:
            continue
        if fx is not fu and (fu.is_var or fu.right is not fx):
            flag(14, f"singleton premise {x} of {u}: {fx} under {fu}")
    for (u, x, y) in enc.s_two:
        fu, fx, fy = labels.get(u), labels.get(x), labels.get(y)
        if None in (fu, fx, fy):
            continue
        if fy.is_var or fy.left is not fx or fy.right is not fu:
            flag(15, f"pair ({x},{y}) of {u}: {fx}, {fy} under {fu}")

    signs: dict[Edge, set[int]] = {}
    for (u, v, x) in enc.sign_rel:
        if (u, v) not in enc.edges:
            flag(16, f"sign entry on non-edge ({u},{v})")
            continue
        signs.setdefault((u, v), set()).add(x)
    for (u, v), s in signs.items():
        z = junction.get(u)
        for x in s:
            if z is None or x not in pars.get(z, ()):
                flag(17, f"sign {x} of ({u},{v}) is not a parent of {z}")
    for (u, v) in enc.edges:
        z = junction.get(u)
        if z is not None and z != root and not signs.get((u, v)):
            flag(18, f"edge ({u},{v}) over junction {z} lacks a sign")
    for (u, x, y) in enc.s_two:
        if signs.get((u, x), set()) != signs.get((u, y), set()):
            flag(19, f"pair ({x},{y}) of {u} carries unequal signs")
    for (u, v) in enc.edges:
        if v in enc.one_parent and kids.get(v):
            want = set().union(*(signs.get((v, z), set()) for z in kids[v]))
            if signs.get((u, v), set()) != want:
                flag(20, f"sign of ({u},{v}) is not the union from above {v}")
    for u in V:
        if u not in enc.one_parent and kids.get(u) and pars.get(u):
            covered = set().union(*(signs.get((u, v), set()) for v in kids[u]))
            for x in pars[u] - covered:
                flag(21, f"parent {x} of junction {u} is uncovered")

    bit_sets: dict[Edge, set[Formula]] = {e: set() for e in enc.edges}
    for (u, v, fi) in enc.bit_rel:
        if (u, v) not in bit_sets:
            flag(22, f"bit entry on non-edge ({u},{v})")
            continue
        if 0 <= fi < len(fs):
            bit_sets[(u, v)].add(fs[fi])
        else:
            flag(22, f"bit entry ({u},{v},{fi}) is out of formula range")

    formula_set = set(fs)

    def chain_intro_set(u: int, v: int) -> set[Formula]:
        out = set()
        fu, fv = labels.get(u), labels.get(v)
        if fu is not None and not fu.is_var and fu.right is fv and fu is not fv \
                and (u, v) in enc.s_one:
            out.add(fu.left)
        ch = chains[u]
        for i in range(len(ch) - 1):
            parent, child = ch[i + 1], ch[i]
            fp, fc = labels.get(parent), labels.get(child)
            if fp is not None and not fp.is_var and fp.right is fc \
                    and fp is not fc and (parent, child) in enc.s_one:
                out.add(fp.left)
        return out

    for (u, v) in sorted(enc.edges, key=lambda e: heights.get(e[0]) or 0):
        have = bit_sets[(u, v)]
        if u == root:
            want = {a for a in formula_set if is_intro(root, v, a)}
            if have != want:
                flag(23, f"root edge ({u},{v}) bits {sorted(f.text for f in have)} "
                         f"!= {sorted(f.text for f in want)}")
            continue
        z = junction.get(u)
        want = chain_intro_set(u, v)
        if z is not None and z != root:
            s = signs.get((u, v), set())
            if s:
                common: Optional[set[Formula]] = None
                for w in s:
                    ws = bit_sets.get((w, z), set())
                    common = set(ws) if common is None else common & ws
                want |= common or set()
        want &= formula_set
        if have != want:
            flag(24, f"edge ({u},{v}) bits {sorted(f.text for f in have)} "
                     f"!= {sorted(f.text for f in want)}")

    for (u, v) in enc.edges:
        if heights.get(v) == hmax:
            a = labels.get(v)
            if a is not None and a not in bit_sets[(u, v)] \
                    and a.text not in allowed_open:
                flag(25, f"top edge ({u},{v}) leaves {a.text} open")

    failures = tuple(
        ConditionFailure(i, _DESCRIPTIONS[i], tuple(ws[:max_witnesses]))
        for i, ws in sorted(fails.items()))
    return Verdict(accepted=not failures, failures=failures)
