"""Implicational formulas: parsing, printing and size measures.

Formulas are built from propositional variables with a single binary
connective ``->``.  Instances are interned, so two structurally equal
formulas are the *same* object; this keeps multiset bookkeeping and
memoisation cheap throughout the package.
"""

from __future__ import annotations

from typing import Iterable


class ParseError(ValueError):
    """Malformed formula text; ``position`` is a 0-based character index."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Formula:
    """An implicational formula (a variable, or ``antecedent -> consequent``).

    Do not instantiate directly; use :func:`var` and :func:`imp`, which
    intern instances.  Equality and hashing are by identity, which after
    interning coincides with structural equality.
    """

    __slots__ = ("name", "left", "right", "arrows", "text")

    def __init__(self, name, left, right, arrows, text):
        self.name = name
        self.left = left
        self.right = right
        self.arrows = arrows
        self.text = text

    @property
    def is_var(self) -> bool:
        return self.left is None

    def __repr__(self) -> str:
        return f"Formula({self.text!r})"

    def __str__(self) -> str:
        return self.text


_VARS: dict[str, Formula] = {}
_IMPS: dict[tuple[int, int], Formula] = {}


def var(name: str) -> Formula:
    """The propositional variable ``name`` (alphanumeric identifier)."""
    f = _VARS.get(name)
    if f is None:
        if not name or not all(c.isalnum() or c == "_" for c in name):
            raise ValueError(f"invalid variable name: {name!r}")
        f = Formula(name, None, None, 0, name)
        _VARS[name] = f
    return f


def imp(left: Formula, right: Formula) -> Formula:
    """The implication ``left -> right``."""
    key = (id(left), id(right))
    f = _IMPS.get(key)
    if f is None:
        ltext = f"({left.text})" if not left.is_var else left.text
        f = Formula(None, left, right, 1 + left.arrows + right.arrows,
                    f"{ltext}->{right.text}")
        _IMPS[key] = f
    return f


def imp_chain(*parts: Formula) -> Formula:
    """Right-associated implication ``p1 -> p2 -> ... -> pn``."""
    if not parts:
        raise ValueError("imp_chain needs at least one formula")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = imp(p, out)
    return out


def parse_formula(text: str) -> Formula:
    """Parse ``->``-formula text.  ``->`` associates to the right.

    Variables are alphanumeric identifiers; parentheses group.  Raises
    :class:`ParseError` with the position of the offending character.
    """
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def parse_expr() -> Formula:
        nonlocal pos
        left = parse_atom()
        skip_ws()
        if pos < n and text.startswith("->", pos):
            pos += 2
            return imp(left, parse_expr())
        return left

    def parse_atom() -> Formula:
        nonlocal pos
        skip_ws()
        if pos >= n:
            raise ParseError("unexpected end of input", pos)
        c = text[pos]
        if c == "(":
            pos += 1
            inner = parse_expr()
            skip_ws()
            if pos >= n or text[pos] != ")":
                raise ParseError("expected ')'", pos)
            pos += 1
            return inner
        if c.isalnum() or c == "_":
            start = pos
            while pos < n and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
            return var(text[start:pos])
        raise ParseError(f"unexpected character {c!r}", pos)

    if not text.strip():
        raise ParseError("empty input", 0)
    out = parse_expr()
    skip_ws()
    if pos != n:
        raise ParseError(f"trailing input {text[pos]!r}", pos)
    return out


def render(f: Formula) -> str:
    """Text form of ``f``; ``parse_formula(render(f)) is f``."""
    return f.text


def imp_count(f: Formula) -> int:
    """Number of ``->`` occurrences in ``f``."""
    return f.arrows


def var_set(fs: Iterable[Formula] | Formula) -> frozenset[str]:
    """Union of variable names occurring in the given formula(s)."""
    if isinstance(fs, Formula):
        fs = (fs,)
    out: set[str] = set()
    stack = list(fs)
    while stack:
        f = stack.pop()
        if f.is_var:
            out.add(f.name)
        else:
            stack.append(f.left)
            stack.append(f.right)
    return frozenset(out)


_SUBF: dict[Formula, frozenset[Formula]] = {}
_SEMI: dict[Formula, frozenset[Formula]] = {}
_SSF: dict[Formula, int] = {}


def subformulas(f: Formula) -> frozenset[Formula]:
    """All subformulas of ``f`` (including ``f``), as a set."""
    out = _SUBF.get(f)
    if out is None:
        if f.is_var:
            out = frozenset((f,))
        else:
            out = subformulas(f.left) | subformulas(f.right) | {f}
        _SUBF[f] = out
    return out


def semi_subformulas(f: Formula) -> frozenset[Formula]:
    """Semi-subformulas of ``f``, as a set of distinct formulas.

    The least set containing ``f`` that is closed under taking proper
    subformulas and that, for each member ``(a->b)->c``, also contains
    ``b->c``.
    """
    out = _SEMI.get(f)
    if out is None:
        if f.is_var:
            out = frozenset((f,))
        elif f.left.is_var:
            out = semi_subformulas(f.right) | {f, f.left}
        else:
            # (a->b)->c: close under a->b and the extra member b->c.
            out = (semi_subformulas(f.left)
                   | semi_subformulas(imp(f.left.right, f.right))
                   | {f})
        _SEMI[f] = out
    return out


def ssf_count(f: Formula) -> int:
    """Semi-subformula occurrence count of ``f``.

    Defined by the recursion ``ssf(p) = 1``, ``ssf(p->a) = 2 + ssf(a)``,
    ``ssf((a->b)->c) = 1 + ssf(a->b) + ssf(b->c) - ssf(b)``.  This counts
    occurrences, not distinct formulas: repeated subformulas are counted
    once per occurrence (``ssf(p->p) = 3``).
    """
    out = _SSF.get(f)
    if out is None:
        if f.is_var:
            out = 1
        elif f.left.is_var:
            out = 2 + ssf_count(f.right)
        else:
            out = (1 + ssf_count(f.left)
                   + ssf_count(imp(f.left.right, f.right))
                   - ssf_count(f.left.right))
        _SSF[f] = out
    return out
