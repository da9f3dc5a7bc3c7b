"""Substitutions, unification, matching, and renaming clauses apart.

A substitution is a plain ``dict`` from variable names to terms, applied
simultaneously in a single pass.  ``mgu`` and ``mgm`` return substitutions in
solved form (no bound variable occurs in a right-hand side, no identity
bindings); ``mgu`` performs first-order unification with the occurs check
switched on, and a cycle is reported as "no unifier".
"""

from __future__ import annotations

from collections import deque
from typing import TypeVar, overload

from .syntax import Atom, Clause, Compound, Term, Var, clause_vars

Substitution = dict[str, Term]


def apply_term(s: Substitution, t: Term) -> Term:
    if isinstance(t, Var):
        return s.get(t.name, t)
    if not t.args:
        return t
    return Compound(t.functor, tuple(apply_term(s, a) for a in t.args))


def apply_atom(s: Substitution, a: Atom) -> Atom:
    if not a.args:
        return a
    return Atom(a.predicate, tuple(apply_term(s, t) for t in a.args))


def apply_clause(s: Substitution, c: Clause) -> Clause:
    return Clause(c.index, apply_atom(s, c.head), tuple(apply_atom(s, b) for b in c.body))


_T = TypeVar("_T", Term, Atom, Clause)


def apply(s: Substitution, x: _T) -> _T:
    """Simultaneous replacement of variables in a term, atom, or clause."""
    if isinstance(x, (Var, Compound)):
        return apply_term(s, x)
    if isinstance(x, Atom):
        return apply_atom(s, x)
    return apply_clause(s, x)


def compose(outer: Substitution, inner: Substitution) -> Substitution:
    """The substitution with apply(compose(o, i), t) == apply(o, apply(i, t))."""
    out: Substitution = {}
    for v, t in inner.items():
        image = apply_term(outer, t)
        if image != Var(v):
            out[v] = image
    for v, t in outer.items():
        if v not in inner and t != Var(v):
            out[v] = t
    return out


def occurs_in(name: str, t: Term) -> bool:
    if isinstance(t, Var):
        return t.name == name
    return any(occurs_in(name, a) for a in t.args)


def unify_terms(pairs: list[tuple[Term, Term]]) -> Substitution | None:
    """Most general unifier of simultaneous term equations, or None."""
    subst: Substitution = {}
    work = deque(pairs)
    while work:
        left, right = work.popleft()
        left = apply_term(subst, left)
        right = apply_term(subst, right)
        if left == right:
            continue
        if isinstance(left, Compound) and isinstance(right, Compound):
            if left.functor != right.functor or len(left.args) != len(right.args):
                return None
            work.extendleft(reversed(list(zip(left.args, right.args))))
            continue
        if isinstance(right, Var) and not isinstance(left, Var):
            left, right = right, left
        assert isinstance(left, Var)
        if occurs_in(left.name, right):
            return None
        binding = {left.name: right}
        subst = {v: apply_term(binding, t) for v, t in subst.items()}
        subst[left.name] = right
    return subst


def mgu(a: Atom, b: Atom) -> Substitution | None:
    """Most general unifier of two atoms, or None (occurs check on)."""
    if a.predicate != b.predicate or len(a.args) != len(b.args):
        return None
    return unify_terms(list(zip(a.args, b.args)))


def _match_into(bind: Substitution, pairs: list[tuple[Term, Term]]) -> bool:
    """Extend ``bind`` so every pattern (left) maps onto its target (right).

    Identity bindings are kept while matching so repeated pattern variables
    are pinned consistently; callers drop them before returning.
    """
    work = deque(pairs)
    while work:
        p, t = work.popleft()
        if isinstance(p, Var):
            known = bind.get(p.name)
            if known is None:
                bind[p.name] = t
            elif known != t:
                return False
            continue
        if isinstance(t, Var) or p.functor != t.functor or len(p.args) != len(t.args):
            return False
        work.extendleft(reversed(list(zip(p.args, t.args))))
    return True


def match_term(pattern: Term, target: Term) -> Substitution | None:
    """One-sided matcher: returns s with apply(s, pattern) == target, or None.

    Only pattern variables are ever bound; target variables are left alone.
    """
    bind: Substitution = {}
    if not _match_into(bind, [(pattern, target)]):
        return None
    return {v: t for v, t in bind.items() if t != Var(v)}


def mgm(pattern: Atom, target: Atom) -> Substitution | None:
    """Most general matcher of a pattern atom against a target atom."""
    if pattern.predicate != target.predicate or len(pattern.args) != len(target.args):
        return None
    bind: Substitution = {}
    if not _match_into(bind, list(zip(pattern.args, target.args))):
        return None
    return {v: t for v, t in bind.items() if t != Var(v)}


class FreshNames:
    """Monotone counter handing out variable names v0, v1, v2, ...

    The counter is explicit state: each construction owns one, so runs are
    reproducible and concurrent checks never share it.
    """

    def __init__(self, start: int = 0):
        self.counter = start

    def next(self) -> str:
        name = f"v{self.counter}"
        self.counter += 1
        return name


def rename_apart(c: Clause, fresh: FreshNames) -> Clause:
    """Replace every clause variable by a globally fresh name."""
    renaming: Substitution = {v: Var(fresh.next()) for v in clause_vars(c)}
    return apply_clause(renaming, c)
