"""The contraction ordering on atoms seen as term trees.

``t2`` is a contraction of ``t1`` when some leaf of ``t2`` sits at a node
``w`` whose branch (the symbols strictly above ``w``) also exists in ``t1``,
but ``t1`` is still a proper tree at ``w``.  The subterm of ``t1`` at ``w``
is the *reducing subterm*: it is the structure that got consumed to reach
``t2``.  The contraction is *recursive* when the reducing subterm still
contains the leaf's own symbol, and is classified as a variable or constant
contraction by the kind of that leaf.

The ordering is not well-founded: both directions can hold at once, so no
code here may assume antisymmetry.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import Atom, Compound, Position, Term, Var, is_leaf


@dataclass(frozen=True)
class ContractionWitness:
    position: Position
    reducing_subterm: Term
    leaf_symbol: str
    recursive: bool
    leaf_is_var: bool

    @property
    def leaf_kind(self) -> str:
        return "variable" if self.leaf_is_var else "constant"


def _contains_symbol(t: Term, leaf: Term) -> bool:
    # occurrence of the leaf's symbol: the variable itself, or the constant
    if t == leaf:
        return True
    if isinstance(t, Compound):
        return any(_contains_symbol(a, leaf) for a in t.args)
    return False


def _witness(pos: Position, reducing: Term, leaf: Term) -> ContractionWitness:
    return ContractionWitness(
        position=pos,
        reducing_subterm=reducing,
        leaf_symbol=leaf.name if isinstance(leaf, Var) else leaf.functor,
        recursive=_contains_symbol(reducing, leaf),
        leaf_is_var=isinstance(leaf, Var),
    )


def contraction_witnesses(t1: Atom, t2: Atom) -> list[ContractionWitness]:
    """All nodes witnessing that t2 is a contraction of t1.

    Returns every position w where t2 carries a leaf, t1 does not, and the
    two trees agree on the branch strictly above w.  Witnesses come out in
    lexicographic position order; the atoms are in contraction ordering iff
    the result is non-empty.  Atoms with different predicates are unrelated.
    """
    if t1.predicate != t2.predicate or len(t1.args) != len(t2.args):
        return []
    out: list[ContractionWitness] = []

    def walk(s1: Term, s2: Term, pos: Position) -> None:
        if is_leaf(s2):
            if not is_leaf(s1):
                out.append(_witness(pos, s1, s2))
            return
        if is_leaf(s1):
            return
        assert isinstance(s1, Compound) and isinstance(s2, Compound)
        if s1.functor != s2.functor:
            return
        for i in range(min(len(s1.args), len(s2.args))):
            walk(s1.args[i], s2.args[i], pos + (i,))

    for i in range(len(t1.args)):
        walk(t1.args[i], t2.args[i], (i,))
    return out


def has_recursive_contraction(t1: Atom, t2: Atom) -> ContractionWitness | None:
    """The leftmost recursive contraction witness for t1 over t2, if any."""
    for w in contraction_witnesses(t1, t2):
        if w.recursive:
            return w
    return None
