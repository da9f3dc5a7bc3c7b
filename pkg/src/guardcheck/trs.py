"""Translation of existential-variable-free programs into rewrite rules.

A clause ``A :- B1, ..., Bn`` becomes the rewrite rule ``A -> f<i>(B1, ...,
Bn)`` with ``f<i>`` a fresh functor per clause index; a fact becomes ``A ->
true_<i>``.  The translation only exists when every body variable occurs in
the head, so right-hand sides never invent variables.  Dependency pairs are
the (head, body atom) pairs of each clause; their count equals the total
body-atom count of the program.  Clause and body indices in the emitted text
are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import Atom, Compound, Program, Term, atom_vars


class ExistentialVariableError(ValueError):
    """A body variable does not occur in its clause's head."""

    def __init__(self, clause_index: int, variable: str):
        super().__init__(
            f"existential variable {variable} in clause {clause_index}"
        )
        self.clause_index = clause_index
        self.variable = variable


@dataclass(frozen=True)
class RewriteRule:
    clause_index: int
    lhs: Atom
    rhs: Term

    def __str__(self) -> str:
        return f"{self.lhs} -> {self.rhs}."


@dataclass(frozen=True)
class DependencyPair:
    clause_index: int
    body_index: int
    lhs: Atom
    rhs: Atom

    def __str__(self) -> str:
        return f"({self.lhs}, {self.rhs})"


def _atom_as_term(a: Atom) -> Term:
    return Compound(a.predicate, a.args)


def _check_no_existentials(program: Program) -> None:
    for clause in program.clauses:
        head_vars = set(atom_vars(clause.head))
        for body_atom in clause.body:
            for v in atom_vars(body_atom):
                if v not in head_vars:
                    raise ExistentialVariableError(clause.index, v)


def translate(program: Program) -> list[RewriteRule]:
    """One rewrite rule per clause; raises on the first existential variable."""
    _check_no_existentials(program)
    rules = []
    for clause in program.clauses:
        if clause.body:
            rhs: Term = Compound(
                f"f{clause.index}", tuple(_atom_as_term(b) for b in clause.body)
            )
        else:
            rhs = Compound(f"true_{clause.index}")
        rules.append(RewriteRule(clause.index, clause.head, rhs))
    return rules


def dependency_pairs(program: Program) -> list[DependencyPair]:
    """One pair per body atom, in clause then body order."""
    _check_no_existentials(program)
    return [
        DependencyPair(clause.index, j, clause.head, body_atom)
        for clause in program.clauses
        for j, body_atom in enumerate(clause.body)
    ]


def render(program: Program) -> str:
    """Rules then pairs as plain text, one per line, with %-comment headers."""
    rules = translate(program)
    pairs = dependency_pairs(program)
    lines = ["% rewrite rules"]
    lines.extend(str(r) for r in rules)
    lines.append("% dependency pairs")
    lines.extend(f"{p}  % clause {p.clause_index}, body {p.body_index}" for p in pairs)
    return "\n".join(lines)
