"""Shared test helpers: corpus access, random generators, and oracles."""

from __future__ import annotations

import random
from pathlib import Path

from guardcheck import (
    Atom,
    Compound,
    Program,
    Term,
    Var,
    parse_program,
)
from guardcheck.unify import Substitution, apply_term, match_term

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

CORPUS_FILES = sorted(p.name for p in CORPUS.glob("*.logic"))

GUARDED_LIVE = ["p1.logic", "p1_reversed.logic", "p2.logic", "p5.logic", "p6.logic"]
UNGUARDED = ["p3.logic", "p4.logic", "p7.logic", "head_constant.logic", "sieve_original.logic"]
GUARDED_FINITE = ["p8.logic"]
GUARDED_ALL = GUARDED_LIVE + GUARDED_FINITE + ["sieve_reformulated.logic"]


def load(name: str) -> Program:
    return parse_program((CORPUS / name).read_text())


def signature_of(program: Program) -> tuple[dict[str, int], dict[str, int]]:
    """(functor arities, predicate arities) used anywhere in the program."""
    functors: dict[str, int] = {}
    predicates: dict[str, int] = {}

    def walk(t: Term) -> None:
        if isinstance(t, Compound):
            functors[t.functor] = len(t.args)
            for a in t.args:
                walk(a)

    for clause in program.clauses:
        for atom in (clause.head, *clause.body):
            predicates[atom.predicate] = len(atom.args)
            for a in atom.args:
                walk(a)
    return functors, predicates


def random_term(
    rng: random.Random,
    functors: dict[str, int],
    variables: list[str],
    depth: int,
) -> Term:
    constants = [f for f, n in functors.items() if n == 0]
    leaves = variables + constants
    if depth <= 0 or not functors or rng.random() < 0.3:
        name = rng.choice(leaves)
        return Var(name) if name in variables else Compound(name)
    name, arity = rng.choice(sorted(functors.items()))
    if arity == 0:
        return Compound(name)
    return Compound(
        name, tuple(random_term(rng, functors, variables, depth - 1) for _ in range(arity))
    )


def random_goal(rng: random.Random, program: Program, depth: int = 3) -> Atom:
    functors, predicates = signature_of(program)
    variables = ["A", "B", "C"]
    pred, arity = rng.choice(sorted(predicates.items()))
    return Atom(
        pred, tuple(random_term(rng, functors, variables, depth - 1) for _ in range(arity))
    )


# --- oracle: ground-instance enumeration for unifier most-generality --------

TEST_SIGNATURE = {"f": 2, "g": 1, "a": 0}


def random_test_atom(rng: random.Random, depth: int = 3) -> Atom:
    variables = ["X", "Y", "Z"]
    return Atom(
        "p",
        tuple(random_term(rng, TEST_SIGNATURE, variables, depth - 1) for _ in range(2)),
    )


def ground_unifiers(a: Atom, b: Atom) -> list[Substitution]:
    """Every unifying assignment of the atoms' variables over two constants."""
    from guardcheck import atom_vars
    from guardcheck.unify import apply_atom

    names = sorted(set(atom_vars(a)) | set(atom_vars(b)))
    universe = [Compound("c1"), Compound("c2")]
    found = []
    for i in range(2 ** len(names)):
        assignment = {
            v: universe[(i >> k) & 1] for k, v in enumerate(names)
        }
        if apply_atom(assignment, a) == apply_atom(assignment, b):
            found.append(assignment)
    return found


def factors_through(unifier: Substitution, general: Substitution, names: list[str]) -> bool:
    """True when unifier = r composed with general, for some r."""
    pattern = Compound("t", tuple(apply_term(general, Var(v)) for v in names))
    target = Compound("t", tuple(apply_term(unifier, Var(v)) for v in names))
    return match_term(pattern, target) is not None


# --- oracle: brute-force position scan for contractions ---------------------


def contraction_positions_oracle(t1: Atom, t2: Atom) -> list[tuple[int, ...]]:
    """Positions where t2 has a leaf, t1 a proper tree, branches agreeing above."""
    from guardcheck import positions_of, subterm_at
    from guardcheck.syntax import is_leaf, symbol_of

    if t1.predicate != t2.predicate or len(t1.args) != len(t2.args):
        return []
    out = []
    for pos in positions_of(t2):
        if not pos:
            continue
        leaf = subterm_at(t2, pos)
        if not is_leaf(leaf):
            continue
        try:
            counterpart = subterm_at(t1, pos)
        except IndexError:
            continue
        if is_leaf(counterpart):
            continue
        prefixes_agree = True
        for k in range(1, len(pos)):
            p = pos[:k]
            try:
                s1 = subterm_at(t1, p)
            except IndexError:
                prefixes_agree = False
                break
            if symbol_of(s1) != symbol_of(subterm_at(t2, p)):
                prefixes_agree = False
                break
        if prefixes_agree:
            out.append(pos)
    return out
