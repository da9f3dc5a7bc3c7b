"""Tree transitions, coinductive invariants, and the program-level check.

A transition takes a complete guarded rewriting tree, unifies one open leaf
with a clause head, applies the unifier to every and-node, and extends the
result; the target is re-checked for guardedness from scratch.  Chaining
transitions gives derivations; branching over all of them gives the
derivation tree, whose nodes are rewriting trees.

Each transition is abstracted by its *clause projection*: the non-variable
subterms of the resolved clause's head that match some structure the unifier
added back at the leaf (a variable reducing subterm of the instantiated leaf
over the original).  The projection elements whose pattern also guards a
loop consumed on the branch to that leaf form the transition's *coinductive
invariant* — the produced pattern is exactly the consumed one.

The observation subtree of the derivation tree for a clause head is explored
breadth-first and each branch is truncated when

  (a) a transition target fails GC2 — the clause is unguarded, or
  (b) a transition repeats an earlier one on the branch: same clause with
      the same invariant.  A repeated non-empty invariant is a guarded
      transition and is collected as a liveness witness; a repeated empty
      one is cut silently, which keeps branches finite on clauses whose
      facts can be resolved against forever without developing loops, or
  (c) no leaf unifies with any clause.

A program passes the check when every clause's observation subtree is
guarded; it is existentially live when, in addition, some branch was
truncated by a repeated non-empty invariant.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .contraction import contraction_witnesses
from .rewriting import (
    DEFAULT_FUSE,
    AndNode,
    FuseExceeded,
    Gc2Result,
    Guarded,
    Loop,
    RewritingTree,
    SeedNode,
    Unguarded,
    build_and_check,
    canonical_key,
    seed_from,
)
from .syntax import Atom, Program, Term, Var, atom_vars, proper_subterms_with_positions
from .unify import (
    FreshNames,
    Substitution,
    apply_atom,
    apply_term,
    compose,
    match_term,
    mgu,
    rename_apart,
)


class FuseExceededError(RuntimeError):
    """Defensive bound tripped; indicates a bug, never a program property."""

    def __init__(self, and_node_count: int, clause_index: int | None = None):
        where = "" if clause_index is None else f" while checking clause {clause_index}"
        super().__init__(f"fuse exceeded at {and_node_count} and-nodes{where}")
        self.and_node_count = and_node_count
        self.clause_index = clause_index


class UnguardedEncountered(RuntimeError):
    """A derivation step produced an unguarded rewriting tree."""

    def __init__(self, result: Unguarded):
        super().__init__(
            f"unguarded loop at {result.witness.upper.atom} via path "
            + ", ".join(f"({p}:{j})" for p, j in result.path)
        )
        self.result = result


@dataclass(frozen=True)
class InvariantTriple:
    """A clause-head subterm produced by a transition: (clause, term, position).

    The term is determined by the clause and position, so equality and
    hashing ignore it.
    """

    clause_index: int
    head_subterm: Term = field(compare=False)
    position: tuple[int, ...]


@dataclass(eq=False)
class Transition:
    source: RewritingTree
    leaf: AndNode
    clause_index: int
    unifier: Substitution
    target: Gc2Result


def _candidate_steps(program: Program, tree: RewritingTree, fresh: FreshNames):
    """(leaf, clause index, unifier) triples: leaves breadth-first, clauses ascending.

    Clause heads are renamed apart lazily, one copy per clause per call: the
    copies only ever feed substitutions applied on disjoint branches.
    """
    renamed_heads: dict[int, Atom] = {}
    for leaf in tree.open_leaves():
        for clause in program.clauses:
            head = renamed_heads.get(clause.index)
            if head is None:
                head = rename_apart(clause, fresh).head
                renamed_heads[clause.index] = head
            sigma = mgu(leaf.atom, head)
            if sigma is not None:
                yield leaf, clause.index, sigma


def _transition_target(
    program: Program,
    tree: RewritingTree,
    sigma: Substitution,
    fuse: int,
    fresh: FreshNames,
) -> Gc2Result:
    seed = seed_from(tree, sigma)
    return build_and_check(program, seed.atom, fuse=fuse, fresh=fresh, seed=seed)


def transitions(
    program: Program,
    tree: RewritingTree,
    fuse: int = DEFAULT_FUSE,
    fresh: FreshNames | None = None,
) -> list[Transition]:
    """Every tree transition out of a complete guarded tree.

    One transition per (open leaf, clause) pair whose mgu exists; targets are
    rebuilt and re-checked, so a transition may carry an Unguarded result.
    """
    fresh = fresh if fresh is not None else FreshNames()
    out = []
    for leaf, clause_index, sigma in _candidate_steps(program, tree, fresh):
        target = _transition_target(program, tree, sigma, fuse, fresh)
        out.append(Transition(tree, leaf, clause_index, sigma, target))
    return out


def _projection(
    program: Program, clause_index: int, sigma: Substitution, leaf_atom: Atom
) -> frozenset[InvariantTriple]:
    instantiated = apply_atom(sigma, leaf_atom)
    reducers = [
        w.reducing_subterm
        for w in contraction_witnesses(instantiated, leaf_atom)
        if w.leaf_is_var
    ]
    if not reducers:
        return frozenset()
    head = program.clauses[clause_index].head
    found = set()
    for pos, sub in proper_subterms_with_positions(head):
        if isinstance(sub, Var):
            continue
        if any(match_term(sub, t) is not None for t in reducers):
            found.add(InvariantTriple(clause_index, sub, pos))
    return frozenset(found)


def _invariant(
    program: Program,
    clause_index: int,
    sigma: Substitution,
    leaf: AndNode,
    source: RewritingTree,
) -> frozenset[InvariantTriple]:
    projection = _projection(program, clause_index, sigma, leaf.atom)
    if not projection:
        return projection
    branch = source.branch_ids(leaf)
    guards = [
        lp.guard.reducing_subterm
        for lp in source.loops
        if lp.clause_index == clause_index
        and lp.guard is not None
        and lp.lower.node_id in branch
    ]
    if not guards:
        return frozenset()
    return frozenset(
        t
        for t in projection
        if any(match_term(t.head_subterm, g) is not None for g in guards)
    )


def clause_projection(program: Program, tr: Transition) -> frozenset[InvariantTriple]:
    """Head subterms of the resolved clause matched by what the mgu produced."""
    return _projection(program, tr.clause_index, tr.unifier, tr.leaf.atom)


def coinductive_invariant(program: Program, tr: Transition) -> frozenset[InvariantTriple]:
    """The projection elements whose pattern also guards a consumed loop.

    A projection element survives when the branch of the source tree leading
    to the resolved leaf has a loop under the same clause whose recursive
    reducing subterm is an instance of the element's head subterm.
    """
    return _invariant(program, tr.clause_index, tr.unifier, tr.leaf, tr.source)


@dataclass(eq=False)
class UnguardedWitness:
    goal: Atom  # atom of the upper loop node
    loop: Loop
    path: tuple[tuple[str, int], ...]


@dataclass(eq=False)
class ObservationResult:
    clause_index: int
    guarded: bool
    witness: UnguardedWitness | None
    live_invariants: frozenset[InvariantTriple]
    trees_explored: int


def _witness_of(result: Unguarded) -> UnguardedWitness:
    return UnguardedWitness(result.witness.upper.atom, result.witness, result.path)


def observation_subtree(
    program: Program, clause_index: int, fuse: int = DEFAULT_FUSE
) -> ObservationResult:
    """Explore the observation subtree for one clause head.

    Derivation-tree nodes are expanded breadth-first; within a node,
    candidate transitions go leaves-first then clauses ascending.  A
    transition whose (clause, invariant) pair already occurred on its branch
    is truncated before its target is built, so ``trees_explored`` counts
    exactly the rewriting trees of the observation subtree.
    """
    fresh = FreshNames()
    goal = rename_apart(program.clauses[clause_index], fresh).head
    root = build_and_check(program, goal, fuse=fuse, fresh=fresh)
    if isinstance(root, FuseExceeded):
        raise FuseExceededError(root.and_node_count, clause_index)
    explored = 1
    if isinstance(root, Unguarded):
        return ObservationResult(clause_index, False, _witness_of(root), frozenset(), explored)

    live: set[InvariantTriple] = set()
    seen_root: frozenset[tuple[int, frozenset[InvariantTriple]]] = frozenset()
    # Resolving independent leaves in either order yields alpha-equivalent
    # trees with the same branch history, and such states have isomorphic
    # futures; exploring one representative per state keeps the walk from
    # enumerating every interleaving.
    visited: set[tuple[str, frozenset]] = {(canonical_key(root.tree), seen_root)}
    queue: deque[tuple[RewritingTree, frozenset]] = deque([(root.tree, seen_root)])
    while queue:
        tree, seen = queue.popleft()
        for leaf, cidx, sigma in _candidate_steps(program, tree, fresh):
            invariant = _invariant(program, cidx, sigma, leaf, tree)
            key = (cidx, invariant)
            if key in seen:
                if invariant:
                    live.update(invariant)  # guarded transition: liveness witness
                continue
            target = _transition_target(program, tree, sigma, fuse, fresh)
            if isinstance(target, FuseExceeded):
                raise FuseExceededError(target.and_node_count, clause_index)
            if isinstance(target, Unguarded):
                return ObservationResult(
                    clause_index, False, _witness_of(target), frozenset(), explored + 1
                )
            history = seen | {key}
            state = (canonical_key(target.tree), history)
            if state in visited:
                continue
            visited.add(state)
            explored += 1
            queue.append((target.tree, history))
    return ObservationResult(clause_index, True, None, frozenset(live), explored)


@dataclass(eq=False)
class ProductivityReport:
    program: Program
    per_clause: tuple[ObservationResult, ...]
    program_guarded: bool
    program_live: bool
    invariant_list: frozenset[InvariantTriple]

    def first_witness(self) -> UnguardedWitness | None:
        for result in self.per_clause:
            if not result.guarded:
                return result.witness
        return None


def gc3(program: Program, fuse: int = DEFAULT_FUSE) -> ProductivityReport:
    """Check every clause and combine verdicts into a productivity report."""
    per_clause = tuple(
        observation_subtree(program, c.index, fuse=fuse) for c in program.clauses
    )
    guarded = all(r.guarded for r in per_clause)
    invariants: frozenset[InvariantTriple] = frozenset().union(
        *(r.live_invariants for r in per_clause)
    ) if per_clause else frozenset()
    live = guarded and bool(invariants)
    return ProductivityReport(program, per_clause, guarded, live, invariants)


@dataclass(eq=False)
class DerivationStep:
    clause_index: int
    unifier: Substitution
    answer_prefix: Substitution  # accumulated, restricted to the goal variables


@dataclass(eq=False)
class DerivationTrace:
    goal: Atom
    steps: tuple[DerivationStep, ...]

    @property
    def answer_prefix(self) -> Substitution:
        return self.steps[-1].answer_prefix if self.steps else {}


def s_derive(
    program: Program, goal: Atom, max_steps: int, fuse: int = DEFAULT_FUSE
) -> DerivationTrace:
    """Run a bounded derivation: always take the first available transition.

    "First" means the leftmost open leaf (breadth-first order) and the lowest
    clause index whose head unifies with it.  Stops after ``max_steps`` steps
    or when no transition exists; raises UnguardedEncountered if any tree on
    the way fails GC2.
    """
    fresh = FreshNames()
    result = build_and_check(program, goal, fuse=fuse, fresh=fresh)
    if isinstance(result, FuseExceeded):
        raise FuseExceededError(result.and_node_count)
    if isinstance(result, Unguarded):
        raise UnguardedEncountered(result)
    tree = result.tree
    goal_variables = atom_vars(goal)
    accumulated: Substitution = {}
    steps: list[DerivationStep] = []
    for _ in range(max_steps):
        step = next(_candidate_steps(program, tree, fresh), None)
        if step is None:
            break
        leaf, clause_index, sigma = step
        target = _transition_target(program, tree, sigma, fuse, fresh)
        if isinstance(target, FuseExceeded):
            raise FuseExceededError(target.and_node_count)
        if isinstance(target, Unguarded):
            raise UnguardedEncountered(target)
        accumulated = compose(sigma, accumulated)
        prefix = {
            v: image
            for v in goal_variables
            if (image := apply_term(accumulated, Var(v))) != Var(v)
        }
        steps.append(DerivationStep(clause_index, sigma, prefix))
        tree = target.tree
    return DerivationTrace(goal, tuple(steps))
