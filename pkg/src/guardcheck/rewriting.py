"""Rewriting trees: construction by term matching, loops, and guardedness.

A rewriting tree alternates and-nodes (atoms) with or-nodes (clauses).  An
and-node gets one or-node child per clause whose head *matches* it (most
general matcher, not unification), and that or-node gets one and-node child
per body atom of the clause, with clause variables renamed apart.  A fact
yields a childless or-node (a closed branch); an and-node with no or-node
children is an open leaf.

Two and-nodes on one branch form a loop when they share a predicate and both
sit under or-nodes of the same clause; the root, having no parent or-node,
never participates.  A loop is guarded when the earlier atom has a recursive
contraction onto the later one.  A tree is guarded (GC2) when every loop is;
construction stops at the first unguarded loop, which is guaranteed to exist
at finite depth on any infinite branch, so the builder always terminates.
The fuse is purely defensive: tripping it indicates a bug, and it is
reported as its own outcome, never folded into guarded/unguarded.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Union

from .contraction import ContractionWitness, has_recursive_contraction
from .syntax import Atom, Compound, Program, Term, Var
from .unify import FreshNames, Substitution, apply_atom, compose, mgm, rename_apart

DEFAULT_FUSE = 100_000


@dataclass(eq=False)
class AndNode:
    node_id: int
    atom: Atom
    parent_or: "OrNode | None"
    or_children: list["OrNode"] = field(default_factory=list)

    @property
    def parent_clause(self) -> int | None:
        return None if self.parent_or is None else self.parent_or.clause_index

    def and_parent(self) -> "AndNode | None":
        return None if self.parent_or is None else self.parent_or.parent


@dataclass(eq=False)
class OrNode:
    clause_index: int
    matcher: Substitution
    renamed_head: Atom
    parent: AndNode
    children: list[AndNode] = field(default_factory=list)


@dataclass(eq=False)
class Loop:
    upper: AndNode
    lower: AndNode
    clause_index: int
    guard: ContractionWitness | None


@dataclass(eq=False)
class RewritingTree:
    program: Program
    root: AndNode
    and_nodes: list[AndNode]  # breadth-first creation order
    loops: list[Loop]

    def open_leaves(self) -> list[AndNode]:
        """And-nodes with no or-node children, in breadth-first order."""
        return [n for n in self.and_nodes if not n.or_children]

    def branch_ids(self, node: AndNode) -> set[int]:
        """Ids of the and-nodes on the branch from the root down to ``node``."""
        ids = set()
        cur: AndNode | None = node
        while cur is not None:
            ids.add(cur.node_id)
            cur = cur.and_parent()
        return ids

    def clause_path(self, node: AndNode) -> tuple[tuple[str, int], ...]:
        """Per-predicate clause labels of the or-nodes from the root to ``node``."""
        indices: list[int] = []
        cur: AndNode | None = node
        while cur is not None and cur.parent_or is not None:
            indices.append(cur.parent_or.clause_index)
            cur = cur.parent_or.parent
        return tuple(self.program.clause_label(i) for i in reversed(indices))


@dataclass(eq=False)
class Guarded:
    tree: RewritingTree


@dataclass(eq=False)
class Unguarded:
    tree: RewritingTree  # partial: construction stopped at the witness
    witness: Loop
    path: tuple[tuple[str, int], ...]  # or-labels from the root to the lower node


@dataclass(eq=False)
class FuseExceeded:
    and_node_count: int


Gc2Result = Union[Guarded, Unguarded, FuseExceeded]


@dataclass(eq=False)
class SeedNode:
    """An and-node of an existing tree with a substitution already applied.

    Tree transitions instantiate every and-node of the source tree and then
    extend it; the instantiated source is carried into the builder as a seed
    so instantiations of clause-local (existential) variables survive.
    """

    atom: Atom
    ors: list[tuple[int, Substitution, Atom, list["SeedNode"]]]
    # (clause index, matcher, renamed head, children)


def seed_from(tree: RewritingTree, sigma: Substitution) -> SeedNode:
    def walk(node: AndNode) -> SeedNode:
        ors = [
            (
                o.clause_index,
                compose(sigma, o.matcher),
                o.renamed_head,
                [walk(c) for c in o.children],
            )
            for o in node.or_children
        ]
        return SeedNode(apply_atom(sigma, node.atom), ors)

    return walk(tree.root)


def build_and_check(
    program: Program,
    goal: Atom,
    fuse: int = DEFAULT_FUSE,
    fresh: FreshNames | None = None,
    seed: SeedNode | None = None,
) -> Gc2Result:
    """Construct the rewriting tree for a goal and decide its guardedness.

    Expansion is breadth-first; each new and-node is checked against every
    ancestor sharing its predicate and parent clause, and the first pair with
    no recursive contraction aborts construction as Unguarded.  When ``seed``
    is given the builder adopts its or-structure (a tree transition) and only
    extends where matching newly holds; all loop checks are re-run from
    scratch either way.
    """
    if fuse <= 0:
        raise ValueError("fuse must be positive")
    fresh = fresh if fresh is not None else FreshNames()
    root = AndNode(0, goal, None)
    tree = RewritingTree(program, root, [root], [])
    queue: deque[tuple[AndNode, SeedNode | None]] = deque([(root, seed)])

    def check_loops(child: AndNode) -> Unguarded | None:
        clause_index = child.parent_clause
        anc = child.and_parent()
        while anc is not None:
            if (
                anc.parent_clause == clause_index
                and anc.atom.predicate == child.atom.predicate
                and len(anc.atom.args) == len(child.atom.args)
            ):
                witness = has_recursive_contraction(anc.atom, child.atom)
                loop = Loop(anc, child, clause_index, witness)
                if witness is None:
                    return Unguarded(tree, loop, tree.clause_path(child))
                tree.loops.append(loop)
            anc = anc.and_parent()
        return None

    while queue:
        node, node_seed = queue.popleft()
        seeded = {o[0]: o for o in node_seed.ors} if node_seed is not None else {}
        for clause in program.clauses:
            if clause.index in seeded:
                _, matcher, renamed_head, child_seeds = seeded[clause.index]
                or_node = OrNode(clause.index, matcher, renamed_head, node)
                child_atoms = [(cs.atom, cs) for cs in child_seeds]
            else:
                # matchability is renaming-invariant: probe with the raw head
                # and pay for renaming apart only on success
                if mgm(clause.head, node.atom) is None:
                    continue
                renamed = rename_apart(clause, fresh)
                theta = mgm(renamed.head, node.atom)
                assert theta is not None
                or_node = OrNode(clause.index, theta, renamed.head, node)
                child_atoms = [(apply_atom(theta, b), None) for b in renamed.body]
            node.or_children.append(or_node)
            for child_atom, child_seed in child_atoms:
                if len(tree.and_nodes) >= fuse:
                    return FuseExceeded(len(tree.and_nodes) + 1)
                child = AndNode(len(tree.and_nodes), child_atom, or_node)
                or_node.children.append(child)
                tree.and_nodes.append(child)
                unguarded = check_loops(child)
                if unguarded is not None:
                    return unguarded
                queue.append((child, child_seed))
    return Guarded(tree)


def alpha_equivalent(t1: RewritingTree, t2: RewritingTree) -> bool:
    """Structural equality up to one consistent variable bijection."""
    fwd: dict[str, str] = {}
    bwd: dict[str, str] = {}

    def terms_eq(a, b) -> bool:
        if isinstance(a, Var) and isinstance(b, Var):
            if fwd.setdefault(a.name, b.name) != b.name:
                return False
            if bwd.setdefault(b.name, a.name) != a.name:
                return False
            return True
        if isinstance(a, Compound) and isinstance(b, Compound):
            return (
                a.functor == b.functor
                and len(a.args) == len(b.args)
                and all(terms_eq(x, y) for x, y in zip(a.args, b.args))
            )
        return False

    def atoms_eq(a: Atom, b: Atom) -> bool:
        return (
            a.predicate == b.predicate
            and len(a.args) == len(b.args)
            and all(terms_eq(x, y) for x, y in zip(a.args, b.args))
        )

    def nodes_eq(n1: AndNode, n2: AndNode) -> bool:
        if not atoms_eq(n1.atom, n2.atom):
            return False
        if len(n1.or_children) != len(n2.or_children):
            return False
        for o1, o2 in zip(n1.or_children, n2.or_children):
            if o1.clause_index != o2.clause_index:
                return False
            if len(o1.children) != len(o2.children):
                return False
            if not all(nodes_eq(c1, c2) for c1, c2 in zip(o1.children, o2.children)):
                return False
        return True

    return nodes_eq(t1.root, t2.root)


def canonical_key(tree: RewritingTree) -> str:
    """A renaming-invariant serialization of a tree's atoms and or-structure.

    Alpha-equivalent trees produce identical keys: variables are numbered by
    first occurrence in breadth-first order, and or-nodes contribute their
    clause indices.
    """
    names: dict[str, str] = {}

    def term_key(t: Term) -> str:
        if isinstance(t, Var):
            return names.setdefault(t.name, f"_{len(names)}")
        if not t.args:
            return t.functor
        return f"{t.functor}({','.join(term_key(a) for a in t.args)})"

    parts = []
    for node in tree.and_nodes:
        args = ",".join(term_key(a) for a in node.atom.args)
        ors = ",".join(str(o.clause_index) for o in node.or_children)
        parts.append(f"{node.atom.predicate}({args})[{ors}]")
    return ";".join(parts)


def to_dot(tree: RewritingTree, name: str = "rewriting_tree") -> str:
    """DOT rendering: and-nodes as boxes, or-nodes as ellipses "P(i)"."""
    lines = [f"digraph {name} {{"]
    or_ids: dict[int, str] = {}

    def or_id(o: OrNode) -> str:
        return or_ids.setdefault(id(o), f"o{len(or_ids)}")

    for node in tree.and_nodes:
        lines.append(f'  a{node.node_id} [shape=box, label="{node.atom}"];')
        for o in node.or_children:
            lines.append(f'  {or_id(o)} [shape=ellipse, label="P({o.clause_index})"];')
            lines.append(f"  a{node.node_id} -> {or_id(o)};")
            for child in o.children:
                lines.append(f"  {or_id(o)} -> a{child.node_id};")
    lines.append("}")
    return "\n".join(lines)
