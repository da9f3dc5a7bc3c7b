"""Observational productivity checker for logic programs."""

from .contraction import (
    ContractionWitness,
    contraction_witnesses,
    has_recursive_contraction,
)
from .derivation import (
    DerivationStep,
    DerivationTrace,
    FuseExceededError,
    InvariantTriple,
    ObservationResult,
    ProductivityReport,
    Transition,
    UnguardedEncountered,
    UnguardedWitness,
    clause_projection,
    coinductive_invariant,
    gc3,
    observation_subtree,
    s_derive,
    transitions,
)
from .rewriting import (
    DEFAULT_FUSE,
    AndNode,
    FuseExceeded,
    Gc2Result,
    Guarded,
    Loop,
    OrNode,
    RewritingTree,
    Unguarded,
    alpha_equivalent,
    build_and_check,
    to_dot,
)
from .syntax import (
    ArityError,
    Atom,
    Clause,
    Compound,
    ParseError,
    Position,
    Program,
    Term,
    Var,
    atom_vars,
    clause_vars,
    parse_goal,
    parse_program,
    positions_of,
    proper_subterms_with_positions,
    subterm_at,
    term_vars,
)
from .trs import (
    DependencyPair,
    ExistentialVariableError,
    RewriteRule,
    dependency_pairs,
    translate,
)
from .unify import (
    FreshNames,
    Substitution,
    apply,
    compose,
    match_term,
    mgm,
    mgu,
    rename_apart,
)

__version__ = "0.1.0"
