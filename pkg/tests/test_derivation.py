import pytest

from guardcheck import (
    Compound,
    FreshNames,
    Guarded,
    InvariantTriple,
    Unguarded,
    UnguardedEncountered,
    Var,
    apply,
    build_and_check,
    clause_projection,
    coinductive_invariant,
    gc3,
    observation_subtree,
    parse_goal,
    parse_program,
    rename_apart,
    s_derive,
    transitions,
)

from util import load


def head_tree(program, clause_index, fresh=None):
    fresh = fresh or FreshNames()
    goal = rename_apart(program.clauses[clause_index], fresh).head
    result = build_and_check(program, goal, fresh=fresh)
    assert isinstance(result, Guarded)
    return result.tree, fresh


# --- transitions -------------------------------------------------------------


def test_p6_single_transition_grows_the_stream():
    program = load("p6.logic")
    result = build_and_check(program, parse_goal("from(X,scons(X,Y))"))
    trs = transitions(program, result.tree)
    assert len(trs) == 1
    tr = trs[0]
    assert tr.clause_index == 0
    assert isinstance(tr.target, Guarded)
    root = tr.target.tree.root.atom
    assert root.predicate == "from"
    # second argument gained one scons layer: scons(X, scons(s(X), _))
    outer = root.args[1]
    assert outer.functor == "scons"
    inner = outer.args[1]
    assert inner.functor == "scons"
    assert inner.args[0] == Compound("s", (Var("X"),))


def test_p1_two_transitions_from_open_leaf():
    program = load("p1.logic")
    result = build_and_check(program, parse_goal("nat(s(X))"))
    trs = transitions(program, result.tree)
    assert [t.clause_index for t in trs] == [0, 1]
    via_fact = trs[0].unifier
    assert via_fact["X"] == Compound("0")
    via_rule = trs[1].unifier
    assert via_rule["X"].functor == "s"


def test_p8_has_no_transitions():
    program = load("p8.logic")
    result = build_and_check(program, parse_goal("p(X)"))
    assert transitions(program, result.tree) == []


def test_transition_carrying_unguarded_target():
    program = load("head_constant.logic")
    result = build_and_check(program, parse_goal("p(a)"))
    assert isinstance(result, Guarded)
    trs = transitions(program, result.tree)
    assert len(trs) == 1
    assert isinstance(trs[0].target, Unguarded)


def test_transition_instantiates_existential_variables():
    # the target must keep instantiations of clause-local variables: a rebuild
    # from the root atom alone would miss them
    program = load("head_constant.logic")
    tree = build_and_check(program, parse_goal("p(a)")).tree
    tr = transitions(program, tree)[0]
    assert str(tr.target.tree.and_nodes[1].atom) == "p(a)"


# --- clause projections and coinductive invariants ---------------------------


def test_p6_projection_and_invariant_chain():
    program = load("p6.logic")
    tree, fresh = head_tree(program, 0)
    first = transitions(program, tree, fresh=fresh)[0]
    scons_pattern = program.clauses[0].head.args[1]
    assert clause_projection(program, first) == {
        InvariantTriple(0, scons_pattern, (1,))
    }
    # no loops in the first tree: nothing is certified yet
    assert coinductive_invariant(program, first) == frozenset()

    second = transitions(program, first.target.tree, fresh=fresh)[0]
    assert clause_projection(program, second) == {
        InvariantTriple(0, scons_pattern, (1,))
    }
    assert coinductive_invariant(program, second) == {
        InvariantTriple(0, scons_pattern, (1,))
    }


def test_variable_head_subterms_never_project():
    # the from head has variable subterms at (0,), (1,0), (1,1); none project
    program = load("p6.logic")
    tree, fresh = head_tree(program, 0)
    tr = transitions(program, tree, fresh=fresh)[0]
    assert {t.position for t in clause_projection(program, tr)} == {(1,)}


def test_p7_projections_match_hand_computation():
    program = load("p7.logic")
    tree, fresh = head_tree(program, 0)
    first = transitions(program, tree, fresh=fresh)[0]
    s_y1 = program.clauses[1].head.args[2]
    assert clause_projection(program, first) == {InvariantTriple(1, s_y1, (2,))}
    assert coinductive_invariant(program, first) == frozenset()

    second = transitions(program, first.target.tree, fresh=fresh)[0]
    s_x1 = program.clauses[0].head.args[0]
    assert clause_projection(program, second) == {InvariantTriple(0, s_x1, (0,))}
    assert coinductive_invariant(program, second) == frozenset()


def test_identity_like_transition_has_empty_projection():
    program = load("head_constant.logic")
    tree = build_and_check(program, parse_goal("p(a)")).tree
    tr = transitions(program, tree)[0]
    # sigma(B) replaces the leaf variable by a constant: no reducing subterm
    assert clause_projection(program, tr) == frozenset()


def test_invariant_subset_law_over_corpus():
    from util import CORPUS_FILES, GUARDED_ALL

    for name in GUARDED_ALL:
        program = load(name)
        for clause in program.clauses:
            fresh = FreshNames()
            goal = rename_apart(clause, fresh).head
            result = build_and_check(program, goal, fresh=fresh)
            if not isinstance(result, Guarded):
                continue
            for tr in transitions(program, result.tree, fresh=fresh):
                assert coinductive_invariant(program, tr) <= clause_projection(program, tr)
                if isinstance(tr.target, Guarded):
                    for deeper in transitions(program, tr.target.tree, fresh=fresh):
                        assert coinductive_invariant(program, deeper) <= clause_projection(
                            program, deeper
                        )


# --- observation subtrees -----------------------------------------------------


def test_p6_observation_explores_exactly_three_trees():
    program = load("p6.logic")
    result = observation_subtree(program, 0)
    assert result.guarded
    assert result.trees_explored == 3
    scons_pattern = program.clauses[0].head.args[1]
    assert result.live_invariants == {InvariantTriple(0, scons_pattern, (1,))}


def test_p7_observation_witness_path():
    program = load("p7.logic")
    result = observation_subtree(program, 0)
    assert not result.guarded
    assert result.live_invariants == frozenset()
    assert result.witness.goal.predicate == "q"
    assert result.witness.path == (("p", 0), ("q", 0), ("p", 0))


def test_p8_observation_single_tree_no_liveness():
    program = load("p8.logic")
    result = observation_subtree(program, 0)
    assert result.guarded
    assert result.trees_explored == 1
    assert result.live_invariants == frozenset()


def test_fact_clause_observation():
    program = load("p1.logic")
    result = observation_subtree(program, 0)
    assert result.guarded
    assert result.trees_explored == 1


# --- gc3 ----------------------------------------------------------------------


def test_gc3_p6():
    program = load("p6.logic")
    report = gc3(program)
    assert report.program_guarded and report.program_live
    assert {(t.clause_index, t.position) for t in report.invariant_list} == {(0, (1,))}


def test_gc3_p7_not_guarded():
    report = gc3(load("p7.logic"))
    assert not report.program_guarded
    assert not report.program_live
    assert report.first_witness().path == (("p", 0), ("q", 0), ("p", 0))


def test_gc3_head_constant_incompleteness():
    report = gc3(load("head_constant.logic"))
    assert not report.program_guarded


def test_gc3_empty_program_is_vacuously_guarded():
    report = gc3(parse_program(""))
    assert report.program_guarded
    assert not report.program_live


def test_gc3_is_deterministic():
    program = load("sieve_reformulated.logic")
    a = gc3(program)
    b = gc3(program)
    assert a.invariant_list == b.invariant_list
    assert [r.trees_explored for r in a.per_clause] == [r.trees_explored for r in b.per_clause]
    assert [r.guarded for r in a.per_clause] == [r.guarded for r in b.per_clause]


# --- bounded derivations --------------------------------------------------------


def test_s_derive_p6_three_steps():
    program = load("p6.logic")
    trace = s_derive(program, parse_goal("from(0,X)"), 3)
    assert len(trace.steps) == 3
    answer = trace.answer_prefix["X"]
    zero = Compound("0")
    assert answer.functor == "scons" and answer.args[0] == zero
    second = answer.args[1]
    assert second.args[0] == Compound("s", (zero,))
    third = second.args[1]
    assert third.args[0] == Compound("s", (Compound("s", (zero,)),))
    assert isinstance(third.args[1], Var)  # fresh tail


def test_s_derive_p1_terminates_with_zero():
    program = load("p1.logic")
    trace = s_derive(program, parse_goal("nat(s(X))"), 10)
    assert len(trace.steps) == 1  # topmost selection resolves with the fact
    assert trace.answer_prefix == {"X": Compound("0")}


def test_s_derive_p2_single_step():
    program = load("p2.logic")
    trace = s_derive(program, parse_goal("stream(X)"), 1)
    answer = trace.answer_prefix["X"]
    assert answer.functor == "scons" and answer.args[0] == Compound("0")
    assert isinstance(answer.args[1], Var)


def test_s_derive_raises_on_unguarded():
    program = load("p3.logic")
    with pytest.raises(UnguardedEncountered):
        s_derive(program, parse_goal("p(X)"), 1)


def test_s_derive_monotone_refinement():
    program = load("p6.logic")
    trace = s_derive(program, parse_goal("from(0,X)"), 5)
    previous = {}
    for step in trace.steps:
        for v, image in previous.items():
            assert step.answer_prefix[v] == apply(step.unifier, image)
        previous = step.answer_prefix
