"""Command-line front end.

    guardcheck FILE [--json] [--fuse N] [--dot]
    guardcheck --derive "GOAL" --steps N FILE
    guardcheck --trs FILE

Check mode prints the guardedness and liveness report; exit codes are
0 guarded-and-live, 1 guarded with finite derivations only, 2 not guarded,
3 parse or usage error, 4 fuse exceeded.  All report output goes to stdout,
diagnostics to stderr.  Variables inside printed invariant terms use the
canonical v<k> scheme, numbered per clause head, so repeated runs are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys

from .derivation import (
    FuseExceededError,
    InvariantTriple,
    ProductivityReport,
    UnguardedEncountered,
    UnguardedWitness,
    gc3,
    s_derive,
)
from .rewriting import DEFAULT_FUSE, FuseExceeded, build_and_check, to_dot
from .syntax import Atom, ParseError, Program, Var, atom_vars, parse_goal, parse_program
from .trs import ExistentialVariableError, render as render_trs
from .unify import FreshNames, Substitution, apply_term, rename_apart

EXIT_LIVE = 0
EXIT_FINITE = 1
EXIT_UNGUARDED = 2
EXIT_USAGE = 3
EXIT_FUSE = 4


def _canonical_head_renaming(program: Program, clause_index: int) -> Substitution:
    head = program.clauses[clause_index].head
    return {v: Var(f"v{k}") for k, v in enumerate(atom_vars(head))}


def _format_invariant(program: Program, triple: InvariantTriple, renaming: Substitution) -> str:
    _, ordinal = program.clause_label(triple.clause_index)
    term = apply_term(renaming, triple.head_subterm)
    position = ",".join(str(i) for i in triple.position)
    return f"{{{ordinal} | {term} | [{position}]}}"


def _grouped_invariants(
    report: ProductivityReport,
) -> list[tuple[int, list[InvariantTriple]]]:
    by_clause: dict[int, list[InvariantTriple]] = {}
    for triple in report.invariant_list:
        by_clause.setdefault(triple.clause_index, []).append(triple)
    return [
        (index, sorted(triples, key=lambda t: t.position))
        for index, triples in sorted(by_clause.items())
    ]


def _format_path(path: tuple[tuple[str, int], ...]) -> str:
    return "[" + ", ".join(f"({pred}:{j})" for pred, j in path) + "]"


def render_text(report: ProductivityReport) -> str:
    lines = []
    if not report.program_guarded:
        lines.append("Program is not guarded.")
        witness = report.first_witness()
        if witness is not None:
            lines.append(
                f"Goal {witness.goal} results in unguarded loop "
                f"in path {_format_path(witness.path)}."
            )
        return "\n".join(lines)
    lines.append("Program is guarded.")
    if not report.program_live:
        lines.append("Program has finite derivations only.")
        return "\n".join(lines)
    lines.append("Program is existentially live with coinductive invariants:")
    for clause_index, triples in _grouped_invariants(report):
        pred, ordinal = report.program.clause_label(clause_index)
        renaming = _canonical_head_renaming(report.program, clause_index)
        entries = " ".join(
            _format_invariant(report.program, t, renaming) for t in triples
        )
        lines.append(f'in clause {ordinal} of "{pred}": [{entries}]')
    return "\n".join(lines)


def _witness_json(report: ProductivityReport) -> dict | None:
    witness = report.first_witness()
    if witness is None:
        return None
    clause_index = next(
        r.clause_index for r in report.per_clause if not r.guarded
    )
    pred, ordinal = report.program.clause_label(clause_index)
    return {
        "clause": clause_index,
        "predicate": pred,
        "clause_of_predicate": ordinal,
        "goal": str(witness.goal),
        "path": [f"{p}:{j}" for p, j in witness.path],
    }


def format_json(report: ProductivityReport) -> str:
    """Stable-key JSON rendering of the full report."""
    program = report.program

    def triple_obj(t: InvariantTriple, renaming: Substitution) -> dict:
        pred, ordinal = program.clause_label(t.clause_index)
        return {
            "clause": t.clause_index,
            "predicate": pred,
            "clause_of_predicate": ordinal,
            "term": str(apply_term(renaming, t.head_subterm)),
            "position": list(t.position),
        }

    invariants = [
        triple_obj(t, _canonical_head_renaming(program, index))
        for index, triples in _grouped_invariants(report)
        for t in triples
    ]
    clauses = []
    for result in report.per_clause:
        pred, ordinal = program.clause_label(result.clause_index)
        renaming = _canonical_head_renaming(program, result.clause_index)
        entry = {
            "clause": result.clause_index,
            "predicate": pred,
            "clause_of_predicate": ordinal,
            "guarded": result.guarded,
            "trees_explored": result.trees_explored,
            "invariants": [
                triple_obj(t, _canonical_head_renaming(program, t.clause_index))
                for t in sorted(
                    result.live_invariants,
                    key=lambda t: (t.clause_index, t.position),
                )
            ],
        }
        if result.witness is not None:
            entry["witness"] = {
                "goal": str(result.witness.goal),
                "path": [f"{p}:{j}" for p, j in result.witness.path],
            }
        clauses.append(entry)
    payload = {
        "guarded": report.program_guarded,
        "live": report.program_live,
        "invariants": invariants,
        "witness": _witness_json(report),
        "clauses": clauses,
    }
    return json.dumps(payload, indent=2)


def _render_derivation(program: Program, goal: Atom, steps: int, fuse: int) -> tuple[str, int]:
    try:
        trace = s_derive(program, goal, steps, fuse=fuse)
    except UnguardedEncountered as err:
        witness = err.result
        return (
            f"Goal {witness.witness.upper.atom} results in unguarded loop "
            f"in path {_format_path(witness.path)}.",
            EXIT_UNGUARDED,
        )
    lines = [f"goal: {goal}"]
    for n, step in enumerate(trace.steps, start=1):
        pred, ordinal = program.clause_label(step.clause_index)
        bindings = ", ".join(
            f"{v} -> {t}" for v, t in sorted(step.answer_prefix.items())
        )
        lines.append(f"step {n} via ({pred}:{ordinal}): {{{bindings}}}")
    if not trace.steps:
        lines.append("no transition available")
    else:
        final = ", ".join(f"{v} -> {t}" for v, t in sorted(trace.answer_prefix.items()))
        lines.append(f"answer prefix: {{{final}}}")
    return "\n".join(lines), 0


def _dot_dump(program: Program, fuse: int) -> str:
    blocks = []
    for clause in program.clauses:
        fresh = FreshNames()
        goal = rename_apart(clause, fresh).head
        result = build_and_check(program, goal, fuse=fuse, fresh=fresh)
        tree = result.tree if not isinstance(result, FuseExceeded) else None
        if tree is not None:
            blocks.append(to_dot(tree, name=f"clause_{clause.index}"))
    return "\n".join(blocks)


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="guardcheck",
        description="Productivity checker for logic programs.",
    )
    parser.add_argument("file", help="program file to analyse")
    parser.add_argument("--json", action="store_true", help="emit the report as JSON")
    parser.add_argument(
        "--fuse",
        type=int,
        default=DEFAULT_FUSE,
        help="defensive bound on and-nodes per rewriting tree",
    )
    parser.add_argument(
        "--dot",
        action="store_true",
        help="also dump each clause-head rewriting tree in DOT format",
    )
    parser.add_argument("--derive", metavar="GOAL", help="run a bounded derivation")
    parser.add_argument(
        "--steps", type=int, default=1, help="number of transitions for --derive"
    )
    parser.add_argument(
        "--trs", action="store_true", help="emit rewrite rules and dependency pairs"
    )
    return parser


def run(argv: list[str]) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code else 0
    if args.derive is not None and args.trs:
        print("error: --derive and --trs are mutually exclusive", file=sys.stderr)
        return EXIT_USAGE
    if args.fuse <= 0:
        print("error: --fuse must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        with open(args.file, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        program = parse_program(text)
    except ParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE

    if args.trs:
        try:
            print(render_trs(program))
        except ExistentialVariableError as err:
            print(f"error: {err}", file=sys.stderr)
            return 1
        return 0

    if args.derive is not None:
        try:
            goal = parse_goal(args.derive)
        except ParseError as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_USAGE
        try:
            text_out, code = _render_derivation(program, goal, args.steps, args.fuse)
        except FuseExceededError as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_FUSE
        print(text_out)
        return code

    try:
        report = gc3(program, fuse=args.fuse)
    except FuseExceededError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FUSE
    print(format_json(report) if args.json else render_text(report))
    if args.dot:
        print(_dot_dump(program, args.fuse))
    if not report.program_guarded:
        return EXIT_UNGUARDED
    return EXIT_LIVE if report.program_live else EXIT_FINITE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
