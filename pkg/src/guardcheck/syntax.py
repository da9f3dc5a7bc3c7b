"""Concrete syntax and term-tree representation for Horn clause programs.

The accepted file format is plain Prolog-style text:

    head :- b1, b2, b3.      % rule
    head.                    % fact
    % comment to end of line

Identifiers starting with an uppercase letter or underscore are variables;
everything else (including bare integers like ``0``) is a functor or
predicate symbol.  There is no list sugar, no operators, no built-ins:
``cons``/``scons`` are ordinary functors.  Every symbol must be used with a
single arity throughout a program; functors and predicates live in separate
namespaces.

Terms and atoms are finite trees indexed by positions: a position is a word
of 0-based child indices, where argument ``i`` of an atom or compound lives
at position ``(i,)``.  The position set of any term is prefix-closed and
left-sibling-closed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

Position = tuple[int, ...]


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple["Term", ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(str(a) for a in self.args)})"


Term = Union[Var, Compound]


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Clause:
    index: int
    head: Atom
    body: tuple[Atom, ...] = ()

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(b) for b in self.body)}."


@dataclass(frozen=True)
class Program:
    clauses: tuple[Clause, ...]

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.clauses)

    def clause_label(self, index: int) -> tuple[str, int]:
        """Per-predicate label of a clause: ("p", 0) is the first p-clause."""
        pred = self.clauses[index].head.predicate
        ordinal = sum(
            1 for c in self.clauses[:index] if c.head.predicate == pred
        )
        return pred, ordinal


class ParseError(ValueError):
    """Syntax error with source location."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class ArityError(ParseError):
    """A symbol is used with two different arities in one program."""

    def __init__(self, symbol: str, seen: int, expected: int, line: int, column: int):
        ParseError.__init__(
            self,
            f"symbol '{symbol}' used with arity {seen} after arity {expected}",
            line,
            column,
        )
        self.symbol = symbol


def is_leaf(t: Term) -> bool:
    """Leaves of a term tree are variables and constants (0-ary functors)."""
    return isinstance(t, Var) or not t.args


def symbol_of(t: Term) -> str:
    return t.name if isinstance(t, Var) else t.functor


def subterm_at(t: Term | Atom, pos: Position) -> Term:
    """The subterm rooted at ``pos``.

    For atoms, argument ``i`` is at position ``(i,)``; the empty position is
    only valid for terms (an atom is not itself a term).
    """
    if isinstance(t, Atom):
        if not pos:
            raise IndexError("the root position of an atom is not a term")
        if pos[0] >= len(t.args):
            raise IndexError(f"position {list(pos)} invalid in {t}")
        return subterm_at(t.args[pos[0]], pos[1:])
    for depth, i in enumerate(pos):
        if isinstance(t, Var) or i >= len(t.args):
            raise IndexError(f"position {list(pos[: depth + 1])} invalid in term")
        t = t.args[i]
    return t


def proper_subterms_with_positions(a: Atom) -> list[tuple[Position, Term]]:
    """All non-root subterm occurrences of an atom, leftmost-outermost."""
    out: list[tuple[Position, Term]] = []

    def walk(t: Term, pos: Position) -> None:
        out.append((pos, t))
        if isinstance(t, Compound):
            for i, arg in enumerate(t.args):
                walk(arg, pos + (i,))

    for i, arg in enumerate(a.args):
        walk(arg, (i,))
    return out


def positions_of(t: Term | Atom) -> list[Position]:
    """Every valid position of a term or atom, including the root word."""
    out: list[Position] = [()]
    args = t.args
    stack = [((i,), arg) for i, arg in reversed(list(enumerate(args)))]
    while stack:
        pos, sub = stack.pop()
        out.append(pos)
        if isinstance(sub, Compound):
            stack.extend(
                (pos + (i,), a) for i, a in reversed(list(enumerate(sub.args)))
            )
    return out


def term_vars(t: Term) -> list[str]:
    """Variable names in first-occurrence order."""
    out: list[str] = []
    seen: set[str] = set()

    def walk(s: Term) -> None:
        if isinstance(s, Var):
            if s.name not in seen:
                seen.add(s.name)
                out.append(s.name)
        else:
            for a in s.args:
                walk(a)

    walk(t)
    return out


def atom_vars(a: Atom) -> list[str]:
    out: list[str] = []
    seen: set[str] = set()
    for arg in a.args:
        for v in term_vars(arg):
            if v not in seen:
                seen.add(v)
                out.append(v)
    return out


def clause_vars(c: Clause) -> list[str]:
    out: list[str] = []
    seen: set[str] = set()
    for a in (c.head, *c.body):
        for v in atom_vars(a):
            if v not in seen:
                seen.add(v)
                out.append(v)
    return out


# ---------------------------------------------------------------------------
# Tokenizer / recursive-descent parser
# ---------------------------------------------------------------------------

_PUNCT = {"(", ")", ",", "."}


@dataclass(frozen=True)
class _Token:
    kind: str  # "name", "var", "punct", "neck", "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> Iterator[_Token]:
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == ":" and i + 1 < n and text[i + 1] == "-":
            yield _Token("neck", ":-", line, col)
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            yield _Token("punct", ch, line, col)
            i += 1
            col += 1
            continue
        if ch.isalnum() or ch == "_":
            start = i
            start_col = col
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            word = text[start:i]
            kind = "var" if word[0].isupper() or word[0] == "_" else "name"
            yield _Token(kind, word, line, start_col)
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    yield _Token("eof", "", line, col)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0
        self.functor_arities: dict[str, int] = {}
        self.predicate_arities: dict[str, int] = {}

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            got = tok.text if tok.text else "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok.line, tok.column)
        return self.next()

    def _check_arity(self, table: dict[str, int], name: str, arity: int, tok: _Token) -> None:
        known = table.setdefault(name, arity)
        if known != arity:
            raise ArityError(name, arity, known, tok.line, tok.column)

    def parse_term(self) -> Term:
        tok = self.peek()
        if tok.kind == "var":
            self.next()
            return Var(tok.text)
        if tok.kind == "name":
            self.next()
            args = self._parse_args()
            self._check_arity(self.functor_arities, tok.text, len(args), tok)
            return Compound(tok.text, args)
        got = tok.text if tok.text else "end of input"
        raise ParseError(f"expected a term, found {got!r}", tok.line, tok.column)

    def _parse_args(self) -> tuple[Term, ...]:
        if not (self.peek().kind == "punct" and self.peek().text == "("):
            return ()
        self.next()
        args = [self.parse_term()]
        while self.peek().kind == "punct" and self.peek().text == ",":
            self.next()
            args.append(self.parse_term())
        self.expect("punct", ")")
        return tuple(args)

    def parse_atom(self) -> Atom:
        tok = self.expect("name")
        args = self._parse_args()
        self._check_arity(self.predicate_arities, tok.text, len(args), tok)
        return Atom(tok.text, args)

    def parse_clause(self, index: int) -> Clause:
        head = self.parse_atom()
        body: list[Atom] = []
        if self.peek().kind == "neck":
            self.next()
            body.append(self.parse_atom())
            while self.peek().kind == "punct" and self.peek().text == ",":
                self.next()
                body.append(self.parse_atom())
        self.expect("punct", ".")
        return Clause(index, head, tuple(body))

    def parse_program(self) -> Program:
        clauses: list[Clause] = []
        while self.peek().kind != "eof":
            clauses.append(self.parse_clause(len(clauses)))
        return Program(tuple(clauses))

    def parse_goal(self) -> Atom:
        atom = self.parse_atom()
        if self.peek().kind == "punct" and self.peek().text == ".":
            self.next()
        self.expect("eof")
        return atom


def parse_program(text: str) -> Program:
    """Parse a program file; clauses are numbered 0..n-1 in source order."""
    return _Parser(text).parse_program()


def parse_goal(text: str) -> Atom:
    """Parse a single goal atom, optionally terminated by a period."""
    return _Parser(text).parse_goal()
