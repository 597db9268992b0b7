"""Formulas of the knowledge language.

Terms are numerals and variables; atoms are O(t), W(t,u) and t=u;
formulas are closed under ~, &, |, ->, <->, quantifiers and the knowledge
operators K<i>(...).  Surface syntax:

    O(3)    W(x,7)    x=y    ~A    A & B    A | B    A -> B    A <-> B
    all x. A          ex x. A          K3(A)

Precedence, loosest to tightest: <->, -> (right associative), |, &, ~.
Quantifiers extend as far right as possible.  The printer emits a
canonical fully parenthesized form that the parser round-trips.

Formulas compare by structure up to renaming of bound variables; use
`canonical` to get the renamed normal form.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Numeral:
    value: int


@dataclass(frozen=True)
class TermVar:
    name: str


Term = Union[Numeral, TermVar]


@dataclass(frozen=True)
class OAtom:
    term: Term


@dataclass(frozen=True)
class WAtom:
    member: Term
    index: Term


@dataclass(frozen=True)
class EqAtom:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Knows:
    agent: int
    body: "Formula"


Formula = Union[OAtom, WAtom, EqAtom, Not, And, Or, Implies, Iff,
                ForAll, Exists, Knows]


def free_vars(formula: Formula) -> frozenset[str]:
    if isinstance(formula, OAtom):
        return _term_vars(formula.term)
    if isinstance(formula, WAtom):
        return _term_vars(formula.member) | _term_vars(formula.index)
    if isinstance(formula, EqAtom):
        return _term_vars(formula.left) | _term_vars(formula.right)
    if isinstance(formula, Not):
        return free_vars(formula.body)
    if isinstance(formula, (And, Or, Implies, Iff)):
        return free_vars(formula.left) | free_vars(formula.right)
    if isinstance(formula, (ForAll, Exists)):
        return free_vars(formula.body) - {formula.var}
    if isinstance(formula, Knows):
        return free_vars(formula.body)
    raise TypeError(f"not a formula: {formula!r}")


def _term_vars(term: Term) -> frozenset[str]:
    return frozenset((term.name,)) if isinstance(term, TermVar) else frozenset()


def is_sentence(formula: Formula) -> bool:
    return not free_vars(formula)


def canonical(formula: Formula) -> Formula:
    """Rename bound variables to v0, v1, ... in binding order.

    Alphabetic variants share one canonical form, which makes structural
    equality the right equality for knowledge sets.
    """
    return _canon(formula, {}, [0])


def _canon(formula: Formula, env: dict[str, str], counter: list[int]) -> Formula:
    if isinstance(formula, OAtom):
        return OAtom(_canon_term(formula.term, env))
    if isinstance(formula, WAtom):
        return WAtom(_canon_term(formula.member, env),
                     _canon_term(formula.index, env))
    if isinstance(formula, EqAtom):
        return EqAtom(_canon_term(formula.left, env),
                      _canon_term(formula.right, env))
    if isinstance(formula, Not):
        return Not(_canon(formula.body, env, counter))
    if isinstance(formula, (And, Or, Implies, Iff)):
        return type(formula)(_canon(formula.left, env, counter),
                             _canon(formula.right, env, counter))
    if isinstance(formula, (ForAll, Exists)):
        fresh = f"v{counter[0]}"
        counter[0] += 1
        inner = dict(env)
        inner[formula.var] = fresh
        return type(formula)(fresh, _canon(formula.body, inner, counter))
    if isinstance(formula, Knows):
        return Knows(formula.agent, _canon(formula.body, env, counter))
    raise TypeError(f"not a formula: {formula!r}")


def _canon_term(term: Term, env: dict[str, str]) -> Term:
    if isinstance(term, TermVar):
        return TermVar(env.get(term.name, term.name))
    return term


def substitute(formula: Formula, var: str, term: Term) -> Formula:
    """Replace free occurrences of var; bound occurrences shadow."""
    if isinstance(formula, OAtom):
        return OAtom(_subst_term(formula.term, var, term))
    if isinstance(formula, WAtom):
        return WAtom(_subst_term(formula.member, var, term),
                     _subst_term(formula.index, var, term))
    if isinstance(formula, EqAtom):
        return EqAtom(_subst_term(formula.left, var, term),
                      _subst_term(formula.right, var, term))
    if isinstance(formula, Not):
        return Not(substitute(formula.body, var, term))
    if isinstance(formula, (And, Or, Implies, Iff)):
        return type(formula)(substitute(formula.left, var, term),
                             substitute(formula.right, var, term))
    if isinstance(formula, (ForAll, Exists)):
        if formula.var == var:
            return formula
        return type(formula)(formula.var,
                             substitute(formula.body, var, term))
    if isinstance(formula, Knows):
        return Knows(formula.agent, substitute(formula.body, var, term))
    raise TypeError(f"not a formula: {formula!r}")


def _subst_term(t: Term, var: str, term: Term) -> Term:
    if isinstance(t, TermVar) and t.name == var:
        return term
    return t


def axiom_of_o() -> Formula:
    """all y. (all x. (W(x,y) -> O(x))) -> O(y): the closure rule that
    defines the notation set, as one sentence."""
    x, y = TermVar("x"), TermVar("y")
    return ForAll("y", Implies(ForAll("x", Implies(WAtom(x, y), OAtom(x))),
                               OAtom(y)))


def axiom_of_o_instance(n: int) -> Formula:
    """(all x. (W(x,n) -> O(x))) -> O(n): the closure rule at one index."""
    x, idx = TermVar("x"), Numeral(n)
    return Implies(ForAll("x", Implies(WAtom(x, idx), OAtom(x))), OAtom(idx))


# --- printing -------------------------------------------------------------------


def print_term(term: Term) -> str:
    return str(term.value) if isinstance(term, Numeral) else term.name


def print_formula(formula: Formula) -> str:
    if isinstance(formula, OAtom):
        return f"O({print_term(formula.term)})"
    if isinstance(formula, WAtom):
        return f"W({print_term(formula.member)},{print_term(formula.index)})"
    if isinstance(formula, EqAtom):
        return f"{print_term(formula.left)}={print_term(formula.right)}"
    if isinstance(formula, Not):
        return f"~{_wrap(formula.body)}"
    if isinstance(formula, And):
        return f"({_operand(formula.left)} & {_operand(formula.right)})"
    if isinstance(formula, Or):
        return f"({_operand(formula.left)} | {_operand(formula.right)})"
    if isinstance(formula, Implies):
        return f"({_operand(formula.left)} -> {_operand(formula.right)})"
    if isinstance(formula, Iff):
        return f"({_operand(formula.left)} <-> {_operand(formula.right)})"
    if isinstance(formula, ForAll):
        return f"all {formula.var}. {print_formula(formula.body)}"
    if isinstance(formula, Exists):
        return f"ex {formula.var}. {print_formula(formula.body)}"
    if isinstance(formula, Knows):
        return f"K{formula.agent}({print_formula(formula.body)})"
    raise TypeError(f"not a formula: {formula!r}")


def _wrap(formula: Formula) -> str:
    text = print_formula(formula)
    if isinstance(formula, (OAtom, WAtom, EqAtom, Not, Knows)):
        return text
    if text.startswith("("):
        return text
    return f"({text})"


def _operand(formula: Formula) -> str:
    # Quantifiers scope maximally to the right, so they need parentheses
    # whenever they sit under a binary connective.
    text = print_formula(formula)
    if isinstance(formula, (ForAll, Exists)):
        return f"({text})"
    return text


# --- parsing --------------------------------------------------------------------


class FormulaParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class _FormulaParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise FormulaParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, n: int = 1) -> str:
        self.skip_ws()
        return self.text[self.pos:self.pos + n]

    def eat(self, token: str) -> bool:
        if self.peek(len(token)) == token:
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str):
        if not self.eat(token):
            self.error(f"expected {token!r}")

    def word(self) -> str:
        self.skip_ws()
        start = self.pos
        while (self.pos < len(self.text)
               and (self.text[self.pos].isalnum()
                    or self.text[self.pos] == "_")):
            self.pos += 1
        if self.pos == start:
            self.error("expected a name")
        return self.text[start:self.pos]

    def parse(self) -> Formula:
        formula = self.iff()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        return formula

    def iff(self) -> Formula:
        left = self.implies()
        if self.eat("<->"):
            return Iff(left, self.iff())
        return left

    def implies(self) -> Formula:
        left = self.or_()
        self.skip_ws()
        if (self.peek(3) != "<->" and self.eat("->")):
            return Implies(left, self.implies())
        return left

    def or_(self) -> Formula:
        left = self.and_()
        while self.eat("|"):
            left = Or(left, self.and_())
        return left

    def and_(self) -> Formula:
        left = self.unary()
        while self.eat("&"):
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        self.skip_ws()
        if self.eat("~"):
            return Not(self.unary())
        ch = self.peek()
        if ch == "(":
            self.expect("(")
            inner = self.iff()
            self.expect(")")
            return inner
        start = self.pos
        word = self.word()
        if word == "all" or word == "ex":
            var = self.word()
            if not var[0].isalpha() or not var.islower():
                self.error("quantified variables are lower-case names")
            self.expect(".")
            body = self.iff()
            return ForAll(var, body) if word == "all" else Exists(var, body)
        if word == "O" and self.peek() == "(":
            self.expect("(")
            term = self.term()
            self.expect(")")
            return OAtom(term)
        if word == "W" and self.peek() == "(":
            self.expect("(")
            member = self.term()
            self.expect(",")
            index = self.term()
            self.expect(")")
            return WAtom(member, index)
        if word.startswith("K") and len(word) > 1 and word[1:].isdigit():
            self.expect("(")
            body = self.iff()
            self.expect(")")
            return Knows(int(word[1:]), body)
        # an equality atom: term = term
        self.pos = start
        left = self.term()
        self.expect("=")
        right = self.term()
        return EqAtom(left, right)

    def term(self) -> Term:
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos].isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return Numeral(int(self.text[start:self.pos]))
        name = self.word()
        if not name[0].isalpha() or not name[0].islower():
            self.error("variables are lower-case names")
        return TermVar(name)


def parse_formula(text: str) -> Formula:
    return _FormulaParser(text).parse()
