"""ONL: the Print/Let/While mini-language whose programs notate ordinals.

Grammar (whitespace insignificant, statements separated by ';'):

    program := stmt (';' stmt)*
    stmt    := 'End'
             | 'Print' '(' sexpr ')'
             | 'Let' IDENT '=' sexpr
             | 'While' '(' 'True' ')' '{' program '}'
    sexpr   := STRING | IDENT | 'quote' '(' sexpr ')' | sexpr '+' sexpr

STRING literals are double-quoted with \\" and \\\\ escapes.  quote(e)
evaluates e and re-wraps it as a string literal, which is what lets one
program build deeper and deeper programs without drowning in escapes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .ordinal import Ordinal, sup_plus_one

DEFAULT_STEP_BUDGET = 10**6
DEFAULT_OUTPUT_BUDGET = 10**3
DEFAULT_DEPTH_BUDGET = 32

KEYWORDS = {"End", "Print", "Let", "While", "True", "quote"}


# --- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    value: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Concat:
    left: "StrExpr"
    right: "StrExpr"


@dataclass(frozen=True)
class Quote:
    inner: "StrExpr"


StrExpr = Union[Literal, Var, Concat, Quote]


@dataclass(frozen=True)
class End:
    pass


@dataclass(frozen=True)
class Print:
    expr: StrExpr


@dataclass(frozen=True)
class Let:
    name: str
    expr: StrExpr


@dataclass(frozen=True)
class WhileTrue:
    body: tuple["Stmt", ...]


Stmt = Union[End, Print, Let, WhileTrue]


@dataclass(frozen=True)
class Program:
    statements: tuple[Stmt, ...]


# --- escaping -----------------------------------------------------------------


def escape_string(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def quote_string(s: str) -> str:
    """Render s as ONL string-literal source text."""
    return '"' + escape_string(s) + '"'


# --- errors -------------------------------------------------------------------


class OnlError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class OnlLexError(OnlError):
    pass


class OnlSyntaxError(OnlError):
    pass


class OnlUnboundVariable(OnlError):
    pass


# --- lexer --------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, STRING, or a literal symbol
    text: str
    line: int
    col: int


def lex(source: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(source)

    def error(msg):
        raise OnlLexError(msg, line, col)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        start_line, start_col = line, col
        if ch in ";=(){}+":
            tokens.append(Token(ch, ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == '"':
            i += 1
            col += 1
            chars = []
            while True:
                if i >= n:
                    error("unterminated string literal")
                c = source[i]
                if c == "\n":
                    error("newline in string literal")
                if c == "\\":
                    if i + 1 >= n:
                        error("unterminated escape")
                    nxt = source[i + 1]
                    if nxt not in ('"', "\\"):
                        error(f"bad escape \\{nxt}")
                    chars.append(nxt)
                    i += 2
                    col += 2
                    continue
                if c == '"':
                    i += 1
                    col += 1
                    break
                chars.append(c)
                i += 1
                col += 1
            tokens.append(Token("STRING", "".join(chars), start_line, start_col))
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            col += j - i
            i = j
            tokens.append(Token("IDENT", word, start_line, start_col))
            continue
        error(f"unexpected character {ch!r}")
    return tokens


# --- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token], source: str):
        self.tokens = tokens
        self.pos = 0
        self.source = source

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def error(self, msg: str):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            line = last.line if last else 1
            col = (last.col + len(last.text)) if last else 1
            raise OnlSyntaxError(msg + " (at end of input)", line, col)
        raise OnlSyntaxError(f"{msg}, found {tok.text!r}", tok.line, tok.col)

    def take(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            self.error(f"expected {want!r}")
        self.pos += 1
        return tok

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "IDENT" and tok.text == word

    def parse_program(self) -> tuple[Stmt, ...]:
        stmts = [self.parse_stmt()]
        while self.peek() is not None and self.peek().kind == ";":
            self.take(";")
            stmts.append(self.parse_stmt())
        return tuple(stmts)

    def parse_block(self) -> tuple[Stmt, ...]:
        stmts = [self.parse_stmt()]
        while self.peek() is not None and self.peek().kind == ";":
            self.take(";")
            stmts.append(self.parse_stmt())
        return tuple(stmts)

    def parse_stmt(self) -> Stmt:
        if self.at_keyword("End"):
            self.take("IDENT")
            return End()
        if self.at_keyword("Print"):
            self.take("IDENT")
            self.take("(")
            expr = self.parse_expr()
            self.take(")")
            return Print(expr)
        if self.at_keyword("Let"):
            self.take("IDENT")
            name_tok = self.peek()
            if name_tok is None or name_tok.kind != "IDENT":
                self.error("expected identifier after Let")
            if name_tok.text in KEYWORDS:
                self.error(f"{name_tok.text!r} is a keyword")
            self.take("IDENT")
            self.take("=")
            expr = self.parse_expr()
            return Let(name_tok.text, expr)
        if self.at_keyword("While"):
            self.take("IDENT")
            self.take("(")
            if not self.at_keyword("True"):
                self.error("While condition must be True")
            self.take("IDENT")
            self.take(")")
            self.take("{")
            body = self.parse_block()
            self.take("}")
            return WhileTrue(body)
        self.error("expected statement")

    def parse_expr(self) -> StrExpr:
        left = self.parse_atom()
        while self.peek() is not None and self.peek().kind == "+":
            self.take("+")
            right = self.parse_atom()
            left = Concat(left, right)
        return left

    def parse_atom(self) -> StrExpr:
        tok = self.peek()
        if tok is None:
            self.error("expected expression")
        if tok.kind == "STRING":
            self.take("STRING")
            return Literal(tok.text)
        if tok.kind == "IDENT":
            if tok.text == "quote":
                self.take("IDENT")
                self.take("(")
                inner = self.parse_expr()
                self.take(")")
                return Quote(inner)
            if tok.text in KEYWORDS:
                self.error(f"{tok.text!r} is a keyword")
            self.take("IDENT")
            return Var(tok.text)
        self.error("expected expression")


def _check_bound(statements: tuple[Stmt, ...], bound: set[str]) -> set[str]:
    """Every Var must be preceded by a Let on its textual path."""
    for stmt in statements:
        if isinstance(stmt, Print):
            _check_expr_bound(stmt.expr, bound)
        elif isinstance(stmt, Let):
            _check_expr_bound(stmt.expr, bound)
            bound = bound | {stmt.name}
        elif isinstance(stmt, WhileTrue):
            bound = _check_bound(stmt.body, bound)
    return bound


def _check_expr_bound(expr: StrExpr, bound: set[str]):
    if isinstance(expr, Var):
        if expr.name not in bound:
            raise OnlUnboundVariable(f"unbound variable {expr.name!r}", 0, 0)
    elif isinstance(expr, Concat):
        _check_expr_bound(expr.left, bound)
        _check_expr_bound(expr.right, bound)
    elif isinstance(expr, Quote):
        _check_expr_bound(expr.inner, bound)


def parse_onl(source: str) -> Program:
    tokens = lex(source)
    if not tokens:
        raise OnlSyntaxError("empty program", 1, 1)
    parser = _Parser(tokens, source)
    stmts = parser.parse_program()
    if parser.peek() is not None:
        parser.error("trailing input")
    _check_bound(stmts, set())
    return Program(stmts)


# --- printer ------------------------------------------------------------------


def print_expr(expr: StrExpr) -> str:
    if isinstance(expr, Literal):
        return quote_string(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Quote):
        return f"quote({print_expr(expr.inner)})"
    if isinstance(expr, Concat):
        return f"{print_expr(expr.left)} + {print_expr(expr.right)}"
    raise TypeError(f"not an expression: {expr!r}")


def print_stmt(stmt: Stmt) -> str:
    if isinstance(stmt, End):
        return "End"
    if isinstance(stmt, Print):
        return f"Print({print_expr(stmt.expr)})"
    if isinstance(stmt, Let):
        return f"Let {stmt.name} = {print_expr(stmt.expr)}"
    if isinstance(stmt, WhileTrue):
        body = "; ".join(print_stmt(s) for s in stmt.body)
        return "While(True) { " + body + " }"
    raise TypeError(f"not a statement: {stmt!r}")


def print_onl(program: Program) -> str:
    return "; ".join(print_stmt(s) for s in program.statements)


# --- interpreter --------------------------------------------------------------


@dataclass(frozen=True)
class Halted:
    steps: int


@dataclass(frozen=True)
class BudgetExceeded:
    kind: str  # "steps" or "outputs"


RunStatus = Union[Halted, BudgetExceeded]


@dataclass(frozen=True)
class RunResult:
    outputs: tuple[str, ...]
    status: RunStatus


class _Stop(Exception):
    def __init__(self, status: RunStatus):
        self.status = status


def _eval_expr(expr: StrExpr, env: dict[str, str]) -> str:
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, Var):
        return env[expr.name]
    if isinstance(expr, Concat):
        return _eval_expr(expr.left, env) + _eval_expr(expr.right, env)
    if isinstance(expr, Quote):
        return quote_string(_eval_expr(expr.inner, env))
    raise TypeError(f"not an expression: {expr!r}")


class _Runner:
    # Step cost of a statement is 1 plus the length of any string it
    # evaluates; that bounds both time and memory by the step budget.

    def __init__(self, step_budget: int, output_budget: int):
        self.steps_left = step_budget
        self.output_budget = output_budget
        self.outputs: list[str] = []
        self.env: dict[str, str] = {}
        self.steps_used = 0

    def charge(self, amount: int):
        self.steps_used += amount
        self.steps_left -= amount
        if self.steps_left < 0:
            raise _Stop(BudgetExceeded("steps"))

    def exec_block(self, statements: tuple[Stmt, ...]):
        for stmt in statements:
            if isinstance(stmt, End):
                self.charge(1)
                raise _Stop(Halted(self.steps_used))
            if isinstance(stmt, Print):
                value = _eval_expr(stmt.expr, self.env)
                self.charge(1 + len(value))
                if len(self.outputs) + 1 > self.output_budget:
                    raise _Stop(BudgetExceeded("outputs"))
                self.outputs.append(value)
            elif isinstance(stmt, Let):
                value = _eval_expr(stmt.expr, self.env)
                self.charge(1 + len(value))
                self.env[stmt.name] = value
            elif isinstance(stmt, WhileTrue):
                while True:
                    self.charge(1)
                    self.exec_block(stmt.body)


def run(program: Program,
        step_budget: int = DEFAULT_STEP_BUDGET,
        output_budget: int = DEFAULT_OUTPUT_BUDGET) -> RunResult:
    if step_budget < 0 or output_budget < 0:
        raise ValueError("budgets must be >= 0")
    runner = _Runner(step_budget, output_budget)
    try:
        runner.exec_block(program.statements)
    except _Stop as stop:
        return RunResult(tuple(runner.outputs), stop.status)
    return RunResult(tuple(runner.outputs), Halted(runner.steps_used))


# --- brute-force valuation ----------------------------------------------------


@dataclass(frozen=True)
class Unknown:
    reason: str  # "non-halting-within-budget" | "unparseable-output" | "depth-exceeded"
    detail: str = ""


NON_HALTING = "non-halting-within-budget"
UNPARSEABLE = "unparseable-output"
DEPTH_EXCEEDED = "depth-exceeded"


def value_bruteforce(program: Program,
                     step_budget: int = DEFAULT_STEP_BUDGET,
                     output_budget: int = DEFAULT_OUTPUT_BUDGET,
                     depth_budget: int = DEFAULT_DEPTH_BUDGET,
                     _memo: Optional[dict[str, Union[Ordinal, Unknown]]] = None,
                     ) -> Union[Ordinal, Unknown]:
    """Value by direct recursion: run, value every output, take sup + 1.

    Any obstruction (non-halting within budget, an output that is not an ONL
    program, recursion deeper than depth_budget) yields Unknown.
    """
    memo = _memo if _memo is not None else {}
    return _bruteforce(program, step_budget, output_budget, depth_budget, memo)


def _bruteforce(program, step_budget, output_budget, depth_budget, memo):
    # Depth-exceeded outcomes depend on the position in the recursion, so
    # only depth-independent results are memoized.
    key = print_onl(program)
    if key in memo:
        return memo[key]
    if depth_budget < 0:
        return Unknown(DEPTH_EXCEEDED)
    result = run(program, step_budget, output_budget)
    if not isinstance(result.status, Halted):
        out = Unknown(NON_HALTING)
        memo[key] = out
        return out
    values = []
    for i, text in enumerate(result.outputs):
        try:
            sub = parse_onl(text)
        except OnlError as exc:
            out = Unknown(UNPARSEABLE, f"output {i}: {exc}")
            memo[key] = out
            return out
        sub_value = _bruteforce(sub, step_budget, output_budget,
                                depth_budget - 1, memo)
        if isinstance(sub_value, Unknown):
            if sub_value.reason == DEPTH_EXCEEDED:
                return sub_value
            out = Unknown(sub_value.reason, f"output {i}: {sub_value.detail}")
            memo[key] = out
            return out
        values.append(sub_value)
    value = sup_plus_one(values)
    memo[key] = value
    return value
