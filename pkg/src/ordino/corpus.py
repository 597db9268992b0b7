"""Built-in ONL programs with known ordinal values.

The nine classic notations (0, 1, 2, w, w+1, w+2, w*2, w*3, w^2) are
rendered directly.  The workbench entries for w^3, w^w, w^w^w and the
epsilon_0 iterator come from a tower of "lift" machines:

* grade-j loop steps rho_j wrap a program into a loop that adds w^j;
* a two-variable machine re-quotes its own step source each turn, so its
  outputs are loops one grade deeper each time (multiplies the value by w);
* lifting the machine-building glue itself climbs one exponent-tower stage
  per turn (raises the value to the power w);
* a four-variable diagonal advances the whole machine level each turn
  (exponentiates w by the value).

Every step expression is built as an ONL AST and printed canonically, so
the machine texts, the certificate matcher and the output predictors all
share one definition.  The predictor functions at the bottom mirror the
steps in plain Python string operations.
"""
from __future__ import annotations

from .onl import (Concat, Literal, Program, Quote, StrExpr, Var, parse_onl,
                  print_expr, quote_string)


def _expr(*pieces) -> StrExpr:
    """Left-associated concatenation; strings become literals."""
    exprs = [Literal(p) if isinstance(p, str) else p for p in pieces]
    out = exprs[0]
    for e in exprs[1:]:
        out = Concat(out, e)
    return out


X, S, A, B, C, BO = Var("X"), Var("S"), Var("A"), Var("B"), Var("C"), Var("BO")


# --- grade-j loop steps ---------------------------------------------------------

TAU0_AST = _expr("Print(", Quote(X), ")")
TAU0 = print_expr(TAU0_AST)


def loop_suffix(step_src: str) -> str:
    return "; While(True) { Print(X); Let X = " + step_src + " }"


def rho_ast(j: int) -> StrExpr:
    if j == 0:
        return TAU0_AST
    return _expr("Let X = ", Quote(X), loop_suffix(rho(j - 1)))


def rho(j: int) -> str:
    return print_expr(rho_ast(j))


def apply_step(grade: int, text: str) -> str:
    """Textually apply a grade-j step to a program text."""
    if grade == 0:
        return "Print(" + quote_string(text) + ")"
    return "Let X = " + quote_string(text) + loop_suffix(rho(grade - 1))


def loop_program(seed_text: str, step_grade: int) -> str:
    """Print-first loop: prints the seed, then ever deeper wraps of it."""
    return "Let X = " + quote_string(seed_text) + loop_suffix(rho(step_grade))


# --- the two-variable machine (value map x -> x * w) ----------------------------

XSTEP1_AST = _expr("Let X = ", Quote(X),
                   "; While(True) { Print(X); Let X = ", S, " }")
SSTEP1_AST = _expr('"Let X = " + quote(X) + ',
                   Quote(_expr("; While(True) { Print(X); Let X = ", S, " }")))
XSTEP1 = print_expr(XSTEP1_AST)
SSTEP1 = print_expr(SSTEP1_AST)


def machine2(s_seed_src: str, x_seed_text: str) -> str:
    return ("Let S = " + quote_string(s_seed_src) +
            "; Let X = " + quote_string(x_seed_text) +
            "; While(True) { Print(X); Let X = " + XSTEP1 +
            "; Let S = " + SSTEP1 + " }")


# --- lifting the glue (value map x -> x ^ w) ------------------------------------

# S holds a "builder": an expression, free in X, that wraps a program text
# into a two-variable machine.  builder_lift produces the next builder,
# whose machines use the previous builder as their own S step.
BUILDER_PREFIX = ('quote("Let S = " + quote(S) + "; Let X = ") + '
                  '" + quote(X) + " + ')


def builder_lift(eta_src: str) -> str:
    tail = ("; While(True) { Print(X); Let X = " + XSTEP1 +
            "; Let S = " + eta_src + " }")
    return BUILDER_PREFIX + quote_string(quote_string(tail))


XSTEP2_AST = _expr("Let S = " + quote_string(TAU0) + "; Let X = ", Quote(X),
                   "; While(True) { Print(X); Let X = " + XSTEP1 + "; Let S = ",
                   S, " }")
SSTEP2_AST = _expr(BUILDER_PREFIX,
                   Quote(Quote(_expr(
                       "; While(True) { Print(X); Let X = " + XSTEP1 +
                       "; Let S = ", S, " }"))))
XSTEP2 = print_expr(XSTEP2_AST)
SSTEP2 = print_expr(SSTEP2_AST)


def machine3(s_seed_src: str, x_seed_text: str) -> str:
    return ("Let S = " + quote_string(s_seed_src) +
            "; Let X = " + quote_string(x_seed_text) +
            "; While(True) { Print(X); Let X = " + XSTEP2 +
            "; Let S = " + SSTEP2 + " }")


# --- the diagonal over machine levels (value map x -> w ^ x) --------------------

# State (A, B, C, X): the triple presents the current machine level (its S
# seed, X step and S step); X holds the last emitted program.  Each turn
# emits the level machine seeded with X, then advances the triple.  BO
# stashes B so every update reads the pre-turn values.
DIAG_XSTEP_AST = _expr('Let S = ', Quote(A), "; Let X = ", Quote(X),
                       "; While(True) { Print(X); Let X = ", B,
                       "; Let S = ", C, " }")
DIAG_BSTEP_AST = _expr('"Let S = " + ', Quote(Quote(A)),
                       ' + "; Let X = " + quote(X) + '
                       '"; While(True) { Print(X); Let X = " + ', Quote(BO),
                       ' + "; Let S = " + S + " }"')
DIAG_ASTEP_AST = _expr(BUILDER_PREFIX,
                       Quote(Quote(_expr(
                           "; While(True) { Print(X); Let X = ", BO,
                           "; Let S = ", C, " }"))))
DIAG_CSTEP_AST = _expr(quote_string(BUILDER_PREFIX) + " + quote(quote(",
                       Quote(_expr("; While(True) { Print(X); Let X = ", BO,
                                   "; Let S = ")),
                       ' + S + " }"))')
DIAG_XSTEP = print_expr(DIAG_XSTEP_AST)
DIAG_BSTEP = print_expr(DIAG_BSTEP_AST)
DIAG_ASTEP = print_expr(DIAG_ASTEP_AST)
DIAG_CSTEP = print_expr(DIAG_CSTEP_AST)


def machine4(x_seed_text: str) -> str:
    return ("Let A = " + quote_string(TAU0) +
            "; Let B = " + quote_string(XSTEP1) +
            "; Let C = " + quote_string(SSTEP1) +
            "; Let X = " + quote_string(x_seed_text) +
            "; While(True) { Print(X)" +
            "; Let X = " + DIAG_XSTEP +
            "; Let BO = B" +
            "; Let B = " + DIAG_BSTEP +
            "; Let A = " + DIAG_ASTEP +
            "; Let C = " + DIAG_CSTEP + " }")


# --- plain-Python mirrors of the machine steps (used to predict outputs) -------


def machine2_step(s: str, x: str) -> tuple[str, str]:
    new_x = ("Let X = " + quote_string(x) +
             "; While(True) { Print(X); Let X = " + s + " }")
    new_s = ('"Let X = " + quote(X) + ' +
             quote_string("; While(True) { Print(X); Let X = " + s + " }"))
    return new_s, new_x


def machine3_step(s: str, x: str) -> tuple[str, str]:
    new_x = ("Let S = " + quote_string(TAU0) +
             "; Let X = " + quote_string(x) +
             "; While(True) { Print(X); Let X = " + XSTEP1 +
             "; Let S = " + s + " }")
    return builder_lift(s), new_x


def machine4_step(a: str, b: str, c: str, x: str) -> tuple[str, str, str, str]:
    new_x = ("Let S = " + quote_string(a) +
             "; Let X = " + quote_string(x) +
             "; While(True) { Print(X); Let X = " + b + "; Let S = " + c + " }")
    new_b = ('"Let S = " + ' + quote_string(quote_string(a)) +
             ' + "; Let X = " + quote(X) + '
             '"; While(True) { Print(X); Let X = " + ' + quote_string(b) +
             ' + "; Let S = " + S + " }"')
    new_a = (BUILDER_PREFIX + quote_string(quote_string(
        "; While(True) { Print(X); Let X = " + b + "; Let S = " + c + " }")))
    new_c = (quote_string(BUILDER_PREFIX) + " + quote(quote(" +
             quote_string("; While(True) { Print(X); Let X = " + b +
                          "; Let S = ") +
             ' + S + " }"))')
    return new_a, new_b, new_c, new_x


# --- the corpus -----------------------------------------------------------------

P0 = "End"
P1 = 'Print("End")'
P2 = "Print(" + quote_string(P1) + ")"
PW = loop_program(P0, 0)
PW_PLUS_1 = "Print(" + quote_string(PW) + ")"
PW_PLUS_2 = "Print(" + quote_string(PW_PLUS_1) + ")"
PW_TIMES_2 = loop_program(PW, 0)
PW_TIMES_3 = loop_program(PW_TIMES_2, 0)

# The two-loop LEFT/RIGHT rendering: the inner loop text is assembled at
# run time around an ever deeper quoted seed.
PW2 = ('Let LEFT = "Let X = "'
       "; Let RIGHT = " + quote_string(loop_suffix(TAU0)) +
       '; Let X = "End"'
       "; While(True) { Let X = LEFT + quote(X) + RIGHT; Print(X) }")

PW3 = loop_program(P0, 2)
PWW = machine2(TAU0, P1)
PWWW = machine3(builder_lift(SSTEP1), PWW)
PEPS0 = machine4(PW)


def corpus_texts() -> dict[str, str]:
    return {
        "P0": P0,
        "P1": P1,
        "P2": P2,
        "Pw": PW,
        "Pw+1": PW_PLUS_1,
        "Pw+2": PW_PLUS_2,
        "Pw*2": PW_TIMES_2,
        "Pw*3": PW_TIMES_3,
        "Pw2": PW2,
        "Pw3": PW3,
        "Pww": PWW,
        "Pwww": PWWW,
        "Peps0": PEPS0,
    }


def corpus() -> dict[str, Program]:
    """All built-in notations, keyed by name, as parsed programs."""
    return {name: parse_onl(text) for name, text in corpus_texts().items()}


# Expected certified values in the ordinal grammar ("E0" marks >= epsilon_0).
CORPUS_VALUES = {
    "P0": "0",
    "P1": "1",
    "P2": "2",
    "Pw": "w",
    "Pw+1": "w + 1",
    "Pw+2": "w + 2",
    "Pw*2": "w*2",
    "Pw*3": "w*3",
    "Pw2": "w^2",
    "Pw3": "w^3",
    "Pww": "w^(w)",
    "Pwww": "w^(w^(w))",
    "Peps0": "E0",
}

PAPER_ENTRIES = ["P0", "P1", "P2", "Pw", "Pw+1", "Pw+2", "Pw*2", "Pw*3", "Pw2"]
EXERCISE_ENTRIES = ["Pw3", "Pww", "Pwww", "Peps0"]
