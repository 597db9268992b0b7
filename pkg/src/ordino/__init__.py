"""Ordino: an ordinal notation workbench.

Exact Cantor-normal-form arithmetic below epsilon_0, a mini-language whose
programs notate ordinals, certificate-based verification of notated values,
a persistent registry of ordinal enumerators, and knowing agents measured
by the ordinals they can name.
"""
from .ordinal import (AT_LEAST_EPSILON0, EQUAL, GREATER, LESS, OMEGA, ONE,
                      ZERO, AddOmegaPow, AddOne, MulOmega, OmegaPow, Ordinal,
                      PowOmega, add, compare, from_int, iterate_sup, mul,
                      omega_pow, omega_term, parse_ord, print_ord, succ,
                      sup_plus_one)
from .onl import (Program, RunResult, parse_onl, print_onl, run,
                  value_bruteforce)
from .corpus import corpus, corpus_texts

__all__ = [
    "AT_LEAST_EPSILON0", "EQUAL", "GREATER", "LESS", "OMEGA", "ONE", "ZERO",
    "AddOmegaPow", "AddOne", "MulOmega", "OmegaPow", "Ordinal", "PowOmega",
    "add", "compare", "corpus", "corpus_texts", "from_int", "iterate_sup",
    "mul", "omega_pow", "omega_term", "parse_ord", "parse_onl", "print_ord",
    "print_onl", "Program", "run", "RunResult", "succ", "sup_plus_one",
    "value_bruteforce",
]
