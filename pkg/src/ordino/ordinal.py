"""Exact arithmetic for ordinals below epsilon_0 in Cantor normal form.

An ordinal is a finite sum  w^e1*c1 + w^e2*c2 + ... with exponents strictly
decreasing and coefficients >= 1; exponents are themselves ordinals of the
same kind.  The empty sum is 0.  Values at or above epsilon_0 are not
representable and are signalled by the `AT_LEAST_EPSILON0` marker, which
compares strictly greater than every representable ordinal.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

# Nesting-depth ceiling for omega_pow; exceeding it yields the overflow
# marker rather than an error.
DEFAULT_MAX_DEPTH = 64

LESS, EQUAL, GREATER = -1, 0, 1


class AtLeastEpsilon0:
    """Marker for values >= epsilon_0 (or beyond the depth ceiling)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "AT_LEAST_EPSILON0"

    def __eq__(self, other):
        return isinstance(other, AtLeastEpsilon0)

    def __hash__(self):
        return hash("AT_LEAST_EPSILON0")


AT_LEAST_EPSILON0 = AtLeastEpsilon0()


@dataclass(frozen=True)
class Ordinal:
    """Cantor normal form: tuple of (exponent, coefficient) pairs."""

    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        for exp, coeff in self.terms:
            if not isinstance(exp, Ordinal) or not isinstance(coeff, int):
                raise TypeError("terms must be (Ordinal, int) pairs")
            if coeff < 1:
                raise ValueError("coefficients must be >= 1")
        for (e1, _), (e2, _) in zip(self.terms, self.terms[1:]):
            if compare(e1, e2) != GREATER:
                raise ValueError("exponents must be strictly decreasing")

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def as_int(self) -> int:
        if not self.is_finite():
            raise ValueError("not a finite ordinal")
        return self.terms[0][1] if self.terms else 0

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def leading_exponent(self) -> "Ordinal":
        if not self.terms:
            raise ValueError("0 has no leading exponent")
        return self.terms[0][0]

    def depth(self) -> int:
        if not self.terms:
            return 0
        return 1 + max(e.depth() for e, _ in self.terms)

    def __lt__(self, other):
        return compare(self, other) == LESS

    def __le__(self, other):
        return compare(self, other) != GREATER

    def __gt__(self, other):
        return compare(self, other) == GREATER

    def __ge__(self, other):
        return compare(self, other) != LESS

    def __repr__(self):
        return f"Ordinal({print_ord(self)!r})"


OrdinalOrOverflow = Union[Ordinal, AtLeastEpsilon0]

ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("ordinals are non-negative")
    return Ordinal(((ZERO, n),)) if n else ZERO


def omega_term(exponent: Ordinal, coefficient: int = 1) -> Ordinal:
    """w^exponent * coefficient as a single-term ordinal."""
    return Ordinal(((exponent, coefficient),))


def compare(a: Ordinal, b: Ordinal) -> int:
    """Total order on canonical forms: LESS, EQUAL or GREATER."""
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c != EQUAL:
            return c
        if ca != cb:
            return LESS if ca < cb else GREATER
    if len(a.terms) == len(b.terms):
        return EQUAL
    return LESS if len(a.terms) < len(b.terms) else GREATER


def cmp_overflow(a: OrdinalOrOverflow, b: OrdinalOrOverflow) -> int:
    """compare() extended to the overflow marker (marker > every ordinal)."""
    am, bm = isinstance(a, AtLeastEpsilon0), isinstance(b, AtLeastEpsilon0)
    if am and bm:
        return EQUAL
    if am:
        return GREATER
    if bm:
        return LESS
    return compare(a, b)


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal addition; lower-order left terms are absorbed by b's head."""
    if b.is_zero():
        return a
    if a.is_zero():
        return b
    eb = b.terms[0][0]
    kept = [t for t in a.terms if compare(t[0], eb) == GREATER]
    merge = [t for t in a.terms if compare(t[0], eb) == EQUAL]
    if merge:
        head = (eb, merge[0][1] + b.terms[0][1])
        return Ordinal(tuple(kept) + (head,) + b.terms[1:])
    return Ordinal(tuple(kept) + b.terms)


def succ(a: Ordinal) -> Ordinal:
    return add(a, ONE)


def mul(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal multiplication (distributes over the right factor)."""
    if a.is_zero() or b.is_zero():
        return ZERO
    ea, ca = a.terms[0]
    result = ZERO
    for eb, cb in b.terms:
        if eb.is_zero():
            # a * finite: multiply the leading coefficient, keep the tail.
            piece = Ordinal(((ea, ca * cb),) + a.terms[1:])
        else:
            piece = omega_term(add(ea, eb), cb)
        result = add(result, piece)
    return result


def omega_pow(a: Ordinal, max_depth: int = DEFAULT_MAX_DEPTH) -> OrdinalOrOverflow:
    """w^a, or the overflow marker when the result would nest too deep."""
    if a.depth() + 1 > max_depth:
        return AT_LEAST_EPSILON0
    return omega_term(a)


def sup_plus_one(values: Iterable[Ordinal]) -> Ordinal:
    """Least strict upper bound of a finite set: 0 if empty, else max + 1."""
    best = None
    for v in values:
        if best is None or compare(v, best) == GREATER:
            best = v
    return ZERO if best is None else succ(best)


def sup_plus_one_overflow(values: Iterable[OrdinalOrOverflow]) -> OrdinalOrOverflow:
    vs = list(values)
    if any(isinstance(v, AtLeastEpsilon0) for v in vs):
        return AT_LEAST_EPSILON0
    return sup_plus_one(vs)


# --- closed-form suprema of iterated value maps -------------------------------
#
# iterate_sup(g, seed) is the least ordinal strictly greater than every
# g^i(seed), computed in closed form for the maps the certificate library
# uses.  The maps themselves:
#   AddOne         x -> x + 1
#   AddOmegaPow(b) x -> x + w^b
#   MulOmega       x -> x * w
#   PowOmega       x -> x ^ w
#   OmegaPow       x -> w ^ x


@dataclass(frozen=True)
class AddOne:
    pass


@dataclass(frozen=True)
class AddOmegaPow:
    beta: Ordinal


@dataclass(frozen=True)
class MulOmega:
    pass


@dataclass(frozen=True)
class PowOmega:
    pass


@dataclass(frozen=True)
class OmegaPow:
    pass


ValueMap = Union[AddOne, AddOmegaPow, MulOmega, PowOmega, OmegaPow]


class DegenerateSeed(ValueError):
    """Seed on which the map's iterates are not strictly increasing."""


def iterate_sup(g: ValueMap, seed: Ordinal,
                max_depth: int = DEFAULT_MAX_DEPTH) -> OrdinalOrOverflow:
    if isinstance(g, AddOne):
        return add(seed, OMEGA)
    if isinstance(g, AddOmegaPow):
        step = omega_pow(succ(g.beta), max_depth)
        if isinstance(step, AtLeastEpsilon0):
            return AT_LEAST_EPSILON0
        return add(seed, step)
    if isinstance(g, MulOmega):
        if seed.is_zero():
            raise DegenerateSeed("x * w is constant at 0")
        return mul(seed, omega_term(OMEGA))
    if isinstance(g, PowOmega):
        if seed.is_zero() or seed == ONE:
            raise DegenerateSeed("x ^ w is constant at 0 and 1")
        # sup of seed^(w^k).  For finite seeds the first iterate is already w;
        # in general the exponent climbs e1 * w^k, so the sup is
        # w^(e1 * w^w) with e1 the (infinite-case) leading exponent.
        e1 = ONE if seed.is_finite() else seed.leading_exponent()
        exponent = mul(e1, omega_term(OMEGA))
        return omega_pow(exponent, max_depth)
    if isinstance(g, OmegaPow):
        return AT_LEAST_EPSILON0
    raise TypeError(f"unknown value map: {g!r}")


# --- textual grammar ----------------------------------------------------------
#
#   ord  := "0" | term ("+" term)*
#   term := "w" ["^" "(" ord ")" | "^" digit+] ["*" digit+] | digit+
#
# Whitespace is insignificant.  The printer emits the canonical spelling:
# exponent-0 terms as bare integers, exponent 1 as bare "w", finite exponents
# as "w^n", infinite exponents as "w^(...)", and "*c" omitted when c = 1.
# The parser rejects non-canonical sums (exponents not strictly decreasing).


class OrdinalParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class _OrdParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise OrdinalParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def digits(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise OrdinalParseError("expected digits", start)
        return int(self.text[start:self.pos])

    def parse(self) -> Ordinal:
        value = self.ord_()
        self.skip_ws()
        if self.pos != len(self.text):
            raise OrdinalParseError("trailing input", self.pos)
        return value

    def ord_(self) -> Ordinal:
        if self.peek() == "0":
            save = self.pos
            self.pos += 1
            # A bare 0 only stands alone; "03" is malformed, "0 + w" too.
            if self.peek().isdigit():
                raise OrdinalParseError("malformed numeral", save)
            if self.peek() == "+":
                raise OrdinalParseError("0 cannot appear in a sum", self.pos)
            return ZERO
        terms = [self.term()]
        while self.peek() == "+":
            self.pos += 1
            terms.append(self.term())
        for (e1, _), (e2, _) in zip(terms, terms[1:]):
            if compare(e1, e2) != GREATER:
                raise OrdinalParseError(
                    "non-canonical: exponents must strictly decrease", self.pos)
        return Ordinal(tuple(terms))

    def term(self) -> tuple[Ordinal, int]:
        self.skip_ws()
        start = self.pos
        ch = self.peek()
        if ch == "w":
            self.pos += 1
            exponent = ONE
            if self.peek() == "^":
                self.pos += 1
                if self.peek() == "(":
                    self.pos += 1
                    exponent = self.ord_()
                    self.expect(")")
                else:
                    exponent = from_int(self.digits())
            coeff = 1
            if self.peek() == "*":
                self.pos += 1
                coeff = self.digits()
                if coeff < 1:
                    raise OrdinalParseError("coefficient must be >= 1", start)
            return (exponent, coeff)
        if ch.isdigit():
            n = self.digits()
            if n < 1:
                raise OrdinalParseError("coefficient must be >= 1", start)
            return (ZERO, n)
        raise OrdinalParseError("expected term", start)


def parse_ord(text: str) -> Ordinal:
    return _OrdParser(text).parse()


def print_ord(a: Ordinal) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if exp.is_zero():
            parts.append(str(coeff))
            continue
        if exp == ONE:
            body = "w"
        elif exp.is_finite():
            body = f"w^{exp.as_int()}"
        else:
            body = f"w^({print_ord(exp)})"
        parts.append(body if coeff == 1 else f"{body}*{coeff}")
    return " + ".join(parts)


def print_overflow(a: OrdinalOrOverflow) -> str:
    return "E0" if isinstance(a, AtLeastEpsilon0) else print_ord(a)


def parse_overflow(text: str) -> OrdinalOrOverflow:
    return AT_LEAST_EPSILON0 if text.strip() == "E0" else parse_ord(text)
