"""Fundamental sequences and the fast-growing hierarchy.

The standard assignment of fundamental sequences to limits below
epsilon_0:

    (a + w^(b+1))[n] = a + w^b * n
    (a + w^L)[n]     = a + w^(L[n])      for limit L

and the Wainer-style hierarchy on top of it:

    f_0(n) = n + 1
    f_{a+1}(n) = f_a applied n times to n
    f_L(n) = f_{L[n]}(n)                 for limit L

Values explode, so evaluation is budgeted by the number of applications
of the base function.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .ordinal import Ordinal, ZERO, add, compare, from_int, mul, omega_term


class NotALimit(ValueError):
    pass


def fund_seq(a: Ordinal, n: int) -> Ordinal:
    """n-th member of the canonical sequence converging to a limit."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if not a.is_limit():
        raise NotALimit(f"{a!r} is zero or a successor")
    *prefix, (exp, coeff) = a.terms
    if coeff > 1:
        prefix = prefix + [(exp, coeff - 1)]
    head = Ordinal(tuple(prefix))
    if exp.is_successor():
        step = omega_term(_pred(exp))
        return add(head, mul(step, from_int(n)))
    return add(head, omega_term(fund_seq(exp, n)))


@dataclass(frozen=True)
class FghBudgetExceeded:
    applications: int


def fast_growing(a: Ordinal, n: int,
                 step_budget: int = 10**7) -> Union[int, FghBudgetExceeded]:
    """Exact value of f_a(n), or the budget marker."""
    if n < 0:
        raise ValueError("n must be >= 0")
    budget = [step_budget]

    class _Out(Exception):
        pass

    def go(alpha: Ordinal, m: int) -> int:
        budget[0] -= 1
        if budget[0] < 0:
            raise _Out()
        if alpha.is_zero():
            return m + 1
        if alpha.is_successor():
            below = _pred(alpha)
            value = m
            for _ in range(m):
                value = go(below, value)
            return value
        return go(fund_seq(alpha, m), m)

    try:
        return go(a, n)
    except _Out:
        return FghBudgetExceeded(step_budget)


def _pred(a: Ordinal) -> Ordinal:
    exp, coeff = a.terms[-1]
    assert exp.is_zero()
    if coeff == 1:
        return Ordinal(a.terms[:-1])
    return Ordinal(a.terms[:-1] + ((exp, coeff - 1),))
