"""Bounded three-valued checking of sentences against the standard reading.

The intended model interprets O as the certified notation set and W by
enumeration, both only semi-decidable, so atoms evaluate to true, false
or unknown and connectives follow the strong Kleene tables.  Quantifiers
range over 0..domain_bound.  Growing the enumeration budgets can resolve
unknowns but never flips a settled verdict.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .agents import AgentSpec, enumerate_knowledge
from .formulas import (And, EqAtom, Exists, ForAll, Formula, Iff, Implies,
                       Knows, Not, Numeral, OAtom, Or, Term, TermVar, WAtom,
                       canonical)
from .registry import Registry, Unverified

TRUE, FALSE, UNKNOWN = "true", "false", "unknown"


@dataclass(frozen=True)
class ModelConfig:
    domain_bound: int = 8
    enum_budget: int = 256
    knowledge_budget: int = 512


def _not3(v: str) -> str:
    if v == TRUE:
        return FALSE
    if v == FALSE:
        return TRUE
    return UNKNOWN


def _and3(a: str, b: str) -> str:
    if a == FALSE or b == FALSE:
        return FALSE
    if a == TRUE and b == TRUE:
        return TRUE
    return UNKNOWN


def _or3(a: str, b: str) -> str:
    return _not3(_and3(_not3(a), _not3(b)))


def _implies3(a: str, b: str) -> str:
    return _or3(_not3(a), b)


def _iff3(a: str, b: str) -> str:
    return _and3(_implies3(a, b), _implies3(b, a))


class BoundedModel:
    def __init__(self, registry: Registry,
                 agents: Optional[dict[int, AgentSpec]] = None,
                 config: ModelConfig = ModelConfig()):
        self.registry = registry
        self.agents = agents or {}
        self.config = config
        self._knowledge_cache: dict[int, set] = {}

    def _o_atom(self, n: int) -> str:
        try:
            outcome = self.registry.o_value(n)
        except KeyError:
            return UNKNOWN
        return UNKNOWN if isinstance(outcome, Unverified) else TRUE

    def _w_atom(self, m: int, n: int) -> str:
        try:
            seen = self.registry.w_member(m, n, self.config.enum_budget)
        except KeyError:
            return UNKNOWN
        return TRUE if seen == "yes" else UNKNOWN

    def _knows(self, agent_id: int, body: Formula) -> str:
        if agent_id not in self.agents:
            return UNKNOWN
        if agent_id not in self._knowledge_cache:
            sentences = enumerate_knowledge(
                self.agents[agent_id], self.config.knowledge_budget)
            self._knowledge_cache[agent_id] = {canonical(s)
                                               for s in sentences}
        if canonical(body) in self._knowledge_cache[agent_id]:
            return TRUE
        return UNKNOWN

    def eval(self, formula: Formula,
             assignment: Optional[dict[str, int]] = None) -> str:
        env = assignment or {}
        return self._eval(formula, env)

    def _term(self, term: Term, env: dict[str, int]) -> int:
        if isinstance(term, Numeral):
            return term.value
        if term.name not in env:
            raise ValueError(f"free variable {term.name!r} in evaluation")
        return env[term.name]

    def _eval(self, formula: Formula, env: dict[str, int]) -> str:
        if isinstance(formula, OAtom):
            return self._o_atom(self._term(formula.term, env))
        if isinstance(formula, WAtom):
            return self._w_atom(self._term(formula.member, env),
                                self._term(formula.index, env))
        if isinstance(formula, EqAtom):
            left = self._term(formula.left, env)
            right = self._term(formula.right, env)
            return TRUE if left == right else FALSE
        if isinstance(formula, Not):
            return _not3(self._eval(formula.body, env))
        if isinstance(formula, And):
            return _and3(self._eval(formula.left, env),
                         self._eval(formula.right, env))
        if isinstance(formula, Or):
            return _or3(self._eval(formula.left, env),
                        self._eval(formula.right, env))
        if isinstance(formula, Implies):
            return _implies3(self._eval(formula.left, env),
                             self._eval(formula.right, env))
        if isinstance(formula, Iff):
            return _iff3(self._eval(formula.left, env),
                         self._eval(formula.right, env))
        if isinstance(formula, ForAll):
            verdict = TRUE
            for value in range(self.config.domain_bound + 1):
                inner = dict(env)
                inner[formula.var] = value
                verdict = _and3(verdict, self._eval(formula.body, inner))
                if verdict == FALSE:
                    return FALSE
            return verdict
        if isinstance(formula, Exists):
            verdict = FALSE
            for value in range(self.config.domain_bound + 1):
                inner = dict(env)
                inner[formula.var] = value
                verdict = _or3(verdict, self._eval(formula.body, inner))
                if verdict == TRUE:
                    return TRUE
            return verdict
        if isinstance(formula, Knows):
            return self._knows(formula.agent, formula.body)
        raise TypeError(f"not a formula: {formula!r}")


def bounded_model_check(sentence: Formula, registry: Registry,
                        agents: Optional[dict[int, AgentSpec]] = None,
                        config: ModelConfig = ModelConfig()) -> str:
    """Evaluate a sentence; returns 'true', 'false' or 'unknown'."""
    return BoundedModel(registry, agents, config).eval(sentence)
