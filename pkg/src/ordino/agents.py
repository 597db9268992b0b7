"""Knowing agents, their ordinal measure, and total endorsement.

An agent is a finite presentation of a knowledge set: base sentences,
claimed notation indices, schema flags (the closure axiom for the
notation set, truthfulness of other agents), code tables mapping formula
templates about another agent to enumerator indices, and a closure budget
for modus ponens.  `enumerate_knowledge` realizes the set as a
deterministic, prefix-monotone list.

`measure` computes the least ordinal above every value the agent claims
a notation for.  `build_total_endorser` mechanizes the step from an agent
to a strictly more knowledgeable one: it registers an enumerator of the
endorsed agent's claims, installs the truthfulness schema and the code
sentence, derives O(n) for the fresh index by two tautology/modus-ponens
steps and one instance of the closure axiom, and records the derivation
as a replayable transcript.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Union

from .formulas import (ForAll, Formula, Iff, Implies, Knows, Not, Numeral,
                       OAtom, Or, TermVar, WAtom, canonical, parse_formula,
                       print_formula, axiom_of_o, axiom_of_o_instance)
from .onl import Program, parse_onl, print_onl, run, Halted
from .ordinal import (AtLeastEpsilon0, OrdinalOrOverflow, cmp_overflow,
                      sup_plus_one_overflow)
from .registry import Registry, UnknownIndex, Unverified
from .certs import Verified

DEFAULT_ENUM_BUDGET = 10**4

O_OF_X_TEMPLATE = "O(x)"


class UntruthfulAgent(ValueError):
    """An enumerated notation claim failed verification."""


class NonExactMeasure(ValueError):
    """The agent's claim enumeration cannot be shown complete."""


class MeasureOverflow(ValueError):
    """The agent's measure leaves the representable range."""


class SelfEndorsement(ValueError):
    """An agent cannot totally endorse itself."""


@dataclass(frozen=True)
class CodeEntry:
    """K_i's code for agent j's knowledge of one formula template:
    the sentence  all x. (Kj(phi(x)) <-> W(x, n))."""
    target_agent: int
    template: str  # formula with free variable x, e.g. "O(x)"
    index: int


@dataclass(frozen=True)
class Schemas:
    knows_axiom_of_o: bool = False
    truthfulness_of: frozenset[int] = frozenset()


@dataclass(frozen=True)
class AgentSpec:
    id: int
    base: tuple[Formula, ...] = ()
    o_claims: tuple[int, ...] = ()        # registry indices claimed in O(.)
    schemas: Schemas = Schemas()
    code_tables: tuple[CodeEntry, ...] = ()
    closure_budget: int = 2
    extra_enumerator: Optional[Program] = None  # sentences as ONL outputs

    def content_address(self) -> str:
        """Identity by presentation, ignoring the numeric id."""
        import hashlib
        payload = json.dumps(agent_to_dict(self, include_id=False),
                             sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class MeasureResult:
    bound: OrdinalOrOverflow
    exact: bool
    witnesses: tuple[tuple[int, OrdinalOrOverflow], ...]


@dataclass(frozen=True)
class TranscriptStep:
    label: str
    sentence: Formula
    justification: str


@dataclass(frozen=True)
class EndorsementTranscript:
    endorser: int
    endorsed: int
    index: int
    steps: tuple[TranscriptStep, ...]


# --- knowledge enumeration ------------------------------------------------------


def enumerate_knowledge(agent: AgentSpec,
                        budget: int = DEFAULT_ENUM_BUDGET) -> list[Formula]:
    """Deterministic, prefix-monotone listing of the agent's knowledge.

    Order: base sentences, notation claims, the closure axiom and its
    per-index instances, truthfulness instances, code sentences, simple
    tautology instances over sentences seen so far, then modus-ponens
    closure rounds, then any extra enumerator's output.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    ordered: list[Formula] = []
    seen: set[Formula] = set()

    def emit(formula: Formula):
        key = canonical(formula)
        if key not in seen:
            seen.add(key)
            ordered.append(formula)

    for sentence in agent.base:
        emit(sentence)
    for index in agent.o_claims:
        emit(OAtom(Numeral(index)))
    if agent.schemas.knows_axiom_of_o:
        emit(axiom_of_o())
        for entry in agent.code_tables:
            emit(axiom_of_o_instance(entry.index))
    for j in sorted(agent.schemas.truthfulness_of):
        for template_text in _truthfulness_templates(agent, j):
            template = parse_formula(template_text)
            emit(ForAll("x", Implies(Knows(j, template), template)))
    for entry in agent.code_tables:
        template = parse_formula(entry.template)
        emit(ForAll("x", Iff(Knows(entry.target_agent, template),
                             WAtom(TermVar("x"), Numeral(entry.index)))))
    # E1, restricted: excluded middle over every sentence seen so far.
    for sentence in list(ordered):
        emit(Or(sentence, Not(sentence)))
    # E2: modus ponens to the closure budget.
    for _ in range(agent.closure_budget):
        known = {canonical(f) for f in ordered}
        new: list[Formula] = []
        for formula in ordered:
            if isinstance(formula, Implies):
                if canonical(formula.left) in known:
                    if canonical(formula.right) not in known:
                        new.append(formula.right)
        if not new:
            break
        for formula in new:
            emit(formula)
    if agent.extra_enumerator is not None:
        result = run(agent.extra_enumerator, output_budget=budget)
        for text in result.outputs:
            try:
                emit(parse_formula(text))
            except ValueError:
                continue
    return ordered[:budget]


def _truthfulness_templates(agent: AgentSpec, j: int) -> list[str]:
    templates = [O_OF_X_TEMPLATE]
    for entry in agent.code_tables:
        if entry.target_agent == j and entry.template not in templates:
            templates.append(entry.template)
    return templates


def _enumeration_complete(agent: AgentSpec, budget: int) -> bool:
    """True when the listing provably saturates within the budget."""
    if agent.extra_enumerator is not None:
        result = run(agent.extra_enumerator, output_budget=budget + 1)
        if not isinstance(result.status, Halted):
            return False
    full = enumerate_knowledge(agent, budget + 1)
    return len(full) <= budget


# --- measure --------------------------------------------------------------------


def measure(agent: AgentSpec, budget: int = DEFAULT_ENUM_BUDGET,
            registry: Optional[Registry] = None) -> MeasureResult:
    """Least ordinal above every verified notation value the agent claims.

    Claims must verify; a rejected claim means the presentation violates
    truthfulness on the checkable fragment and raises UntruthfulAgent.
    """
    registry = registry if registry is not None else Registry()
    sentences = enumerate_knowledge(agent, budget)
    witnesses: list[tuple[int, OrdinalOrOverflow]] = []
    for sentence in sentences:
        if isinstance(sentence, OAtom) and isinstance(sentence.term, Numeral):
            index = sentence.term.value
            try:
                outcome = registry.o_value(index)
            except UnknownIndex:
                outcome = Unverified("unknown index")
            if isinstance(outcome, Unverified):
                raise UntruthfulAgent(
                    f"agent {agent.id} claims O({index}) but the index "
                    f"does not verify: {outcome.reason}")
            witnesses.append((index, outcome.value))
    bound = sup_plus_one_overflow(v for _, v in witnesses)
    exact = _enumeration_complete(agent, budget)
    return MeasureResult(bound, exact, tuple(witnesses))


# --- total endorsement ----------------------------------------------------------


def _claims_enumerator(indices: list[int]) -> Program:
    """ONL program printing the given indices as decimal numerals."""
    if not indices:
        return parse_onl("End")
    statements = "; ".join(f'Print("{i}")' for i in indices)
    return parse_onl(statements)


def build_total_endorser(agent: AgentSpec, registry: Registry,
                         budget: int = DEFAULT_ENUM_BUDGET,
                         new_id: Optional[int] = None,
                         ) -> tuple[AgentSpec, EndorsementTranscript]:
    """Construct an agent that totally endorses the given one.

    Registers the endorsed agent's claim set as an enumerator with a
    verified certificate, installs the truthfulness schema and the code
    sentence for it, and derives the new claim O(n) by a recorded
    tautology / closure-instance / modus-ponens chain.
    """
    result = measure(agent, budget, registry)
    if not result.exact:
        raise NonExactMeasure(
            f"agent {agent.id}'s claims cannot be registered as a "
            f"completed enumerator")
    if isinstance(result.bound, AtLeastEpsilon0):
        raise MeasureOverflow(
            f"agent {agent.id}'s measure exceeds the representable range")

    claim_indices = [i for i, _ in result.witnesses]
    enumerator = _claims_enumerator(claim_indices)
    index = registry.register(enumerator)
    registry.attach_fin_cert(index, claim_indices, result.bound)
    check_back = registry.o_value(index)
    if not isinstance(check_back, Verified):
        raise UntruthfulAgent(
            f"registered claim enumerator failed verification: "
            f"{check_back.reason}")

    endorser_id = new_id if new_id is not None else agent.id + 1
    o_template = parse_formula(O_OF_X_TEMPLATE)
    x = TermVar("x")
    n = Numeral(index)

    phi1 = ForAll("x", Implies(Knows(agent.id, o_template), o_template))
    phi2 = ForAll("x", Iff(Knows(agent.id, o_template),
                           WAtom(x, n)))
    phi3 = ForAll("x", Implies(WAtom(x, n), OAtom(x)))
    taut = Implies(phi1, Implies(phi2, phi3))
    claim2 = axiom_of_o_instance(index)
    claim3 = OAtom(n)

    endorser = AgentSpec(
        id=endorser_id,
        base=(taut,),
        o_claims=(index,),
        schemas=Schemas(knows_axiom_of_o=True,
                        truthfulness_of=frozenset({agent.id})),
        code_tables=(CodeEntry(agent.id, O_OF_X_TEMPLATE, index),),
        closure_budget=max(agent.closure_budget, 3),
    )
    if endorser.content_address() == agent.content_address():
        raise SelfEndorsement(
            "the constructed endorser coincides with the endorsed agent")

    transcript = EndorsementTranscript(
        endorser=endorser_id,
        endorsed=agent.id,
        index=index,
        steps=(
            TranscriptStep("E3-instance", phi1,
                           f"truthfulness schema for agent {agent.id}, "
                           f"template {O_OF_X_TEMPLATE}"),
            TranscriptStep("code-sentence", phi2,
                           f"code table entry: agent {agent.id}'s "
                           f"{O_OF_X_TEMPLATE} claims are enumerator "
                           f"{index}"),
            TranscriptStep("E1-tautology", taut,
                           "valid implication chain over the two premises"),
            TranscriptStep("claim-1", phi3,
                           "modus ponens twice on the tautology with the "
                           "E3 instance and the code sentence"),
            TranscriptStep("claim-2", claim2,
                           f"closure-axiom instance at index {index}"),
            TranscriptStep("claim-3", claim3,
                           "modus ponens on claim 2 with claim 1"),
        ),
    )
    return endorser, transcript


def replay_transcript(transcript: EndorsementTranscript, endorser: AgentSpec,
                      endorsed: AgentSpec, registry: Registry,
                      budget: int = DEFAULT_ENUM_BUDGET) -> bool:
    """Check every transcript step against the endorser's enumeration and
    the registry: premises enumerated, conclusions derived, and the
    registered index's value equal to the endorsed agent's measure."""
    known = {canonical(f) for f in enumerate_knowledge(endorser, budget)}
    for step in transcript.steps:
        if canonical(step.sentence) not in known:
            return False
    outcome = registry.o_value(transcript.index)
    if not isinstance(outcome, Verified):
        return False
    endorsed_measure = measure(endorsed, budget, registry)
    return cmp_overflow(outcome.value, endorsed_measure.bound) == 0


@dataclass(frozen=True)
class Confirmed:
    pass


@dataclass(frozen=True)
class NotConfirmed:
    missing: tuple[str, ...]


def check_total_endorsement(endorser: AgentSpec, endorsed: AgentSpec,
                            budget: int = DEFAULT_ENUM_BUDGET,
                            templates: tuple[str, ...] = (O_OF_X_TEMPLATE,),
                            ) -> Union[Confirmed, NotConfirmed]:
    """Semi-decide total endorsement within the budget.

    Confirmed needs the truthfulness schema marker for the endorsed
    agent, its enumerated instances, and a code sentence per checked
    template.  Absence within the budget is reported, not refuted.
    """
    missing: list[str] = []
    if endorsed.id not in endorser.schemas.truthfulness_of:
        missing.append(f"truthfulness schema marker for agent {endorsed.id}")
    known = {canonical(f) for f in enumerate_knowledge(endorser, budget)}
    for template_text in templates:
        template = parse_formula(template_text)
        e3 = ForAll("x", Implies(Knows(endorsed.id, template), template))
        if canonical(e3) not in known:
            missing.append(f"E3 instance for template {template_text}")
        has_code = any(
            entry.target_agent == endorsed.id
            and entry.template == template_text
            for entry in endorser.code_tables)
        if not has_code:
            missing.append(f"code sentence for template {template_text}")
        else:
            entry = next(e for e in endorser.code_tables
                         if e.target_agent == endorsed.id
                         and e.template == template_text)
            code = ForAll("x", Iff(Knows(endorsed.id, template),
                                   WAtom(TermVar("x"),
                                         Numeral(entry.index))))
            if canonical(code) not in known:
                missing.append(
                    f"enumerated code sentence for template {template_text}")
    if missing:
        return NotConfirmed(tuple(missing))
    return Confirmed()


def endorsement_chain(base: AgentSpec, k: int, registry: Registry,
                      budget: int = DEFAULT_ENUM_BUDGET,
                      ) -> tuple[list[AgentSpec], list[EndorsementTranscript]]:
    """[A_k, ..., A_1, base]: each agent totally endorses its successor."""
    if k < 1:
        raise ValueError("chain length must be >= 1")
    agents = [base]
    transcripts: list[EndorsementTranscript] = []
    current = base
    for _ in range(k):
        endorser, transcript = build_total_endorser(current, registry, budget)
        agents.insert(0, endorser)
        transcripts.insert(0, transcript)
        current = endorser
    return agents, transcripts


# --- agent files ----------------------------------------------------------------


def agent_to_dict(agent: AgentSpec, include_id: bool = True) -> dict:
    data = {
        "base": [print_formula(f) for f in agent.base],
        "o_claims": [{"index": i} for i in agent.o_claims],
        "schemas": {
            "knows_axiom_of_O": agent.schemas.knows_axiom_of_o,
            "truthfulness_of": sorted(agent.schemas.truthfulness_of),
        },
        "code_tables": [
            {"agent": e.target_agent, "template": e.template,
             "index": e.index}
            for e in agent.code_tables
        ],
        "closure_budget": agent.closure_budget,
    }
    if agent.extra_enumerator is not None:
        data["extra_enumerator"] = print_onl(agent.extra_enumerator)
    if include_id:
        data["id"] = agent.id
    return data


def agent_from_dict(data: dict) -> AgentSpec:
    schemas = data.get("schemas", {})
    extra = data.get("extra_enumerator")
    return AgentSpec(
        id=int(data.get("id", 0)),
        base=tuple(parse_formula(t) for t in data.get("base", [])),
        o_claims=tuple(int(c["index"]) if isinstance(c, dict) else int(c)
                       for c in data.get("o_claims", [])),
        schemas=Schemas(
            knows_axiom_of_o=bool(schemas.get("knows_axiom_of_O", False)),
            truthfulness_of=frozenset(
                int(j) for j in schemas.get("truthfulness_of", [])),
        ),
        code_tables=tuple(
            CodeEntry(int(e["agent"]), str(e["template"]), int(e["index"]))
            for e in data.get("code_tables", [])),
        closure_budget=int(data.get("closure_budget", 2)),
        extra_enumerator=parse_onl(extra) if extra else None,
    )


def agent_to_json(agent: AgentSpec) -> str:
    return json.dumps(agent_to_dict(agent), indent=2, sort_keys=True)


def agent_from_json(text: str) -> AgentSpec:
    return agent_from_dict(json.loads(text))


def transcript_to_dict(transcript: EndorsementTranscript) -> dict:
    return {
        "endorser": transcript.endorser,
        "endorsed": transcript.endorsed,
        "index": transcript.index,
        "steps": [
            {"label": s.label, "sentence": print_formula(s.sentence),
             "justification": s.justification}
            for s in transcript.steps
        ],
    }
