import pytest

from ordino.agents import (AgentSpec, CodeEntry, Confirmed,
                           EndorsementTranscript, MeasureOverflow,
                           NonExactMeasure, NotConfirmed, Schemas,
                           SelfEndorsement, UntruthfulAgent, agent_from_json,
                           agent_to_json, build_total_endorser,
                           check_total_endorsement, endorsement_chain,
                           enumerate_knowledge, measure, replay_transcript)
from ordino.certs import Fin, NoPattern, synthesize, Verified
from ordino.corpus import corpus
from ordino.formulas import (ForAll, Implies, Knows, OAtom, Numeral, TermVar,
                             axiom_of_o, canonical, parse_formula,
                             print_formula)
from ordino.onl import parse_onl
from ordino.ordinal import (ZERO, cmp_overflow, from_int, print_overflow)
from ordino.registry import Registry


@pytest.fixture
def registry():
    return Registry()


def fresh_corpus_index(registry, name):
    program = corpus()[name]
    cert = synthesize(program)
    assert not isinstance(cert, NoPattern)
    return registry.embed_program(program, cert)


# --- knowledge enumeration -------------------------------------------------------


def test_empty_agent_knows_nothing():
    assert enumerate_knowledge(AgentSpec(id=0), 100) == []


def test_modus_ponens_closure():
    a = parse_formula("O(0)")
    a_implies_b = parse_formula("O(0) -> O(1)")
    agent = AgentSpec(id=1, base=(a, a_implies_b), closure_budget=1)
    known = {canonical(f) for f in enumerate_knowledge(agent, 100)}
    assert canonical(parse_formula("O(1)")) in known


def test_closure_budget_zero_stops_mp():
    a = parse_formula("O(0)")
    a_implies_b = parse_formula("O(0) -> O(1)")
    agent = AgentSpec(id=1, base=(a, a_implies_b), closure_budget=0)
    known = {canonical(f) for f in enumerate_knowledge(agent, 100)}
    assert canonical(parse_formula("O(1)")) not in known


def test_axiom_of_o_flag():
    agent = AgentSpec(id=1, schemas=Schemas(knows_axiom_of_o=True))
    known = {canonical(f) for f in enumerate_knowledge(agent, 100)}
    assert canonical(axiom_of_o()) in known


def test_excluded_middle_instances():
    agent = AgentSpec(id=1, base=(parse_formula("O(0)"),))
    known = {canonical(f) for f in enumerate_knowledge(agent, 100)}
    assert canonical(parse_formula("O(0) | ~O(0)")) in known


def test_enumeration_is_deterministic_and_prefix_monotone():
    agent = AgentSpec(
        id=2,
        base=(parse_formula("O(0)"), parse_formula("O(0) -> O(1)")),
        schemas=Schemas(knows_axiom_of_o=True, truthfulness_of=frozenset({7})),
        code_tables=(CodeEntry(7, "O(x)", 3),),
        closure_budget=2)
    full = enumerate_knowledge(agent, 1000)
    again = enumerate_knowledge(agent, 1000)
    assert full == again
    for budget in range(len(full) + 1):
        assert enumerate_knowledge(agent, budget) == full[:budget]


def test_extra_enumerator_sentences():
    enumerator = parse_onl('Print("O(0)"); Print("not a formula")')
    agent = AgentSpec(id=3, extra_enumerator=enumerator)
    sentences = enumerate_knowledge(agent, 100)
    assert parse_formula("O(0)") in sentences


# --- measure ---------------------------------------------------------------------


def test_measure_empty_agent(registry):
    result = measure(AgentSpec(id=0), registry=registry)
    assert result.bound == ZERO and result.exact
    assert result.witnesses == ()


def test_measure_three_finite_claims(registry):
    indices = []
    zero = registry.register(parse_onl("End"))
    registry.attach_fin_cert(zero, [], ZERO)
    indices.append(zero)
    for value in (1, 2):
        members = indices[:value]
        idx = registry.register(parse_onl(
            "; ".join(f'Print("{m}")' for m in members)))
        registry.attach_fin_cert(idx, members, from_int(value))
        indices.append(idx)
    agent = AgentSpec(id=1, o_claims=tuple(indices))
    result = measure(agent, registry=registry)
    assert result.bound == from_int(3) and result.exact


def test_measure_embedded_omega(registry):
    index = fresh_corpus_index(registry, "Pw")
    agent = AgentSpec(id=1, o_claims=(index,))
    result = measure(agent, registry=registry)
    assert print_overflow(result.bound) == "w + 1"
    assert result.exact
    assert result.witnesses[0][0] == index


def test_measure_untruthful_agent(registry):
    unverified = registry.register("naturals")
    agent = AgentSpec(id=1, o_claims=(unverified,))
    with pytest.raises(UntruthfulAgent):
        measure(agent, registry=registry)


def test_measure_inexact_with_open_enumerator(registry):
    enumerator = corpus()["Pw"]  # never halts, outputs are not formulas
    agent = AgentSpec(id=1, extra_enumerator=enumerator)
    result = measure(agent, 50, registry)
    assert not result.exact


# --- the endorser constructor ------------------------------------------------------


def test_endorser_of_empty_agent(registry):
    empty = AgentSpec(id=0)
    endorser, transcript = build_total_endorser(empty, registry)
    result = measure(endorser, registry=registry)
    assert cmp_overflow(result.bound, from_int(1)) == 0
    assert isinstance(check_total_endorsement(endorser, empty), Confirmed)
    assert replay_transcript(transcript, endorser, empty, registry)


def test_endorser_strictly_increases_measure(registry):
    index = fresh_corpus_index(registry, "Pw")
    agent = AgentSpec(id=5, o_claims=(index,))
    before = measure(agent, registry=registry)
    endorser, _ = build_total_endorser(agent, registry)
    after = measure(endorser, registry=registry)
    assert cmp_overflow(after.bound, before.bound) == 1


def test_endorser_transcript_structure(registry):
    agent = AgentSpec(id=0)
    endorser, transcript = build_total_endorser(agent, registry)
    labels = [step.label for step in transcript.steps]
    assert labels == ["E3-instance", "code-sentence", "E1-tautology",
                      "claim-1", "claim-2", "claim-3"]
    # claim 3 is the new O(n) claim for the registered index
    final = transcript.steps[-1].sentence
    assert final == OAtom(Numeral(transcript.index))
    # the derivation really lands in the endorser's enumerated knowledge
    known = {canonical(f) for f in enumerate_knowledge(endorser, 1000)}
    for step in transcript.steps:
        assert canonical(step.sentence) in known, step.label


def test_endorser_rejects_inexact_measure(registry):
    agent = AgentSpec(id=1, extra_enumerator=corpus()["Pw"])
    with pytest.raises(NonExactMeasure):
        build_total_endorser(agent, registry, budget=50)


def test_check_total_endorsement_negative_cases(registry):
    empty = AgentSpec(id=0)
    endorser, _ = build_total_endorser(empty, registry)
    missing = check_total_endorsement(empty, endorser)
    assert isinstance(missing, NotConfirmed)
    assert any("truthfulness" in item for item in missing.missing)
    selfed = check_total_endorsement(endorser, endorser)
    assert isinstance(selfed, NotConfirmed)


def test_endorsement_chain(registry):
    base = AgentSpec(id=0)
    agents, transcripts = endorsement_chain(base, 4, registry)
    assert len(agents) == 5 and len(transcripts) == 4
    bounds = [measure(a, registry=registry).bound for a in agents]
    for a, b in zip(bounds, bounds[1:]):
        assert cmp_overflow(a, b) == 1
    for i, transcript in enumerate(transcripts):
        assert isinstance(
            check_total_endorsement(agents[i], agents[i + 1]), Confirmed)
        assert replay_transcript(transcript, agents[i], agents[i + 1],
                                 registry)


def test_chain_rejects_zero_length(registry):
    with pytest.raises(ValueError):
        endorsement_chain(AgentSpec(id=0), 0, registry)


def test_cross_module_identity(registry):
    index = fresh_corpus_index(registry, "Pw2")
    agent = AgentSpec(id=9, o_claims=(index,))
    agent_measure = measure(agent, registry=registry)
    _, transcript = build_total_endorser(agent, registry)
    outcome = registry.o_value(transcript.index)
    assert isinstance(outcome, Verified)
    assert cmp_overflow(outcome.value, agent_measure.bound) == 0


def test_e2_soundness_and_truthfulness_invariants(registry):
    # E2: derived sentences appear; E3: every claim verifies
    index = fresh_corpus_index(registry, "Pw")
    agent = AgentSpec(
        id=4, o_claims=(index,),
        base=(parse_formula(f"O({index}) -> O({index})"),),
        closure_budget=2)
    result = measure(agent, registry=registry)
    for claim_index, value in result.witnesses:
        outcome = registry.o_value(claim_index)
        assert isinstance(outcome, Verified)
        assert cmp_overflow(outcome.value, value) == 0


# --- agent files -----------------------------------------------------------------


def test_agent_json_roundtrip(registry):
    endorser, _ = build_total_endorser(AgentSpec(id=0), registry)
    again = agent_from_json(agent_to_json(endorser))
    assert again == endorser


def test_agent_json_shape():
    import json
    agent = AgentSpec(id=2, base=(parse_formula("O(0)"),),
                      o_claims=(3,),
                      schemas=Schemas(knows_axiom_of_o=True,
                                      truthfulness_of=frozenset({1})),
                      code_tables=(CodeEntry(1, "O(x)", 3),),
                      closure_budget=4)
    data = json.loads(agent_to_json(agent))
    assert data["schemas"]["knows_axiom_of_O"] is True
    assert data["o_claims"] == [{"index": 3}]
    assert data["code_tables"] == [{"agent": 1, "index": 3,
                                    "template": "O(x)"}]


def test_endorser_overflow_at_ceiling(registry):
    index = fresh_corpus_index(registry, "Peps0")
    agent = AgentSpec(id=30, o_claims=(index,))
    result = measure(agent, registry=registry)
    assert print_overflow(result.bound) == "E0"
    with pytest.raises(MeasureOverflow):
        build_total_endorser(agent, registry)


def test_chain_from_transfinite_agent(registry):
    index = fresh_corpus_index(registry, "Pw")
    base = AgentSpec(id=40, o_claims=(index,))
    agents, _ = endorsement_chain(base, 2, registry)
    bounds = [measure(a, registry=registry).bound for a in agents]
    assert print_overflow(bounds[-1]) == "w + 1"
    for high, low in zip(bounds, bounds[1:]):
        assert cmp_overflow(high, low) == 1


def test_converse_of_the_theorem_fails(registry):
    # higher measure does not imply endorsement: a witness pair
    index = fresh_corpus_index(registry, "Pw")
    smart = AgentSpec(id=50, o_claims=(index,))
    dull = AgentSpec(id=51)
    assert cmp_overflow(measure(smart, registry=registry).bound,
                        measure(dull, registry=registry).bound) == 1
    assert isinstance(check_total_endorsement(smart, dull), NotConfirmed)


def test_content_address_ignores_id_only():
    a = AgentSpec(id=1, o_claims=(3,))
    b = AgentSpec(id=2, o_claims=(3,))
    c = AgentSpec(id=1, o_claims=(4,))
    assert a.content_address() == b.content_address()
    assert a.content_address() != c.content_address()
