import pytest
from hypothesis import given, settings, strategies as st

from ordino.corpus import corpus, corpus_texts
from ordino.onl import (BudgetExceeded, End, Halted, Let, Literal, OnlError,
                        OnlLexError, OnlSyntaxError, OnlUnboundVariable,
                        Print, Program, Quote, Unknown, Var, WhileTrue,
                        parse_onl, print_onl, quote_string, run,
                        value_bruteforce, NON_HALTING, UNPARSEABLE)
from ordino.ordinal import from_int, sup_plus_one


def test_parse_end():
    assert parse_onl("End") == Program((End(),))


def test_parse_print_literal():
    assert parse_onl('Print("End")') == Program((Print(Literal("End")),))


def test_parse_unbound_variable():
    with pytest.raises(OnlUnboundVariable):
        parse_onl("Print(X)")
    with pytest.raises(OnlUnboundVariable):
        parse_onl('While(True) { Print(X); Let X = "a" }')
    # bound on every path once the Let precedes the use
    parse_onl('Let X = "a"; While(True) { Print(X) }')


def test_parse_errors_carry_position():
    with pytest.raises(OnlSyntaxError) as err:
        parse_onl('Let X = "a"; Print(X')
    assert err.value.line == 1 and err.value.col > 1
    with pytest.raises(OnlLexError):
        parse_onl('Print("unterminated)')
    with pytest.raises(OnlSyntaxError):
        parse_onl("While(X) { End }")


def test_roundtrip_on_corpus():
    for name, text in corpus_texts().items():
        assert print_onl(parse_onl(text)) == text, name


@settings(max_examples=200)
@given(st.text(alphabet=st.characters(min_codepoint=32, max_codepoint=126),
               max_size=40))
def test_quote_soundness(s):
    # Quote-wrapping any string yields a literal that evaluates back to it.
    text = f"Print({quote_string(s)})"
    program = parse_onl(text)
    result = run(program)
    assert result.outputs == (s,)
    # and quoting programmatically round-trips through the parser too
    quoted = parse_onl(f"Print(quote({quote_string(s)}))")
    assert run(quoted).outputs == (quote_string(s),)


def test_run_examples():
    progs = corpus()
    r0 = run(progs["P0"], 10**6, 100)
    assert r0.outputs == () and isinstance(r0.status, Halted)
    r1 = run(progs["P1"], 10**6, 100)
    assert r1.outputs == ("End",) and isinstance(r1.status, Halted)
    rw = run(progs["Pw"], 10**6, 3)
    assert rw.outputs == ("End", 'Print("End")', 'Print("Print(\\"End\\")")')
    assert rw.status == BudgetExceeded("outputs")


def test_end_halts_inside_loop():
    program = parse_onl('While(True) { Print("End"); End }')
    result = run(program, 10**6, 100)
    assert result.outputs == ("End",)
    assert isinstance(result.status, Halted)


def test_step_budget_trips():
    program = parse_onl('Let X = "a"; While(True) { Let X = X + X }')
    result = run(program, 1000, 100)
    assert result.status == BudgetExceeded("steps")


def test_determinism():
    program = corpus()["Pww"]
    a = run(program, 10**5, 5)
    b = run(program, 10**5, 5)
    assert a == b


def test_budget_monotonicity():
    program = corpus()["Pw"]
    small = run(program, 10**4, 4).outputs
    large = run(program, 10**6, 50).outputs
    assert large[:len(small)] == small
    smaller_steps = run(program, 10**3, 50).outputs
    assert large[:len(smaller_steps)] == smaller_steps


def test_value_bruteforce_examples():
    progs = corpus()
    assert value_bruteforce(progs["P2"]) == from_int(2)
    unknown = value_bruteforce(progs["Pw"])
    assert isinstance(unknown, Unknown) and unknown.reason == NON_HALTING
    bad = parse_onl('Print("???")')
    result = value_bruteforce(bad)
    assert isinstance(result, Unknown) and result.reason == UNPARSEABLE


def test_value_bruteforce_matches_sup_plus_one():
    # every halting corpus program's value is sup+1 of its outputs' values
    progs = corpus()
    for name in ["P0", "P1", "P2"]:
        program = progs[name]
        result = run(program)
        assert isinstance(result.status, Halted)
        sub_values = []
        for text in result.outputs:
            sub = value_bruteforce(parse_onl(text))
            assert not isinstance(sub, Unknown)
            sub_values.append(sub)
        assert value_bruteforce(program) == sup_plus_one(sub_values)


def test_depth_budget():
    program = corpus()["P2"]
    result = value_bruteforce(program, depth_budget=1)
    assert isinstance(result, Unknown) and result.reason == "depth-exceeded"
    assert value_bruteforce(program, depth_budget=2) == from_int(2)


def test_keyword_not_identifier():
    with pytest.raises(OnlSyntaxError):
        parse_onl('Let While = "a"')
    with pytest.raises(OnlSyntaxError):
        parse_onl("Print(quote)")
