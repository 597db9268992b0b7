from ordino.corpus import (CORPUS_VALUES, EXERCISE_ENTRIES, P1, PAPER_ENTRIES,
                           PW, PWW, SSTEP1, TAU0, XSTEP1, apply_step,
                           builder_lift, corpus, corpus_texts, loop_program,
                           machine2, machine2_step, machine3_step,
                           machine4_step, rho)
from ordino.onl import Halted, parse_onl, print_onl, run


def test_corpus_names_and_values_align():
    texts = corpus_texts()
    assert set(texts) == set(CORPUS_VALUES)
    assert set(PAPER_ENTRIES + EXERCISE_ENTRIES) == set(texts)


def test_corpus_texts_are_canonical():
    for name, text in corpus_texts().items():
        assert print_onl(parse_onl(text)) == text, name


def test_two_loop_program_generates_the_loop_family():
    texts = corpus_texts()
    result = run(corpus()["Pw2"], 10**6, 3)
    assert result.outputs[0] == texts["Pw"]
    assert result.outputs[1] == texts["Pw*2"]
    assert result.outputs[2] == texts["Pw*3"]


def test_print_wrap_chain():
    texts = corpus_texts()
    assert texts["Pw+1"] == apply_step(0, texts["Pw"])
    assert texts["Pw+2"] == apply_step(0, texts["Pw+1"])
    assert texts["P2"] == apply_step(0, texts["P1"])


def test_loop_step_grades_nest():
    # rho(j+1) embeds the grade-j loop suffix, escaped, as a literal
    from ordino.onl import escape_string
    for j in range(3):
        assert escape_string(rho(j)) in rho(j + 1)
    assert loop_program("End", 2) == corpus_texts()["Pw3"]


def test_machine2_outputs_match_mirror():
    program = parse_onl(PWW)
    result = run(program, 10**7, 4)
    s, x = TAU0, P1
    for i in range(4):
        assert result.outputs[i] == x, f"output {i}"
        parse_onl(result.outputs[i])
        s, x = machine2_step(s, x)
    assert result.outputs[1] == loop_program(P1, 0)


def test_machine3_outputs_match_mirror():
    texts = corpus_texts()
    program = parse_onl(texts["Pwww"])
    result = run(program, 10**7, 3)
    s, x = builder_lift(SSTEP1), PWW
    for i in range(3):
        assert result.outputs[i] == x, f"output {i}"
        parse_onl(result.outputs[i])
        s, x = machine3_step(s, x)
    assert result.outputs[0] == texts["Pww"]


def test_machine4_outputs_match_mirror():
    texts = corpus_texts()
    program = parse_onl(texts["Peps0"])
    result = run(program, 10**7, 3)
    a, b, c, x = TAU0, XSTEP1, SSTEP1, PW
    for i in range(3):
        assert result.outputs[i] == x, f"output {i}"
        parse_onl(result.outputs[i])
        a, b, c, x = machine4_step(a, b, c, x)
    assert result.outputs[0] == texts["Pw"]
    assert result.outputs[1] == machine2(TAU0, PW)


def test_machine_outputs_run_and_emit_programs():
    # the diagonal's third output is a machine whose own outputs parse
    program = parse_onl(corpus_texts()["Peps0"])
    level2 = parse_onl(run(program, 10**7, 3).outputs[2])
    nested = run(level2, 10**8, 2)
    assert len(nested.outputs) == 2
    for text in nested.outputs:
        parse_onl(text)


def test_halting_entries_halt_and_loops_do_not():
    progs = corpus()
    halting = {"P0", "P1", "P2", "Pw+1", "Pw+2"}
    for name, program in progs.items():
        result = run(program, 10**6, 10**3)
        assert isinstance(result.status, Halted) == (name in halting), name
