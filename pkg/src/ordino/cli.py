"""Command-line surface.

Exit codes: 0 success / verified; 1 rejected, not confirmed or unknown;
2 usage or I/O errors.  Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys

from .agents import (AgentSpec, agent_from_json, agent_to_dict,
                     agent_to_json, build_total_endorser,
                     endorsement_chain, measure, transcript_to_dict)
from .certs import (CheckConfig, NoPattern, Rejected, Verified, check,
                    cert_from_json, cert_to_json, synthesize)
from .corpus import (CORPUS_VALUES, EXERCISE_ENTRIES, PAPER_ENTRIES, corpus)
from .fgh import FghBudgetExceeded, NotALimit, fast_growing, fund_seq
from .onl import (Halted, OnlError, parse_onl, run, value_bruteforce,
                  Unknown, DEFAULT_STEP_BUDGET, DEFAULT_OUTPUT_BUDGET)
from .ordinal import (Ordinal, OrdinalParseError, parse_ord, print_ord,
                      print_overflow)
from .registry import (RejectedCertificate, Registry, UnknownIndex,
                       Unverified)

OK, FAIL, USAGE = 0, 1, 2


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


class _Calc:
    """Ordinal calculator: +, * and w^ evaluated as ordinal operations,
    so non-canonical spellings like "w*2 + w" normalize to "w*3"."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self):
        value = self.sum_()
        self.skip()
        if self.pos != len(self.text):
            raise OrdinalParseError("trailing input", self.pos)
        return value

    def sum_(self):
        value = self.product()
        while self.peek() == "+":
            self.pos += 1
            value = _calc_add(value, self.product())
        return value

    def product(self):
        value = self.factor()
        while self.peek() == "*":
            self.pos += 1
            value = _calc_mul(value, self.factor())
        return value

    def factor(self):
        from .ordinal import OMEGA, from_int, omega_pow
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.sum_()
            if self.peek() != ")":
                raise OrdinalParseError("expected ')'", self.pos)
            self.pos += 1
            return value
        if ch == "w":
            self.pos += 1
            if self.peek() == "^":
                self.pos += 1
                exponent = self.factor()
                if not isinstance(exponent, Ordinal):
                    return exponent  # overflow propagates
                return omega_pow(exponent)
            return OMEGA
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return from_int(int(self.text[start:self.pos]))
        raise OrdinalParseError("expected 'w', digits or '('", self.pos)


def _calc_add(a, b):
    from .ordinal import AT_LEAST_EPSILON0, add
    if not isinstance(a, Ordinal) or not isinstance(b, Ordinal):
        return AT_LEAST_EPSILON0
    return add(a, b)


def _calc_mul(a, b):
    from .ordinal import AT_LEAST_EPSILON0, mul
    if not isinstance(a, Ordinal) or not isinstance(b, Ordinal):
        return AT_LEAST_EPSILON0
    return mul(a, b)


def cmd_ord_eval(args) -> int:
    try:
        value = _Calc(args.expr).parse()
    except OrdinalParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    print(print_overflow(value))
    return OK


def cmd_onl_run(args) -> int:
    program = parse_onl(_read(args.file))
    result = run(program, args.steps, args.outputs)
    for line in result.outputs:
        print(line)
    if isinstance(result.status, Halted):
        print(f"halted after {result.status.steps} steps", file=sys.stderr)
    else:
        print(f"budget exceeded: {result.status.kind}", file=sys.stderr)
    return OK


def cmd_onl_value(args) -> int:
    program = parse_onl(_read(args.file))
    value = value_bruteforce(program, args.steps, args.outputs, args.depth)
    if isinstance(value, Unknown):
        detail = f" ({value.detail})" if value.detail else ""
        print(f"unknown: {value.reason}{detail}")
        return FAIL
    print(print_ord(value))
    return OK


def cmd_cert_check(args) -> int:
    program = parse_onl(_read(args.program))
    cert = cert_from_json(_read(args.cert))
    outcome = check(program, cert)
    if isinstance(outcome, Verified):
        print(print_overflow(outcome.value))
        return OK
    print(f"rejected: {outcome.reason}"
          + (f" ({outcome.detail})" if outcome.detail else ""))
    return FAIL


def cmd_cert_synth(args) -> int:
    program = parse_onl(_read(args.program))
    cert = synthesize(program)
    if isinstance(cert, NoPattern):
        print(f"no pattern: {cert.reason}")
        return FAIL
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(cert_to_json(cert) + "\n")
        print(f"certificate written to {args.out}", file=sys.stderr)
    else:
        print(cert_to_json(cert))
    outcome = check(program, cert)
    print(f"value: {print_overflow(outcome.value)}", file=sys.stderr)
    return OK


def cmd_registry_add(args) -> int:
    registry = Registry.open(args.registry)
    source = _read(args.file)
    program = parse_onl(source)
    cert = synthesize(program)
    if isinstance(cert, NoPattern):
        index = registry.register(program)
        print(f"{index} (unverified: {cert.reason})")
    else:
        index = registry.embed_program(program, cert)
        outcome = registry.o_value(index)
        print(f"{index} {print_overflow(outcome.value)}")
    if args.registry:
        registry.save(args.registry)
    return OK


def cmd_registry_list(args) -> int:
    registry = Registry.open(args.registry)
    for index in sorted(registry.entries):
        entry = registry.entries[index]
        outcome = registry.o_value(index)
        if isinstance(outcome, Verified):
            value = print_overflow(outcome.value)
        else:
            value = "unverified"
        head = entry.source if len(entry.source) <= 48 \
            else entry.source[:45] + "..."
        print(f"{index}\t{entry.kind}\t{value}\t{head}")
    return OK


def cmd_registry_value(args) -> int:
    registry = Registry.open(args.registry)
    try:
        outcome = registry.o_value(args.index)
    except UnknownIndex:
        print(f"error: unknown index {args.index}", file=sys.stderr)
        return USAGE
    if isinstance(outcome, Verified):
        print(print_overflow(outcome.value))
        return OK
    print(f"unverified: {outcome.reason}")
    return FAIL


def cmd_agent_measure(args) -> int:
    registry = Registry.open(args.registry)
    agent = agent_from_json(_read(args.spec))
    result = measure(agent, args.budget, registry)
    if args.json:
        print(json.dumps({
            "bound": print_overflow(result.bound),
            "exact": result.exact,
            "witnesses": [{"index": i, "value": print_overflow(v)}
                          for i, v in result.witnesses],
        }, sort_keys=True))
    else:
        print(f"bound={print_overflow(result.bound)} exact={str(result.exact).lower()}")
        for index, value in result.witnesses:
            print(f"witness index={index} value={print_overflow(value)}")
    return OK


def cmd_agent_endorse(args) -> int:
    registry = Registry.open(args.registry)
    agent = agent_from_json(_read(args.spec))
    endorser, transcript = build_total_endorser(agent, registry, args.budget)
    endorsed_measure = measure(agent, args.budget, registry)
    endorser_measure = measure(endorser, args.budget, registry)
    out_path = args.out or (args.spec + ".endorser.json")
    with open(out_path, "w", encoding="utf-8") as handle:
        handle.write(agent_to_json(endorser) + "\n")
    if args.registry:
        registry.save(args.registry)
    print(f"endorsed measure: {print_overflow(endorsed_measure.bound)}")
    print(f"endorser measure: {print_overflow(endorser_measure.bound)}")
    for step in transcript.steps:
        from .formulas import print_formula
        print(f"{step.label}: {print_formula(step.sentence)}")
        print(f"  by {step.justification}")
    print(f"endorser written to {out_path}", file=sys.stderr)
    return OK


def cmd_agent_chain(args) -> int:
    registry = Registry.open(args.registry)
    agent = agent_from_json(_read(args.spec))
    agents, transcripts = endorsement_chain(agent, args.k, registry,
                                            args.budget)
    from .agents import replay_transcript
    rows = []
    for i, a in enumerate(agents):
        result = measure(a, args.budget, registry)
        rows.append((a.id, print_overflow(result.bound)))
    replayed = all(
        replay_transcript(t, agents[i], agents[i + 1], registry, args.budget)
        for i, t in enumerate(transcripts))
    if args.registry:
        registry.save(args.registry)
    print("agent\tmeasure")
    for agent_id, bound in rows:
        print(f"{agent_id}\t{bound}")
    print(f"transcripts replay: {'ok' if replayed else 'FAILED'}")
    return OK if replayed else FAIL


def cmd_fgh(args) -> int:
    try:
        ordinal = parse_ord(args.ordinal)
    except OrdinalParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    value = fast_growing(ordinal, args.n, args.budget)
    if isinstance(value, FghBudgetExceeded):
        print(f"budget exceeded after {value.applications} applications")
        return FAIL
    print(value)
    return OK


def cmd_corpus_verify(args) -> int:
    programs = corpus()
    rows = []
    all_pass = True
    for name in PAPER_ENTRIES + EXERCISE_ENTRIES:
        program = programs[name]
        cert = synthesize(program)
        if isinstance(cert, NoPattern):
            rows.append((name, CORPUS_VALUES[name], "no-pattern", False))
            all_pass = False
            continue
        outcome = check(program, cert)
        if isinstance(outcome, Rejected):
            rows.append((name, CORPUS_VALUES[name],
                         f"rejected:{outcome.reason}", False))
            all_pass = False
            continue
        got = print_overflow(outcome.value)
        ok = got == CORPUS_VALUES[name]
        all_pass = all_pass and ok
        rows.append((name, CORPUS_VALUES[name], got, ok))
    paper_pass = sum(1 for n, _, _, ok in rows if ok and n in PAPER_ENTRIES)
    exercise_pass = sum(1 for n, _, _, ok in rows
                        if ok and n in EXERCISE_ENTRIES)
    if args.json:
        print(json.dumps({
            "entries": [{"name": n, "expected": want, "got": got, "pass": ok}
                        for n, want, got, ok in rows],
            "paper_pass": paper_pass,
            "paper_total": len(PAPER_ENTRIES),
            "exercise_pass": exercise_pass,
            "exercise_total": len(EXERCISE_ENTRIES),
        }, sort_keys=True))
    else:
        for name, want, got, ok in rows:
            print(f"{'PASS' if ok else 'FAIL'} {name}\texpected {want}\tgot {got}")
        print(f"{paper_pass}/{len(PAPER_ENTRIES)} paper examples PASS, "
              f"{exercise_pass}/{len(EXERCISE_ENTRIES)} exercise entries PASS")
    return OK if all_pass else FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordino",
        description="ordinal notation workbench")
    sub = parser.add_subparsers(dest="command", required=True)
    registry_opt = argparse.ArgumentParser(add_help=False)
    registry_opt.add_argument("--registry", default=None,
                              help="registry file (or ORDINO_REGISTRY)")

    p_ord = sub.add_parser("ord", help="ordinal calculator")
    ord_sub = p_ord.add_subparsers(dest="ord_command", required=True)
    p = ord_sub.add_parser("eval", help="evaluate an ordinal expression")
    p.add_argument("expr")
    p.set_defaults(func=cmd_ord_eval)

    p_onl = sub.add_parser("onl", help="run or value programs")
    onl_sub = p_onl.add_subparsers(dest="onl_command", required=True)
    p = onl_sub.add_parser("run", help="run a program")
    p.add_argument("file")
    p.add_argument("--steps", type=int, default=DEFAULT_STEP_BUDGET)
    p.add_argument("--outputs", type=int, default=DEFAULT_OUTPUT_BUDGET)
    p.set_defaults(func=cmd_onl_run)
    p = onl_sub.add_parser("value", help="brute-force value")
    p.add_argument("file")
    p.add_argument("--steps", type=int, default=DEFAULT_STEP_BUDGET)
    p.add_argument("--outputs", type=int, default=DEFAULT_OUTPUT_BUDGET)
    p.add_argument("--depth", type=int, default=32)
    p.set_defaults(func=cmd_onl_value)

    p_cert = sub.add_parser("cert", help="check or synthesize certificates")
    cert_sub = p_cert.add_subparsers(dest="cert_command", required=True)
    p = cert_sub.add_parser("check", help="verify a certificate")
    p.add_argument("program")
    p.add_argument("cert")
    p.set_defaults(func=cmd_cert_check)
    p = cert_sub.add_parser("synth", help="synthesize a certificate")
    p.add_argument("program")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_cert_synth)

    p_reg = sub.add_parser("registry", help="registry management")
    reg_sub = p_reg.add_subparsers(dest="registry_command", required=True)
    p = reg_sub.add_parser("add", help="register a program",
                            parents=[registry_opt])
    p.add_argument("file")
    p.set_defaults(func=cmd_registry_add)
    p = reg_sub.add_parser("list", help="list entries",
                            parents=[registry_opt])
    p.set_defaults(func=cmd_registry_list)
    p = reg_sub.add_parser("value", help="certified value of an index",
                            parents=[registry_opt])
    p.add_argument("index", type=int)
    p.set_defaults(func=cmd_registry_value)

    p_agent = sub.add_parser("agent", help="knowing-agent operations")
    agent_sub = p_agent.add_subparsers(dest="agent_command", required=True)
    p = agent_sub.add_parser("measure", help="measure an agent",
                              parents=[registry_opt])
    p.add_argument("spec")
    p.add_argument("--budget", type=int, default=10**4)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_agent_measure)
    p = agent_sub.add_parser("endorse", help="build a total endorser",
                              parents=[registry_opt])
    p.add_argument("spec")
    p.add_argument("--budget", type=int, default=10**4)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_agent_endorse)
    p = agent_sub.add_parser("chain", help="iterated endorsement chain",
                              parents=[registry_opt])
    p.add_argument("spec")
    p.add_argument("-k", type=int, required=True, dest="k")
    p.add_argument("--budget", type=int, default=10**4)
    p.set_defaults(func=cmd_agent_chain)

    p_fgh = sub.add_parser("fgh", help="fast-growing hierarchy value")
    p_fgh.add_argument("ordinal")
    p_fgh.add_argument("n", type=int)
    p_fgh.add_argument("--budget", type=int, default=10**7)
    p_fgh.set_defaults(func=cmd_fgh)

    p_corpus = sub.add_parser("corpus", help="built-in notation table")
    corpus_sub = p_corpus.add_subparsers(dest="corpus_command", required=True)
    p = corpus_sub.add_parser("verify", help="verify every corpus entry")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_corpus_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OnlError, OrdinalParseError, NotALimit, RejectedCertificate,
            ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
