"""A persistent table of enumerators with certified ordinal values.

Each entry is an enumerator of natural numbers: an ONL program whose
outputs are read as decimal numerals, a named built-in, or an embedded
program whose outputs are looked up (and lazily registered) as entries
themselves.  Registration is content-addressed, so re-registering the
same source yields the same index.

An entry may carry a value certificate shaped like the program
certificates but over indices: a "fin" node lists the member indices the
enumerator produces, an "iter" node names a wrapper template and a seed
index.  Verification recomputes the value and re-runs the enumerator; the
stored claim is never taken on faith.
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .certs import (CheckConfig, Iter, Rejected, Verified, WrapperLibrary,
                    DEFAULT_LIBRARY, check, synthesize, NoPattern,
                    cert_to_dict, cert_from_dict, Certificate)
from .onl import Halted, OnlError, Program, parse_onl, print_onl, run
from .ordinal import (AtLeastEpsilon0, DegenerateSeed, OrdinalOrOverflow,
                      cmp_overflow, iterate_sup, parse_overflow,
                      print_overflow, sup_plus_one_overflow)

REGISTRY_ENV_VAR = "ORDINO_REGISTRY"
REGISTRY_FORMAT_VERSION = 1

BUILTIN_ENUMERATORS = {
    "empty": lambda: iter(()),
    "naturals": lambda: iter(range(10**9)),
    "evens": lambda: iter(range(0, 2 * 10**9, 2)),
}


class UnknownIndex(KeyError):
    pass


class RejectedCertificate(ValueError):
    pass


@dataclass
class RegistryEntry:
    index: int
    kind: str                      # "onl" | "builtin" | "embed"
    source: str                    # program text or builtin name
    o_cert: Optional[dict] = None  # index-level certificate tree
    program_cert: Optional[dict] = None  # for "embed": the ONL certificate

    def to_dict(self) -> dict:
        data = {"index": self.index, "kind": self.kind, "source": self.source}
        if self.o_cert is not None:
            data["o_cert"] = self.o_cert
        if self.program_cert is not None:
            data["program_cert"] = self.program_cert
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "RegistryEntry":
        return cls(index=int(data["index"]), kind=str(data["kind"]),
                   source=str(data["source"]), o_cert=data.get("o_cert"),
                   program_cert=data.get("program_cert"))


@dataclass(frozen=True)
class Unverified:
    reason: str = ""


OValueOutcome = Union[Verified, Unverified]


def _content_key(kind: str, source: str) -> str:
    return hashlib.sha256(f"{kind}\x00{source}".encode()).hexdigest()


class Registry:
    def __init__(self, library: WrapperLibrary = DEFAULT_LIBRARY,
                 config: CheckConfig = CheckConfig()):
        self.entries: dict[int, RegistryEntry] = {}
        self._by_content: dict[str, int] = {}
        self.library = library
        self.config = config

    # --- registration ---------------------------------------------------------

    def _add(self, kind: str, source: str, o_cert=None,
             program_cert=None) -> int:
        key = _content_key(kind, source)
        if key in self._by_content:
            index = self._by_content[key]
            entry = self.entries[index]
            if entry.o_cert is None and o_cert is not None:
                entry.o_cert = o_cert
                entry.program_cert = program_cert
            return index
        index = len(self.entries)
        self.entries[index] = RegistryEntry(index, kind, source, o_cert,
                                            program_cert)
        self._by_content[key] = index
        return index

    def register(self, enumerator: Union[Program, str]) -> int:
        """Register an ONL numeral enumerator or a built-in by name."""
        if isinstance(enumerator, Program):
            return self._add("onl", print_onl(enumerator))
        if enumerator in BUILTIN_ENUMERATORS:
            return self._add("builtin", enumerator)
        # Treat unknown strings as program source.
        program = parse_onl(enumerator)
        return self._add("onl", print_onl(program))

    def embed_program(self, program: Program,
                      cert: Certificate) -> int:
        """Register an enumerator of the indices of the program's outputs.

        The certificate must verify; the entry's certified value then
        equals the program's certified value.
        """
        outcome = check(program, cert, self.config, self.library)
        if isinstance(outcome, Rejected):
            raise RejectedCertificate(f"{outcome.reason}: {outcome.detail}")
        o_cert = self._embed_cert(program, cert)
        return self._add("embed", print_onl(program), o_cert=o_cert,
                         program_cert=cert_to_dict(cert))

    def _embed_cert(self, program: Program, cert: Certificate) -> dict:
        from .certs import Fin as FinCert
        if isinstance(cert, FinCert):
            members = []
            result = run(program, cert.step_budget,
                         len(cert.output_certs) + 1)
            for text, sub in zip(result.outputs, cert.output_certs):
                sub_program = parse_onl(text)
                members.append(self.embed_program(sub_program, sub))
            return {"kind": "fin", "members": members,
                    "claimed": print_overflow(cert.claimed)}
        seed_index = self.embed_program(cert.seed, cert.seed_cert)
        return {"kind": "iter", "seed_index": seed_index,
                "wrapper": cert.wrapper,
                "claimed": print_overflow(cert.claimed)}

    # --- enumeration ----------------------------------------------------------

    def _require(self, index: int) -> RegistryEntry:
        if index not in self.entries:
            raise UnknownIndex(index)
        return self.entries[index]

    def enumerate(self, index: int, budget: int) -> list[int]:
        """First members of W_index, in enumeration order."""
        entry = self._require(index)
        if entry.kind == "builtin":
            out = []
            for value in BUILTIN_ENUMERATORS[entry.source]():
                if len(out) >= budget:
                    break
                out.append(value)
            return out
        program = parse_onl(entry.source)
        result = run(program, self.config.step_budget, budget)
        if entry.kind == "onl":
            members = []
            for text in result.outputs:
                if text.isdigit():
                    members.append(int(text))
            return members
        # "embed": outputs are programs; members are their indices,
        # registered on demand with synthesized certificates.
        members = []
        for text in result.outputs:
            members.append(self._embed_output(text))
        return members

    def _embed_output(self, text: str) -> int:
        program = parse_onl(text)
        key = _content_key("embed", print_onl(program))
        if key in self._by_content:
            return self._by_content[key]
        cert = synthesize(program, self.config, self.library)
        if isinstance(cert, NoPattern):
            raise RejectedCertificate(
                f"embedded output has no certificate: {cert.reason}")
        return self.embed_program(program, cert)

    def w_member(self, m: int, index: int, budget: int) -> str:
        """'yes' if m shows up among the first `budget` members; else
        'not-seen' (which proves nothing)."""
        for member in self.enumerate(index, budget):
            if member == m:
                return "yes"
        return "not-seen"

    # --- certified values -------------------------------------------------------

    def o_value(self, index: int,
                _active: Optional[set[int]] = None) -> OValueOutcome:
        """Recheck the stored value certificate for an index."""
        entry = self._require(index)
        if entry.o_cert is None:
            return Unverified("no certificate")
        active = _active if _active is not None else set()
        if index in active:
            return Unverified("cyclic certificate")
        active.add(index)
        try:
            return self._check_o_cert(entry, active)
        finally:
            active.discard(index)

    def _check_o_cert(self, entry: RegistryEntry, active) -> OValueOutcome:
        cert = entry.o_cert
        claimed = parse_overflow(cert["claimed"])
        if cert["kind"] == "fin":
            members = [int(m) for m in cert["members"]]
            actual = self.enumerate(entry.index, len(members) + 1)
            if actual != members:
                return Unverified("enumerated members differ from certificate")
            values = []
            for m in members:
                sub = self.o_value(m, active)
                if isinstance(sub, Unverified):
                    return Unverified(f"member {m}: {sub.reason}")
                values.append(sub.value)
            value = sup_plus_one_overflow(values)
        elif cert["kind"] == "iter":
            seed_index = int(cert["seed_index"])
            seed = self.o_value(seed_index, active)
            if isinstance(seed, Unverified):
                return Unverified(f"seed {seed_index}: {seed.reason}")
            if isinstance(seed.value, AtLeastEpsilon0):
                return Unverified("seed exceeds the representable range")
            wrapper = self.library.get(cert["wrapper"])
            if wrapper is None:
                return Unverified(f"unknown wrapper {cert['wrapper']!r}")
            # The underlying program must still match the wrapper shape
            # with the seed entry's program as its seed.
            if entry.kind == "embed" and entry.program_cert is not None:
                program = parse_onl(entry.source)
                outcome = check(program,
                                cert_from_dict(entry.program_cert),
                                self.config, self.library)
                if isinstance(outcome, Rejected):
                    return Unverified(
                        f"program certificate: {outcome.reason}")
            try:
                value = iterate_sup(wrapper.value_map, seed.value)
            except DegenerateSeed as exc:
                return Unverified(str(exc))
        else:
            return Unverified(f"unknown certificate kind {cert['kind']!r}")
        if cmp_overflow(value, claimed) != 0:
            return Unverified(
                f"recomputed {print_overflow(value)}, "
                f"claimed {cert['claimed']}")
        return Verified(value)

    def attach_fin_cert(self, index: int, members: list[int],
                        claimed: OrdinalOrOverflow):
        """Attach a fin-shaped value certificate to an existing entry."""
        entry = self._require(index)
        entry.o_cert = {"kind": "fin", "members": list(members),
                        "claimed": print_overflow(claimed)}

    # --- persistence -----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "v": REGISTRY_FORMAT_VERSION,
            "entries": [self.entries[i].to_dict()
                        for i in sorted(self.entries)],
        }

    def save(self, path: str):
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.to_dict(), handle, indent=2, sort_keys=True)
            handle.write("\n")

    @classmethod
    def from_dict(cls, data: dict,
                  library: WrapperLibrary = DEFAULT_LIBRARY,
                  config: CheckConfig = CheckConfig()) -> "Registry":
        if data.get("v") != REGISTRY_FORMAT_VERSION:
            raise ValueError("unsupported registry format")
        registry = cls(library, config)
        for raw in data["entries"]:
            entry = RegistryEntry.from_dict(raw)
            registry.entries[entry.index] = entry
            registry._by_content[_content_key(entry.kind,
                                              entry.source)] = entry.index
        if registry.entries:
            expected = set(range(len(registry.entries)))
            if set(registry.entries) != expected:
                raise ValueError("registry indices are not dense")
        return registry

    @classmethod
    def load(cls, path: str,
             library: WrapperLibrary = DEFAULT_LIBRARY,
             config: CheckConfig = CheckConfig()) -> "Registry":
        with open(path, encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle), library, config)

    @classmethod
    def open(cls, path: Optional[str],
             library: WrapperLibrary = DEFAULT_LIBRARY,
             config: CheckConfig = CheckConfig()) -> "Registry":
        """Load from the given path, the environment, or start empty."""
        path = path or os.environ.get(REGISTRY_ENV_VAR)
        if path and os.path.exists(path):
            return cls.load(path, library, config)
        return cls(library, config)
