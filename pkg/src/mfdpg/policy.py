"""Password policies: compilation to a single product DFA and the seeded
random walk that emits a compliant password.

A policy is one must-match regex plus any number of must-not-match regexes.
Compilation intersects the must-match DFA with the complement of each
must-not-match DFA and with a maximum-length DFA, trims states that cannot
reach acceptance, and rejects empty policies. The walk draws every decision
from an HMAC-DRBG stream, so the emitted password is a pure function of the
DRBG seed and the policy source.
"""
from __future__ import annotations

import functools
import json
import re
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import automata
from .drbg import HmacDrbg
from .errors import PolicyEmpty, RegexSyntaxError
from .regex import parse_regex

DEFAULT_MAX_LENGTH = 64

# "no k consecutive identical characters" is not regular-expressible with
# backreferences disallowed, so policies write REPEATk(<class>) and we
# expand it to .*(aaa|bbb|...).* over the class members.
_REPEAT_MACRO = re.compile(r"REPEAT(\d+)\((\[[^\]]*\])\)")


@dataclass(frozen=True)
class PasswordPolicy:
    must_match: str
    must_not_match: tuple = ()
    max_length: int = DEFAULT_MAX_LENGTH

    def __post_init__(self):
        if not 1 <= self.max_length <= 256:
            raise ValueError(f"max_length {self.max_length} out of range")
        object.__setattr__(self, "must_not_match", tuple(self.must_not_match))


def expand_repeat_macros(src: str) -> str:
    """Expand REPEATk([...]) into an explicit per-character alternation."""

    def replace(m: re.Match) -> str:
        k = int(m.group(1))
        if k < 2:
            raise RegexSyntaxError("REPEAT count must be at least 2", m.start())
        node = parse_regex(m.group(2))
        runs = "|".join(re.escape(ch) * k for ch in sorted(node.chars))
        return f"({runs})"

    return _REPEAT_MACRO.sub(replace, src)


def compile_policy(policy: PasswordPolicy) -> automata.Dfa:
    """One canonical DFA accepting exactly the compliant passwords."""
    return _compile_cached(policy.must_match, policy.must_not_match,
                           policy.max_length)


@functools.lru_cache(maxsize=64)
def _compile_cached(must_match: str, must_not_match: tuple, max_length: int):
    dfa = _regex_dfa(must_match)
    for pattern in must_not_match:
        dfa = automata.intersect(dfa, automata.complement(_regex_dfa(pattern)))
    dfa = automata.intersect(dfa, automata.length_dfa(max_length))
    dfa = automata.trim_to_accepting(dfa)
    if automata.is_empty(dfa):
        raise PolicyEmpty(f"policy {must_match!r} accepts no string")
    return dfa


def _regex_dfa(src: str) -> automata.Dfa:
    return automata.determinize(automata.thompson(parse_regex(
        expand_repeat_macros(src))))


def matches(dfa: automata.Dfa, s: str) -> bool:
    return dfa.matches(s)


def walk(dfa: automata.Dfa, drbg: HmacDrbg, max_length: int) -> str:
    """Seeded random walk emitting one accepted string.

    At each state the candidates are the outgoing characters (ascending
    code order) whose targets can still reach acceptance within the
    remaining length budget, plus a STOP candidate when the current state
    accepts. One candidate is drawn uniformly from the DRBG; STOP ends the
    walk. The DFA must be trimmed (see trim_to_accepting).
    """
    dist = dfa.distances()
    out: list[str] = []
    state = 0
    while True:
        remaining = max_length - len(out)
        assert dist[state] <= remaining, "walk entered a hopeless state"
        row = dfa.table[state]
        viable = np.flatnonzero((row >= 0) & (dist[np.maximum(row, 0)] <= remaining - 1))
        n = len(viable) + (1 if dfa.accept[state] else 0)
        choice = _draw_index(drbg, n)
        if choice == len(viable):  # STOP
            return "".join(out)
        c = int(viable[choice])
        out.append(automata.ALPHABET[c])
        state = int(row[c])


def _draw_index(drbg: HmacDrbg, n: int) -> int:
    """Uniform index in [0, n) by rejection sampling on 4-byte draws.

    Draws even when n == 1 so the stream position depends only on the
    number of decisions, never on how forced they were.
    """
    limit = (1 << 32) // n * n
    while True:
        v = int.from_bytes(drbg.generate_bytes(4), "little")
        if v < limit:
            return v % n


def generate(preimage: bytes, policy: PasswordPolicy) -> str:
    """Deterministic policy-compliant password for a 32-byte preimage."""
    dfa = compile_policy(policy)
    return walk(dfa, HmacDrbg(preimage), policy.max_length)


# --- bundled policy corpus ---------------------------------------------------

@dataclass(frozen=True)
class PolicyRecord:
    service: str
    policy: PasswordPolicy
    note: str = field(default="", compare=False)


def load_policy_corpus(path=None) -> list[PolicyRecord]:
    """Policy file: JSON array of {service, must_match, must_not_match?,
    max_length?, note?} records."""
    if path is None:
        text = resources.files("mfdpg").joinpath("policies.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    records = []
    for entry in json.loads(text):
        records.append(PolicyRecord(
            service=entry["service"],
            policy=PasswordPolicy(
                must_match=entry["must_match"],
                must_not_match=tuple(entry.get("must_not_match", ())),
                max_length=entry.get("max_length", DEFAULT_MAX_LENGTH),
            ),
            note=entry.get("note", ""),
        ))
    return records
