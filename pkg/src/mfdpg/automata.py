"""NFA construction (Thompson) and DFA machinery (subset construction,
complement, product intersection).

DFAs are canonical: state 0 is the start, states are numbered in
breadth-first discovery order with outgoing characters scanned in ascending
code order, and the transition table is dense over the 95-character
printable-ASCII alphabet with -1 for the elided dead state. Two compilations
of the same source therefore produce bit-identical tables, which the
derivation pipeline relies on.
"""
from __future__ import annotations

from collections import defaultdict, deque

import numpy as np

from . import regex as rx
from .errors import StateExplosion

ALPHABET = rx.ALPHABET
ALPHABET_SIZE = len(ALPHABET)
_CHAR_INDEX = {ch: i for i, ch in enumerate(ALPHABET)}

MAX_DFA_STATES = 10 ** 6
MAX_NFA_STATES = 10 ** 5


class Nfa:
    """Epsilon-NFA with one accept state.

    Per state: at most one labeled transition (a character set and a
    target) plus epsilon targets. Thompson output additionally keeps the
    out-degree at two or less.
    """

    def __init__(self):
        self.eps: list[list[int]] = []
        self.label: list[tuple[frozenset, int] | None] = []
        self.start = 0
        self.accept = 0

    def new_state(self) -> int:
        if len(self.eps) >= MAX_NFA_STATES:
            raise StateExplosion(f"NFA exceeds {MAX_NFA_STATES} states")
        self.eps.append([])
        self.label.append(None)
        return len(self.eps) - 1

    @property
    def num_states(self) -> int:
        return len(self.eps)


def thompson(ast: rx.Node) -> Nfa:
    """McNaughton-Yamada-Thompson construction."""
    nfa = Nfa()
    start, accept = _build(nfa, ast)
    nfa.start = start
    nfa.accept = accept
    return nfa


def _build(nfa: Nfa, node: rx.Node) -> tuple[int, int]:
    if isinstance(node, rx.Literal):
        return _leaf(nfa, frozenset(node.char))
    if isinstance(node, rx.CharClass):
        return _leaf(nfa, node.chars)
    if isinstance(node, rx.Group):
        return _build(nfa, node.node)
    if isinstance(node, rx.Concat):
        if not node.parts:
            return _epsilon(nfa)
        start, accept = _build(nfa, node.parts[0])
        for part in node.parts[1:]:
            s2, a2 = _build(nfa, part)
            nfa.eps[accept].append(s2)
            accept = a2
        return start, accept
    if isinstance(node, rx.Alternate):
        start, accept = _build(nfa, node.options[0])
        for option in node.options[1:]:
            s2, a2 = _build(nfa, option)
            s = nfa.new_state()
            a = nfa.new_state()
            nfa.eps[s] += [start, s2]
            nfa.eps[accept].append(a)
            nfa.eps[a2].append(a)
            start, accept = s, a
        return start, accept
    if isinstance(node, rx.Repeat):
        return _build_repeat(nfa, node)
    raise TypeError(f"unknown AST node {node!r}")


def _leaf(nfa: Nfa, chars: frozenset) -> tuple[int, int]:
    s = nfa.new_state()
    a = nfa.new_state()
    nfa.label[s] = (chars, a)
    return s, a


def _epsilon(nfa: Nfa) -> tuple[int, int]:
    s = nfa.new_state()
    a = nfa.new_state()
    nfa.eps[s].append(a)
    return s, a


def _build_repeat(nfa: Nfa, node: rx.Repeat) -> tuple[int, int]:
    # X{m,n} = m copies then n-m optional copies; X{m,} ends with a star.
    pieces: list[tuple[int, int]] = []
    for _ in range(node.min):
        pieces.append(_build(nfa, node.node))
    if node.max is None:
        pieces.append(_star(nfa, *_build(nfa, node.node)))
    else:
        for _ in range(node.max - node.min):
            pieces.append(_optional(nfa, *_build(nfa, node.node)))
    if not pieces:
        return _epsilon(nfa)
    start, accept = pieces[0]
    for s2, a2 in pieces[1:]:
        nfa.eps[accept].append(s2)
        accept = a2
    return start, accept


def _star(nfa: Nfa, s: int, a: int) -> tuple[int, int]:
    s2 = nfa.new_state()
    a2 = nfa.new_state()
    nfa.eps[s2] += [s, a2]
    nfa.eps[a] += [s, a2]
    return s2, a2


def _optional(nfa: Nfa, s: int, a: int) -> tuple[int, int]:
    s2 = nfa.new_state()
    a2 = nfa.new_state()
    nfa.eps[s2] += [s, a2]
    nfa.eps[a].append(a2)
    return s2, a2


class Dfa:
    """Canonical DFA over the printable-ASCII alphabet.

    table[s, c] is the successor of state s on alphabet index c, or -1 for
    the elided dead state. State 0 is the start.
    """

    def __init__(self, table: np.ndarray, accept: np.ndarray):
        self.table = table
        self.accept = accept
        self._dist: np.ndarray | None = None

    @property
    def num_states(self) -> int:
        return len(self.table)

    def distances(self) -> np.ndarray:
        """Memoized distance_to_accept table (the walk consults it at every
        step)."""
        if self._dist is None:
            self._dist = distance_to_accept(self)
        return self._dist

    def matches(self, s: str) -> bool:
        state = 0
        for ch in s:
            c = _CHAR_INDEX.get(ch)
            if c is None:
                return False
            state = self.table[state, c]
            if state < 0:
                return False
        return bool(self.accept[state])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Dfa)
            and np.array_equal(self.table, other.table)
            and np.array_equal(self.accept, other.accept)
        )


def _closure(nfa: Nfa, states) -> frozenset:
    stack = list(states)
    seen = set(stack)
    while stack:
        for t in nfa.eps[stack.pop()]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


def determinize(nfa: Nfa) -> Dfa:
    """Subset construction with canonical breadth-first numbering."""
    start = _closure(nfa, [nfa.start])
    index = {start: 0}
    order = [start]
    rows = []
    accept = []
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        moves: dict[int, set] = defaultdict(set)
        for s in subset:
            labeled = nfa.label[s]
            if labeled is not None:
                chars, target = labeled
                for ch in chars:
                    moves[_CHAR_INDEX[ch]].add(target)
        row = np.full(ALPHABET_SIZE, -1, dtype=np.int32)
        for c in sorted(moves):
            target = _closure(nfa, moves[c])
            if target not in index:
                if len(index) >= MAX_DFA_STATES:
                    raise StateExplosion(f"DFA exceeds {MAX_DFA_STATES} states")
                index[target] = len(index)
                order.append(target)
                queue.append(target)
            row[c] = index[target]
        rows.append(row)
        accept.append(nfa.accept in subset)
    return Dfa(np.vstack(rows), np.array(accept, dtype=bool))


def canonicalize(dfa: Dfa) -> Dfa:
    """Renumber by BFS from the start, dropping unreachable states."""
    renum = np.full(dfa.num_states, -1, dtype=np.int32)
    renum[0] = 0
    order = [0]
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for t in dfa.table[s]:
            if t >= 0 and renum[t] < 0:
                renum[t] = len(order)
                order.append(int(t))
                queue.append(int(t))
    table = dfa.table[order]
    remapped = np.where(table >= 0, renum[table], -1).astype(np.int32)
    return Dfa(remapped, dfa.accept[order])


def complement(dfa: Dfa) -> Dfa:
    """Complete the transition function, then flip accepting states."""
    n = dfa.num_states
    table = np.vstack([dfa.table, np.full((1, ALPHABET_SIZE), n, dtype=np.int32)])
    table = np.where(table < 0, n, table).astype(np.int32)
    accept = np.concatenate([~dfa.accept, [True]])
    return canonicalize(Dfa(table, accept))


def intersect(a: Dfa, b: Dfa) -> Dfa:
    """Product construction; accepts strings accepted by both operands."""
    index = {(0, 0): 0}
    queue = deque([(0, 0)])
    rows = []
    accept = []
    while queue:
        sa, sb = queue.popleft()
        row = np.full(ALPHABET_SIZE, -1, dtype=np.int32)
        ta = a.table[sa]
        tb = b.table[sb]
        for c in range(ALPHABET_SIZE):
            if ta[c] < 0 or tb[c] < 0:
                continue
            pair = (int(ta[c]), int(tb[c]))
            if pair not in index:
                if len(index) >= MAX_DFA_STATES:
                    raise StateExplosion(f"product exceeds {MAX_DFA_STATES} states")
                index[pair] = len(index)
                queue.append(pair)
            row[c] = index[pair]
        rows.append(row)
        accept.append(bool(a.accept[sa]) and bool(b.accept[sb]))
    return Dfa(np.vstack(rows), np.array(accept, dtype=bool))


def trim_to_accepting(dfa: Dfa) -> Dfa:
    """Remove states that cannot reach an accept state, then renumber.

    The walk requires this: every retained state must be able to finish.
    """
    keep = _reaches_accept(dfa)
    table = dfa.table.copy()
    defined = table >= 0
    doomed = defined & ~keep[np.where(defined, table, 0)]
    table[doomed] = -1
    if not keep[0]:
        # Start cannot reach acceptance: the empty language.
        return Dfa(np.full((1, ALPHABET_SIZE), -1, dtype=np.int32),
                   np.array([False]))
    return canonicalize(Dfa(table, dfa.accept))


def _reaches_accept(dfa: Dfa) -> np.ndarray:
    reverse: list[list[int]] = [[] for _ in range(dfa.num_states)]
    for s in range(dfa.num_states):
        for t in dfa.table[s]:
            if t >= 0:
                reverse[t].append(s)
    keep = dfa.accept.copy()
    queue = deque(np.flatnonzero(dfa.accept).tolist())
    while queue:
        t = queue.popleft()
        for s in reverse[t]:
            if not keep[s]:
                keep[s] = True
                queue.append(s)
    return keep


def distance_to_accept(dfa: Dfa) -> np.ndarray:
    """Shortest number of characters from each state to acceptance
    (0 for accepting states, num_states for unreachable ones)."""
    dist = np.full(dfa.num_states, dfa.num_states, dtype=np.int64)
    dist[dfa.accept] = 0
    reverse: list[list[int]] = [[] for _ in range(dfa.num_states)]
    for s in range(dfa.num_states):
        for t in set(dfa.table[s].tolist()):
            if t >= 0:
                reverse[t].append(s)
    queue = deque(np.flatnonzero(dfa.accept).tolist())
    while queue:
        t = queue.popleft()
        for s in reverse[t]:
            if dist[s] > dist[t] + 1:
                dist[s] = dist[t] + 1
                queue.append(s)
    return dist


def is_empty(dfa: Dfa) -> bool:
    """True when no accepting state is reachable from the start."""
    dist = dfa.distances()
    reachable = {0}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        if dist[s] < dfa.num_states:
            return False
        for t in set(dfa.table[s].tolist()):
            if t >= 0 and t not in reachable:
                reachable.add(int(t))
                queue.append(int(t))
    return True


def length_dfa(max_len: int) -> Dfa:
    """Accepts every string of length <= max_len."""
    table = np.full((max_len + 1, ALPHABET_SIZE), -1, dtype=np.int32)
    for i in range(max_len):
        table[i, :] = i + 1
    return Dfa(table, np.ones(max_len + 1, dtype=bool))


def dfa_to_nfa(dfa: Dfa) -> Nfa:
    """View a DFA as an NFA (for idempotence checks); single synthetic
    accept state reached by epsilon from each accepting DFA state."""
    nfa = Nfa()
    base = [nfa.new_state() for _ in range(dfa.num_states)]
    # One labeled transition per state: split per target via intermediates.
    for s in range(dfa.num_states):
        targets = defaultdict(list)
        for c in range(ALPHABET_SIZE):
            t = dfa.table[s, c]
            if t >= 0:
                targets[int(t)].append(ALPHABET[c])
        for t, chars in targets.items():
            hop = nfa.new_state()
            nfa.label[hop] = (frozenset(chars), base[t])
            nfa.eps[base[s]].append(hop)
    accept = nfa.new_state()
    for s in np.flatnonzero(dfa.accept):
        nfa.eps[base[s]].append(accept)
    nfa.start = base[0]
    nfa.accept = accept
    return nfa
