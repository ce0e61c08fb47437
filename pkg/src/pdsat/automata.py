"""Nondeterministic and alternating finite automata on bounded alphabets.

States and symbols are arbitrary hashable values (integer handles from a
:class:`~pdsat.symbols.SymbolTable`, strings, tuples, ...).  Automata do not
store initial states; every query names its start state explicitly.  All
values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidInputError

# Epsilon label for Nfa transitions.  Never a valid alphabet symbol.
EPS = None


class Sentinel:
    """A named unique value, used for special automaton states."""

    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


#: Sole accepting state of region automata; reached by reading the bottom symbol.
S_BOT = Sentinel("s_bot")
#: Universal state of region automata; accepts every stack.
S_STAR = Sentinel("s_star")


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic finite automaton with optional epsilon transitions."""

    states: frozenset
    alphabet: frozenset
    finals: frozenset
    transitions: frozenset  # of (state, label, state), label a symbol or EPS

    def __post_init__(self):
        if not self.finals <= self.states:
            raise InvalidInputError("finals must be a subset of states")
        for s, a, t in self.transitions:
            if s not in self.states or t not in self.states:
                raise InvalidInputError(f"transition endpoint not a state: {(s, a, t)!r}")
            if a is not EPS and a not in self.alphabet:
                raise InvalidInputError(f"transition label not in alphabet: {a!r}")

    def has_eps(self) -> bool:
        return any(a is EPS for _, a, _ in self.transitions)


def nfa(states=(), alphabet=(), finals=(), transitions=()) -> Nfa:
    """Convenience constructor; endpoints of transitions are added to states."""
    transitions = frozenset(transitions)
    states = frozenset(states) | frozenset(finals) \
        | {s for s, _, _ in transitions} | {t for _, _, t in transitions}
    return Nfa(states, frozenset(alphabet), frozenset(finals), transitions)


@lru_cache(maxsize=None)
def _step_index(aut: Nfa):
    """dict (state, label) -> frozenset of targets."""
    index = defaultdict(set)
    for s, a, t in aut.transitions:
        index[(s, a)].add(t)
    return {k: frozenset(v) for k, v in index.items()}


@lru_cache(maxsize=None)
def _eps_reach(aut: Nfa):
    """dict state -> frozenset of states reachable by epsilon moves (incl. itself)."""
    step = defaultdict(set)
    for s, a, t in aut.transitions:
        if a is EPS:
            step[s].add(t)
    closure = {}
    for s in aut.states:
        seen = {s}
        todo = deque([s])
        while todo:
            u = todo.popleft()
            for v in step[u]:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        closure[s] = frozenset(seen)
    return closure


def nfa_accepts(aut: Nfa, start, word) -> bool:
    """True iff some run over ``word`` from ``start`` ends in a final state."""
    if start not in aut.states:
        raise InvalidInputError(f"unknown state: {start!r}")
    for a in word:
        if a not in aut.alphabet:
            raise InvalidInputError(f"unknown symbol: {a!r}")
    index = _step_index(aut)
    closure = _eps_reach(aut)
    current = set(closure[start])
    for a in word:
        nxt = set()
        for s in current:
            for t in index.get((s, a), ()):
                nxt |= closure[t]
        if not nxt:
            return False
        current = nxt
    return bool(current & aut.finals)


def eps_closure(aut: Nfa) -> Nfa:
    """Equivalent epsilon-free automaton (same language from every state)."""
    closure = _eps_reach(aut)
    index = _step_index(aut)
    transitions = set()
    finals = set()
    for s in aut.states:
        if closure[s] & aut.finals:
            finals.add(s)
        for u in closure[s]:
            for a in aut.alphabet:
                for t in index.get((u, a), ()):
                    transitions.add((s, a, t))
    return Nfa(aut.states, aut.alphabet, frozenset(finals), frozenset(transitions))


def product_intersect(aut: Nfa, pattern: Nfa, pattern_start) -> Nfa:
    """Product automaton; the language from ``(s, pattern_start)`` is the
    intersection of the two component languages.

    ``pattern`` must be epsilon-free; ``aut`` is epsilon-closed first.
    """
    if aut.alphabet != pattern.alphabet:
        raise InvalidInputError("product_intersect requires matching alphabets")
    if pattern.has_eps():
        raise InvalidInputError("pattern must be epsilon-free")
    if pattern_start not in pattern.states:
        raise InvalidInputError(f"unknown pattern state: {pattern_start!r}")
    left = eps_closure(aut) if aut.has_eps() else aut
    lidx = _step_index(left)
    ridx = _step_index(pattern)
    states = {(s, t) for s in left.states for t in pattern.states}
    transitions = set()
    for s, a, s2 in left.transitions:
        for t in pattern.states:
            for t2 in ridx.get((t, a), ()):
                transitions.add(((s, t), a, (s2, t2)))
    finals = {(s, t) for s in left.finals for t in pattern.finals}
    return Nfa(frozenset(states), aut.alphabet, frozenset(finals), frozenset(transitions))


def pattern_forbidden_factors(alphabet, factors):
    """Deterministic automaton of the words containing none of the two-symbol
    ``factors``.  Returns ``(nfa, start)``; every state is accepting and the
    dead sink is omitted.
    """
    alphabet = frozenset(alphabet)
    factors = set(factors)
    for f in factors:
        if len(f) != 2:
            raise InvalidInputError(f"forbidden factor must have length 2: {f!r}")
        if f[0] not in alphabet or f[1] not in alphabet:
            raise InvalidInputError(f"factor symbol not in alphabet: {f!r}")
    heads = {f[0] for f in factors}
    start = ("pat", None)
    states = {start} | {("pat", a) for a in heads}
    transitions = set()
    for state in states:
        _, last = state
        for a in alphabet:
            if last is not None and (last, a) in factors:
                continue  # dead sink, omitted
            nxt = ("pat", a) if a in heads else start
            transitions.add((state, a, nxt))
    aut = Nfa(frozenset(states), alphabet, frozenset(states), frozenset(transitions))
    return aut, start


def words_upto(aut: Nfa, start, maxlen: int):
    """The set of accepted words of length at most ``maxlen`` (as tuples)."""
    if start not in aut.states:
        raise InvalidInputError(f"unknown state: {start!r}")
    closure = _eps_reach(aut)
    index = _step_index(aut)
    found = set()
    words = {frozenset(closure[start]): {()}}
    for k in range(maxlen + 1):
        next_words = defaultdict(set)
        for sset, ws in words.items():
            if sset & aut.finals:
                found |= ws
            if k == maxlen:
                continue
            for a in aut.alphabet:
                nxt = set()
                for s in sset:
                    for t in index.get((s, a), ()):
                        nxt |= closure[t]
                if nxt:
                    fs = frozenset(nxt)
                    for w in ws:
                        next_words[fs].add(w + (a,))
        words = next_words
        if not words:
            break
    return found


def language_empty(aut: Nfa, start) -> bool:
    """True iff no final state is reachable from ``start``."""
    closure = _eps_reach(aut)
    index = _step_index(aut)
    seen = set(closure[start])
    todo = deque(seen)
    while todo:
        s = todo.popleft()
        if s in aut.finals:
            return False
        for a in aut.alphabet:
            for t in index.get((s, a), ()):
                for u in closure[t]:
                    if u not in seen:
                        seen.add(u)
                        todo.append(u)
    return True


def reverse(aut: Nfa, start):
    """Automaton for the reversed language; returns ``(nfa, new_start)``."""
    new_start = ("rev", "start")
    transitions = {(t, a, s) for s, a, t in aut.transitions}
    transitions |= {(new_start, EPS, f) for f in aut.finals}
    states = aut.states | {new_start}
    return Nfa(frozenset(states), aut.alphabet, frozenset({start}),
               frozenset(transitions)), new_start


def relabel(aut: Nfa, mapping) -> Nfa:
    """Apply ``mapping`` to every non-epsilon transition label."""
    alphabet = frozenset(mapping(a) for a in aut.alphabet)
    transitions = frozenset(
        (s, a if a is EPS else mapping(a), t) for s, a, t in aut.transitions)
    return Nfa(aut.states, alphabet, aut.finals, transitions)


@dataclass(frozen=True, eq=False)
class Language:
    """A regular language as an automaton plus its designated start state."""

    aut: Nfa
    start: object

    def accepts(self, word) -> bool:
        return nfa_accepts(self.aut, self.start, tuple(word))

    def words(self, maxlen: int):
        return words_upto(self.aut, self.start, maxlen)

    def is_empty(self) -> bool:
        return language_empty(self.aut, self.start)


# ---------------------------------------------------------------------------
# Alternating automata


@dataclass(frozen=True)
class AltAutomaton:
    """Alternating automaton: transitions lead into sets of states, all of
    which must accept the remaining word.
    """

    states: frozenset
    alphabet: frozenset
    finals: frozenset
    transitions: frozenset  # of (state, symbol, frozenset of states)

    def __post_init__(self):
        if not self.finals <= self.states:
            raise InvalidInputError("finals must be a subset of states")
        for s, a, targets in self.transitions:
            if s not in self.states:
                raise InvalidInputError(f"transition source not a state: {s!r}")
            if a not in self.alphabet:
                raise InvalidInputError(f"transition label not in alphabet: {a!r}")
            if not targets or not targets <= self.states:
                raise InvalidInputError(
                    f"target set must be a non-empty subset of states: {targets!r}")


def alt(states=(), alphabet=(), finals=(), transitions=()) -> AltAutomaton:
    """Convenience constructor; canonicalises target sets to frozensets."""
    transitions = frozenset((s, a, frozenset(ts)) for s, a, ts in transitions)
    states = frozenset(states) | frozenset(finals) \
        | {s for s, _, _ in transitions} \
        | {t for _, _, ts in transitions for t in ts}
    return AltAutomaton(states, frozenset(alphabet), frozenset(finals), transitions)


@lru_cache(maxsize=None)
def _alt_index(aut: AltAutomaton):
    index = defaultdict(list)
    for s, a, targets in aut.transitions:
        index[(s, a)].append(targets)
    return dict(index)


def alt_membership(aut: AltAutomaton, start, word) -> bool:
    """True iff there is an accepting run over ``word`` from ``start``.

    Evaluated backwards: a state accepts a suffix iff some transition on its
    first symbol leads into a set of states all accepting the remainder.
    """
    if start not in aut.states:
        raise InvalidInputError(f"unknown state: {start!r}")
    for a in word:
        if a not in aut.alphabet:
            raise InvalidInputError(f"unknown symbol: {a!r}")
    index = _alt_index(aut)
    good = set(aut.finals)
    for a in reversed(word):
        good = {s for s in aut.states
                if any(targets <= good for targets in index.get((s, a), ()))}
    return start in good


def antichain(sets):
    """The subset-minimal elements of an iterable of frozensets."""
    result = []
    for s in sorted(set(sets), key=len):
        if not any(r <= s for r in result):
            result.append(s)
    return frozenset(result)


def alt_run_targets(aut: AltAutomaton, start, word) -> frozenset:
    """All subset-minimal state sets S with a run ``start -word-> S``."""
    if start not in aut.states:
        raise InvalidInputError(f"unknown state: {start!r}")
    index = _alt_index(aut)
    frontier = {frozenset({start})}
    for a in word:
        nxt = set()
        for sset in frontier:
            options = []
            for s in sset:
                choices = index.get((s, a))
                if not choices:
                    break
                options.append(choices)
            else:
                for combo in itertools.product(*options):
                    nxt.add(frozenset().union(*combo))
        frontier = antichain(nxt)
        if not frontier:
            return frozenset()
    return antichain(frontier)
