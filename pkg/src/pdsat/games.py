"""Two-player pushdown games solved by alternating-automaton saturation.

Reachability games need a single least fixed point.  Büchi games nest a least
fixed point inside a greatest one; parity games generalise to one fixed point
per colour, dispatched recursively.  Winning-region automata use one state
``(p, i)`` per control ``p`` and fixed-point level ``i``, plus the universal
state ``S_STAR`` and the bottom-accepting state ``S_BOT``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass

from .automata import (AltAutomaton, S_BOT, S_STAR, alt_membership,
                       alt_run_targets, antichain)
from .errors import InvalidInputError
from .pds import Configuration, PushdownSystem, check_valid

ELOISE = "E"
ABELARD = "A"


@dataclass(frozen=True, eq=False)
class ReachabilityCondition:
    target: AltAutomaton
    embed: dict  # control -> target-automaton state


@dataclass(frozen=True)
class BuchiCondition:
    finals: frozenset  # controls to visit infinitely often


@dataclass(frozen=True, eq=False)
class ParityCondition:
    colours: dict  # control -> colour in 0..max_colour
    max_colour: int


@dataclass(frozen=True, eq=False)
class PushdownGame:
    pds: PushdownSystem
    owner: dict  # control -> ELOISE | ABELARD
    condition: object


@dataclass(frozen=True, eq=False)
class RegionAutomaton:
    """Alternating automaton accepting the winning region, with an entry
    state per control."""

    aut: AltAutomaton
    entry: dict  # control -> automaton state


def check_game(game: PushdownGame):
    check_valid(game.pds)
    for q in game.pds.controls:
        if game.owner.get(q) not in (ELOISE, ABELARD):
            raise InvalidInputError(f"control has no owner: {q!r}")
    cond = game.condition
    if isinstance(cond, ParityCondition):
        for q in game.pds.controls:
            c = cond.colours.get(q)
            if c is None or not 0 <= c <= cond.max_colour:
                raise InvalidInputError(f"control has no colour: {q!r}")


def region_member(region: RegionAutomaton, c: Configuration) -> bool:
    entry = region.entry.get(c.control)
    if entry is None:
        raise InvalidInputError(f"control has no entry state: {c.control!r}")
    return alt_membership(region.aut, entry, c.stack)


def subsume(aut: AltAutomaton) -> AltAutomaton:
    """Drop every transition whose target set strictly contains another
    target for the same source and symbol; languages are unchanged."""
    grouped = defaultdict(set)
    for s, a, targets in aut.transitions:
        grouped[(s, a)].add(targets)
    transitions = frozenset((s, a, targets)
                            for (s, a), sets in grouped.items()
                            for targets in antichain(sets))
    return AltAutomaton(aut.states, aut.alphabet, aut.finals, transitions)


def _rules_by_source(system: PushdownSystem):
    index = defaultdict(list)
    for r in system.rules:
        index[(r.from_control, r.from_symbol)].append(r)
    return index


def _game_moves(aut: AltAutomaton, game: PushdownGame, entry_for):
    """Transitions of one game-predecessor step.

    For every control p and top symbol A: an Éloïse control gets one
    transition per rule and per minimal run of the rule's pushed word; an
    Abelard control gets the unions of one minimal run target per rule.
    ``entry_for(p, q)`` names the automaton state standing for the successor
    control ``q`` when moving from ``p``.
    """
    rules = _rules_by_source(game.pds)
    moves = defaultdict(set)  # (p, A) -> {frozenset targets}
    for (p, a), applicable in rules.items():
        per_rule = []
        for r in applicable:
            state = entry_for(p, r.to_control)
            if state not in aut.states:
                per_rule.append(frozenset())
                continue
            per_rule.append(alt_run_targets(aut, state, r.pushed))
        if game.owner[p] == ELOISE:
            for targets in per_rule:
                moves[(p, a)] |= targets
        else:
            if any(not t for t in per_rule):
                continue  # some rule admits no run: Abelard escapes
            for combo in itertools.product(*per_rule):
                moves[(p, a)].add(frozenset().union(*combo))
    return {key: antichain(sets) for key, sets in moves.items() if sets}


def solve_reachability_game(game: PushdownGame) -> RegionAutomaton:
    """Least fixed point of the game-predecessor rules over the target
    automaton: Éloïse needs one rule whose pushed word runs into the set,
    Abelard needs every rule to."""
    check_game(game)
    cond = game.condition
    if not isinstance(cond, ReachabilityCondition):
        raise InvalidInputError("solve_reachability_game needs a reachability condition")
    embed = dict(cond.embed)
    for q in game.pds.controls:
        if q not in embed:
            raise InvalidInputError(f"control not embedded in target: {q!r}")
    embedded = set(embed.values())
    for s, a, targets in cond.target.transitions:
        if targets & embedded:
            raise InvalidInputError(
                "target automaton has transitions into embedded controls")
    if embedded & cond.target.finals:
        raise InvalidInputError("embedded control state is final")
    if cond.target.alphabet != game.pds.alphabet:
        raise InvalidInputError("target alphabet differs from the game alphabet")

    aut = subsume(cond.target)
    while True:
        moves = _game_moves(aut, game, lambda p, q: embed[q])
        transitions = set(aut.transitions)
        for (p, a), sets in moves.items():
            for targets in sets:
                transitions.add((embed[p], a, targets))
        nxt = subsume(AltAutomaton(aut.states, aut.alphabet, aut.finals,
                                   frozenset(transitions)))
        if nxt == aut:
            break
        aut = nxt
    return RegionAutomaton(aut, embed)


# ---------------------------------------------------------------------------
# Büchi and parity games


def _initial_region_automaton(system: PushdownSystem) -> AltAutomaton:
    bot = system.bottom
    transitions = {(S_STAR, a, frozenset({S_STAR}))
                   for a in system.alphabet if a != bot}
    transitions.add((S_STAR, bot, frozenset({S_BOT})))
    return AltAutomaton(frozenset({S_STAR, S_BOT}), system.alphabet,
                        frozenset({S_BOT}), frozenset(transitions))


def project(aut: AltAutomaton, from_idx, to_idx) -> AltAutomaton:
    """Transfer the value of the states ``(p, from_idx)`` onto
    ``(p, to_idx)`` and delete the former.

    Old transitions out of ``(p, to_idx)`` are dropped; transitions out of
    ``(p, from_idx)`` are re-sourced at ``(p, to_idx)`` with ``from_idx``
    renamed to ``to_idx`` inside their target sets.  Target occurrences of
    ``(p, to_idx)`` are deliberately left alone: runs reaching them pick up
    the new value, which only accelerates the fixed point.
    """
    if from_idx == to_idx:
        raise InvalidInputError("projection indices must differ")

    def is_level(s, idx):
        return isinstance(s, tuple) and len(s) == 2 and s[1] == idx

    if not any(is_level(s, from_idx) for s in aut.states):
        raise InvalidInputError(f"no states at level {from_idx!r}")

    def rename(s):
        return (s[0], to_idx) if is_level(s, from_idx) else s

    transitions = set()
    for s, a, targets in aut.transitions:
        if is_level(s, to_idx):
            continue
        if is_level(s, from_idx):
            transitions.add(((s[0], to_idx), a, frozenset(rename(t) for t in targets)))
        else:
            transitions.add((s, a, targets))
    states = frozenset(s for s in aut.states if not is_level(s, from_idx))
    return AltAutomaton(states, aut.alphabet, aut.finals, frozenset(transitions))


def pre_step(aut: AltAutomaton, game: PushdownGame, fresh_idx, colour_of) -> AltAutomaton:
    """Add states ``(p, fresh_idx)`` holding one game-predecessor step.

    A rule from ``p`` is evaluated at the successor state indexed by the
    colour of the source control, per the fixed-point formula: a
    configuration of colour c must step into the variable of colour c.
    """
    entries = {(p, fresh_idx) for p in game.pds.controls}
    states = aut.states | entries
    moves = _game_moves(aut, game, lambda p, q: (q, colour_of[p]))
    transitions = set(aut.transitions)
    for (p, a), sets in moves.items():
        for targets in sets:
            transitions.add(((p, fresh_idx), a, targets))
    return AltAutomaton(frozenset(states), aut.alphabet, aut.finals,
                        frozenset(transitions))


def _full_value_transitions(system: PushdownSystem, level, states):
    """Initial transitions giving a fresh even level the largest value: in
    subsumed form, one singleton target per non-bottom state, plus the
    bottom transition into S_BOT."""
    bot = system.bottom
    transitions = set()
    for p in system.controls:
        src = (p, level)
        for a in system.alphabet:
            if a == bot:
                transitions.add((src, bot, frozenset({S_BOT})))
            else:
                for s in states:
                    if s is not S_BOT:
                        transitions.add((src, a, frozenset({s})))
    return transitions


def _fix(aut: AltAutomaton, level, game, colour_of, max_colour) -> AltAutomaton:
    """One fixed-point level: even levels start from the largest value
    (greatest fixed point), odd levels from the empty one (least)."""
    system = game.pds
    entries = {(p, level) for p in system.controls}
    states = aut.states | entries
    transitions = set(aut.transitions)
    if level % 2 == 0:
        transitions |= _full_value_transitions(system, level, states)
    current = subsume(AltAutomaton(frozenset(states), aut.alphabet,
                                   aut.finals, frozenset(transitions)))
    while True:
        nxt = _dispatch(current, level + 1, game, colour_of, max_colour)
        nxt = subsume(project(nxt, level + 1, level))
        if nxt == current:
            return current
        current = nxt


def _dispatch(aut, level, game, colour_of, max_colour):
    if level == max_colour + 1:
        return pre_step(aut, game, level, colour_of)
    return _fix(aut, level, game, colour_of, max_colour)


def solve_parity_game(game: PushdownGame) -> RegionAutomaton:
    """Winning region of a parity game (Éloïse wins when the least colour
    seen infinitely often is even), via one nested fixed point per colour."""
    check_game(game)
    cond = game.condition
    if not isinstance(cond, ParityCondition):
        raise InvalidInputError("solve_parity_game needs a parity condition")
    max_colour = cond.max_colour
    if max_colour % 2 == 0:
        max_colour += 1  # pad with an unused odd colour
    colour_of = dict(cond.colours)
    aut = _initial_region_automaton(game.pds)
    result = _dispatch(aut, 0, game, colour_of, max_colour)
    entry = {p: (p, 0) for p in game.pds.controls}
    return RegionAutomaton(result, entry)


def solve_buchi_game(game: PushdownGame) -> RegionAutomaton:
    """Winning region of a Büchi game: a greatest fixed point over the
    designated controls wrapping a least fixed point over the others.

    Written out as the explicit two-level nesting (colour 0 on the Büchi
    controls, colour 1 elsewhere); the parity solver reproduces it through
    its generic dispatch, which the tests cross-check.
    """
    check_game(game)
    cond = game.condition
    if not isinstance(cond, BuchiCondition):
        raise InvalidInputError("solve_buchi_game needs a Büchi condition")
    unknown = cond.finals - game.pds.controls
    if unknown:
        raise InvalidInputError(f"unknown Büchi controls: {unknown!r}")
    system = game.pds
    colour_of = {p: 0 if p in cond.finals else 1 for p in system.controls}
    base = _initial_region_automaton(system)

    def fix1(aut):
        states = aut.states | {(p, 1) for p in system.controls}
        current = subsume(AltAutomaton(frozenset(states), aut.alphabet,
                                       aut.finals, aut.transitions))
        while True:
            nxt = pre_step(current, game, 2, colour_of)
            nxt = subsume(project(nxt, 2, 1))
            if nxt == current:
                return current
            current = nxt

    states = base.states | {(p, 0) for p in system.controls}
    transitions = set(base.transitions)
    transitions |= _full_value_transitions(system, 0, states)
    current = subsume(AltAutomaton(frozenset(states), base.alphabet,
                                   base.finals, frozenset(transitions)))
    while True:
        nxt = subsume(project(fix1(current), 1, 0))
        if nxt == current:
            break
        current = nxt
    entry = {p: (p, 0) for p in system.controls}
    return RegionAutomaton(current, entry)


def dual_game(game: PushdownGame) -> PushdownGame:
    """Owners swapped and every colour shifted up by one, so that Éloïse's
    winning region of the dual is Abelard's region of the original."""
    cond = game.condition
    if not isinstance(cond, ParityCondition):
        raise InvalidInputError("dual_game is defined for parity conditions")
    owner = {q: ELOISE if o == ABELARD else ABELARD for q, o in game.owner.items()}
    colours = {q: c + 1 for q, c in cond.colours.items()}
    max_colour = cond.max_colour + 1
    if max_colour % 2 == 0:
        max_colour += 1
    return PushdownGame(game.pds, owner, ParityCondition(colours, max_colour))
