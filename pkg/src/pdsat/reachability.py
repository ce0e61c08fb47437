"""Saturation-based reachability: pre*, post* via inversion, the pop relation
as a least fixed point, and the classical guess-the-intermediate-states
construction for single-target pre* — two independent routes to the same sets.
"""

from __future__ import annotations

import warnings
from collections import defaultdict, deque
from dataclasses import dataclass

from .automata import EPS, Nfa, S_BOT, eps_closure, nfa_accepts
from .errors import InvalidInputError
from .pds import (Configuration, PushdownSystem, check_valid, is_intermediary)


@dataclass(frozen=True, eq=False)
class PAutomatonView:
    """An automaton accepting configuration sets: ``(p, w)`` is accepted when
    ``w`` is accepted from the state embedding the control ``p``.
    """

    aut: Nfa
    control_embed: dict  # control -> automaton state

    def accepts(self, c: Configuration) -> bool:
        state = self.control_embed.get(c.control)
        if state is None:
            raise InvalidInputError(f"control not embedded: {c.control!r}")
        return nfa_accepts(self.aut, state, c.stack)


def view_errors(view: PAutomatonView):
    """Violations of the P-automaton shape: embedded controls must have no
    incoming transitions and must not be final."""
    errors = []
    embedded = set(view.control_embed.values())
    for s in embedded:
        if s not in view.aut.states:
            errors.append(f"embedded state missing from automaton: {s!r}")
    for s, a, t in view.aut.transitions:
        if t in embedded:
            errors.append(f"transition into embedded control state: {(s, a, t)!r}")
    for s in embedded & view.aut.finals:
        errors.append(f"embedded control state is final: {s!r}")
    return errors


def repair_view(view: PAutomatonView) -> PAutomatonView:
    """Clone embedded control states that have incoming transitions or are
    final, redirecting the offending role to the copy."""
    embedded = set(view.control_embed.values())
    offending = {t for _, _, t in view.aut.transitions if t in embedded}
    offending |= embedded & view.aut.finals
    if not offending:
        return view
    warnings.warn("P-automaton has transitions into control states; "
                  "cloning the offending states", stacklevel=2)
    clone = {s: ("clone", s) for s in offending}
    transitions = set()
    for s, a, t in view.aut.transitions:
        src = clone.get(s, s)  # clones inherit outgoing transitions
        transitions.add((src, a, clone.get(t, t)))
        if s in clone:
            transitions.add((s, a, clone.get(t, t)))
    finals = {clone.get(s, s) for s in view.aut.finals}
    states = view.aut.states | set(clone.values())
    aut = Nfa(frozenset(states), view.aut.alphabet, frozenset(finals),
              frozenset(transitions))
    return PAutomatonView(aut, dict(view.control_embed))


def prestar(system: PushdownSystem, view: PAutomatonView, trace=None) -> PAutomatonView:
    """Saturate ``view`` so that it accepts exactly pre*(L(view)).

    One rule, applied to a fixed point: add ``p -A-> s`` whenever
    ``(p,A)->(q,w)`` is a rule and the current automaton can read ``w`` from
    the embedding of ``q`` to ``s``.  Only transitions out of embedded
    controls are ever added; the state set never grows.  Newly added
    transitions are processed FIFO and only the rules that can consume a new
    transition are re-examined.

    ``trace``, if given, is a list receiving every added transition as
    ``(control, symbol, target_state)``.
    """
    check_valid(system)
    missing = [q for q in system.controls if q not in view.control_embed]
    if missing:
        raise InvalidInputError(f"controls not embedded: {missing!r}")
    view = repair_view(view)
    errors = view_errors(view)
    if errors:
        raise InvalidInputError("; ".join(errors))
    aut = eps_closure(view.aut) if view.aut.has_eps() else view.aut
    embed = view.control_embed

    # Rule indexes keyed by the automaton transition that can fire them.
    swap_idx = defaultdict(list)  # (state(q), B)  -> [(state(p), A)]
    push_idx = defaultdict(list)  # (state(q), B)  -> [(state(p), A, C)]
    initial = set(aut.transitions)
    rel = set()
    by_source = defaultdict(set)  # (state, symbol) -> targets
    worklist = deque(initial)
    for r in system.rules:
        ps, qs = embed[r.from_control], embed[r.to_control]
        if len(r.pushed) == 0:
            worklist.append((ps, r.from_symbol, qs))
        elif len(r.pushed) == 1:
            swap_idx[(qs, r.pushed[0])].append((ps, r.from_symbol))
        else:
            push_idx[(qs, r.pushed[0])].append((ps, r.from_symbol, r.pushed[1]))

    state_control = {s: p for p, s in embed.items()}
    pending = defaultdict(set)  # (state, symbol) -> {(source state, A)} waiting
    while worklist:
        t = worklist.popleft()
        if t in rel:
            continue
        rel.add(t)
        s, a, s2 = t
        by_source[(s, a)].add(s2)
        if trace is not None and t not in initial:
            trace.append((state_control[s], a, s2))
        for ps, A in swap_idx.get((s, a), ()):
            worklist.append((ps, A, s2))
        for ps, A, c in push_idx.get((s, a), ()):
            key = (s2, c)
            pending[key].add((ps, A))
            for s3 in by_source.get(key, ()):
                worklist.append((ps, A, s3))
        for ps, A in pending.get((s, a), ()):
            worklist.append((ps, A, s2))

    out = Nfa(aut.states, aut.alphabet, aut.finals, frozenset(rel))
    return PAutomatonView(out, dict(embed))


def poststar(system: PushdownSystem, view: PAutomatonView) -> PAutomatonView:
    """post* computed as pre* of the inverted system; the returned view only
    embeds the original controls (intermediary controls are internal)."""
    from .pds import invert

    inverted = invert(system)
    embed = dict(view.control_embed)
    states = set(view.aut.states)
    for q in inverted.controls:
        if is_intermediary(q):
            embed[q] = q  # fresh state, never collides with automaton states
            states.add(q)
    aut = Nfa(frozenset(states), view.aut.alphabet, view.aut.finals,
              view.aut.transitions)
    saturated = prestar(inverted, PAutomatonView(aut, embed))
    original = {p: s for p, s in saturated.control_embed.items()
                if not is_intermediary(p)}
    return PAutomatonView(saturated.aut, original)


def pop_relation(system: PushdownSystem) -> frozenset:
    """Least set of triples ``(p, A, q)`` with ``pA =>* q`` (the symbol is
    consumed entirely, control ends in ``q``), closed under:
    a pop rule gives a triple directly; a swap rule chains into one; a push
    rule chains into two.
    """
    check_valid(system)
    rel = set()
    by_pa = defaultdict(set)  # (p, A) -> {q}

    def add(p, a, q):
        if (p, a, q) not in rel:
            rel.add((p, a, q))
            by_pa[(p, a)].add(q)
            return True
        return False

    for r in system.rules:
        if len(r.pushed) == 0:
            add(r.from_control, r.from_symbol, r.to_control)
    changed = True
    while changed:
        changed = False
        for r in system.rules:
            if len(r.pushed) == 1:
                for q in list(by_pa[(r.to_control, r.pushed[0])]):
                    changed |= add(r.from_control, r.from_symbol, q)
            elif len(r.pushed) == 2:
                b, c = r.pushed
                for s in list(by_pa[(r.to_control, b)]):
                    for q in list(by_pa[(s, c)]):
                        changed |= add(r.from_control, r.from_symbol, q)
    return frozenset(rel)


def rew_closure(system: PushdownSystem) -> frozenset:
    """Least relation of pairs ``((p,A),(q,B))`` with ``pA =>* qB`` (the top
    symbol is rewritten without consuming below it): reflexive, contains the
    swap rules, transitive, and closed under push-then-consume steps.
    """
    check_valid(system)
    pops = defaultdict(set)  # (t, D) -> {q} for pop rules tD -> q
    for r in system.rules:
        if len(r.pushed) == 0:
            pops[(r.from_control, r.from_symbol)].add(r.to_control)

    rel = set()
    succ = defaultdict(set)  # (p,A) -> {(q,B)}

    def add(src, dst):
        if (src, dst) not in rel:
            rel.add((src, dst))
            succ[src].add(dst)
            return True
        return False

    for p in system.controls:
        for a in system.alphabet:
            add((p, a), (p, a))
    for r in system.rules:
        if len(r.pushed) == 1:
            add((r.from_control, r.from_symbol), (r.to_control, r.pushed[0]))
    changed = True
    while changed:
        changed = False
        # transitivity
        for src in list(succ):
            for mid in list(succ[src]):
                for dst in list(succ[mid]):
                    changed |= add(src, dst)
        # push rule pA -> rBC, rB =>* tD, tD -> q  gives  pA =>* qC
        for r in system.rules:
            if len(r.pushed) != 2:
                continue
            b, c = r.pushed
            for (t, d) in list(succ[(r.to_control, b)]):
                for q in pops[(t, d)]:
                    changed |= add((r.from_control, r.from_symbol), (q, c))
    return frozenset(rel)


def buchi_target_automaton(system: PushdownSystem, q_f) -> PAutomatonView:
    """P-automaton for pre*({(q_f, ⊥)}) built without saturation.

    Reading ``A_1 .. A_n ⊥`` from ``p``, the automaton guesses the controls
    reached as each symbol is consumed (the pop relation), and accepts on the
    bottom symbol when the remaining control can reach ``(q_f, ⊥)`` while
    dipping above the bottom only through full excursions.
    """
    check_valid(system)
    if q_f not in system.controls:
        raise InvalidInputError(f"unknown control: {q_f!r}")
    pops = pop_relation(system)
    bot = system.bottom

    # Control-to-control moves at the bottom stratum.
    edges = defaultdict(set)
    for r in system.rules:
        if r.from_symbol != bot:
            continue
        if r.pushed == (bot,):
            edges[r.from_control].add(r.to_control)
        else:  # (q,⊥)->(p,A⊥): must return to the bottom via a full pop
            a = r.pushed[0]
            for (p2, a2, q2) in pops:
                if p2 == r.to_control and a2 == a:
                    edges[r.from_control].add(q2)
    reaches_qf = {q_f}
    changed = True
    while changed:
        changed = False
        for p in system.controls:
            if p not in reaches_qf and edges[p] & reaches_qf:
                reaches_qf.add(p)
                changed = True

    states = set(system.controls) | {S_BOT}
    transitions = {(p, a, q) for (p, a, q) in pops if a != bot}
    transitions |= {(p, bot, S_BOT) for p in reaches_qf}
    aut = Nfa(frozenset(states), system.alphabet, frozenset({S_BOT}),
              frozenset(transitions))
    return PAutomatonView(aut, {p: p for p in system.controls})


def singleton_view(system: PushdownSystem, c: Configuration) -> PAutomatonView:
    """P-automaton accepting exactly the configuration ``c``."""
    check_valid(system)
    embed = {p: ("ctrl", p) for p in system.controls}
    states = set(embed.values())
    transitions = set()
    prev = embed[c.control]
    for i, a in enumerate(c.stack):
        nxt = ("chain", i + 1)
        states.add(nxt)
        transitions.add((prev, a, nxt))
        prev = nxt
    aut = Nfa(frozenset(states), system.alphabet, frozenset({prev}),
              frozenset(transitions))
    return PAutomatonView(aut, embed)
