"""Brute-force ground truth at desk scale.

Configurations up to a stack-height bound form a finite graph; pushes past
the bound are redirected to a sink whose winner is a parameter.  Solving the
truncated game with the sink lost, then won, for Éloïse brackets the true
winning region from below and above.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .automata import Sentinel, alt_membership
from .errors import InvalidInputError, ResourceLimitError
from .games import (ABELARD, BuchiCondition, ELOISE, ParityCondition,
                    PushdownGame, ReachabilityCondition)
from .pds import Configuration, PushdownSystem, check_valid, successors

SINK = Sentinel("sink")

DEFAULT_NODE_CAP = 200_000


@dataclass(eq=False)
class BoundedGraph:
    nodes: set  # configurations plus SINK
    edges: dict  # node -> set of successor nodes
    owner: dict  # node -> ELOISE | ABELARD (games only)
    height: int
    sink_winner: str


def _all_configurations(system: PushdownSystem, h: int):
    base = sorted(system.alphabet - {system.bottom}, key=repr)
    for q in sorted(system.controls, key=repr):
        for k in range(h):
            for word in itertools.product(base, repeat=k):
                yield Configuration(q, word + (system.bottom,))


def bounded_graph(system_or_game, h: int, sink_winner: str,
                  node_cap: int = DEFAULT_NODE_CAP,
                  require_total: bool = False) -> BoundedGraph:
    """Finite restriction of the configuration graph to stacks of length at
    most ``h``; moves growing past ``h`` lead to the sink.

    With ``require_total`` every non-sink node must have a successor (the
    game-totality precondition); otherwise stuck nodes are kept and count as
    lost for the player to move.
    """
    if h < 1:
        raise InvalidInputError("height bound must be at least 1")
    if isinstance(system_or_game, PushdownGame):
        game = system_or_game
        system = game.pds
    else:
        game = None
        system = system_or_game
    check_valid(system)
    size = len(system.controls) * sum(
        max(1, len(system.alphabet) - 1) ** k for k in range(h))
    if size > node_cap:
        raise ResourceLimitError(f"bounded graph would have ~{size} nodes")

    nodes = {SINK}
    edges = {SINK: {SINK}}
    owner = {}
    for c in _all_configurations(system, h):
        nodes.add(c)
        succ = set()
        for c2 in successors(system, c):
            succ.add(SINK if len(c2.stack) > h else c2)
        if not succ and require_total:
            raise InvalidInputError(f"configuration is stuck: {c!r}")
        edges[c] = succ
        if game is not None:
            owner[c] = game.owner[c.control]
    # The sink belongs to nobody in particular; its self-loop decides it.
    owner[SINK] = ELOISE
    return BoundedGraph(nodes, edges, owner, h, sink_winner)


def bfs_prestar_member(system: PushdownSystem, target, c: Configuration,
                       h: int, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """True iff some path from ``c`` reaches a configuration satisfying the
    ``target`` predicate with every intermediate stack at most ``h`` high.
    Monotone in ``h``; a sound under-approximation of pre* membership."""
    check_valid(system)
    if len(c.stack) > h:
        raise InvalidInputError("start configuration exceeds the height bound")
    seen = {c}
    todo = deque([c])
    while todo:
        cur = todo.popleft()
        if target(cur):
            return True
        if len(seen) > node_cap:
            raise ResourceLimitError("bounded search exceeded the node cap")
        for nxt in successors(system, cur):
            if len(nxt.stack) <= h and nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return False


def attractor(nodes, edges, owner, target, player):
    """Least set from which ``player`` forces reaching ``target`` inside
    ``nodes``.  A node whose owner cannot move is never attracted."""
    attracted = set(target) & nodes
    todo = deque(attracted)
    preds = {n: set() for n in nodes}
    for n in nodes:
        for m in edges.get(n, ()):
            if m in preds:
                preds[m].add(n)
    remaining = {}
    for n in nodes:
        remaining[n] = len([m for m in edges.get(n, ()) if m in nodes])
    while todo:
        n = todo.popleft()
        for m in preds[n]:
            if m in attracted:
                continue
            if owner[m] == player:
                attracted.add(m)
                todo.append(m)
            else:
                remaining[m] -= 1
                if remaining[m] == 0:
                    attracted.add(m)
                    todo.append(m)
    return attracted


def _zielonka(nodes, edges, owner, colour):
    """Winning sets (for-even, for-odd) of a min-parity game on a finite
    total graph, by the classical recursive decomposition."""
    if not nodes:
        return set(), set()
    m = min(colour[n] for n in nodes)
    player = m % 2  # 0: Éloïse favours colour m, 1: Abelard does
    mine = ELOISE if player == 0 else ABELARD
    top = {n for n in nodes if colour[n] == m}
    a = attractor(nodes, edges, owner, top, mine)
    w0, w1 = _zielonka(nodes - a, edges, owner, colour)
    opponent_win = w1 if player == 0 else w0
    if not opponent_win:
        return (set(nodes), set()) if player == 0 else (set(), set(nodes))
    theirs = ABELARD if player == 0 else ELOISE
    b = attractor(nodes, edges, owner, opponent_win, theirs)
    w0b, w1b = _zielonka(nodes - b, edges, owner, colour)
    if player == 0:
        return w0b, w1b | b
    return w0b | b, w1b


def finite_game_region(g: BoundedGraph, condition):
    """Exact Éloïse winning set of the truncated game."""
    if isinstance(condition, ReachabilityCondition):
        target = {n for n in g.nodes
                  if n is not SINK and alt_membership(
                      condition.target, condition.embed[n.control], n.stack)}
        if g.sink_winner == ELOISE:
            target.add(SINK)
        return attractor(g.nodes, g.edges, g.owner, target, ELOISE)
    if isinstance(condition, BuchiCondition):
        colour = {n: (0 if n is not SINK and n.control in condition.finals else 1)
                  for n in g.nodes}
        colour[SINK] = 0 if g.sink_winner == ELOISE else 1
    elif isinstance(condition, ParityCondition):
        colour = {n: (condition.colours[n.control] if n is not SINK else 0)
                  for n in g.nodes}
        colour[SINK] = 0 if g.sink_winner == ELOISE else 1
    else:
        raise InvalidInputError(f"unsupported condition: {condition!r}")
    for n in g.nodes:
        if not g.edges.get(n):
            raise InvalidInputError(
                f"finite Büchi/parity solving needs a total graph; {n!r} is stuck")
    w0, _ = _zielonka(set(g.nodes), g.edges, g.owner, colour)
    return w0


def bracket_region(game: PushdownGame, h: int,
                   node_cap: int = DEFAULT_NODE_CAP):
    """Lower and upper bounds on Éloïse's winning region, as predicates on
    configurations with stack height at most ``h``: the truncated game solved
    with the sink lost for her, then won."""
    under_graph = bounded_graph(game, h, ABELARD, node_cap=node_cap,
                                require_total=not isinstance(
                                    game.condition, ReachabilityCondition))
    over_graph = bounded_graph(game, h, ELOISE, node_cap=node_cap,
                               require_total=not isinstance(
                                   game.condition, ReachabilityCondition))
    under = finite_game_region(under_graph, game.condition)
    over = finite_game_region(over_graph, game.condition)

    def under_member(c: Configuration) -> bool:
        return c in under

    def over_member(c: Configuration) -> bool:
        return c in over

    return under_member, over_member


def bounded_nodes(system: PushdownSystem, h: int):
    """All valid configurations with stack height at most ``h``."""
    return list(_all_configurations(system, h))
