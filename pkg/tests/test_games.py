import itertools

import pytest

from conftest import (BOT, configurations_upto, make_rng,
                      random_reachability_condition, random_total_game)
from pdsat import (ABELARD, AltAutomaton, BuchiCondition, Configuration,
                   ELOISE, InvalidInputError, ParityCondition, PushdownGame,
                   ReachabilityCondition, alt_membership, dual_game, pds,
                   prestar, region_member, singleton_view,
                   solve_buchi_game, solve_parity_game,
                   solve_reachability_game, subsume)
from pdsat.automata import S_BOT, S_STAR
from pdsat.games import pre_step, project
from pdsat.oracle import bounded_nodes, bracket_region


def loop_or_pop_game():
    """Éloïse owns p, Abelard owns q; one rule per pair, so the game is total."""
    system = pds(controls={"p", "q"}, alphabet={"A", "_"}, bottom="_",
                 rules=[("p", "A", "q", ()),
                        ("p", "_", "p", ("_",)),
                        ("q", "A", "p", ("A", "A")),
                        ("q", "_", "q", ("A", "_"))])
    return system, {"p": ELOISE, "q": ABELARD}


def all_stack_target(system, winning_controls):
    """Target automaton accepting every stack from the given controls."""
    embed = {p: ("e", p) for p in system.controls}
    states = set(embed.values()) | {S_STAR, S_BOT}
    transitions = set()
    for a in system.alphabet:
        tgt = frozenset({S_BOT if a == system.bottom else S_STAR})
        transitions.add((S_STAR, a, tgt))
        for p in winning_controls:
            transitions.add((embed[p], a, tgt))
    aut = AltAutomaton(frozenset(states), system.alphabet, frozenset({S_BOT}),
                       frozenset(transitions))
    return ReachabilityCondition(aut, embed)


def test_projection_example():
    # {p1 -A-> {p0}, p1 -bot-> {s_bot}, p0 -bot-> {s_bot}} projected from
    # level 1 onto level 0 becomes {p0 -A-> {p0}, p0 -bot-> {s_bot}}
    states = frozenset({("p", 0), ("p", 1), S_BOT})
    transitions = frozenset({
        (("p", 1), "A", frozenset({("p", 0)})),
        (("p", 1), "_", frozenset({S_BOT})),
        (("p", 0), "_", frozenset({S_BOT})),
    })
    aut = AltAutomaton(states, frozenset({"A", "_"}), frozenset({S_BOT}),
                       transitions)
    out = project(aut, 1, 0)
    assert out.states == frozenset({("p", 0), S_BOT})
    assert out.transitions == frozenset({
        (("p", 0), "A", frozenset({("p", 0)})),
        (("p", 0), "_", frozenset({S_BOT})),
    })


def test_buchi_pop_loop_example():
    # a control in F that can always pop an A wins from every A^n stack
    system = pds(controls={"p"}, alphabet={"A", "_"}, bottom="_",
                 rules=[("p", "A", "p", ()), ("p", "_", "p", ("_",))])
    game = PushdownGame(system, {"p": ELOISE},
                        BuchiCondition(frozenset({"p"})))
    region = solve_buchi_game(game)
    for n in range(6):
        c = Configuration("p", ("A",) * n + ("_",))
        assert region_member(region, c)
    assert alt_membership(region.aut, ("p", 0), ("A",) * 3 + ("_",))


def test_reachability_game_hand_example():
    system, owner = loop_or_pop_game()
    cond = all_stack_target(system, {"q"})
    game = PushdownGame(system, owner, cond)
    region = solve_reachability_game(game)
    # p with an A on top can pop straight into q
    assert region_member(region, Configuration("p", ("A", "_")))
    assert region_member(region, Configuration("q", ("_",)))
    # p at the bottom can only loop on p forever
    assert not region_member(region, Configuration("p", ("_",)))


def test_reachability_game_brackets():
    rng = make_rng(41)
    for i in range(20):
        system, owner = random_total_game(rng)
        cond = random_reachability_condition(rng, system)
        game = PushdownGame(system, owner, cond)
        region = solve_reachability_game(game)
        under, over = bracket_region(game, 4)
        for c in bounded_nodes(system, 4):
            member = region_member(region, c)
            assert not (under(c) and not member), (system, c)
            assert not (member and not over(c)), (system, c)


def test_buchi_game_brackets_and_parity_agreement():
    rng = make_rng(42)
    for i in range(15):
        system, owner = random_total_game(rng)
        finals = frozenset(
            p for p in system.controls if rng.random() < 0.5)
        game = PushdownGame(system, owner, BuchiCondition(finals))
        region = solve_buchi_game(game)
        under, over = bracket_region(game, 4)
        for c in bounded_nodes(system, 4):
            member = region_member(region, c)
            assert not (under(c) and not member), (system, finals, c)
            assert not (member and not over(c)), (system, finals, c)
        # the parity solver with colours {0, 1} computes the same region
        colours = {p: 0 if p in finals else 1 for p in system.controls}
        pgame = PushdownGame(system, owner, ParityCondition(colours, 1))
        pregion = solve_parity_game(pgame)
        for c in bounded_nodes(system, 5):
            assert region_member(region, c) == region_member(pregion, c)


def test_parity_game_brackets():
    rng = make_rng(43)
    for i in range(10):
        system, owner = random_total_game(rng)
        colours = {p: rng.randint(0, 3) for p in system.controls}
        game = PushdownGame(system, owner, ParityCondition(colours, 3))
        region = solve_parity_game(game)
        under, over = bracket_region(game, 4)
        for c in bounded_nodes(system, 4):
            member = region_member(region, c)
            assert not (under(c) and not member), (system, colours, c)
            assert not (member and not over(c)), (system, colours, c)


def test_parity_extreme_colours():
    rng = make_rng(44)
    for i in range(5):
        system, owner = random_total_game(rng)
        even = PushdownGame(system, owner,
                            ParityCondition({p: 0 for p in system.controls}, 0))
        odd = PushdownGame(system, owner,
                           ParityCondition({p: 1 for p in system.controls}, 1))
        even_region = solve_parity_game(even)
        odd_region = solve_parity_game(odd)
        for c in bounded_nodes(system, 4):
            assert region_member(even_region, c)
            assert not region_member(odd_region, c)


def test_eloise_only_reachability_matches_prestar():
    rng = make_rng(45)
    for i in range(10):
        system, _ = random_total_game(rng)
        owner = {p: ELOISE for p in system.controls}
        target_conf = Configuration(sorted(system.controls)[0], (BOT,))
        view = singleton_view(system, target_conf)
        # alternating copy of the singleton target, in game form
        transitions = frozenset((s, a, frozenset({t}))
                                for s, a, t in view.aut.transitions)
        target = AltAutomaton(view.aut.states, view.aut.alphabet,
                              view.aut.finals, transitions)
        cond = ReachabilityCondition(target, dict(view.control_embed))
        game = PushdownGame(system, owner, cond)
        region = solve_reachability_game(game)
        saturated = prestar(system, view)
        for c in configurations_upto(system, 4):
            assert region_member(region, c) == saturated.accepts(c), (system, c)


def test_dual_game_determinacy():
    rng = make_rng(46)
    for i in range(10):
        system, owner = random_total_game(rng)
        colours = {p: rng.randint(0, 3) for p in system.controls}
        game = PushdownGame(system, owner, ParityCondition(colours, 3))
        region = solve_parity_game(game)
        dual_region = solve_parity_game(dual_game(game))
        for c in bounded_nodes(system, 3):
            assert region_member(region, c) != region_member(dual_region, c), \
                (system, colours, c)


def test_subsume_preserves_membership():
    rng = make_rng(47)
    from test_automata import random_alt
    for i in range(20):
        aut = random_alt(rng)
        small = subsume(aut)
        assert len(small.transitions) <= len(aut.transitions)
        for word in itertools.chain.from_iterable(
                itertools.product("ab", repeat=k) for k in range(4)):
            for s in aut.states:
                assert alt_membership(aut, s, word) == \
                    alt_membership(small, s, word)


def test_pre_step_adds_one_step_states():
    system, owner = loop_or_pop_game()
    game = PushdownGame(system, owner, BuchiCondition(frozenset({"p"})))
    from pdsat.games import _initial_region_automaton
    base = _initial_region_automaton(system)
    colour_of = {"p": 0, "q": 1}
    # give the colour levels somewhere to land: create entry states first
    states = base.states | {(p, i) for p in system.controls for i in (0, 1)}
    seeded = AltAutomaton(frozenset(states), base.alphabet, base.finals,
                          base.transitions)
    stepped = pre_step(seeded, game, 2, colour_of)
    assert {("p", 2), ("q", 2)} <= stepped.states
    # p's only bottom rule loops to p, which has no value yet: no transition
    assert not any(s == ("p", 2) and a == "_"
                   for s, a, _ in stepped.transitions)


def test_solver_input_validation():
    system, owner = loop_or_pop_game()
    game = PushdownGame(system, owner, BuchiCondition(frozenset({"p"})))
    with pytest.raises(InvalidInputError):
        solve_reachability_game(game)
    with pytest.raises(InvalidInputError):
        solve_parity_game(game)
    nobody = PushdownGame(system, {"p": ELOISE}, BuchiCondition(frozenset()))
    with pytest.raises(InvalidInputError):
        solve_buchi_game(nobody)
    with pytest.raises(InvalidInputError):
        solve_buchi_game(PushdownGame(system, owner,
                                      BuchiCondition(frozenset({"zzz"}))))
