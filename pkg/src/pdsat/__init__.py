"""Saturation-based analysis of pushdown systems: regular configuration
sets, pre*/post*, the derivation relation, and pushdown game solving."""

from .automata import (AltAutomaton, EPS, Language, Nfa, S_BOT, S_STAR, alt,
                       alt_membership, alt_run_targets, eps_closure, nfa,
                       nfa_accepts, pattern_forbidden_factors,
                       product_intersect, words_upto)
from .errors import InvalidInputError, ResourceLimitError
from .pds import (Configuration, PushdownSystem, Rule, invert, pds,
                  predecessors, successors, validate)
from .reachability import (PAutomatonView, buchi_target_automaton,
                           pop_relation, poststar, prestar, rew_closure,
                           singleton_view)
from .derivation import (ActionAlphabet, PrefixRewriteRelation, apply_actions,
                         behaviour_automaton, benois_reduce, decompose,
                         deriv_member, deriv_relation, productive_filter,
                         push, pop)
from .games import (ABELARD, BuchiCondition, ELOISE, ParityCondition,
                    PushdownGame, ReachabilityCondition, RegionAutomaton,
                    dual_game, pre_step, project, region_member,
                    solve_buchi_game, solve_parity_game,
                    solve_reachability_game, subsume)
from .oracle import (BoundedGraph, bfs_prestar_member, bounded_graph,
                     bounded_nodes, bracket_region, finite_game_region)
from .symbols import SymbolTable

__all__ = [name for name in dir() if not name.startswith("_")]
