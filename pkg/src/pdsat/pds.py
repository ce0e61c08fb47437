"""Pushdown systems, configurations, and one-step semantics.

A rule ``(q, A) -> (p, w)`` with ``|w| <= 2`` rewrites the top stack symbol.
Stacks are tuples with the top at index 0 and the bottom symbol last.  The
one-step successor/predecessor enumeration here is the semantic ground truth
the oracles are built on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInputError


@dataclass(frozen=True)
class Rule:
    from_control: object
    from_symbol: object
    to_control: object
    pushed: tuple  # length <= 2

    def __repr__(self):
        w = "".join(str(a) for a in self.pushed) or "ε"
        return f"({self.from_control},{self.from_symbol})->({self.to_control},{w})"


@dataclass(frozen=True)
class PushdownSystem:
    controls: frozenset
    alphabet: frozenset  # stack symbols, including the bottom symbol
    bottom: object
    rules: frozenset


@dataclass(frozen=True)
class Configuration:
    control: object
    stack: tuple  # top at index 0, bottom symbol last

    def __repr__(self):
        return f"({self.control}, {''.join(str(a) for a in self.stack)})"


@dataclass(frozen=True)
class IntermediaryControl:
    """Fresh control introduced by :func:`invert` to split a push-2 rule."""

    second_symbol: object
    orig_control: object
    orig_symbol: object


def pds(controls=(), alphabet=(), bottom=None, rules=()) -> PushdownSystem:
    """Convenience constructor from rule tuples ``(q, A, p, w)``."""
    rs = frozenset(
        r if isinstance(r, Rule) else Rule(r[0], r[1], r[2], tuple(r[3]))
        for r in rules)
    controls = frozenset(controls) | {r.from_control for r in rs} \
        | {r.to_control for r in rs}
    alphabet = frozenset(alphabet) | {bottom} | {r.from_symbol for r in rs} \
        | {a for r in rs for a in r.pushed}
    return PushdownSystem(controls, alphabet, bottom, rs)


def validate(pds: PushdownSystem):
    """List of invariant violations; empty means the system is well formed.

    Rules on the bottom symbol must preserve it at the bottom: allowed shapes
    are ``(q,⊥)->(p,⊥)`` and ``(q,⊥)->(p,A⊥)`` with ``A != ⊥``.  Rules on
    other symbols may not mention the bottom symbol at all.
    """
    errors = []
    bot = pds.bottom
    if bot not in pds.alphabet:
        errors.append("bottom symbol is not in the alphabet")
    for r in pds.rules:
        if r.from_control not in pds.controls or r.to_control not in pds.controls:
            errors.append(f"rule {r!r}: unknown control state")
        if r.from_symbol not in pds.alphabet or any(a not in pds.alphabet for a in r.pushed):
            errors.append(f"rule {r!r}: unknown stack symbol")
            continue
        if len(r.pushed) > 2:
            errors.append(f"rule {r!r}: pushes more than two symbols")
            continue
        if r.from_symbol == bot:
            ok = r.pushed == (bot,) or (
                len(r.pushed) == 2 and r.pushed[1] == bot and r.pushed[0] != bot)
            if not ok:
                errors.append(f"rule {r!r}: pops bottom" if bot not in r.pushed
                              else f"rule {r!r}: malformed bottom rule")
        elif bot in r.pushed:
            errors.append(f"rule {r!r}: pushes bottom")
    return errors


def check_valid(pds: PushdownSystem):
    errors = validate(pds)
    if errors:
        raise InvalidInputError("; ".join(errors))


def is_valid_configuration(pds: PushdownSystem, c: Configuration) -> bool:
    if c.control not in pds.controls or not c.stack:
        return False
    if c.stack[-1] != pds.bottom:
        return False
    return all(a in pds.alphabet and a != pds.bottom for a in c.stack[:-1])


def check_configuration(pds: PushdownSystem, c: Configuration):
    if not is_valid_configuration(pds, c):
        raise InvalidInputError(f"invalid configuration: {c!r}")


def successors(pds: PushdownSystem, c: Configuration):
    """Exact one-step successors of ``c``."""
    check_configuration(pds, c)
    top = c.stack[0]
    rest = c.stack[1:]
    return {Configuration(r.to_control, r.pushed + rest)
            for r in pds.rules
            if r.from_control == c.control and r.from_symbol == top}


def predecessors(pds: PushdownSystem, c: Configuration):
    """Valid configurations with ``c`` among their one-step successors."""
    check_configuration(pds, c)
    result = set()
    for r in pds.rules:
        if r.to_control != c.control:
            continue
        k = len(r.pushed)
        if c.stack[:k] != r.pushed:
            continue
        pre = Configuration(r.from_control, (r.from_symbol,) + c.stack[k:])
        if is_valid_configuration(pds, pre):
            result.add(pre)
    return result


def is_intermediary(control) -> bool:
    return isinstance(control, IntermediaryControl)


def invert(system: PushdownSystem) -> PushdownSystem:
    """A system whose derivation relation is the inverse of ``system``'s.

    Pop rules ``(q,A)->(p,ε)`` become ``(p,X)->(q,AX)`` for every symbol X
    (with the bottom case ``(p,⊥)->(q,A⊥)``).  Swap rules are reversed
    directly.  A push rule ``(q,A)->(p,BC)`` is split through a fresh
    intermediary control: ``(p,B)->(r,ε)`` and ``(r,C)->(q,A)``.

    For configurations over the original controls, ``c => c'`` in the input
    holds iff ``c' => c`` in the result.
    """
    check_valid(system)
    bot = system.bottom
    rules = set()
    controls = set(system.controls)
    for r in system.rules:
        if len(r.pushed) == 0:
            for x in system.alphabet:
                if x == bot:
                    rules.add(Rule(r.to_control, bot, r.from_control,
                                   (r.from_symbol, bot)))
                else:
                    rules.add(Rule(r.to_control, x, r.from_control,
                                   (r.from_symbol, x)))
        elif len(r.pushed) == 1:
            rules.add(Rule(r.to_control, r.pushed[0], r.from_control,
                           (r.from_symbol,)))
        else:
            b, c = r.pushed
            mid = IntermediaryControl(c, r.from_control, r.from_symbol)
            controls.add(mid)
            rules.add(Rule(r.to_control, b, mid, ()))
            rules.add(Rule(mid, c, r.from_control, (r.from_symbol,)))
    return PushdownSystem(frozenset(controls), system.alphabet, bot,
                          frozenset(rules))
