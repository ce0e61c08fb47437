"""Command line front end.

Input documents are line oriented: a line holding just ``pds``, ``automaton``
or ``game`` opens a block, ``#`` starts a comment, tokens are whitespace
separated.  Exit codes: 0 success (or membership yes), 1 membership no,
2 parse or validation failure, 3 oracle disagreement.
"""

from __future__ import annotations

import argparse
import sys
from collections import deque
from dataclasses import dataclass, field

from . import derivation, games, oracle, reachability
from .automata import AltAutomaton, Nfa, alt_membership
from .errors import InvalidInputError, ResourceLimitError
from .pds import Configuration, PushdownSystem, Rule, validate
from .symbols import SymbolTable

SECTION_NAMES = ("pds", "automaton", "game")


class ParseError(Exception):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class InputDocument:
    sections: list = field(default_factory=list)  # (name, [(lineno, tokens)])

    def section(self, name):
        found = [body for n, body in self.sections if n == name]
        return found[0] if found else None


def parse(text: str) -> InputDocument:
    """Parse the textual input format into an ordered section structure."""
    doc = InputDocument()
    current = None
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if "#" in line:
            line = line[:line.index("#")]
        tokens = line.split()
        if not tokens:
            continue
        if tokens[0] in SECTION_NAMES and len(tokens) == 1:
            if any(n == tokens[0] for n, _ in doc.sections):
                raise ParseError(lineno, f"duplicate section {tokens[0]!r}")
            current = []
            doc.sections.append((tokens[0], current))
            continue
        if current is None:
            raise ParseError(lineno, f"content before any section: {line.strip()!r}")
        current.append((lineno, tokens))
    if doc.section("pds") is None:
        raise ParseError(0, "document has no pds section")
    return doc


def serialise(doc: InputDocument) -> str:
    lines = []
    for name, body in doc.sections:
        lines.append(name)
        for _, tokens in body:
            lines.append(" ".join(tokens))
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"


def _build_pds(doc: InputDocument):
    body = doc.section("pds")
    table = SymbolTable()
    controls, alphabet, rules = set(), set(), set()
    bottom = None
    for lineno, tokens in body:
        key = tokens[0]
        if key == "states":
            for name in tokens[1:]:
                table.intern(name)
                controls.add(name)
        elif key == "alphabet":
            for name in tokens[1:]:
                table.intern(name)
                alphabet.add(name)
        elif key == "bottom":
            if len(tokens) != 2:
                raise ParseError(lineno, "bottom takes exactly one symbol")
            if bottom is not None:
                raise ParseError(lineno, "duplicate bottom declaration")
            bottom = tokens[1]
            table.intern(bottom)
            alphabet.add(bottom)
        elif key == "rule":
            if len(tokens) < 5 or tokens[3] != "->":
                raise ParseError(lineno, "rule syntax: rule p A -> q [B [C]]")
            p, a, q, pushed = tokens[1], tokens[2], tokens[4], tuple(tokens[5:])
            if len(pushed) > 2:
                raise ParseError(lineno, "a rule may push at most two symbols")
            for name in (p, q):
                if name not in controls:
                    raise ParseError(lineno, f"undeclared control state {name!r}")
            for name in (a,) + pushed:
                if name not in alphabet:
                    raise ParseError(lineno, f"undeclared stack symbol {name!r}")
            rules.add(Rule(p, a, q, pushed))
        else:
            raise ParseError(lineno, f"unknown keyword {key!r} in pds section")
    if bottom is None:
        raise ParseError(0, "pds section declares no bottom symbol")
    system = PushdownSystem(frozenset(controls), frozenset(alphabet), bottom,
                            frozenset(rules))
    errors = validate(system)
    if errors:
        raise ParseError(0, "; ".join(errors))
    return system


@dataclass
class AutomatonSection:
    states: set
    finals: set
    trans: set       # (s, A, t)
    alttrans: set    # (s, A, frozenset)
    embed: dict      # control -> state


def _build_automaton(doc: InputDocument, system: PushdownSystem) -> AutomatonSection:
    body = doc.section("automaton")
    if body is None:
        raise ParseError(0, "this command needs an automaton section")
    states, finals, trans, alttrans = set(), set(), set(), set()
    embed = {}
    declared = set()

    def need_state(lineno, name):
        if name not in declared and name not in system.controls:
            raise ParseError(lineno, f"undeclared automaton state {name!r}")

    for lineno, tokens in body:
        key = tokens[0]
        if key == "states":
            declared.update(tokens[1:])
            states.update(tokens[1:])
        elif key == "final":
            for name in tokens[1:]:
                need_state(lineno, name)
                finals.add(name)
        elif key == "trans":
            if len(tokens) != 4:
                raise ParseError(lineno, "trans syntax: trans s A t")
            s, a, t = tokens[1:]
            need_state(lineno, s)
            need_state(lineno, t)
            if a not in system.alphabet:
                raise ParseError(lineno, f"undeclared stack symbol {a!r}")
            trans.add((s, a, t))
        elif key == "alttrans":
            if len(tokens) < 6 or tokens[3] != "{" or tokens[-1] != "}":
                raise ParseError(lineno, "alttrans syntax: alttrans s A { t... }")
            s, a = tokens[1], tokens[2]
            targets = tokens[4:-1]
            need_state(lineno, s)
            for t in targets:
                need_state(lineno, t)
            if a not in system.alphabet:
                raise ParseError(lineno, f"undeclared stack symbol {a!r}")
            alttrans.add((s, a, frozenset(targets)))
        elif key == "embed":
            if len(tokens) != 3:
                raise ParseError(lineno, "embed syntax: embed p s")
            p, s = tokens[1], tokens[2]
            if p not in system.controls:
                raise ParseError(lineno, f"undeclared control state {p!r}")
            need_state(lineno, s)
            if p in embed:
                raise ParseError(lineno, f"duplicate embed for {p!r}")
            embed[p] = s
        else:
            raise ParseError(lineno, f"unknown keyword {key!r} in automaton section")
    # Every control is embedded; by default a control names its own state.
    for p in system.controls:
        embed.setdefault(p, p)
    states |= set(embed.values())
    states |= {s for s, _, _ in trans} | {t for _, _, t in trans}
    states |= {s for s, _, _ in alttrans} | {t for _, _, ts in alttrans for t in ts}
    return AutomatonSection(states, finals, trans, alttrans, embed)


def _as_view(section: AutomatonSection, system: PushdownSystem):
    if section.alttrans:
        raise ParseError(0, "this command needs a nondeterministic automaton "
                            "(trans lines only)")
    aut = Nfa(frozenset(section.states), system.alphabet,
              frozenset(section.finals), frozenset(section.trans))
    return reachability.PAutomatonView(aut, dict(section.embed))


def _as_alt_target(section: AutomatonSection, system: PushdownSystem):
    transitions = set(section.alttrans)
    transitions |= {(s, a, frozenset({t})) for s, a, t in section.trans}
    aut = AltAutomaton(frozenset(section.states), system.alphabet,
                       frozenset(section.finals), frozenset(transitions))
    return games.ReachabilityCondition(aut, dict(section.embed))


def _build_game(doc: InputDocument, system: PushdownSystem, kind: str):
    body = doc.section("game")
    if body is None:
        raise ParseError(0, "this command needs a game section")
    owner, colours, buchi = {}, {}, set()
    for lineno, tokens in body:
        key = tokens[0]
        if key == "owner":
            if len(tokens) < 3 or tokens[1] not in ("E", "A"):
                raise ParseError(lineno, "owner syntax: owner E|A p...")
            for p in tokens[2:]:
                if p not in system.controls:
                    raise ParseError(lineno, f"undeclared control state {p!r}")
                if p in owner:
                    raise ParseError(lineno, f"duplicate owner for {p!r}")
                owner[p] = tokens[1]
        elif key == "colour":
            if len(tokens) != 3:
                raise ParseError(lineno, "colour syntax: colour p n")
            p, n = tokens[1], tokens[2]
            if p not in system.controls:
                raise ParseError(lineno, f"undeclared control state {p!r}")
            try:
                colours[p] = int(n)
            except ValueError:
                raise ParseError(lineno, f"colour must be an integer: {n!r}")
        elif key == "final":
            for p in tokens[1:]:
                if p not in system.controls:
                    raise ParseError(lineno, f"undeclared control state {p!r}")
                buchi.add(p)
        else:
            raise ParseError(lineno, f"unknown keyword {key!r} in game section")
    missing = [p for p in system.controls if p not in owner]
    if missing:
        raise ParseError(0, f"controls without owner: {sorted(missing)}")
    if kind == "reachgame":
        condition = _as_alt_target(_build_automaton(doc, system), system)
    elif kind == "buchigame":
        condition = games.BuchiCondition(frozenset(buchi))
    else:
        missing = [p for p in system.controls if p not in colours]
        if missing:
            raise ParseError(0, f"controls without colour: {sorted(missing)}")
        condition = games.ParityCondition(colours, max(colours.values()))
    return games.PushdownGame(system, owner, condition)


def _parse_config(system: PushdownSystem, text: str) -> Configuration:
    if ":" not in text:
        raise ParseError(0, 'config syntax: "p : A B _" (top first, bottom last)')
    left, right = text.split(":", 1)
    control = left.strip()
    stack = tuple(right.split())
    if control not in system.controls:
        raise ParseError(0, f"unknown control state {control!r}")
    if not stack or stack[-1] != system.bottom:
        raise ParseError(0, "the stack must end with the bottom symbol")
    for a in stack:
        if a not in system.alphabet:
            raise ParseError(0, f"unknown stack symbol {a!r}")
    if system.bottom in stack[:-1]:
        raise ParseError(0, "the bottom symbol may only appear last")
    return Configuration(control, stack)


# ---------------------------------------------------------------------------
# Output


def _state_names(states, embed):
    """Stable printable names; embedded controls keep their own names."""
    names = {}
    for control, state in sorted(embed.items(), key=lambda kv: str(kv[0])):
        names[state] = str(control)
    counter = 0
    for state in sorted(states, key=repr):
        if state not in names:
            names[state] = f"s{counter}"
            counter += 1
    return names


def _emit_view(view) -> str:
    names = _state_names(view.aut.states, view.control_embed)
    lines = ["automaton"]
    lines.append("states " + " ".join(sorted(set(names.values()))))
    if view.aut.finals:
        lines.append("final " + " ".join(sorted(names[s] for s in view.aut.finals)))
    for s, a, t in sorted(view.aut.transitions, key=repr):
        lines.append(f"trans {names[s]} {a} {names[t]}")
    for p, s in sorted(view.control_embed.items(), key=lambda kv: str(kv[0])):
        lines.append(f"embed {p} {names[s]}")
    return "\n".join(lines) + "\n"


def _emit_region(region) -> str:
    names = _state_names(region.aut.states, region.entry)
    lines = ["automaton"]
    lines.append("states " + " ".join(sorted(set(names.values()))))
    if region.aut.finals:
        lines.append("final " + " ".join(sorted(names[s] for s in region.aut.finals)))
    for s, a, targets in sorted(region.aut.transitions, key=repr):
        ts = " ".join(sorted(names[t] for t in targets))
        lines.append(f"alttrans {names[s]} {a} {{ {ts} }}")
    for p, s in sorted(region.entry.items(), key=lambda kv: str(kv[0])):
        lines.append(f"embed {p} {names[s]}")
    return "\n".join(lines) + "\n"


def _emit_relation(rel) -> str:
    lines = ["relation"]
    for i, (u, v) in enumerate(rel.pairs):
        lines.append(f"pair {i}")
        for tag, lang in (("pop", u), ("push", v)):
            names = _state_names(lang.aut.states, {})
            lines.append(f"{tag} start {names[lang.start]}")
            if lang.aut.finals:
                lines.append(f"{tag} final " +
                             " ".join(sorted(names[s] for s in lang.aut.finals)))
            for s, a, t in sorted(lang.aut.transitions, key=repr):
                label = "eps" if a is None else str(a)
                lines.append(f"{tag} trans {names[s]} {label} {names[t]}")
    return "\n".join(lines) + "\n"


def _dot_escape(name) -> str:
    return '"' + str(name).replace('"', r'\"') + '"'


def _emit_view_dot(view) -> str:
    names = _state_names(view.aut.states, view.control_embed)
    lines = ["digraph pautomaton {", "  rankdir=LR;"]
    for s in sorted(view.aut.states, key=repr):
        shape = "doublecircle" if s in view.aut.finals else "circle"
        lines.append(f"  {_dot_escape(names[s])} [shape={shape}];")
    for s, a, t in sorted(view.aut.transitions, key=repr):
        lines.append(f"  {_dot_escape(names[s])} -> {_dot_escape(names[t])} "
                     f"[label={_dot_escape(a)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _emit_region_dot(region) -> str:
    names = _state_names(region.aut.states, region.entry)
    lines = ["digraph region {", "  rankdir=LR;"]
    for s in sorted(region.aut.states, key=repr):
        shape = "doublecircle" if s in region.aut.finals else "circle"
        lines.append(f"  {_dot_escape(names[s])} [shape={shape}];")
    # Alternating transitions become hyperedges through point nodes.
    for i, (s, a, targets) in enumerate(sorted(region.aut.transitions, key=repr)):
        point = f"h{i}"
        lines.append(f"  {point} [shape=point];")
        lines.append(f"  {_dot_escape(names[s])} -> {point} [label={_dot_escape(a)}];")
        for t in sorted(targets, key=repr):
            lines.append(f"  {point} -> {_dot_escape(names[t])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _emit_relation_dot(rel) -> str:
    lines = ["digraph relation {", "  rankdir=LR;"]
    for i, (u, v) in enumerate(rel.pairs):
        for tag, lang in (("pop", u), ("push", v)):
            names = _state_names(lang.aut.states, {})
            prefix = f"p{i}_{tag}_"
            lines.append(f"  subgraph cluster_{i}_{tag} {{")
            lines.append(f'    label="pair {i} {tag}";')
            for s in sorted(lang.aut.states, key=repr):
                shape = "doublecircle" if s in lang.aut.finals else "circle"
                lines.append(f"    {_dot_escape(prefix + names[s])} [shape={shape}];")
            for s, a, t in sorted(lang.aut.transitions, key=repr):
                label = "eps" if a is None else str(a)
                lines.append(f"    {_dot_escape(prefix + names[s])} -> "
                             f"{_dot_escape(prefix + names[t])} "
                             f"[label={_dot_escape(label)}];")
            lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Oracle checks


def _oracle_check_prestar(system, view, result, h):
    target = view.accepts
    for c in oracle.bounded_nodes(system, h):
        if oracle.bfs_prestar_member(system, target, c, h) and not result.accepts(c):
            return c
    return None


def _oracle_check_poststar(system, view, result, h):
    seeds = [c for c in oracle.bounded_nodes(system, h) if view.accepts(c)]
    seen = set(seeds)
    todo = deque(seeds)
    from .pds import successors
    while todo:
        c = todo.popleft()
        if not result.accepts(c):
            return c
        for nxt in successors(system, c):
            if len(nxt.stack) <= h and nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return None


def _oracle_check_game(game, region, h):
    under, over = oracle.bracket_region(game, h)
    nodes = oracle.bounded_nodes(game.pds, h)
    for c in nodes:
        member = games.region_member(region, c)
        if under(c) and not member:
            return c, len(nodes)
        if member and not over(c):
            return c, len(nodes)
    return None, len(nodes)


# ---------------------------------------------------------------------------
# Entry point


def _make_parser():
    parser = argparse.ArgumentParser(prog="pdsat")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = ("prestar", "poststar", "deriv", "reachgame", "buchigame",
                "paritygame", "member")
    for name in commands:
        p = sub.add_parser(name)
        p.add_argument("--in", dest="infile", required=True)
        p.add_argument("--out", dest="outfile")
        p.add_argument("--format", choices=("text", "dot"), default="text")
        p.add_argument("--oracle-check", dest="oracle_check", type=int)
        if name == "deriv":
            p.add_argument("--from", dest="from_control", required=True)
            p.add_argument("--to", dest="to_control", required=True)
        if name == "member":
            p.add_argument("--config", required=True)
            p.add_argument("--analysis", default="prestar",
                           choices=("prestar", "poststar", "reachgame",
                                    "buchigame", "paritygame"))
    return parser


def _write_output(args, text):
    if args.outfile:
        with open(args.outfile, "w", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _run(args) -> int:
    with open(args.infile, encoding="utf-8") as handle:
        doc = parse(handle.read())
    system = _build_pds(doc)
    command = args.command
    analysis = getattr(args, "analysis", command)
    if command == "member":
        config = _parse_config(system, args.config)
        command = analysis

    if command in ("prestar", "poststar"):
        view = _as_view(_build_automaton(doc, system), system)
        run = reachability.prestar if command == "prestar" else reachability.poststar
        result = run(system, view)
        if args.command == "member":
            answer = result.accepts(config)
            sys.stdout.write("yes\n" if answer else "no\n")
            return 0 if answer else 1
        if args.oracle_check:
            check = (_oracle_check_prestar if command == "prestar"
                     else _oracle_check_poststar)
            bad = check(system, view, result, args.oracle_check)
            if bad is not None:
                sys.stdout.write(f"oracle disagreement at {bad!r}\n")
                return 3
            sys.stdout.write("oracle agreement\n")
        _write_output(args, _emit_view(result) if args.format == "text"
                      else _emit_view_dot(result))
        return 0

    if command == "deriv":
        rel = derivation.deriv_relation(system, args.from_control, args.to_control)
        if args.oracle_check:
            raise InvalidInputError("--oracle-check is not supported for deriv")
        _write_output(args, _emit_relation(rel) if args.format == "text"
                      else _emit_relation_dot(rel))
        return 0

    game = _build_game(doc, system, command)
    solver = {"reachgame": games.solve_reachability_game,
              "buchigame": games.solve_buchi_game,
              "paritygame": games.solve_parity_game}[command]
    region = solver(game)
    if args.command == "member":
        answer = games.region_member(region, config)
        sys.stdout.write("yes\n" if answer else "no\n")
        return 0 if answer else 1
    if args.oracle_check:
        bad, count = _oracle_check_game(game, region, args.oracle_check)
        if bad is not None:
            sys.stdout.write(f"oracle disagreement at {bad!r}\n")
            return 3
        sys.stdout.write(f"bracket agreement on {count} nodes\n")
    _write_output(args, _emit_region(region) if args.format == "text"
                  else _emit_region_dot(region))
    return 0


def main(argv=None) -> int:
    args = _make_parser().parse_args(argv)
    try:
        return _run(args)
    except (ParseError, InvalidInputError, ResourceLimitError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
