import pytest

from pdsat import cli

REACH_DOC = """\
pds
states p q
alphabet A B
bottom _
rule p A -> p
rule p A -> q B A
rule q B -> p

automaton
states f
final f
trans p _ f
"""

GAME_DOC = """\
pds
states p q
alphabet A
bottom _
rule p A -> q
rule p _ -> p _
rule q A -> p A A
rule q _ -> q A _

game
owner E p
owner A q
final p
colour p 0
colour q 1
"""


def test_parse_sections_and_comments():
    doc = cli.parse("# header\npds\nstates p  # trailing comment\nbottom _\n")
    assert [name for name, _ in doc.sections] == ["pds"]
    body = doc.section("pds")
    assert body == [(3, ["states", "p"]), (4, ["bottom", "_"])]


def test_parse_round_trip():
    doc = cli.parse(REACH_DOC)
    again = cli.parse(cli.serialise(doc))
    assert cli.serialise(again) == cli.serialise(doc)


def test_parse_errors_carry_line_numbers():
    with pytest.raises(cli.ParseError) as err:
        cli.parse("states p\n")
    assert "line 1" in str(err.value)
    with pytest.raises(cli.ParseError) as err:
        cli.parse("pds\nbottom _\npds\n")
    assert "line 3" in str(err.value)
    with pytest.raises(cli.ParseError):
        cli.parse("automaton\n")  # no pds section


def test_build_pds_validates():
    with pytest.raises(cli.ParseError) as err:
        cli._build_pds(cli.parse("pds\nstates p\nbottom _\nrule p A -> p\n"))
    assert "undeclared stack symbol" in str(err.value)
    with pytest.raises(cli.ParseError):
        cli._build_pds(cli.parse("pds\nstates p\nalphabet A\n"))


def run_cli(tmp_path, doc, *args, capsys=None):
    path = tmp_path / "in.pds"
    path.write_text(doc)
    return cli.main([args[0], "--in", str(path), *args[1:]])


def test_member_exit_codes(tmp_path, capsys):
    assert run_cli(tmp_path, REACH_DOC, "member", "--config", "q : B A _") == 0
    assert capsys.readouterr().out.strip() == "yes"
    assert run_cli(tmp_path, REACH_DOC, "member", "--config", "q : A _") == 1
    assert capsys.readouterr().out.strip() == "no"


def test_member_game_analysis(tmp_path, capsys):
    code = run_cli(tmp_path, GAME_DOC, "member", "--config", "p : A _",
                   "--analysis", "buchigame")
    assert code == 0
    code = run_cli(tmp_path, GAME_DOC, "member", "--config", "p : A _",
                   "--analysis", "paritygame")
    assert code == 0


def test_prestar_output_round_trips(tmp_path, capsys):
    out = tmp_path / "out.pds"
    code = run_cli(tmp_path, REACH_DOC, "prestar", "--out", str(out))
    assert code == 0
    text = out.read_text()
    assert text.startswith("automaton")
    # the emitted automaton section parses back under the same pds
    doc = cli.parse(REACH_DOC.split("automaton")[0] + text)
    system = cli._build_pds(doc)
    view = cli._as_view(cli._build_automaton(doc, system), system)
    from pdsat import Configuration
    assert view.accepts(Configuration("q", ("B", "A", "_")))
    assert not view.accepts(Configuration("q", ("A", "_")))


def test_oracle_check_agreement(tmp_path, capsys):
    assert run_cli(tmp_path, REACH_DOC, "prestar", "--oracle-check", "4") == 0
    assert "oracle agreement" in capsys.readouterr().out
    assert run_cli(tmp_path, GAME_DOC, "buchigame", "--oracle-check", "3") == 0
    assert "bracket agreement" in capsys.readouterr().out


def test_dot_output(tmp_path, capsys):
    assert run_cli(tmp_path, REACH_DOC, "prestar", "--format", "dot") == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph")
    assert "->" in out
    assert run_cli(tmp_path, GAME_DOC, "buchigame", "--format", "dot") == 0
    out = capsys.readouterr().out
    assert "shape=point" in out  # hyperedges drawn through point nodes


def test_deriv_command(tmp_path, capsys):
    doc = ("pds\nstates p\nalphabet A B C D\nbottom _\n"
           "rule p A -> p\nrule p B -> p D C\n")
    code = run_cli(tmp_path, doc, "deriv", "--from", "p", "--to", "p")
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("relation")
    assert "pair" in out


def test_bad_input_exit_code(tmp_path, capsys):
    assert run_cli(tmp_path, "pds\nstates p\nrule p A -> p\n", "prestar") == 2
    assert "error:" in capsys.readouterr().err
    assert cli.main(["prestar", "--in", str(tmp_path / "missing.pds")]) == 2


def test_game_section_required(tmp_path, capsys):
    assert run_cli(tmp_path, REACH_DOC, "buchigame") == 2
    assert "game section" in capsys.readouterr().err


def test_reachgame_uses_automaton_target(tmp_path, capsys):
    doc = GAME_DOC + "\nautomaton\nstates f\nfinal f\ntrans q _ f\n"
    code = run_cli(tmp_path, doc, "member", "--config", "p : A _",
                   "--analysis", "reachgame")
    # p can pop its A straight into q at the bottom
    assert code == 0
