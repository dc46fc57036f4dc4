from __future__ import annotations

import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fixture_path
from fusionkit.cli import EXIT_BOUND, EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, run
from fusionkit.cli.spec import Block, SpecDocument, SpecError, parse_spec, render
from fusionkit.simpl import nerve


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def _report(*argv):
    code, out, _ = _run(*argv, "--json", "-")
    return code, json.loads(out)


# parsing -------------------------------------------------------------------------

def test_parse_fixture():
    doc = parse_spec(open(fixture_path("d8_s4.fk")).read(), "d8_s4.fk")
    assert doc.names("group") == ["S4", "D8"] and doc.names("fusion") == ["F"]
    assert doc["F"].get("ambient") == ("name", "S4")
    assert doc["S4"].all("perm") == [("perm", ((1, 2, 3, 4),)), ("perm", ((1, 2),))]


def test_empty_document():
    assert len(parse_spec("")) == 0
    assert len(parse_spec("# nothing here\n\n")) == 0
    assert render(parse_spec("")) == ""


@pytest.mark.parametrize("text,line,col,msg", [
    ("group A { perm (1 2) }\nfusion F {\n  ambient=A sylow=B }\n", 3, 19, "undefined reference"),
    ("fusion F { ambient=S4 }\ngroup S4 { perm (1 2) }\n", 1, 20, "undefined reference"),
    ("group A { perm (1 2) }\nfamily X { fusion=A }\n", 2, 19, "expected fusion"),
    ("group A { perm (1 1) }\n", 1, 19, "repeated point"),
    ("widget A { }\n", 1, 1, "unknown block kind"),
    ("group A { perm (1 2)\n", 2, 1, "unterminated"),
    ("group A { colour=3 }\n", 1, 11, "unknown key"),
    ("group A { }\ngroup A { }\n", 2, 1, "duplicate block"),
])
def test_errors_carry_position(text, line, col, msg):
    with pytest.raises(SpecError) as e:
        parse_spec(text, "t.fk")
    assert (e.value.line, e.value.col) == (line, col)
    assert msg in str(e.value) and str(e.value).startswith(f"t.fk:{line}:{col}:")


def test_fixtures_roundtrip():
    for name in ("d8_s4", "z9", "dinf", "a4_s4", "s4_z3", "z3_s3"):
        doc = parse_spec(open(fixture_path(f"{name}.fk")).read())
        assert parse_spec(render(doc)) == doc


_points = st.lists(st.integers(1, 9), min_size=1, max_size=4, unique=True)
_perm = st.lists(_points, max_size=3).map(
    lambda cs: ("perm", tuple(tuple(c) for c in cs)))
_frac = st.fractions(min_value=-3, max_value=3, max_denominator=16)
_elt = st.tuples(st.lists(_frac, max_size=3), _perm).map(lambda t: ("elt", tuple(t[0]), t[1][1]))
_int = st.integers(-50, 50).map(lambda n: ("int", n))
_ratio = _frac.filter(lambda q: q.denominator > 1).map(lambda q: ("frac", q))
_atom = st.one_of(_int, _ratio, _perm, _elt)
_item = st.one_of(_atom, st.tuples(_atom, _atom).map(lambda t: ("arrow", t[0], t[1])))
_list = st.lists(_item, max_size=4).map(lambda xs: ("list", tuple(xs)))


@st.composite
def documents(draw):
    blocks = []
    groups = []
    for i in range(draw(st.integers(0, 3))):
        items = tuple(("perm", v) for v in draw(st.lists(_perm, max_size=3)))
        if draw(st.booleans()):
            items += (("degree", ("int", draw(st.integers(1, 9)))),)
        blocks.append(Block("group", f"G{i}", items))
        groups.append(f"G{i}")
    fusions = []
    if groups:
        for i in range(draw(st.integers(0, 2))):
            items = [("ambient", ("name", draw(st.sampled_from(groups)))),
                     ("p", ("int", draw(st.sampled_from([2, 3, 5]))))]
            items += [("map", v) for v in draw(st.lists(_list, max_size=2))]
            if draw(st.booleans()):
                items.append(("W", draw(_list)))
            blocks.append(Block("fusion", f"F{i}", tuple(items)))
            fusions.append(f"F{i}")
    for i, f in enumerate(fusions):
        sel = draw(st.sampled_from(["all", "centric"]))
        blocks.append(Block("family", f"X{i}", (("fusion", ("name", f)), ("select", ("name", sel)))))
    return SpecDocument(tuple(blocks))


@settings(max_examples=150, deadline=None)
@given(documents())
def test_render_parse_roundtrip(doc):
    text = render(doc)
    again = parse_spec(text)
    assert again == doc
    assert render(again) == text


# exit codes and reports ----------------------------------------------------------

def test_exit_ok_and_schema():
    code, rep = _report("saturation", "--spec", fixture_path("d8_s4.fk"), "--target", "F")
    assert code == EXIT_OK and rep["ok"]
    assert rep["schema"] == "fusionkit.report/1"
    assert set(rep) == {"schema", "version", "command", "inputs", "ok", "violations", "results"}
    assert rep["inputs"]["spec"] == "d8_s4.fk" and len(rep["inputs"]["spec_sha256"]) == 64


def test_exit_violation():
    code, rep = _report("saturation", "--spec", fixture_path("z9.fk"))
    assert code == EXIT_VIOLATION and not rep["ok"] and rep["violations"]
    assert rep["results"]["axioms"] == {"I": True, "II": False, "III": True}


def test_exit_input_errors(tmp_path):
    bad = tmp_path / "bad.fk"
    bad.write_text("fusion F { ambient=S4 }\n")
    code, out, err = _run("saturation", "--spec", str(bad))
    assert code == EXIT_INPUT and "bad.fk:1:20" in err and out == ""
    assert _run("saturation", "--spec", str(tmp_path / "missing.fk"))[0] == EXIT_INPUT
    assert _run("saturation", "--spec", fixture_path("d8_s4.fk"), "--target", "nope")[0] == EXIT_INPUT
    assert _run("saturation", "--spec", fixture_path("d8_s4.fk"), "--target", "S4")[0] == EXIT_INPUT
    assert _run("frobnicate", "--spec", fixture_path("d8_s4.fk"))[0] == EXIT_INPUT
    assert _run("saturation", "--spec", fixture_path("d8_s4.fk"), "--seed", "-1")[0] == EXIT_INPUT
    assert _run("saturation", "--spec", fixture_path("d8_s4.fk"), "--seed", str(2 ** 64))[0] == EXIT_INPUT


def test_exit_bound(monkeypatch):
    monkeypatch.setenv("FUSIONKIT_BOUNDS", "max_group_order=10")
    code, out, err = _run("saturation", "--spec", fixture_path("d8_s4.fk"))
    assert code == EXIT_BOUND and "bound exceeded" in err


def test_malformed_bounds_is_input_error(monkeypatch):
    monkeypatch.setenv("FUSIONKIT_BOUNDS", "colour=3")
    assert _run("saturation", "--spec", fixture_path("d8_s4.fk"))[0] == EXIT_INPUT


def test_table_output():
    code, out, _ = _run("centric-radical", "--spec", fixture_path("d8_s4.fk"))
    assert code == EXIT_OK and out.startswith("centric-radical: ok\n")
    assert _run("centric-radical", "--spec", fixture_path("d8_s4.fk"), "--quiet")[1] == ""


def test_json_to_file(tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = _run("centric-radical", "--spec", fixture_path("d8_s4.fk"), "--json", str(path), "--quiet")
    assert code == EXIT_OK and out == ""
    rep = json.loads(path.read_text())
    assert set(rep["results"]["centric_radical"]) == {"<(1 3)(2 4), (1 4)(2 3)>", "<(1 2 3 4), (1 4)(2 3)>"}


COMMAND_SPECS = [
    ("saturation", "d8_s4.fk", []),
    ("saturation", "dinf.fk", ["--family", "trunc"]),
    ("centric-radical", "d8_s4.fk", []),
    ("bullet", "dinf.fk", ["--family", "bullet6"]),
    ("normalizer", "d8_s4.fk", []),
    ("extension", "a4_s4.fk", []),
    ("twisting", "a4_s4.fk", ["--truncation", "3", "--seed", "9"]),
    ("transporter-axioms", "s4_z3.fk", ["--target", "F"]),
]


@pytest.mark.parametrize("command,spec,extra", COMMAND_SPECS)
def test_reports_deterministic(command, spec, extra):
    argv = [command, "--spec", fixture_path(spec), *extra]
    c1, a, _ = _run(*argv, "--json", "-")
    c2, b, _ = _run(*argv, "--json", "-", "--threads", "4")
    c3, c, _ = _run(*argv, "--json", "-")
    assert c1 == c2 == c3 == EXIT_OK
    assert a == b == c
    assert json.loads(a)["command"] == command


def test_dump(tmp_path, a4s4):
    code, rep = _report("dump", "--spec", fixture_path("d8_s4.fk"), "--what", "linking", "--what", "levels",
                        "--what", "transporter", "--out", str(tmp_path))
    assert code == EXIT_OK
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["F.levels.json", "F.linking.json", "F.transporter.json"]
    assert set(rep["results"]["files"]) == set(files)
    lk = json.loads((tmp_path / "F.linking.json").read_text())
    assert len(lk["morphisms"]) == 88
    assert rep["results"]["summary"]["linking"] == {"objects": 4, "morphisms": 88}
    out = tmp_path / "pair"
    code, rep = _report("dump", "--spec", fixture_path("a4_s4.fk"), "--what", "levels", "--what", "LU",
                        "--truncation", "3", "--out", str(out))
    assert code == EXIT_OK
    levels = json.loads((out / "P.levels.json").read_text())
    assert levels["sizes"] == nerve(a4s4.pair.L.cat, 3).level_counts()
    assert rep["results"]["summary"]["LU"]["morphisms"] == a4s4.pipeline.LU.cat.n_mor


def test_dump_nothing_writes_nothing(tmp_path):
    code, rep = _report("dump", "--spec", fixture_path("d8_s4.fk"), "--out", str(tmp_path / "none"))
    assert code == EXIT_OK and rep["results"] == {"files": {}, "summary": {}}
    assert not (tmp_path / "none").exists()


def test_fractions_in_specs():
    doc = parse_spec("ptoral T { p=2 rank=1 pi=[(1 2)] act=[[-1]] }\n"
                     "fusion F { over=T map [<1/2> -> <-1/2>] }\n")
    arrow = doc["F"].get("map")[1][0]
    assert arrow == ("arrow", ("elt", (Fraction(1, 2),), ()), ("elt", (Fraction(-1, 2),), ()))
