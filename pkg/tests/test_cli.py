from __future__ import annotations

import io as _io
import json
import re
import subprocess
import sys

import pytest

from ocspath.cli import run
from ocspath.core import Config, validate_path
from ocspath.generators import counting_oca, example2, random_oca
from ocspath.io import parse_path, parse_system, path_from_doc, serialize_system


def _run(argv, monkeypatch, capsys, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", _io.StringIO(stdin))
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_piped_into_reach():
    gen = subprocess.run(
        [sys.executable, "-m", "ocspath", "gen", "example2", "--k", "3", "--m", "2"],
        capture_output=True, text=True, check=True,
    )
    assert "source p_0:0 target s_2:0" in gen.stderr
    reach = subprocess.run(
        [sys.executable, "-m", "ocspath", "reach", "-", "--from", "p_0:0", "--to", "s_2:0"],
        input=gen.stdout, capture_output=True, text=True,
    )
    assert reach.returncode == 0
    assert json.loads(reach.stdout)["summary"]["length"] == 14


def test_reach_output_is_a_valid_path(monkeypatch, capsys):
    text = serialize_system(example2(5, 4).ocs)
    code, out, _ = _run(["reach", "-", "--from", "p_0:0", "--to", "s_2:0"], monkeypatch, capsys, text)
    ocs = parse_system(text)
    rho = parse_path(out, ocs)
    assert code == 0 and len(rho) == 42
    assert validate_path(rho, ocs) == []


def test_reach_fewest_zeros(monkeypatch, capsys):
    text = serialize_system(example2(3, 2).ocs)
    argv = ["reach", "-", "--from", "p_0:0", "--to", "s_2:0", "--minimize", "zeros"]
    code, out, _ = _run(argv, monkeypatch, capsys, text)
    assert code == 0 and json.loads(out)["summary"]["zeros"] == 1
    argv = ["reach", "-", "--from", "p_0:1", "--to", "s_2:0", "--minimize", "zeros"]
    code, _, err = _run(argv, monkeypatch, capsys, text)
    assert code == 2 and "counter value 0" in err


def test_unreachable_exits_one(monkeypatch, capsys):
    text = serialize_system(example2(3, 2).ocs)
    code, out, _ = _run(["reach", "-", "--from", "s_2:0", "--to", "p_0:0"], monkeypatch, capsys, text)
    assert code == 1 and out.strip() == "unreachable"


def test_normalize_output_revalidates(monkeypatch, capsys):
    text = serialize_system(example2(26, 25).ocs)
    code, out, _ = _run(["normalize", "-", "--from", "p_0:0", "--to", "s_2:0"], monkeypatch, capsys, text)
    assert code == 0
    doc = json.loads(out)
    ocs = parse_system(text)
    rho = path_from_doc(doc["path"], ocs)
    assert validate_path(rho, ocs) == []
    assert rho.src == Config(0, 0) and len(rho) <= 14 * ocs.n ** 2
    kinds = [arc["kind"] for arc in doc["arcs"]]
    assert "normal" in kinds
    normal = doc["arcs"][kinds.index("normal")]
    assert sum(normal["parts"].values()) == normal["length"]


def test_gen_tower_then_normalize(monkeypatch, capsys):
    code, text, err = _run(["gen", "tower", "--gadgets", "1", "--seed", "2"], monkeypatch, capsys)
    assert code == 0
    src, dst = re.match(r"source (\S+) target (\S+)", err).groups()
    code, out, _ = _run(["normalize", "-", "--from", src, "--to", dst], monkeypatch, capsys, text)
    assert code == 0
    assert [a["kind"] for a in json.loads(out)["arcs"]].count("normal") == 1


def test_shortest_word(monkeypatch, capsys, tmp_path):
    f = tmp_path / "counting.json"
    f.write_text(serialize_system(counting_oca(3)))
    code, out, _ = _run(["shortest-word", str(f)], monkeypatch, capsys)
    assert code == 0 and json.loads(out)["word"] == ["a"] * 10


def test_shortest_word_empty_language(monkeypatch, capsys):
    oca = random_oca(3, 0.0, 0.0, 0)
    oca = type(oca)(oca.ocs, oca.labels, oca.alphabet, frozenset({0}), frozenset({2}))
    code, out, _ = _run(["shortest-word", "-"], monkeypatch, capsys, serialize_system(oca))
    assert code == 1 and out.strip() == "empty language"


def test_shortest_word_needs_an_automaton(monkeypatch, capsys):
    code, _, err = _run(["shortest-word", "-"], monkeypatch, capsys, serialize_system(example2(3, 2).ocs))
    assert code == 2 and "oca" in err


def test_zreach_negative_counters(monkeypatch, capsys):
    code, text, _ = _run(["gen", "random", "--kind", "zocs", "--n", "4", "--seed", "3"], monkeypatch, capsys)
    z = parse_system(text)
    found = False
    for c in range(-3, 4):
        code, out, _ = _run(["zreach", "-", "--from", f"q0:{c}", "--to", "q1:-2"], monkeypatch, capsys, text)
        assert code in (0, 1)
        if code == 0:
            rho = parse_path(out, z)
            assert rho.src == (0, c) and rho.targ == (1, -2)
            found = True
    assert found


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["reach", "-", "--from", "p_0", "--to", "s_2:0"], "STATE:COUNTER"),
        (["reach", "-", "--from", "nowhere:0", "--to", "s_2:0"], "nowhere"),
        (["reach", "-", "--from", "p_0:-1", "--to", "s_2:0"], "nonnegative"),
        (["reach", "-", "--from", "p_0:x", "--to", "s_2:0"], "integer"),
        (["normalize", "-", "--from", "p_0:1", "--to", "s_2:0"], "counter value 0"),
    ],
)
def test_input_errors_exit_two(argv, needle, monkeypatch, capsys):
    code, _, err = _run(argv, monkeypatch, capsys, serialize_system(example2(3, 2).ocs))
    assert code == 2 and needle in err


def test_schema_error_exits_two(monkeypatch, capsys):
    doc = json.dumps({"kind": "ocs", "states": ["x"], "transitions": [{"src": "x", "eff": 0, "dst": "x", "guard": "neg"}]})
    code, _, err = _run(["reach", "-", "--from", "x:0", "--to", "x:0"], monkeypatch, capsys, doc)
    assert code == 2 and "transitions[0]" in err


def test_missing_file_exits_two(monkeypatch, capsys, tmp_path):
    code, _, err = _run(["reach", str(tmp_path / "none.json"), "--from", "a:0", "--to", "a:0"], monkeypatch, capsys)
    assert code == 2 and "cannot read" in err


def test_verify_sweep(monkeypatch, capsys):
    code, out, _ = _run(["verify", "--n-max", "8", "--trials", "500", "--seed", "7"], monkeypatch, capsys)
    assert code == 0
    ratio = float(re.search(r"max len/n\^2: ([0-9.]+)", out).group(1))
    assert ratio <= 14
    assert "histogram" in out


def test_verify_is_independent_of_worker_count(monkeypatch, capsys):
    _, one, _ = _run(["verify", "--trials", "20", "--seed", "3"], monkeypatch, capsys)
    _, four, _ = _run(["verify", "--trials", "20", "--seed", "3", "--workers", "4"], monkeypatch, capsys)
    assert one == four
