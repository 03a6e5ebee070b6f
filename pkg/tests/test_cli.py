import json
import shutil

import pytest

from nonneg.cli import UNIFORM_LINE, main, run_corpus
from nonneg.errors import ConflictingMode, MissingRing, ParseError
from nonneg.problemfile import ClassifyRequest, parse_problem
from nonneg.prover import Problem


def test_parse_prove_and_classify_files():
    p = parse_problem("ring a b\nge a\ngoal a^2 + b^2 >= 2*a*b\n")
    assert isinstance(p, Problem) and not p.goal_strict
    assert str(p.goal) and p.ring.names == ("a", "b")
    req = parse_problem("ring x a\nparams 1\neq x^2 - a\ncount 1..inf\n")
    assert isinstance(req, ClassifyRequest)
    assert req.system.params == ("a",) and req.target.lo == 1 and req.target.hi is None
    strict = parse_problem("ring a\ngoal a^2 + 1 > 0  # comment\n")
    assert strict.goal_strict


def test_parse_errors():
    with pytest.raises(ConflictingMode):
        parse_problem("ring a\ngoal a >= 0\ngoal a >= 1\n")
    with pytest.raises(ConflictingMode):
        parse_problem("ring a x\nparams 1\neq x - a\ngoal a >= 0\ncount 0\n")
    with pytest.raises(MissingRing):
        parse_problem("ge a\ngoal a >= 0\n")
    with pytest.raises(ParseError) as e:
        parse_problem("ring a b\ngoal a b >= 0\n")
    assert e.value.line == 2 and e.value.column > 0


def test_prove_exit_codes(tmp_path, capsys, corpus_dir):
    assert main(["prove", str(corpus_dir / "ex01.prob")]) == 0
    out = capsys.readouterr().out
    assert "PROVED_GENERIC_CLOSURE" in out and UNIFORM_LINE in out and "PROVIDED THAT" in out
    bad = tmp_path / "bad.prob"
    bad.write_text("ring a\ngoal a - 1 >= 0\n")
    assert main(["prove", "--json", str(bad)]) == 1
    body = json.loads(capsys.readouterr().out)
    assert body["status"] == "DISPROVED"
    assert set(body["witness"]) == {"param_values", "unknown_boxes", "certificate"}
    # a classification file given to prove is an input error
    assert main(["prove", str(corpus_dir / "ex02.prob")]) == 3
    assert main(["prove", str(tmp_path / "missing.prob")]) == 3


def test_unknown_exit_code(tmp_path, capsys):
    f = tmp_path / "deep.prob"
    f.write_text("ring a\ngoal a^2 > 0\n")
    assert main(["prove", "--depth", "0", str(f)]) == 2
    assert "UNKNOWN" in capsys.readouterr().out


def test_classify_output(capsys, corpus_dir):
    assert main(["classify", str(corpus_dir / "ex02.prob")]) == 0
    out = capsys.readouterr().out
    assert "4*a*c - b^2 < 0" in out
    assert "including the border:" in out and "4*a*c - b^2 <= 0" in out
    assert main(["classify", "--json", "--no-timing", str(corpus_dir / "ex02.prob")]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["status"] == "CLASSIFIED" and body["refined_condition"] == "4*a*c - b^2 <= 0"


def test_isolate(capsys):
    assert main(["isolate", "x^3 - x"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("x^3 - x: 3 real root(s)")
    assert main(["isolate", "--json", "y^2 + 1"]) == 0
    assert json.loads(capsys.readouterr().out)["roots"] == []
    assert main(["isolate", "x*y"]) == 3


def test_corpus_run_on_a_temp_dir(tmp_path, capsys, corpus_dir):
    assert main(["corpus", "run", str(tmp_path)]) == 0
    capsys.readouterr()
    shutil.copy(corpus_dir / "ex01.prob", tmp_path / "ex01.prob")
    shutil.copy(corpus_dir / "ex02.prob", tmp_path / "ex02.prob")
    (tmp_path / "expected.json").write_text(json.dumps({
        "ex01": {"status": "PROVED_GENERIC_CLOSURE"},
        "ex02": {"status": "CLASSIFIED", "condition": "4*a*c - b^2 <= 0"},
    }))
    assert main(["corpus", "run", str(tmp_path)]) == 0
    assert "2 run, 0 mismatched" in capsys.readouterr().out
    (tmp_path / "expected.json").write_text(json.dumps({"ex01": {"status": "DISPROVED"}}))
    assert main(["corpus", "run", "--json", str(tmp_path)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["summary"]["mismatches"] == 1


def test_long_entries_are_skipped_unless_asked(tmp_path):
    (tmp_path / "slow.prob").write_text("ring a\ngoal a^2 >= 0\n")
    (tmp_path / "expected.json").write_text(json.dumps({"slow": {"status": "PROVED_GENERIC_CLOSURE", "long": True}}))
    rep = run_corpus(tmp_path)
    assert rep["skipped"] == ["slow"] and rep["summary"]["run"] == 0
    rep = run_corpus(tmp_path, long=True, timing=False)
    assert rep["problems"][0]["match"] is True and "seconds" not in rep["problems"][0]
