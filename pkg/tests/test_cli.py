import json
import subprocess
import sys

import pytest

from wordmeasures.cli import (ExperimentConfig, load_config, reduced_words, rigidity_experiment,
                              run, search_inverse_witness)
from wordmeasures.words import parse_tuple


def _json(capsys, argv, code=0):
    assert run(argv) == code
    return json.loads(capsys.readouterr().out)


def test_catalog(capsys):
    rows = _json(capsys, ["catalog"])
    ids = {r["id"]: r for r in rows}
    assert ids["S4"]["order"] == 24 and not ids["S4"]["abelian"]
    assert ids["Z2xZ4"]["abelian"]


def test_fingerprint_command(capsys):
    d = _json(capsys, ["fingerprint", "aa", "--group", "Z4"])
    assert d == {"group": "Z4", "order": 4, "arity": 1, "total": 4,
                 "counts": [{"image": [0], "n": 2}, {"image": [2], "n": 2}]}
    assert run(["fingerprint", "aa", "--group", "Z4", "--output", "table"]) == 0
    assert "total 4" in capsys.readouterr().out


def test_fingerprint_is_deterministic(capsys):
    argv = ["fingerprint", "abA", "bb", "--group", "S3"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    assert capsys.readouterr().out == first


def test_compare_exit_codes(capsys):
    d = _json(capsys, ["compare", "aa,bb", "aa,bbb", "--catalog", "Z1,Z2,Z3"], code=1)
    assert d["verdict"] == "unequal"
    _json(capsys, ["compare", "a", "b", "--rank", "2", "--catalog", "Z2,S3"])
    _json(capsys, ["compare", "a", "b", "--rank", "2", "--condition", "quotient",
                   "--catalog", "Z2,Z3"])


def test_usage_errors(capsys):
    assert run(["compare", "ax!", "b"]) == 2
    assert run(["compare", "a", "a,b"]) == 2
    assert run(["fingerprint", "a", "--group", "Z99"]) == 2
    assert run(["subgroup-compare", "a,a", "b"]) == 2
    err = capsys.readouterr().err
    assert "basis" in err
    with pytest.raises(SystemExit) as exc:
        run(["nonsense"])
    assert exc.value.code == 2


def test_resource_cap(capsys, monkeypatch):
    monkeypatch.setenv("WORDMEASURES_BUDGET", "100")
    assert run(["fingerprint", "abc", "--group", "S4"]) == 3
    assert "error" in capsys.readouterr().err


def test_subgroup_compare(capsys):
    d = _json(capsys, ["subgroup-compare", "a,b", "ab,b", "--catalog", "Z2,S3"])
    assert d["verdict"] == "equal"


def test_rigidity(capsys):
    d = _json(capsys, ["rigidity", "a", "aa", "--rank", "2", "--catalog", "Z1,Z2,Z3"], code=1)
    assert d["classification"] == "MeasuresDiffer"
    assert d["witness"]["group"] == "Z2"
    d = _json(capsys, ["rigidity", "aa", "bb", "--catalog", "Z2,Z3,S3"])
    assert d["classification"] == "MeasuresAgree+OrbitSame"
    assert d["orbit"]["status"] == "same"


def test_rigidity_library():
    cfg = ExperimentConfig(catalog=["Z2", "Z3", "S3"])
    res = rigidity_experiment(parse_tuple("abAB"), parse_tuple("baBA"), cfg)
    assert res["classification"] == "MeasuresAgree+OrbitSame"


def test_output_path(tmp_path, capsys):
    out = tmp_path / "fp.json"
    assert run(["fingerprint", "a", "--group", "Z3", "--output-path", str(out)]) == 0
    assert json.loads(out.read_text())["total"] == 3


def test_config_file_and_env(tmp_path):
    p = tmp_path / "exp.cfg"
    p.write_text("# experiment\ncatalog = Z2, S3\nbudget = 1_000  # small\nrank = 2\n")
    cfg = load_config(str(p), env={})
    assert cfg.catalog == ["Z2", "S3"] and cfg.budget == 1000 and cfg.rank == 2
    cfg = load_config(str(p), env={"WORDMEASURES_BUDGET": "77"})
    assert cfg.budget == 77
    p.write_text("colour = red\n")
    with pytest.raises(ValueError):
        load_config(str(p), env={})
    with pytest.raises(ValueError):
        ExperimentConfig(budget=0)


def test_reduced_words_shortlex():
    ws = list(reduced_words(2, 2))
    assert [str(w) for w in ws[:5]] == ["a", "A", "b", "B", "aa"]
    assert len(ws) == 4 + 12


def test_search_inverse_small():
    res = search_inverse_witness(3, ExperimentConfig(catalog=["Z3", "S3", "Q8"]))
    assert res["found"] is False


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wordmeasures", "fingerprint", "a",
                           "--group", "Z2"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["total"] == 2
