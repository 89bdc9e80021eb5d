import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from equitor.cli import main

DATA = Path(__file__).parent / "data"
WITNESS = str(DATA / "dihedral_witness.json")


@pytest.fixture(autouse=True)
def _restore_cap():
    # main() exports --max-order into the environment
    saved = os.environ.pop("EQUITOR_MAX_ORDER", None)
    yield
    os.environ.pop("EQUITOR_MAX_ORDER", None)
    if saved is not None:
        os.environ["EQUITOR_MAX_ORDER"] = saved


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalog_single_entry(capsys):
    code, out, _ = run(capsys, "catalog", "--name", "K9")
    assert code == 0
    d = json.loads(out)
    assert d["name"] == "K9"
    assert d["generators"] == [[[0, 1, -1], [1, 0, -1], [0, 0, -1]],
                               [[-1, 0, 0], [-1, 0, 1], [-1, 1, 0]]]


def test_catalog_lists_everything(capsys):
    code, out, _ = run(capsys, "catalog")
    names = {e["name"] for e in json.loads(out)}
    assert code == 0 and {"K1", "K9", "eta", "iota4", "s_S3"} <= names


def test_classify_dihedral_witness(capsys):
    code, out, err = run(capsys, "classify", "--group", WITNESS)
    d = json.loads(out)
    assert code == 0
    assert (d["A"], d["U"], d["SL"]) == (True, False, False)
    assert "A=True U=False SL=False" in err


def test_group_info(capsys):
    code, out, _ = run(capsys, "group-info", "--group", WITNESS)
    d = json.loads(out)
    assert code == 0
    assert (d["order"], d["torus_order"], d["image_order"]) == (8, 2, 4)
    assert d["image_catalogue_class"] == ["K9"]


def test_reproduce_q4(capsys):
    code, out, _ = run(capsys, "reproduce-section6", "--family", "Q", "--n", "4")
    d = json.loads(out)
    assert code == 0
    assert d["verdict"] == "NonVanishing"
    assert d["integral"] == [-1, 0, 1, 0, 0, 0, -1, 0, 0, 1, 0]


def test_condition_a_and_fixed_points(capsys):
    code, out, _ = run(capsys, "condition-a", "--group", WITNESS)
    assert code == 0 and json.loads(out)["holds"] is True
    code, out, _ = run(capsys, "fixed-points", "--group", WITNESS)
    assert code == 0


def test_beta_command(capsys):
    code, out, _ = run(capsys, "beta", "--group", WITNESS, "--model", "S")
    assert code == 0 and json.loads(out)["verdict"] == "NonVanishing"


def test_model_build_check_round_trip(capsys, tmp_path):
    for name in ("S", "D4cone", "dP6"):
        code, built, _ = run(capsys, "model-build", "--model", name)
        assert code == 0
        f = tmp_path / f"{name}.json"
        f.write_text(built)
        code, checked, _ = run(capsys, "model-check", "--model", str(f))
        assert code == 0
        code, direct, _ = run(capsys, "model-check", "--model", name)
        assert json.loads(checked) == json.loads(built)["checks"] == json.loads(direct)
        txt = tmp_path / f"{name}.fan"
        txt.write_text(json.loads(built)["fan_text"])
        code, from_text, _ = run(capsys, "model-check", "--model", str(txt))
        a, b = json.loads(from_text), json.loads(direct)
        a.pop("name"), b.pop("name")
        assert code == 0 and a == b


def test_model_check_with_group(capsys):
    code, out, _ = run(capsys, "model-check", "--model", "S", "--group", WITNESS)
    assert code == 0 and json.loads(out)["invariant"] is True
    code, out, _ = run(capsys, "model-check", "--model", "P3", "--group", WITNESS)
    assert code == 0 and json.loads(out)["invariant"] is False


def test_json_output_is_deterministic(capsys):
    first = run(capsys, "classify", "--group", WITNESS)[1]
    assert run(capsys, "classify", "--group", WITNESS)[1] == first


def test_sweep_csv(capsys):
    code, out, err = run(capsys, "sweep", "--name", "iota1", "--max-order", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and set(rows[0]) >= {"name", "A", "U", "SL", "beta_U"}
    assert all(r["name"] == "iota1" and int(r["group_order"]) <= 4 for r in rows)
    assert "0 disagreements" in err


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["classify"],
    ["reproduce-section6", "--family", "Q"],
    ["reproduce-section6", "--family", "Q", "--n", "2"],
    ["model-build"],
    ["catalog", "--name", "nope"],
    ["classify", "--group", "/nonexistent/group.json"],
    ["classify", "--group", WITNESS, "--max-order", "0"],
    ["sweep", "--jobs", "0"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_malformed_fan_file_is_usage_error(capsys, tmp_path):
    f = tmp_path / "bad.fan"
    f.write_text("ray 1 0\ncone 1\n")
    assert run(capsys, "model-check", "--model", str(f))[0] == 2


def test_cap_exceeded(capsys):
    assert run(capsys, "group-info", "--family", "Q", "--n", "5", "--max-order", "8")[0] == 3
    assert run(capsys, "classify", "--group", WITNESS, "--max-order", "4")[0] == 3


def test_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("EQUITOR_MAX_ORDER", "4")
    assert run(capsys, "classify", "--group", WITNESS)[0] == 3


def test_module_entry_point():
    env = dict(os.environ, PYTHONPATH=str(Path(__file__).parents[1] / "src"))
    env.pop("EQUITOR_MAX_ORDER", None)
    p = subprocess.run([sys.executable, "-m", "equitor.cli", "classify", "--group", WITNESS],
                       capture_output=True, text=True, env=env)
    assert p.returncode == 0 and json.loads(p.stdout)["U"] is False
    p = subprocess.run([sys.executable, "-m", "equitor.cli", "--bogus"],
                       capture_output=True, text=True, env=env)
    assert p.returncode == 2
