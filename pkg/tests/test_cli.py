import json
import os
import subprocess
import sys

import pytest

VOLATILE = {"timestamp", "elapsed_ms", "elapsed_s"}


def cli(*args, env=None):
    e = dict(os.environ)
    e.pop("DELPEZZO_WORKERS", None)
    e.update(env or {})
    p = subprocess.run([sys.executable, "-m", "delpezzo.cli", *args], capture_output=True, text=True, env=e)
    return p.returncode, p.stdout, p.stderr


def strip(obj):
    if isinstance(obj, dict):
        return {k: strip(v) for k, v in obj.items() if k not in VOLATILE}
    if isinstance(obj, list):
        return [strip(v) for v in obj]
    return obj


def test_count_record():
    code, out, _ = cli("count", "--surface", "fermat_cubic", "--B", "100", "--subset", "open_U")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["count"] == 1536
    assert doc["config"]["surface"] == "fermat_cubic" and doc["config"]["B"] == 100
    assert {"config", "result", "timestamp"} <= set(doc)


def test_picard_and_segre():
    code, out, _ = cli("picard", "--a", "1,1,1,2")
    assert code == 0 and json.loads(out)["result"]["rank"] == 1
    code, out, _ = cli("segre", "--surface", "dp4_i")
    r = json.loads(out)["result"]
    assert code == 0 and r["symbol"] == "(2,1,1,1)" and r["type"] == "A1"


def test_local_and_constants():
    code, out, _ = cli("local", "--a", "1,1,1,1", "--p", "7", "--e", "2")
    r = json.loads(out)["result"]
    assert code == 0 and all(r["checks"].values())
    code, out, _ = cli("constants", "--which", "L1")
    assert code == 0
    assert json.loads(out)["result"]["value"] == pytest.approx(0.6045997880780726)


def test_usage_errors_exit_2():
    assert cli("count", "--surface", "no_such_surface", "--B", "10")[0] == 2
    assert cli("count", "--surface", "fermat_cubic")[0] == 2
    assert cli("picard", "--a", "1,x,1,1")[0] == 2
    assert cli("frobnicate")[0] == 2
    assert cli("--workers", "0", "catalogue")[0] == 2


def test_failed_check_exits_1(monkeypatch):
    from click.testing import CliRunner

    from delpezzo import cli as mod

    monkeypatch.setattr(mod.chars, "hensel_check", lambda *a: False)
    res = CliRunner().invoke(mod.main, ["local", "--a", "1,1,1,1", "--p", "7", "--e", "2"])
    assert isinstance(res.exception, mod.CheckFailed)
    monkeypatch.setattr(sys, "argv", ["delpezzo", "local", "--a", "1,1,1,1", "--p", "7", "--e", "2"])
    with pytest.raises(SystemExit) as ex:
        mod.run()
    assert ex.value.code == 1


def test_deterministic_output(tmp_path):
    args = ("gon", "sweep", "--lemma", "line", "--seed", "3", "--n", "50")
    a = cli("--workers", "1", "--out", str(tmp_path / "a.json"), *args)
    b = cli("--workers", "3", "--out", str(tmp_path / "b.json"), *args)
    assert a[0] == b[0] == 0
    da, db = (json.loads((tmp_path / f).read_text()) for f in ("a.json", "b.json"))
    for d in (da, db):
        d["config"].pop("workers")
        d["config"].pop("out")
    assert strip(da) == strip(db)
    c = cli("--workers", "1", "--out", str(tmp_path / "a.json"), *args)
    assert strip(json.loads(c[1])) == strip(json.loads(a[1]))
    assert json.loads(a[1])["config"]["command"] == "gon sweep"


def test_csv_output():
    code, out, _ = cli("gon", "sweep", "--lemma", "rho", "--n", "5", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "instance,count,bound,ratio" and len(lines) == 6


def test_workers_env():
    code, out, _ = cli("catalogue", env={"DELPEZZO_WORKERS": "4"})
    assert code == 0 and json.loads(out)["config"]["workers"] == 4


def test_repro_subset():
    code, out, err = cli("repro", "--only", "1,6,11", "--compare-workers", "2")
    doc = json.loads(out)
    assert code == 0 and doc["result"]["passed"] == doc["result"]["total"] == 3
    assert "PASS" in err
