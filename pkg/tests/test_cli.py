import io
import json
import os
import subprocess
import sys

import pytest

from factorlab.cli import main

from golden_cases import PARALLEL, cases
from regen_golden import HERE, render, run

CASES = cases()


@pytest.mark.parametrize("name, argv", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv):
    with open(os.path.join(HERE, name + ".txt"), encoding="utf-8", newline="") as fh:
        expected = fh.read()
    first = render(*run(argv))
    assert first == expected
    assert render(*run(argv)) == first


@pytest.mark.parametrize("name, argv", [c for c in CASES if c[1][0] in PARALLEL],
                         ids=[c[0] for c in CASES if c[1][0] in PARALLEL])
def test_workers_do_not_change_output(name, argv):
    assert run(argv, workers=2) == run(argv, workers=1)


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_spec_examples():
    code, out, _ = call(["elasticity", "--input", "ns23"])
    assert code == 0 and out.splitlines()[0] == "3/2" and "witness" in out
    code, out, _ = call(["aap", "--set", "3,5,7,8", "--d", "1"])
    assert code == 0 and "M = 3" in out
    code, out, _ = call(["report", "--input", "blockZ3", "--k", "5..30", "--format", "csv"])
    assert code == 0 and out.splitlines()[0] == "k,lambda_k,rho_k,size_U_k,density,aap_M"
    assert len(out.splitlines()) == 27


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "numerical", "generators": [4, 6]}')
    code, _, err = call(["atoms", "--input", str(bad)])
    assert code == 2 and "$.generators" in err
    bad.write_text("{oops")
    assert call(["atoms", "--input", str(bad)])[0] == 2
    assert call(["frobnicate", "--input", "ns23"])[0] == 2
    assert call(["atoms", "--input", "no-such-spec"])[0] == 2
    assert call(["atoms"])[0] == 2
    assert call(["aap"])[0] == 2
    assert call(["lengths", "--input", "ns23", "--element", "1"])[0] == 2
    assert call(["lengths", "--input", "ns23", "--element", "1,2"])[0] == 2
    assert call(["unions", "--input", "ns23", "--k", "5..2"])[0] == 2
    assert call(["elasticity", "--input", "ns23", "--format", "csv"])[0] == 2


def test_truncation_exit_code():
    code, out, err = call(["unions", "--input", "blockZ4", "--box", "4", "--k", "1..20",
                           "--budget", "500"])
    assert code == 3 and "truncated" in out and "budget" in err


def test_out_and_manifest(tmp_path):
    target = tmp_path / "r.csv"
    argv = ["report", "--input", "blockZ3", "--k", "5..12", "--format", "csv",
            "--out", str(target)]
    assert call(argv)[0] == 0
    first = target.read_bytes()
    manifest = json.loads((tmp_path / "r.csv.manifest.json").read_text())
    assert manifest["operation"] == "report" and manifest["schema"] == 1
    assert manifest["bounds"]["k"] == [5, 12] and manifest["tool_version"]
    assert len(manifest["input_sha256"]) == 64
    assert call(argv)[0] == 0
    assert target.read_bytes() == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "factorlab", "elasticity", "--input", "ns37"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("7/3")
