from __future__ import annotations

import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from coulomb.cli import EXIT_MATH, EXIT_OK, EXIT_USAGE, canonical, execute, main, run_corpus
from coulomb.graded import GradedElement

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)["payload"] if out.strip().startswith("{") else out


def test_survive_quadric_generators(capsys):
    code, payload = run(capsys, "survive", "--weights", "1,-1", "--element", "(mu-t)*z", "--element", "(mu+t)*z^-1", "--expect", "true")
    assert code == EXIT_OK
    assert [e["survives"] for e in payload["results"]["elements"]] == [True, True]
    assert payload["results"]["elements"][0]["witnesses"][0]["quotient"] == "1"


def test_expectation_mismatch_exits_one(capsys):
    code, payload = run(capsys, "survive", "--weights", "1,-1", "--element", "z", "--expect", "true")
    assert code == EXIT_MATH
    assert payload["ok"] is False


def test_gens_standard_relation(capsys):
    code, payload = run(capsys, "gens", "--group", "su2", "--weights", "1,-1")
    assert code == EXIT_OK
    rels = {r["relation"]: r for r in payload["results"]["relations"]}
    assert rels["x*y = 1 + mu*w"]["residue"] == "0"
    assert payload["results"]["massless_span_check"]["passed"]


def test_empty_element_list(capsys):
    code, payload = run(capsys, "survive", "--weights", "1")
    assert code == EXIT_OK
    assert payload["results"]["elements"] == []


@pytest.mark.parametrize(
    "argv",
    [
        ["survive", "--element", "z^("],
        ["survive", "--element", "z1*z2", "--weights", "1"],
        ["survive", "--element", "w"],
        ["hilbert", "--group", "su2", "--weights", "1,-1", "--eta", "1", "--degree-bound", "0"],
        ["nc-mul", "--flavor", "comm", "--element", "z", "--element", "t"],
        ["gamma", "--flavor", "h", "--point", "-1", "--hbar", "1"],
        ["gens", "--group", "su2", "--weights", "0"],
        ["frobnicate"],
        ["survive", "--group", "e8"],
    ],
)
def test_usage_and_parse_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE


def test_parse_error_reports_position(capsys):
    code, payload = run(capsys, "survive", "--element", "mu +\n )")
    assert code == EXIT_USAGE
    assert payload["error"]["kind"] == "parse"
    assert "line 2, column 2" in payload["error"]["message"]


def test_nc_commands(capsys):
    code, payload = run(capsys, "nc-mul", "--element", "z", "--element", "t")
    assert code == EXIT_OK
    _, payload2 = run(capsys, "nc-mul", "--element", "t", "--element", "z")
    assert payload["results"]["product"] != payload2["results"]["product"]
    code, payload = run(capsys, "nc-powers", "--weights", "2,-1", "--n", "3")
    assert code == EXIT_OK and payload["ok"]


def test_q_commands(capsys):
    code, payload = run(capsys, "q-survive", "--weights", "1", "--element", "z^-1*(1 - m^-1*x^-1)", "--element", "z^-1")
    assert [e["survives"] for e in payload["results"]["elements"]] == [True, False]


def test_numeric_commands(capsys):
    code, payload = run(capsys, "gamma", "--flavor", "q", "--point", "3", "--q", "0.3", "--truncation", "200")
    assert code == EXIT_OK
    code, payload = run(capsys, "section", "--weights", "1,-1", "--point", "0.5+0.1j", "--mass", "0")
    assert code == EXIT_OK


def test_printed_elements_reparse():
    report, _ = execute({"command": "nc-mul", "elements": ["z^2*(mu+t)", "z^-1*t^2 + h"], "flavor": "h"})
    text = report["payload"]["results"]["product"]
    if isinstance(text, dict):
        text = text["text"]
    first = GradedElement.parse(text, 1)
    assert GradedElement.parse(str(first), 1) == first


def test_payload_is_deterministic():
    config = json.loads((CORPUS / "abelianize_su2_adjoint.json").read_text())
    a, _ = execute(config)
    b, _ = execute(config)
    assert canonical(a["payload"]) == canonical(b["payload"])
    assert "seconds" in a["meta"]


def test_run_config_and_output(tmp_path, capsys):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"command": "euler", "weights": [1, -1], "eta": "1"}))
    out = tmp_path / "report.json"
    assert main(["run", str(cfg), "--output", str(out)]) == EXIT_OK
    saved = json.loads(out.read_text())
    assert saved["payload"]["command"] == "euler"
    capsys.readouterr()
    assert main(["run", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_shipped_corpus_passes(capsys):
    assert run_corpus(CORPUS) == EXIT_OK
    assert "0 failures" in capsys.readouterr().out


def test_corrupted_expectation_fails_with_diff(tmp_path, capsys):
    work = tmp_path / "corpus"
    work.mkdir()
    for name in ("euler_quadric.json", "euler_quadric.expected.json"):
        shutil.copy(CORPUS / name, work / name)
    exp = work / "euler_quadric.expected.json"
    exp.write_text(exp.read_text().replace("mu - t1", "mu + 7*t1"))
    assert run_corpus(work) == EXIT_MATH
    out = capsys.readouterr().out
    assert "FAIL euler_quadric.json" in out
    assert "--- expected" in out and "+++ actual" in out


def test_empty_corpus_warns(tmp_path, capsys):
    assert run_corpus(tmp_path) == EXIT_OK
    assert "empty" in capsys.readouterr().err


def test_missing_expectation_fails(tmp_path, capsys):
    shutil.copy(CORPUS / "euler_quadric.json", tmp_path / "euler_quadric.json")
    assert run_corpus(tmp_path) == EXIT_MATH
    assert "missing expectation" in capsys.readouterr().out


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "coulomb.cli", "euler", "--weights", "1,-1", "--eta", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["ok"]
