from __future__ import annotations

import json
import subprocess
import sys

import pytest

from nielsen_iterates.cli import main, render_json

MATRIX_ARGS = ["--f", "[[-2,2],[1,2]]", "--g", "[[-1,0],[1,1]]", "--n", "30"]


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def row(doc, m):
    return next(r for r in doc["levels"] if r["m"] == str(m))


def test_compute_circle(capsys):
    code, out, _ = run(["compute", "circle", "--a", "6", "--b", "2", "--n", "6", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) >= {"space", "inputs", "levels", "checks"}
    r = row(doc, 6)
    assert (r["R"], r["N"], r["NP"], r["NPhi"]) == ("46592", "46592", "46368", "46604")
    assert any(c["status"] == "REFUSED" and "(2,3)" in c["note"] for c in doc["checks"])


def test_force_unsafe_labels_the_forced_value(capsys):
    code, out, _ = run(["compute", "circle", "--a", "6", "--b", "2", "--n", "6", "--force-unsafe"], capsys)
    assert code == 0
    assert out.startswith("*** UNSAFE")
    assert "[UNSAFE] UNSAFE Möbius NP_6: expected 46368, got 46356" in out


def test_noncommuting_torus_is_malformed_input(capsys):
    code, _, err = run(["compute", "torus", *MATRIX_ARGS], capsys)
    assert code == 1
    assert "do not commute" in err


def test_noncommuting_torus_forced(capsys):
    code, out, _ = run(["compute", "torus", *MATRIX_ARGS, "--force-unsafe", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert "UNSAFE" in doc["banner"]
    r = row(doc, 30)
    assert r["NP"] == "221073919719322744136580"
    assert r["NPhi"] == "221073919719792987930625"
    assert "unsafe" in r["flags"]


def test_compute_klein(capsys):
    code, out, _ = run(["compute", "klein", "--f", "2,3", "--g", "3,5", "--n", "6", "--csv"], capsys)
    assert code == 0
    assert "6,,10859184,10856400,10859184," in out
    code, _, err = run(["compute", "klein", "--f", "2,3", "--g", "4,5", "--n", "2"], capsys)
    assert code == 2 and "gcd" in err
    code, _, err = run(["compute", "klein", "--f", "2,4", "--g", "3,5", "--n", "2"], capsys)
    assert code == 1 and "not well defined" in err


def test_cyclotomic(capsys):
    code, out, _ = run(["cyclotomic", "--k", "2", "--m", "3"], capsys)
    assert code == 0 and "p(x) = x^2 - x + 1" in out
    code, out, _ = run(["cyclotomic", "--k", "2", "--m", "5", "--json"], capsys)
    assert json.loads(out)["polynomials"]["p"] == ["1", "-1", "1", "-1", "1"]
    code, out, _ = run(["cyclotomic", "--k", "1", "--m", "4"], capsys)
    assert code == 0 and "degenerate" in out
    code, _, _ = run(["cyclotomic", "--k", "2", "--m", "4"], capsys)
    assert code == 2


def test_oracle(capsys):
    code, out, _ = run(["oracle", "--a", "6", "--b", "2", "--n", "6"], capsys)
    assert code == 0 and "MISMATCH" not in out and out.count("MATCH") >= 4
    code, out, _ = run(["oracle", "--a", "4", "--b", "-3", "--n", "3"], capsys)
    assert code == 0
    code, _, _ = run(["oracle", "--a", "2", "--b", "2", "--n", "3"], capsys)
    assert code == 2


def test_verify_paper(capsys):
    code, out, _ = run(["verify-paper"], capsys)
    assert code == 0
    assert "[ERRATUM] Klein (2,3),(3,5): N at level 3: expected 266, got 2646" in out
    assert "NP_6 consistent with 2646" in out
    assert "[PASS] circle (6,2): bounds 46352 <= NP_6 <= 46592" in out
    assert "221073919719792987930625" in out
    assert "[FAIL]" not in out


@pytest.mark.parametrize(
    "args",
    [
        ["compute", "circle", "--a", "6", "--b", "2", "--n", "6", "--json"],
        ["compute", "torus", *MATRIX_ARGS, "--force-unsafe", "--json"],
        ["cyclotomic", "--k", "3", "--m", "4", "--json"],
        ["verify-paper", "--json"],
    ],
)
def test_json_round_trip_is_byte_identical(args, capsys):
    _, out, _ = run(args, capsys)
    assert render_json(json.loads(out)) == out


def test_big_integers_are_strings(capsys):
    _, out, _ = run(["compute", "torus", *MATRIX_ARGS, "--force-unsafe", "--json"], capsys)

    def walk(v):
        if isinstance(v, dict):
            for w in v.values():
                walk(w)
        elif isinstance(v, list):
            for w in v:
                walk(w)
        else:
            assert not isinstance(v, (int, float)) or isinstance(v, bool)

    walk(json.loads(out))
    assert "e+" not in out


def test_config_files(tmp_path, capsys):
    toml = tmp_path / "job.toml"
    toml.write_text('space = "klein"\nf = [2, 3]\ng = "3,5"\nn = 6\noutput = "json"\n')
    code, out, _ = run(["compute", "--config", str(toml)], capsys)
    assert code == 0 and row(json.loads(out), 6)["NP"] == "10856400"
    js = tmp_path / "job.json"
    js.write_text(json.dumps({"space": "circle", "a": 6, "b": 2, "n": 2}))
    code, out, _ = run(["compute", "--config", str(js), "--n", "6"], capsys)
    assert code == 0 and "46368" in out
    js.write_text(json.dumps({"space": "circle", "bogus": 1}))
    code, _, err = run(["compute", "--config", str(js)], capsys)
    assert code == 1 and "bogus" in err


@pytest.mark.parametrize(
    "args,expected",
    [
        (["compute", "circle", "--a", "x"], 1),
        (["compute", "circle", "--a", "1", "--b", "2"], 1),
        (["compute", "circle", "--a", "1", "--b", "2", "--n", "0"], 1),
        (["compute", "torus", "--f", "[[1,2]]", "--g", "[[1]]", "--n", "2"], 1),
        (["compute", "torus", "--f", "[[1,0],[0,1]]", "--g", "not json", "--n", "2"], 1),
        (["frobnicate"], 1),
        (["compute", "circle", "--a", "3", "--b", "3", "--n", "2"], 0),
    ],
)
def test_exit_codes(args, expected, capsys):
    try:
        code = main(args)
    except SystemExit as exc:
        code = exc.code
    capsys.readouterr()
    assert code == expected


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "nielsen_iterates", "compute", "circle", "--a", "2", "--b", "0", "--n", "4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "16" in proc.stdout and "12" in proc.stdout
