import json

import pytest

from quasiqg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_regular_decompose(tmp_path, capsys):
    f = tmp_path / "ht.json"
    assert run(capsys, "build-module", "--kind", "regular", "--params", "1,1", "--out", str(f))[0] == 0
    code, out, _ = run(capsys, "decompose", str(f))
    assert code == 0 and out.strip() == "V(2,0) + V(2,1) + V(2,2)"


def test_tensor_and_witness(tmp_path, capsys):
    a, b, t, w = (tmp_path / x for x in ("a.json", "b.json", "t.json", "w.json"))
    run(capsys, "build-module", "--kind", "syzygy", "--params", "1,1,1", "--out", str(a))
    run(capsys, "build-module", "--kind", "syzygy", "--params=-1,1,1", "--out", str(b))
    assert run(capsys, "tensor", str(a), str(b), "--out", str(t))[0] == 0
    code, out, _ = run(capsys, "decompose", str(t), "--witness", str(w))
    assert code == 0 and "V1" in out and "P" in out
    assert json.loads(w.read_text())["map"]


def test_green_commands(capsys):
    assert run(capsys, "green", "reduce", "z+*z-")[1].strip() == "2*y^3 + 4*y^2 - 2*y - 3"
    assert run(capsys, "--n", "5", "green", "reduce", "f1*f2")[1].strip() == "0"
    assert run(capsys, "green", "mul", "x1", "x1")[1].strip() == "y*x2 + x2"


def test_green_parse_error(capsys):
    code, _, err = run(capsys, "green", "reduce", "y + (2")
    assert code == 3 and "position 6" in err and "^" in err


def test_check_presentations(tmp_path, capsys):
    audit = tmp_path / "audit.txt"
    code, out, _ = run(capsys, "green", "check-presentations", "--audit", str(audit))
    assert code == 0 and "stable: ok" in out
    assert "[green-quasi]" in audit.read_text()


def test_export_import(tmp_path, capsys):
    m, g = tmp_path / "m.json", tmp_path / "g.json"
    assert run(capsys, "export", "--label", "Omega^-2(V2)", "--out", str(m))[0] == 0
    code, out, _ = run(capsys, "import", str(m))
    assert code == 0 and "dim=8" in out and "Omega^-2(V2)" in out
    run(capsys, "export", "--green", "3y*z+ - x1", "--out", str(g))
    assert run(capsys, "import", str(g))[1].strip() == "3*y*z+ - x1"


def test_malformed_file(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"n": 3,\n "dim": }')
    code, _, err = run(capsys, "import", str(f))
    assert code == 3 and "bad.json:2:" in err


def test_invalid_module_file(tmp_path, capsys):
    f = tmp_path / "m.json"
    run(capsys, "build-module", "--kind", "simple", "--params", "2", "--out", str(f))
    data = json.loads(f.read_text())
    data["F"][0][1] = ["7/1"] + ["0/1"] * 5
    f.write_text(json.dumps(data))
    code, _, err = run(capsys, "decompose", str(f))
    assert code == 3 and "violates" in err


def test_verify_rejects_even_n(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--n", "4"])
    assert info.value.code == 3


def test_verify_report(tmp_path, capsys):
    r = tmp_path / "r.jsonl"
    code, _, err = run(capsys, "verify", "--suite", "stable", "--n", "3", "--seed", "0xC0FFEE", "--report", str(r),
                       "--quiet")
    assert code == 0 and "0 fail" in err
    lines = r.read_text().splitlines()
    assert json.loads(lines[-1])["summary"]["fail"] == 0


def test_verify_fault_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "modules", "--fault", "corrupt-simple", "--quiet")
    assert code == 1 and '"counterexample"' in out


def test_bad_params(capsys):
    assert run(capsys, "build-module", "--kind", "proj", "--params", "1,2")[0] == 3
    assert run(capsys, "build-module", "--kind", "proj", "--params", "9")[0] == 3
