import json

from soqrs.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_so3_dump(capsys):
    code, out, _ = run(capsys, "build", "--so3", "--l", "1", "--q", "1")
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "so3"
    assert data["dim"] == 3
    diag_entries = [e for g in data["generators"] if g["i"] == 2
                    for e in g["entries"]]
    got = {(r, c): complex(re, im) for r, c, re, im in diag_entries}
    assert got == {(0, 0): -1j, (2, 2): 1j}


def test_build_determinism(tmp_path, capsys):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["build", "--degenerate", "--r", "3", "--s", "3", "--epsilon", "0",
            "--lambda-re", "1/2", "--cutoff", "4", "--q", "2"]
    assert main(args + ["--out", str(f1)]) == 0
    assert main(args + ["--out", str(f2)]) == 0
    capsys.readouterr()
    b1, b2 = f1.read_bytes(), f2.read_bytes()
    assert b1 == b2
    data = json.loads(b1)
    assert data["dim"] == 105  # blocks up to m+m' = 4


def test_verify_degenerate_passes(capsys):
    code, out, _ = run(capsys, "verify", "--degenerate", "--r", "3", "--s", "3",
                       "--epsilon", "1", "--lambda-re", "7/10", "--cutoff", "6")
    assert code == 0
    assert "PASS" in out and "FAIL" not in out


def test_verify_compact_suite(capsys):
    code, out, _ = run(capsys, "verify", "--compact-suite", "--q", "2")
    assert code == 0


def test_verify_corrupted_dump_fails(tmp_path, capsys):
    dump = tmp_path / "rep.json"
    assert main(["build", "--degenerate", "--r", "3", "--s", "3",
                 "--epsilon", "0", "--lambda-re", "1/2", "--cutoff", "6",
                 "--q", "2", "--out", str(dump)]) == 0
    capsys.readouterr()
    data = json.loads(dump.read_text())
    data["generators"][2]["entries"][0][2] += 0.1
    dump.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--dump", str(dump))
    assert code == 2
    assert "FAIL" in out


def test_classify_reducible_with_ladder(capsys):
    code, out, _ = run(capsys, "classify", "--r", "4", "--s", "4",
                       "--epsilon", "0", "--lambda-re", "2", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["irreducible"] is False
    assert len(data["constituents"]) == 3
    assert any("ladder" in n for n in data["notes"])


def test_classify_unclassified_attaches_scanner(capsys):
    code, out, _ = run(capsys, "classify", "--r", "3", "--s", "3",
                       "--epsilon", "1", "--lambda-re", "1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["unclassified_reducible"] is True
    assert "scanner" in data and data["scanner"]["n_components"] >= 1


def test_classify_requires_exact_lambda(capsys):
    code, _, err = run(capsys, "classify", "--r", "4", "--s", "4",
                       "--epsilon", "0", "--lambda-float", "0.7")
    assert code == 3
    assert "exact" in err


def test_classify_snap_lambda(capsys):
    code, out, _ = run(capsys, "classify", "--r", "4", "--s", "4",
                       "--epsilon", "0", "--lambda-float", "0.5",
                       "--snap-lambda", "100", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["config"]["lambda_re"] == "1/2"


def test_scan_grid(capsys):
    code, out, _ = run(capsys, "scan", "--r", "3", "--s", "4", "--epsilon", "0",
                       "--lambda-int-min", "-4", "--lambda-int-max", "8",
                       "--lambda-rationals", "1/3,7/2", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["disagreements"] == 0
    assert len(data["rows"]) == 15


def test_usage_error_exit_code(capsys):
    assert main(["build"]) == 3
    assert main(["nonsense"]) == 3
    code, _, _ = run(capsys, "classify", "--r", "2", "--s", "4",
                     "--epsilon", "0", "--lambda-re", "1")
    assert code == 3


def test_reports_embed_config(tmp_path, capsys):
    out_file = tmp_path / "report.json"
    assert main(["verify", "--so3", "--l", "2", "--q", "2",
                 "--out", str(out_file)]) == 0
    capsys.readouterr()
    data = json.loads(out_file.read_text())
    assert data["config"]["command"] == "verify"
    assert data["config"]["q"] == 2.0
    assert data["passed"] is True
