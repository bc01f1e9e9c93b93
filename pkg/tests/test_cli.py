import json
import subprocess
import sys

from flowcat.cli import main


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_exit_codes(data_dir, capsys):
    assert run(["check", data_dir / "shift_flow.json"], capsys)[0] == 0
    code, out, _ = run(["check", data_dir / "broken_mu_flow.json"], capsys)
    assert code == 1
    report = json.loads(out)
    assert report["exit_status"] == 1
    (v,) = report["results"]["violations"]
    assert v["law"].startswith("mu(1,1)")
    code, _, err = run(["check", data_dir / "malformed.json"], capsys)
    assert code == 2 and "line" in err


def test_check_missing_file(tmp_path, capsys):
    assert run(["check", tmp_path / "absent.json"], capsys)[0] == 2


def test_dist_examples(data_dir, capsys):
    code, out, _ = run(["dist", "hausdorff", data_dir / "hausdorff_singletons.json"], capsys)
    assert (code, out.strip()) == (0, "5.0")
    code, out, _ = run(["dist", "linf", data_dir / "linf_equal.json"], capsys)
    assert (code, out.strip()) == (0, "0.0")
    code, out, _ = run(["dist", "interleave", data_dir / "discrete_flow.json"], capsys)
    assert (code, out.strip()) == (0, "inf")
    code, out, _ = run(["dist", "dinf", data_dir / "segment_a.json", data_dir / "segment_b.json"], capsys)
    assert (code, out.strip()) == (0, "1.0")
    code, out, _ = run(["dist", "bottleneck", data_dir / "barcode_a.json", data_dir / "barcode_b.json"], capsys)
    assert (code, out.strip()) == (0, "2.0")


def test_dist_report_carries_witness(data_dir, tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["dist", "dinf", data_dir / "segment_a.json", data_dir / "segment_b.json", "--out", out], capsys)
    report = json.loads(out.read_text())
    assert code == 0 and report["results"]["value"] == "1.0"
    assert report["results"]["isomorphism"]
    assert set(report["inputs"]) == {str(data_dir / "segment_a.json"), str(data_dir / "segment_b.json")}


def test_size_error_exit_code(tmp_path, capsys):
    n = 14
    doc = {"vertices": list(range(n)), "simplices": [[i, i + 1] for i in range(n - 1)],
           "values": {str(i): 0 for i in range(n)}}
    path = tmp_path / "path.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(["dist", "dinf", path, path], capsys)
    assert code == 3 and "cap 12" in err


def test_laws_exit_codes(data_dir, capsys):
    assert run(["laws", "pseudometric", "--seed", 7, "--trials", 100], capsys)[0] == 0
    assert run(["laws", "functoriality", "--seed", 3, "--trials", 10], capsys)[0] == 0
    assert run(["laws", "nosuch", "--seed", 1], capsys)[0] == 2
    assert run(["laws", "stability"], capsys)[0] == 2


def test_broken_colax_fixture_names_the_pair(data_dir, capsys):
    code, out, _ = run(["laws", "stability", "--colax", data_dir / "broken_colax.json"], capsys)
    assert code == 1
    results = json.loads(out)["results"]
    pairs = {(v["a"], v["b"]) for v in results["trials"][0]["violations"]}
    assert pairs == {("0", "1"), ("1", "0")}


def test_reports_are_reproducible(tmp_path, capsys):
    texts = []
    out = tmp_path / "run.json"
    for _ in range(2):
        assert run(["laws", "stability", "--seed", 11, "--trials", 5, "--out", out], capsys)[0] == 0
        report = json.loads(out.read_text())
        report.pop("duration")
        texts.append(json.dumps(report, sort_keys=True))
    assert texts[0] == texts[1]


def test_jobs_do_not_change_the_report(tmp_path, capsys):
    reports = []
    for jobs in (1, 2):
        out = tmp_path / f"j{jobs}.json"
        run(["laws", "comparison", "--seed", 4, "--trials", 3, "--jobs", jobs, "--out", out], capsys)
        report = json.loads(out.read_text())
        reports.append(report["results"])
    assert reports[0] == reports[1]


def test_persist(data_dir, tmp_path, capsys):
    code, out, _ = run(["persist", data_dir / "circle.json"], capsys)
    assert code == 0
    assert out.strip().splitlines() == ["p,birth,death", "0,0,inf", "1,2,inf"]
    csv_path = tmp_path / "b.csv"
    run(["persist", data_dir / "square.off", "--csv", csv_path], capsys)
    assert csv_path.read_text().startswith("p,birth,death")
    code, _, _ = run(["persist", data_dir / "square.off", "--against", data_dir / "square.off"], capsys)
    assert code == 0


def test_module_entry_point(data_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "flowcat", "dist", "linf", str(data_dir / "linf_equal.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "0.0"
