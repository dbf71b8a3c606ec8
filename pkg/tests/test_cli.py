import json
import math
from pathlib import Path

import pytest

from percolative.cli import load_record, dump_record, main

ROOT = Path(__file__).resolve().parents[1]


def run(tmp_path, *args, name="out.json"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def strip(rec):
    rec = dict(rec)
    rec.pop("runtime")
    return rec


def test_gen_graph_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    code, rec = run(tmp_path, "gen-graph", "--parity", "inv", "--d", "3", "--n", "100",
                    "--seed", "7", "--file", str(a))
    assert code == 0
    assert set(rec["tree_like_fraction"]) == {"1", "2", "3", "4"}
    main(["gen-graph", "--parity", "inv", "--d", "3", "--n", "100", "--seed", "7",
          "--file", str(b), "--out", str(tmp_path / "x.json")])
    assert a.read_bytes() == b.read_bytes()


def test_exit_codes(tmp_path, capsys):
    assert main(["gen-graph", "--parity", "inv", "--n", "101", "--seed", "1",
                 "--file", str(tmp_path / "g.txt")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["hperc", "--bogus"])
    assert exc.value.code == 2
    assert main(["gen-graph", "--parity", "inv", "--d", "3", "--n", "2", "--seed", "1",
                 "--file", str(tmp_path / "g.txt")]) == 3
    g = tmp_path / "big.txt"
    main(["gen-graph", "--n", "40", "--seed", "1", "--file", str(g), "--out",
          str(tmp_path / "y.json")])
    assert main(["entropy", "--graph", str(g), "--model", "ising", "--beta", "0.1",
                 "--mode", "exact", "--out", str(tmp_path / "e.json")]) == 4
    assert main(["ssm", "--model", "ising", "--beta", "0.1", "--r-max", "4",
                 "--strategy", "exhaustive", "--budget", "1000"]) == 4
    assert main(["hperc", "--model", "ising"]) == 2            # missing beta
    bad = tmp_path / "bad.ini"
    bad.write_text("[model]\nmodel = ising\nbeta = 0.1\ntemperature = 3\n")
    assert main(["thresholds", "--config", str(bad)]) == 2
    assert main(["entropy", "--graph", str(tmp_path / "missing.txt"), "--model", "ising",
                 "--beta", "0.1"]) == 2


def test_entropy_exact_k2(tmp_path):
    g = tmp_path / "k2.txt"
    g.write_text("inv 1 2\n1 0\n")
    code, rec = run(tmp_path, "entropy", "--graph", str(g), "--parity", "inv", "--d", "1",
                    "--model", "hardcore", "--lambda", "1")
    assert code == 0
    assert rec["exact"]["value"] == pytest.approx(math.log(3) / 2, abs=1e-12)
    assert rec["exact"]["identity_error"] < 1e-12
    code, bits = run(tmp_path, "entropy", "--graph", str(g), "--parity", "inv", "--d", "1",
                     "--model", "hardcore", "--lambda", "1", "--units", "bits", name="b.json")
    assert bits["exact"]["value"] == pytest.approx(math.log2(3) / 2, abs=1e-12)


def test_entropy_exact_and_truncated_agree(tmp_path):
    g = tmp_path / "g8.txt"
    main(["gen-graph", "--n", "8", "--seed", "3", "--file", str(g), "--out",
          str(tmp_path / "y.json")])
    code, rec = run(tmp_path, "entropy", "--graph", str(g), "--model", "ising", "--beta",
                    "0.4", "--mode", "both", "--radii", "4", "--orderings", "300")
    assert code == 0
    exact, trunc = rec["series"][0], rec["series"][1]
    assert abs(exact["value"] - trunc["value"]) <= 3 * trunc["stderr"] + 1e-12


def test_ising_zero_everywhere(tmp_path):
    code, rec = run(tmp_path, "hperc", "--model", "ising", "--beta", "0", "--radii", "1,3",
                    "--samples", "600")
    assert code == 0
    for entry in rec["boundaries"]:
        for key in ("free", "extremal:0"):
            assert entry[key]["value"] == math.log(2) and entry[key]["stderr"] == 0
    code, rec = run(tmp_path, "ssm", "--model", "ising", "--beta", "0", "--r-max", "3",
                    name="s.json")
    assert all(row["value"] == 0 for row in rec["series"]) and rec["decay_rate"] is None
    code, rec = run(tmp_path, "converge", "--model", "ising", "--beta", "0", "--sizes", "6,8",
                    "--hperc-radius", "2", "--samples", "500", name="c.json")
    assert all(s["gap"] < 1e-12 for s in rec["sizes"])


def test_record_round_trip_and_csv(tmp_path):
    out, csv_path = tmp_path / "r.json", tmp_path / "r.csv"
    assert main(["hperc", "--model", "potts", "--beta", "0.3", "--q", "3", "--radii", "2",
                 "--samples", "800", "--seed", "4", "--out", str(out),
                 "--csv", str(csv_path)]) == 0
    rec = load_record(out)
    assert dump_record(rec) == out.read_text()
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "n,r,value,stderr,samples,seed"
    assert len(lines) == 2
    assert all(isinstance(rec["boundaries"][0][k]["seed"], int) for k in ("free", "extremal:0"))


def test_thresholds_and_example_config(tmp_path):
    code, rec = run(tmp_path, "thresholds", "--d", "3", "--model", "ising", "--beta", "0.2")
    assert rec["hardcore_threshold"] == 4.0 and rec["coloring_threshold"] == 5
    assert rec["dobrushin_alpha"] == pytest.approx(3 * math.tanh(0.2), abs=1e-6)
    cfg = ROOT / "configs" / "example.ini"
    code, rec = run(tmp_path, "ssm", "--config", str(cfg), "--r-max", "3", name="cfg.json")
    assert code == 0 and rec["config"]["beta"] == "0.2" and rec["config"]["r_max"] == 3
