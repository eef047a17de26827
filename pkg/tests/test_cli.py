import csv
import io
import json

import pytest

from hyperlearn.bench import COLUMNS, bench, expand, parse_sweep, sp_bound, write_csv
from hyperlearn.cli import main
from hyperlearn.hypergraph import load


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


@pytest.fixture
def target(tmp_path, capsys):
    path = tmp_path / "t.json"
    assert run(capsys, "gen", "--m", "8", "--seed", "2", "--out", str(path))[0] == 0
    return path


def test_gen_and_classify(target, capsys):
    code, out = run(capsys, "classify", str(target))
    report = json.loads(out.out)
    assert code == 0 and report["isOrderly"] and report["claim7"]


@pytest.mark.parametrize("mode", ["online", "offline", "dist2"])
def test_learn_exact(target, capsys, tmp_path, mode):
    log = tmp_path / "log.jsonl"
    learned = tmp_path / "learned.json"
    code, out = run(capsys, "--json-logs", str(log), "learn", str(target), "--mode", mode, "--order", "random:3", "--out", str(learned))
    summary = json.loads(out.out)
    assert code == 0 and summary["equal"] and summary["queries"] > 0
    assert load(learned) == load(target)
    code, out = run(capsys, "verify", str(target), "--replay", str(log))
    assert code == 0 and json.loads(out.out)["mismatches"] == 0
    code, _ = run(capsys, "verify", str(target), str(learned), "--equal")
    assert code == 0


def test_worst_prefix_order(target, capsys):
    code, out = run(capsys, "learn", str(target), "--mode", "online", "--order", "worst-prefix:6")
    assert code == 0 and json.loads(out.out)["equal"]


def test_replay_mismatch(tmp_path, target, capsys):
    log = tmp_path / "log.jsonl"
    run(capsys, "learn", str(target), "--json-logs", str(log))
    lines = log.read_text().splitlines()
    rec = json.loads(lines[0])
    rec["answer"] = 42
    log.write_text("\n".join([json.dumps(rec)] + lines[1:]) + "\n")
    code, _ = run(capsys, "verify", str(target), "--replay", str(log))
    assert code == 3


def test_adversary_learn(capsys):
    code, out = run(capsys, "learn", "--oracle", "adversary", "--delta", "3", "--k", "2", "--N", "6")
    assert code == 0 and json.loads(out.out)["equal"]
    code, out = run(capsys, "learn", "--oracle", "bounded-adversary", "--mode", "dist2", "--k", "2", "--N", "4", "--d", "2")
    assert code == 0 and json.loads(out.out)["equal"]


def test_exit_codes(tmp_path, capsys):
    pn = tmp_path / "pn.json"
    run(capsys, "gen", "--family", "pn", "--n", "8", "--out", str(pn))
    assert run(capsys, "learn", str(pn), "--mode", "dist1")[0] == 3
    assert run(capsys, "learn")[0] == 2
    assert run(capsys, "learn", str(pn), "--order", "sideways")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2


def test_budget_exit_code(tmp_path, capsys, monkeypatch):
    from hyperlearn import offline

    monkeypatch.setattr(offline, "BUDGET_FACTOR", 0)
    pn = tmp_path / "pn.json"
    run(capsys, "gen", "--family", "pn", "--n", "8", "--out", str(pn))
    assert run(capsys, "learn", str(pn), "--mode", "dist2")[0] == 4


def test_game(capsys):
    code, out = run(capsys, "game", "--t", "4", "--whiskers", "--min", "greedy", "--exact")
    data = json.loads(out.out)
    assert code == 0 and data["rounds"] >= data["path_depth"]


def test_gen_staircase_tree(tmp_path, capsys):
    path = tmp_path / "tree.json"
    run(capsys, "gen", "--family", "staircase", "--t", "5", "--out", str(path))
    code, out = run(capsys, "game", str(path), "--max", "largest")
    assert code == 0


def test_isomorphic(target, tmp_path, capsys):
    other = tmp_path / "o.json"
    run(capsys, "gen", "--m", "8", "--seed", "3", "--out", str(other))
    assert run(capsys, "verify", str(target), str(target), "--isomorphic")[0] == 0
    assert run(capsys, "verify", str(target), str(other), "--equal")[0] == 1


def test_parse_sweep():
    sweep = parse_sweep("delta=2..4 m=5..40 learner=online,dist2")
    assert sweep["delta"] == [2, 3, 4]
    assert sweep["m"] == [5, 10, 20, 40]
    assert sweep["learner"] == ["online", "dist2"]
    with pytest.raises(ValueError):
        parse_sweep("delta")


def test_bench_rows_deterministic():
    sweep = "family=random delta=3 m=5..20 seeds=2 learner=offline,dist2"
    rows = bench(sweep)
    again = bench(sweep)
    strip = lambda rs: [{k: v for k, v in r.items() if k != "wall_ms"} for r in rs]
    assert strip(rows) == strip(again)
    assert len(rows) == len(expand(parse_sweep(sweep)))
    assert all(not r["error"] for r in rows)
    for r in rows:
        bound = sp_bound(r["n"], r["m"], max(r["delta"], 2)) if r["learner"] == "offline" else r["m"] * r["n"]
        assert r["bound"] == bound


def test_bench_records_failures():
    rows = bench("family=pn n=8 seeds=1 learner=dist1,dist2")
    assert rows[0]["error"].startswith("InconsistentOracleError")
    assert not rows[1]["error"]


def test_bench_csv(capsys, tmp_path):
    path = tmp_path / "out.csv"
    assert main(["bench", "--sweep", "family=random", "m=5..10", "seeds=1", "--out", str(path)]) == 0
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == COLUMNS and len(rows) == 2
    buf = io.StringIO()
    write_csv(bench("family=random m=5 seeds=1"), buf)
    assert buf.getvalue().startswith(",".join(COLUMNS))


def test_bench_workers_match_serial():
    sweep = "family=random delta=3 m=5..10 seeds=2"
    serial = bench(sweep)
    pooled = bench(sweep, workers=2)
    assert [r["queries"] for r in serial] == [r["queries"] for r in pooled]
