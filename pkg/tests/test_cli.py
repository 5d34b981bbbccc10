import csv
import io
import json

import pytest

from qosroute.cli import main
from qosroute.report import HEADERS
from qosroute.topology import dump_topology, generate_random_topology


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), stdout=buf)
    return code, buf.getvalue()


def tables(text):
    """Parse text output into {generation: [(label, hops, fitness, prob)]}."""
    out, current = {}, None
    for line in text.splitlines():
        if line.startswith("GENERATION "):
            current = out.setdefault(int(line.split()[1]), [])
        elif current is not None and line.startswith("C") and not line.startswith(HEADERS[0]):
            label, hops, fit, prob = line.split()
            current.append((label, int(hops), float(fit), float(prob)))
        elif not line.strip():
            current = None
    return out


def test_default_route():
    code, text = run("route")
    assert code == 0
    t = tables(text)
    assert sorted(t) == [1, 2, 3, 4, 5]
    assert all(len(rows) == 5 for rows in t.values())
    assert text.count("  ".join(HEADERS[:2])) == 5
    assert text.splitlines()[-1].startswith("selected: ")
    assert "hops=3" in text.splitlines()[-1]


def test_one_generation():
    code, text = run("route", "--generations", "1")
    assert code == 0
    assert sorted(tables(text)) == [1]


def test_printed_columns_are_normalised():
    _, text = run("route", "--seed", "11")
    for rows in tables(text).values():
        fit = [r[2] for r in rows]
        non_elite = [r[3] for r in rows[1:]]
        if any(fit):
            assert sum(fit) == pytest.approx(1.0, abs=5 * 5e-5)
        if any(non_elite):
            assert sum(non_elite) == pytest.approx(1.0, abs=4 * 5e-5)


def test_csv_columns_exact():
    code, text = run("route", "--format", "csv", "--seed", "4")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text.split("selected:")[0])))
    for g in {r["generation"] for r in rows}:
        gen = [r for r in rows if r["generation"] == g]
        assert sum(float(r["fitness"]) for r in gen) == pytest.approx(1.0, abs=1e-9)
        assert sum(float(r["probability"]) for r in gen if r["elite"] == "0") == pytest.approx(1.0, abs=1e-9)


def test_json_embeds_trace():
    code, text = run("route", "--format", "json", "--oracle-check")
    doc = json.loads(text)
    assert code == 0
    assert len(doc["trace"]) == 5
    assert doc["agrees"] is True
    assert doc["route"]["path"] == doc["oracle"]["path"]


def test_oracle_check_line():
    _, text = run("route", "--oracle-check")
    assert "agree=yes" in text


def test_no_route_exit_code():
    code, text = run("route", "--required-bw", "2e7")
    assert code == 2
    assert "no route" in text


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["route", "--nonsense"])
    assert info.value.code == 1


def test_missing_file_exit_code(tmp_path):
    code, _ = run("route", "--topology", str(tmp_path / "absent.topo"))
    assert code == 1


def test_parse_error_exit_code(tmp_path, capsys):
    f = tmp_path / "bad.topo"
    f.write_text("nodes 2\nnode 0 1 0 0\nnode 1 1 0 0\nlinks 1\nlink 1 1 5\n")
    code, _ = run("route", "--topology", str(f))
    assert code == 1
    assert "line 5" in capsys.readouterr().err


def test_topology_file_and_random(tmp_path):
    f = tmp_path / "t.topo"
    f.write_text(dump_topology(generate_random_topology(8, 0.5, 3)))
    code, text = run("route", "--topology", str(f), "--delay-max", "1", "--jitter-max", "100", "--loss-max", "1")
    assert code in (0, 2)
    code2, text2 = run("route", "--random", "8", "--density", "0.5", "--topology-seed", "3",
                       "--delay-max", "1", "--jitter-max", "100", "--loss-max", "1")
    assert (code, text) == (code2, text2)


def test_paths_dump():
    code, text = run("paths")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "len=3: 0 1 4 9"
    lengths = [int(l.split(":")[0][4:]) for l in lines]
    assert lengths == sorted(lengths)


def test_generate_round_trips():
    code, text = run("generate", "--random", "6", "--density", "0.5", "--seed", "9")
    assert code == 0
    assert text == dump_topology(generate_random_topology(6, 0.5, 9))


def test_sweep_single_seed():
    code, text = run("sweep", "--seeds", "1..1")
    assert code == 0
    assert "runs=1" in text


def test_sweep_single_path_topology(tmp_path):
    f = tmp_path / "line.topo"
    f.write_text("nodes 3\nnode 0 1e7 0 0\nnode 1 1e7 0 0\nnode 2 1e7 0 0\nlinks 2\nlink 0 1 9e6\nlink 1 2 9e6\n")
    code, text = run("sweep", "--topology", str(f), "--seeds", "1..10")
    assert "oracle agreement: 1.0000 over 10" in text


def test_sweep_csv_and_jobs(tmp_path):
    out = tmp_path / "sweep.csv"
    code, text = run("sweep", "--random", "10", "--random-endpoints", "--seeds", "1..20", "--csv", str(out), "--jobs", "2")
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert [int(r["seed"]) for r in rows] == list(range(1, 21))
    _, serial = run("sweep", "--random", "10", "--random-endpoints", "--seeds", "1..20", "--format", "csv")
    assert serial == out.read_text()


def test_kb_hit_returns_same_route(tmp_path):
    kb = str(tmp_path / "kb.txt")
    code1, first = run("route", "--kb", kb, "--seed", "3")
    code2, second = run("route", "--kb", kb, "--seed", "8")
    assert code1 == code2 == 0
    assert "knowledge base hit" in second
    route = lambda text: [l for l in text.splitlines() if l.startswith("selected:")][0].split("probability")[0]
    assert route(first).split("path")[1] == route(second).split("path")[1]
