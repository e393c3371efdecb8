import json

import pytest

import storage
from main import main


def test_ca_distance(capsys):
    assert main(["ca-distance", "--L", "5"]) == 0
    (record,) = json.loads(capsys.readouterr().out)
    assert record["d_exhaustive"] == 11
    assert record["d_prime"] == 11


def test_ca_distance_refused_by_guard(mocker):
    mocker.patch("envs.CA_EXHAUSTIVE_MAX_L", 3)
    assert main(["ca-distance", "--L", "5"]) == 2


def test_ca_distance_forced_past_guard(mocker):
    mocker.patch("envs.CA_EXHAUSTIVE_MAX_L", 3)
    assert main(["--force", "ca-distance", "--L", "5"]) == 0


@pytest.mark.parametrize("L", ["4", "1"])
def test_ca_distance_rejects_bad_sizes(L):
    assert main(["ca-distance", "--L", L]) == 1


def test_ca_seed_weight_range(capsys):
    assert main(["ca-seed-weight", "--L", "3", "--L-max", "7"]) == 0
    records = json.loads(capsys.readouterr().out)
    assert [r["L"] for r in records] == [3, 5, 7]
    assert records[1]["d_prime"] == 11


def test_ca_scan_writes_csv(tmp_path):
    out = tmp_path / "points.csv"
    table = tmp_path / "table.csv"
    args = ["--out", str(out), "ca-scan", "--min", "5", "--max", "9", "--exhaustive-up-to", "7", "--ca-table", str(table)]
    assert main(args) == 0
    points = storage.read_points(out)
    assert [p.n for p in points] == [25, 49, 81]
    assert [p.d_is_exact for p in points] == [True, True, False]
    rows = storage.read_records(table)
    assert rows[0]["d_exhaustive"] == "11"
    assert rows[2]["d_exhaustive"] == ""


def test_sierpinski_levels(capsys):
    assert main(["sierpinski", "--p", "4", "--all"]) == 0
    records = json.loads(capsys.readouterr().out)
    assert [r["weight"] for r in records] == [1, 3, 9, 27, 81]


def test_surface_then_fact1(tmp_path):
    code_file = tmp_path / "toric2.json"
    assert main(["surface", "--kind", "toric", "--size", "2", "--save-code", str(code_file)]) == 0
    assert main(["fact1", "--code-file", str(code_file), "--max-region-size", "1"]) == 0


def test_surface_verified_distance(capsys):
    assert main(["surface", "--kind", "planar", "--size", "3", "--verify-distance"]) == 0
    (record,) = json.loads(capsys.readouterr().out)
    assert (record["n"], record["k"], record["d"]) == (13, 1, 3)


def test_entropy_of_region(tmp_path, capsys):
    code_file = tmp_path / "planar2.json"
    region_file = tmp_path / "region.json"
    region_file.write_text(json.dumps([[0, 0]]))
    assert main(["surface", "--kind", "planar", "--size", "2", "--save-code", str(code_file)]) == 0
    capsys.readouterr()
    assert main(["entropy", "--code-file", str(code_file), "--region-file", str(region_file)]) == 0
    (record,) = json.loads(capsys.readouterr().out)
    assert record["s_region"] == 1
    assert record["correctable"] is True


def test_partition_abc_separator(capsys):
    assert main(["partition-abc", "--side", "48", "--R", "12", "--w", "2"]) == 0
    (record,) = json.loads(capsys.readouterr().out)
    assert record["size_c"] == 144
    assert record["c_times_r2"] <= record["separator_bound"]


def test_partition_abc_rejects_narrow_blocks():
    assert main(["partition-abc", "--side", "8", "--R", "2", "--w", "1"]) == 1


def test_union_check(tmp_path, capsys):
    code_file = tmp_path / "planar5.json"
    pairs_file = tmp_path / "pairs.json"
    pairs_file.write_text(json.dumps([{"M1": [[0, 0]], "M2": [[8, 8]]}, {"M1": [[0, 0]], "M2": [[0, 0]]}]))
    assert main(["surface", "--kind", "planar", "--size", "5", "--save-code", str(code_file)]) == 0
    capsys.readouterr()
    assert main(["union-check", "--code-file", str(code_file), "--regions-file", str(pairs_file)]) == 0
    records = json.loads(capsys.readouterr().out)
    assert [r["checked"] for r in records] == [True, False]


def test_bounds_from_points_file(tmp_path, capsys):
    points = tmp_path / "points.json"
    assert main(["--out", str(points), "surface", "--kind", "toric", "--size", "3"]) == 0
    assert main(["bounds", "--in", str(points), "--which", "quantum"]) == 0
    (record,) = json.loads(capsys.readouterr().out)
    assert record["family"] == "toric"
    assert record["max_q_ratio"] == 1.0


def test_missing_code_file(tmp_path):
    assert main(["fact1", "--code-file", str(tmp_path / "missing.json"), "--max-region-size", "1"]) == 1


def test_classical_partition(capsys):
    assert main(["classical-partition", "--L", "5", "--b", "2"]) == 0
    (record,) = json.loads(capsys.readouterr().out)
    assert record["k"] <= record["size_a"]


def test_csv_on_stdout(capsys):
    assert main(["--format", "csv", "sierpinski", "--p", "1", "--all"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["p,weight,three_to_p,matches", "0,1,1,true", "1,3,3,true"]


def test_bounds_rejects_a_ca_table(tmp_path):
    table = tmp_path / "table.csv"
    assert main(["ca-scan", "--min", "5", "--max", "7", "--ca-table", str(table)]) == 0
    assert main(["bounds", "--in", str(table), "--which", "classical"]) == 1


def test_union_check_rejects_unnamed_regions(tmp_path):
    code_file = tmp_path / "planar3.json"
    pairs_file = tmp_path / "pairs.json"
    pairs_file.write_text(json.dumps([{"A": [[0, 0]], "B": [[4, 4]]}]))
    assert main(["surface", "--kind", "planar", "--size", "3", "--save-code", str(code_file)]) == 0
    assert main(["union-check", "--code-file", str(code_file), "--regions-file", str(pairs_file)]) == 1


def test_separator_entropy_on_torus(tmp_path, capsys):
    code_file = tmp_path / "toric4.json"
    separator = tmp_path / "c.json"
    assert main(["surface", "--kind", "toric", "--size", "4", "--save-code", str(code_file)]) == 0
    args = ["partition-abc", "--side", "8", "--R", "4", "--w", "1", "--periodic", "--save-separator", str(separator)]
    assert main(args) == 0
    capsys.readouterr()
    assert main(["entropy", "--code-file", str(code_file), "--region-file", str(separator)]) == 0
    (record,) = json.loads(capsys.readouterr().out)
    assert 2 <= record["s_region"] <= 8
    assert len(record["sites"]) == 16


def test_separator_on_another_lattice(tmp_path):
    code_file = tmp_path / "planar2.json"
    separator = tmp_path / "c.json"
    assert main(["surface", "--kind", "planar", "--size", "2", "--save-code", str(code_file)]) == 0
    assert main(["partition-abc", "--side", "8", "--R", "4", "--w", "1", "--save-separator", str(separator)]) == 0
    assert main(["entropy", "--code-file", str(code_file), "--region-file", str(separator)]) == 1
