import subprocess
import sys

import pytest

from cubic_persistency.cli import main
from cubic_persistency.instance import dumps_instance, read_instance

from support import repulsive_triangle


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.ccc"
    path.write_text(dumps_instance(repulsive_triangle()))
    return path


def test_reduce(example_file, tmp_path, capsys):
    out = tmp_path / "log"
    reduced = tmp_path / "red.ccc"
    assert main(["reduce", str(example_file), "--out", str(out), "--reduced", str(reduced),
                 "--no-timing"]) == 0
    assert out.read_text() == "triplet_cut 0,1,2 0 1.0\nstats edges 0/3 triples 1/1 runtime_ns 0\n"
    red = read_instance(reduced)
    assert red == repulsive_triangle()
    assert reduced.read_text().startswith("# vertex 0: 0\n")


def test_reduce_condition_subset(example_file, capsys):
    assert main(["reduce", str(example_file), "--conditions", "edge_cut", "--no-timing"]) == 0
    assert capsys.readouterr().out == "stats edges 0/3 triples 0/1 runtime_ns 0\n"


def test_exact(example_file, capsys):
    assert main(["exact", str(example_file)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "-2"
    assert sum(int(l.split()[3]) for l in lines[1:]) == 1


def test_convert_multicut(example_file, capsys):
    assert main(["convert-multicut", str(example_file)]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "C -1.0"


def test_generate_and_reduce(tmp_path):
    inst = tmp_path / "g.ccc"
    side = tmp_path / "g.part"
    assert main(["generate", "partition", "--n", "1", "--seed", "3", "--out", str(inst),
                 "--sidecar", str(side)]) == 0
    assert read_instance(inst).vertex_count == 8
    assert len(side.read_text().splitlines()) == 8
    geo = tmp_path / "geo.ccc"
    assert main(["generate", "geometric", "--m", "1", "--k", "inf", "--out", str(geo)]) == 0
    assert read_instance(geo).vertex_count == 9


def test_experiment(tmp_path):
    out = tmp_path / "a.csv"
    assert main(["experiment", "partition", "--alpha-list", "0,0.5", "--reps", "2",
                 "--n", "1", "--no-timing", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("alpha,medianEliminatedVariables,") and len(lines) == 3


def test_bad_input_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.ccc"
    bad.write_text("CCC 3\ne 0 1 1\nt 0 1 2 1\n")
    assert main(["reduce", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err
    assert main(["exact", str(tmp_path / "missing.ccc")]) == 2


def test_too_large_for_exact(tmp_path, capsys):
    path = tmp_path / "big.ccc"
    path.write_text("CCC 20\n")
    assert main(["exact", str(path)]) == 2


def test_unknown_condition_is_usage_error(example_file):
    with pytest.raises(SystemExit) as err:
        main(["reduce", str(example_file), "--conditions", "magic"])
    assert err.value.code == 2


def test_module_entry_point(example_file):
    res = subprocess.run([sys.executable, "-m", "cubic_persistency", "exact", str(example_file)],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("-2\n")
