import csv
import orjson
import pytest
from pathlib import Path

from pyorlicz.cli import build_parser, main

GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize(
    "table",
    [
        "classical",
        "classical2",
        "zygmund",
        "zygmund2",
        "ortho",
    ]
)
def test_table_golden(tmp_path, table):
    out = tmp_path / f"{table}.csv"
    assert main(["table", "--table", table, "--out", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / f"{table}.csv").read_bytes()


def test_check(tmp_path, capsys):
    args = ["check", "--cond", "inq-ass2", "--A", "power:2", "--B", "power:1.5", "--E", "power:1", "--n", "3"]
    assert main(args) == 0

    out = tmp_path / "check.json"
    assert main(args + ["--format", "json", "--out", str(out)]) == 0
    document = orjson.loads(out.read_bytes())
    assert document["schema"] == 1
    assert document["command"] == "check"
    assert document["condition"] == "inq-ass2"
    assert document["holds"] is True
    assert document["indeterminate"] is False


def test_check_fails(tmp_path):
    out = tmp_path / "check.csv"
    args = ["check", "--cond", "inq-ass2", "--A", "power:2", "--B", "power:4", "--E", "power:1", "--n", "3", "--out", str(out)]
    assert main(args) == 0

    rows = list(csv.reader(out.open(encoding="utf-8")))
    assert rows[0][:2] == ["condition", "holds"]
    assert rows[1][0] == "inq-ass2"
    assert rows[1][1] == "False"


def test_conjugate(tmp_path):
    out = tmp_path / "conjugate.csv"
    assert main(["conjugate", "--A", "power2", "--n", "3", "--points", "1,2", "--out", str(out)]) == 0

    rows = list(csv.reader(out.open(encoding="utf-8")))
    assert rows[0] == ["t", "A", "H", "A_n"]
    assert len(rows) == 3
    assert float(rows[1][0]) == 1.0
    assert float(rows[2][1]) == pytest.approx(4.0)


def test_aniso_monte_carlo(tmp_path):
    out = tmp_path / "aniso.csv"
    args = ["aniso", "--phi", "iso:power:1.5", "--n", "2", "--method", "monte_carlo", "--points", "1,4", "--out", str(out)]
    assert main(args) == 0

    rows = list(csv.reader(out.open(encoding="utf-8")))
    assert rows[0] == ["section", "t", "xi", "value", "stderr"]
    circ = [row for row in rows[1:] if row[0] == "circ_inverse"]
    assert [float(row[3]) for row in circ] == pytest.approx([1.0, 4.0**(2.0 / 3.0)], rel=1e-6)
    assert all(abs(float(row[4])) < 1e-9 for row in circ)
    assert len([row for row in rows[1:] if row[0] == "phi_n"]) == 2


def test_counterexample(tmp_path):
    out = tmp_path / "counter.csv"
    args = ["counterexample", "--dim", "1", "--kmax", "16", "--deltas", "0.01", "--lambdas", "1", "--out", str(out)]
    assert main(args) == 0

    rows = list(csv.reader(out.open(encoding="utf-8")))
    assert rows[0][0] == "section"
    assert {row[0] for row in rows[1:]} >= {"source", "decay", "trend", "verdict"}
    assert rows[-1][0] == "verdict"


def test_config_file(tmp_path):
    config = tmp_path / "run.json"
    out = tmp_path / "table.csv"
    config.write_text('{"command": "table", "table": "ortho"}', encoding="utf-8")
    assert main(["table", "--config", str(config), "--out", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / "ortho.csv").read_bytes()


@pytest.mark.parametrize(
    "args",
    [
        [],
        ["frobnicate"],
        ["check", "--bogus", "1"],
        ["check", "--cond", "holder"],
        ["check", "--cond", "inq-ass2", "--A", "power:2", "--B", "nonsense:1"],
        ["check", "--cond", "double-a", "--A", "power:2", "--B", "power:2"],
        ["table"],
        ["table", "--table", "sobolev"],
        ["experiment"],
        ["norm", "--A", "power:2", "--u", "gauss"],
    ]
)
def test_errors(args):
    assert main(args) == 1


def test_parser():
    args = build_parser().parse_args(["converge", "--A", "power2", "--u", "x1", "--lambdas", "0.5,1", "--kmax", "64"])
    assert args.command == "converge"
    assert args.lambda_grid == [0.5, 1.0]
    assert args.k_max == 64
    assert not hasattr(args, "seq")
