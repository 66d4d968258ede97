import json
import subprocess
import sys

import pytest

from apollonian.cli import main

CLI = [sys.executable, "-m", "apollonian.cli"]


def run_cli(*args):
    return subprocess.run(CLI + list(args), capture_output=True, text=True)


def test_reduce_example(capsys):
    assert main(["reduce", "--quadruple", "15,2,2,3"]) == 0
    out = capsys.readouterr().out
    assert "-1,2,2,3" in out and "[1]" in out
    payload = json.loads(out)
    assert payload == {"root": "-1,2,2,3", "word": [1]}


def test_kappa_example(capsys):
    assert main(["kappa", "--root", "-1,2,2,3", "--X", "6"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["kappa"] == 3
    assert payload["N"] == 8


def test_b2s_example(capsys):
    assert main(["b2s", "--x", "20", "--q", "4", "--r", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["B"] == 5


def test_values_and_intersect(capsys):
    assert main(["values", "--quadruple", "2,-1,2,3", "--X", "11"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["values"] == [2, 3, 6, 11]
    assert main([
        "intersect", "--quadruple-a", "2,-1,2,3", "--quadruple-b", "3,-1,2,2",
        "--X", "11", "--quadrant", "full",
    ]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["intersection"] >= 1  # contains 6


def test_values_csv_format(capsys):
    assert main(["values", "--quadruple", "2,-1,2,3", "--X", "11", "--format", "csv"]) == 0
    assert capsys.readouterr().out.splitlines() == ["2", "3", "6", "11"]


def test_enumerate_csv(capsys):
    assert main(["enumerate", "--root", "-1,2,2,3", "--X", "6"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "curvature,parent_word_length,generator_index"
    assert len(lines) == 6  # five emissions below 6
    assert all(len(line.split(",")) == 3 for line in lines[1:])


def test_u0_and_spin_and_change_of_vars(capsys):
    assert main(["u0", "--form", "1,0,1", "--X", "10"]) == 0
    assert json.loads(capsys.readouterr().out)["U0"] == 4
    assert main(["spin-check", "--matrix", "1,0,-2,1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["preserves_disc_form"] is True
    assert payload["image"] == [[1, 0, 0], [-2, 1, 0], [4, -4, 1]]
    assert main(["change-of-vars", "--quadruple", "2,-1,2,3"]) == 0
    assert json.loads(capsys.readouterr().out)["ok"] is True


def test_sigma_p_and_singular_series(capsys):
    assert main([
        "sigma-p", "--quadruple-a", "2,-1,2,3", "--quadruple-b", "3,-1,2,2",
        "--p", "5", "--k", "2",
    ]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["sigma"] == "24/25" and payload["case"] == "generic"
    assert main([
        "singular-series", "--quadruple-a", "2,-1,2,3", "--quadruple-b", "3,-1,2,2",
        "--p-max", "20",
    ]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["within_ceiling"] is True


def test_delta_fit_cli(capsys):
    assert main(["delta-fit", "--root", "-1,2,2,3", "--X-list", "100,1000,10000"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert 1.25 <= float(payload["slope"]) <= 1.36


def test_render_svg(tmp_path, capsys):
    out = tmp_path / "packing.svg"
    assert main(["render", "--root", "-1,2,2,3", "--depth", "0", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.count("<circle") == 4
    assert main(["render", "--root", "-1,2,2,3", "--depth", "1"]) == 0
    assert capsys.readouterr().out.count("<circle") == 8


def test_exit_codes():
    usage = run_cli("kappa", "--root", "15,2,2,3", "--X", "100")
    assert usage.returncode == 2
    assert usage.stderr.startswith("error:usage:")
    budget = run_cli("b2s", "--x", "10000000", "--q", "4", "--r", "1", "--budget", "1")
    assert budget.returncode == 3
    assert budget.stderr.startswith("error:budget:")
    arith = run_cli("kappa", "--root", "-1,2,2,3", "--X", str(2**31 + 2))
    assert arith.returncode == 4
    assert arith.stderr.startswith("error:arithmetic:")
    unknown = run_cli("no-such-command")
    assert unknown.returncode == 2


def test_density_cli_round_trip(tmp_path):
    args = [
        "density", "--root", "-1,2,2,3", "--X", "100000", "--eta", "0.5",
        "--a-min", "50", "--a-max", "100",
    ]
    first = run_cli(*args)
    assert first.returncode == 0
    payload = json.loads(first.stdout)
    # regenerate from the embedded config: must reproduce byte-for-byte
    cfg = payload["config"]
    again = run_cli(
        "density", "--root", cfg["root"], "--X", str(cfg["X"]), "--eta", str(cfg["eta"]),
        "--a-min", str(cfg["a_range"][0]), "--a-max", str(cfg["a_range"][1]),
        "--a0-index", str(cfg["a0_index"]), "--quadrant", cfg["quadrant"],
    )
    assert again.stdout == first.stdout


def test_density_pairs_csv(tmp_path):
    csv_path = tmp_path / "pairs.csv"
    res = run_cli(
        "density", "--root", "-1,2,2,3", "--X", "100000", "--pairs-csv", str(csv_path),
    )
    assert res.returncode == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "a,a_prime,intersection"
    payload = json.loads(res.stdout)
    assert len(lines) - 1 == len(payload["pairwise_intersections"])


def test_threads_do_not_change_payloads():
    one = run_cli("kappa", "--root", "-1,2,2,3", "--X", "100000", "--threads", "1")
    eight = run_cli("kappa", "--root", "-1,2,2,3", "--X", "100000", "--threads", "8")
    assert one.returncode == eight.returncode == 0
    assert one.stdout == eight.stdout
