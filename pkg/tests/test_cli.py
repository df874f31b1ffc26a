import json
import math
import subprocess
import sys

import pytest

from fmseries.cli import RunConfig, main
from fmseries.errors import UsageError
from fmseries.scalars import RATIONAL


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_geometric_series(capsys):
    code, out, _ = run(capsys, "taylor", "1/(1-x1)", "0", "--order", "5")
    assert code == 0
    res = json.loads(out)
    assert [t["coeffs"] for t in res["series"]["terms"]] == [["1"]] * 6
    assert res["deriv1"] == [str(math.factorial(n)) for n in range(6)]


def test_mixed_partial(capsys):
    code, out, _ = run(capsys, "taylor", "x1*x2", "0,0", "--order", "2")
    assert code == 0
    table = {tuple(r["alpha"]): r["value"] for r in json.loads(out)["partials"]}
    assert table[(1, 1)] == "1"
    assert table[(2, 0)] == table[(0, 2)] == table[(1, 0)] == "0"
    assert len(table) == 6


def test_default_point_is_origin(capsys):
    _, a, _ = run(capsys, "taylor", "x1*x2 + x2^2", "--order", "2")
    _, b, _ = run(capsys, "taylor", "x1*x2 + x2^2", "0,0", "--order", "2")
    assert a == b


@pytest.mark.parametrize("argv", [
    ["taylor", "x1 +* 2"],
    ["taylor", "x1 + ("],
    ["taylor", "x1", "0", "--order", "-1"],
    ["taylor", "x1", "0", "--field", "padic:6"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_domain_error(capsys):
    code, _, err = run(capsys, "taylor", "log(x1)", "0", "--field", "real")
    assert code == 3 and err


def test_padic_demo_examples(capsys):
    code, out, _ = run(capsys, "padic-demo", "-p", "5", "-a", "1", "-b", "3")
    res = json.loads(out)
    assert code == 0 and res["quotients"] == [1, 0] and res["passed"]
    code, out, _ = run(capsys, "padic-demo", "-p", "2", "-a", "2", "-b", "2")
    assert code == 0 and json.loads(out)["quotients"] == [0, 0]


def test_padic_demo_precision_guard(capsys):
    code, _, err = run(capsys, "padic-demo", "-p", "5", "-a", "2", "-b", "3", "--precision", "3")
    assert code == 3 and err


def test_padic_demo_prime_from_field(capsys):
    code, out, _ = run(capsys, "padic-demo", "--field", "padic:7", "-a", "3", "-b", "1")
    res = json.loads(out)
    assert code == 0 and res["prime"] == 7 and res["quotients"] == [0, 1]


def test_verify_partitions(capsys):
    code, out, _ = run(capsys, "verify", "partitions")
    res = json.loads(out)
    assert code == 0 and res["failed"] == 0 and res["passed"] == res["total"] > 0


def test_verify_compose_seed_42(capsys):
    code, out, _ = run(capsys, "verify", "compose", "--seed", "42")
    res = json.loads(out)
    assert code == 0 and res["passed"] == res["total"] == 100


def test_verify_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "nonsense")
    assert code == 2 and "nonsense" in err


def test_verify_per_case_lines(capsys):
    code, out, _ = run(capsys, "verify", "partitions", "--cases")
    lines = [json.loads(s) for s in out.splitlines()]
    assert code == 0
    assert lines[-1]["total"] == len(lines) - 1
    assert all(c["passed"] for c in lines[:-1])


def test_deterministic_bytes(capsys):
    outs = {run(capsys, "verify", "rebase", "--seed", "7")[1] for _ in range(2)}
    assert len(outs) == 1
    outs = {run(capsys, "taylor", "exp(x1)*x2", "0.5,1", "--field", "real")[1] for _ in range(2)}
    assert len(outs) == 1


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "taylor", "x1^2", "1", "--order", "2", "--output", str(target))
    assert code == 0 and out == ""
    res = json.loads(target.read_text())
    assert res["deriv1"] == ["1", "2", "2"]


def test_csv_and_pretty(capsys):
    _, out, _ = run(capsys, "taylor", "x1*x2", "0,0", "--order", "2", "--format", "csv")
    rows = out.strip().splitlines()
    assert rows[0] == "alpha,value" and "1 1,1" in rows
    _, out, _ = run(capsys, "padic-demo", "-p", "5", "-a", "1", "-b", "3", "--format", "pretty")
    assert "ok" in out
    _, out, _ = run(capsys, "verify", "partitions", "--format", "csv")
    assert out.splitlines()[0].split(",")


def test_step_ladder(capsys):
    code, out, _ = run(capsys, "taylor", "exp(x1)", "0.3", "--field", "real", "--order", "2",
                       "--steps", "1e-1,1e-2,1e-3")
    lad = json.loads(out)["ladders"][0]
    assert code == 0 and len(lad["rows"]) == 3
    assert abs(lad["order"] - 2.0) < 0.3
    code, _, _ = run(capsys, "taylor", "x1", "0", "--steps", "0.1", "--field", "padic:5")
    assert code == 2


def test_padic_field_literals(capsys):
    code, out, _ = run(capsys, "taylor", "1/(1-x1)", "0", "--order", "3", "--field", "padic:5:8")
    assert code == 0
    assert json.loads(out)["deriv1"][3] == "5:0:1,1,0,0,0,0,0,0"


def test_runconfig_rejects_negative_order():
    with pytest.raises(UsageError):
        RunConfig("taylor", RATIONAL, -1, 32, (), "json", 42)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fmseries", "padic-demo", "-p", "5", "-a", "1", "-b", "3"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["quotients"] == [1, 0]
