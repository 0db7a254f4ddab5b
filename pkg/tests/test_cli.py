import json
import subprocess
import sys

import pytest

from bellmat.cli import main
from bellmat.linalg import Operator
from bellmat.ncalg import RelationSet
from bellmat.scalar import ONE


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_emit_bell_text_factors_root_two(capsys):
    code, out, _ = run(["emit-bell", "--kind", "plain", "--n", "2", "--format", "text"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "1/√2 ×"
    assert [row.split() for row in lines[1:]] == [
        ["1", "0", "0", "1"],
        ["0", "1", "1", "0"],
        ["0", "-1", "1", "0"],
        ["-1", "0", "0", "1"],
    ]


def test_emit_bell_json_round_trips(capsys):
    from bellmat.bell import BellFamily

    code, out, _ = run(["emit-bell", "--kind", "jj", "--j", "3/2", "--phases", "sym"], capsys)
    assert code == 0
    assert Operator.from_json(json.loads(out)) == BellFamily.jj("3/2").B


def test_emit_bell_numeric_phases(capsys):
    code, out, _ = run(["emit-bell", "--kind", "jj", "--j", "3/2", "--phases", "0.3,0.7"], capsys)
    assert code == 0
    entry = json.loads(out)["entries"][0]
    assert set(entry["scalar"]) == {"re", "im"}


def test_unsupported_kind_exit_code(capsys):
    code, _, err = run(["emit-bell", "--kind", "j1j2", "--j", "1/2"], capsys)
    assert code == 3 and "unsupported" in err


def test_usage_errors(capsys):
    assert run(["verify", "braid", "--bogus"], capsys)[0] == 2
    assert run(["emit-bell", "--kind", "jj", "--phases", "a,b"], capsys)[0] == 2
    assert run(["emit-ghz", "--n", "2", "--k", "9"], capsys)[0] == 2


def test_emit_ghz(capsys):
    code, out, _ = run(["emit-ghz", "--n", "4", "--k", "7"], capsys)
    assert code == 0
    data = json.loads(out)
    assert [a["index"] for a in data["amplitudes"]] == [7, 8]


def test_emit_diag(capsys):
    code, out, _ = run(["emit-diag", "--j", "1/2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"N", "D", "diagonal"}
    diag = Operator.from_json(data["diagonal"])
    assert diag.is_diagonal()


def test_verify_all_passes_and_is_long(capsys):
    code, out, _ = run(["verify", "all", "--j", "1/2", "--phases", "sym", "--format", "text"], capsys)
    assert code == 0
    assert sum(line.startswith("PASS") for line in out.splitlines()) >= 12


def test_epsilon_variant_fails(capsys):
    code, out, _ = run(["verify", "braid", "--variant", "epsilon-bell", "--n", "2"], capsys)
    assert code == 1
    rep = json.loads(out.splitlines()[0])
    assert not rep["passed"] and rep["witness"]["residual"]


def test_seed_env_override(capsys, monkeypatch):
    _, first, _ = run(["verify", "qybe", "--j", "1/2", "--seed", "1"], capsys)
    monkeypatch.setenv("BELLMAT_SEED", "1")
    _, second, _ = run(["verify", "qybe", "--j", "1/2", "--seed", "99"], capsys)
    assert first == second


def test_timing_is_opt_in(capsys):
    _, out, _ = run(["verify", "malg", "--j", "1/2"], capsys)
    assert "elapsed" not in out
    _, out, _ = run(["verify", "malg", "--j", "1/2", "--timing"], capsys)
    assert "elapsed" in out


def test_evolve_writes_csv(tmp_path, capsys):
    path = tmp_path / "traj.csv"
    code, _, _ = run(
        ["evolve", "--j", "1/2", "--phases", "0.7", "--theta0", "0", "--theta1", "0.7854",
         "--steps", "10", "--state", "k=1", "--out", str(path)],
        capsys,
    )
    assert code == 0
    rows = path.read_text().splitlines()
    assert rows[0].startswith("theta,re0,im0") and len(rows) == 12


def test_evolve_rejects_symbolic_phases(capsys):
    assert run(["evolve", "--j", "1/2", "--phases", "sym"], capsys)[0] == 2


def test_relations_and_compare(tmp_path, capsys):
    code, out, _ = run(["relations", "rtt", "--j", "1/2", "--q", "1"], capsys)
    assert code == 0
    left = tmp_path / "a.json"
    left.write_text(out)
    from bellmat.ncalg import b4_algebra_relations

    right = tmp_path / "b.json"
    right.write_text(json.dumps(b4_algebra_relations(ONE).to_json()))
    code, out, _ = run(["relations", "compare", "--left", str(left), "--right", str(right)], capsys)
    assert code == 0 and json.loads(out)["passed"]
    # one relation short: spans differ
    short = RelationSet.from_json(json.loads(right.read_text()))
    right.write_text(json.dumps(RelationSet(short.relations[:-1]).to_json()))
    assert run(["relations", "compare", "--left", str(left), "--right", str(right)], capsys)[0] == 1


@pytest.mark.parametrize("which", ["rtt", "rll", "ncgeo"])
def test_relations_text(which, capsys):
    code, out, _ = run(["relations", which, "--j", "1/2", "--format", "text"], capsys)
    assert code == 0 and out.strip().endswith("= 0")


def test_relations_ttilde_rejects_symbolic_q(capsys):
    assert run(["relations", "ttilde", "--j", "1/2", "--q", "sym"], capsys)[0] == 2
    assert run(["relations", "ttilde", "--j", "1/2", "--q", "1"], capsys)[0] == 0


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "bellmat", "verify", "virtual", "--j", "1/2"], capture_output=True, text=True
    )
    # the literal relation is informational, so the run still passes
    assert res.returncode == 0
    assert len(res.stdout.splitlines()) == 2
