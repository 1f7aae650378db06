import subprocess
import sys

import pytest

from goorbit import catalog, cli, sim, specfile

from test_specfile import H3


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_go_catalog(capsys):
    code, out, _ = run(capsys, "check-go", "heisenberg3")
    assert code == 0
    assert "ProvedGO(naturally-reductive)" in out and "phi(e3): J" in out


def test_check_go_not_go_claimed(capsys, tmp_path):
    path = tmp_path / "h3.spec"
    path.write_text(H3)
    code, out, _ = run(capsys, "check-go", str(path))
    assert code == cli.EXIT_NOT_GO and "NotGO" in out
    path.write_text(H3.replace("flags\n  go\nend\n", ""))
    code, _, _ = run(capsys, "check-go", str(path))
    assert code == 0


def test_e11_sol_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "check-go", "e11_sol")
    assert code == 0 and "NotGO" in out
    path = tmp_path / "sol.spec"
    path.write_text(specfile.emit(catalog.build("e11_sol").spec) + "flags\n  go\nend\n")
    code, _, _ = run(capsys, "check-go", str(path))
    assert code == cli.EXIT_NOT_GO


@pytest.mark.parametrize("target", ["heisenberg3", "sl2cover_nr:2,1", "e11_sol"])
def test_analyze_catalog(capsys, target):
    code, out, _ = run(capsys, "analyze", target)
    assert code == 0 and "mismatches: 0" in out


def test_analyze_file(capsys, tmp_path):
    path = tmp_path / "hyp.spec"
    path.write_text(specfile.emit(catalog.build("hyperbolic_plane").spec))
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 0 and "decompose" in out and "ProvedGO(symmetric)" in out


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "hyperbolic_x_h3")
    assert code == 0 and "case: 3" in out


def test_simulate(capsys, tmp_path):
    out_path = tmp_path / "traj.csv"
    code, out, _ = run(capsys, "simulate", "heisenberg3", "--X", "1,0,1", "--t", "1", "--steps", "200",
                       "--out", str(out_path))
    assert code == 0 and "model: two-step" in out and "orbit_deviation" in out
    traj = sim.read_trajectory(str(out_path))
    assert traj.points.shape == (201, 3)


def test_simulate_errors(capsys):
    code, _, err = run(capsys, "simulate", "heisenberg3", "--X", "1,0")
    assert code == 1 and "3 coordinates" in err
    code, _, err = run(capsys, "simulate", "heisenberg3", "--X", "1,a,0")
    assert code == 1 and "bad vector" in err
    code, _, err = run(capsys, "simulate", "slnR_symmetric", "--X", "1,0,0,0,0")
    assert code == 1 and "group model" in err
    code, _, err = run(capsys, "simulate", "heisenberg3", "--X", "1,0,0", "--steps", "0")
    assert code == 1


def test_catalog_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0 and out.split()[0] == catalog.names()[0]
    code, out, _ = run(capsys, "catalog", "emit", "sl2cover_nr:1,2")
    assert code == 0 and out == specfile.emit(catalog.build("sl2cover_nr", 1, 2).spec)
    path = tmp_path / "e.spec"
    code, _, _ = run(capsys, "catalog", "emit", "euclidean:2", "--out", str(path))
    assert code == 0 and specfile.parse(str(path)).g.dim == 2
    code, _, err = run(capsys, "catalog", "emit")
    assert code == 1


def test_error_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "check-go", "no_such_thing")
    assert code == 1 and "neither" in err
    code, _, err = run(capsys, "check-go", "sl2cover_nr:0,1")
    assert code == 1
    code, _, err = run(capsys, "check-go", "heisenberg3", "--samples", "0")
    assert code == 1
    path = tmp_path / "bad.spec"
    path.write_text(H3.replace("row 0 0 1", "row 0 0 -1"))
    code, _, err = run(capsys, "check-go", str(path))
    assert code == 1 and err.startswith(f"{path}:10:1: metric:")


def test_deterministic_output(capsys):
    first = run(capsys, "analyze", "sl2cover_nr", "--seed", "3")
    second = run(capsys, "analyze", "sl2cover_nr", "--seed", "3")
    assert first == second


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "goorbit", "check-go", "e11_sol", "--samples", "5"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "NotGO" in res.stdout
