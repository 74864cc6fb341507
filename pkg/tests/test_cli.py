import csv
import io
import json
import subprocess
import sys

import pytest

from hyperrotor import cli
from hyperrotor.cli import CSV_HEADER, FIGURE_MODES, SweepSpec, fmt, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestReport:
    def test_rho10(self, capsys):
        code, out, _ = run(capsys, "report", "--state", "3:1,0", "--q", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["fisher"]["value"] == 8.0
        assert doc["c_lmc"]["value"] == pytest.approx(1.1687, abs=1e-4)
        assert set(doc["renyi"]) == {"2"}
        for key in ("fisher", "shannon", "disequilibrium", "c_fs", "c_lmc"):
            assert set(doc[key]) == {"value", "error", "method"}

    def test_uniform_circle(self, capsys):
        code, out, _ = run(capsys, "report", "--state", "2:5")
        doc = json.loads(out)
        assert code == 0
        assert doc["fisher"]["value"] == 0.0
        assert doc["c_lmc"]["value"] == pytest.approx(1.0, abs=1e-12)

    def test_q1_notice(self, capsys):
        code, out, err = run(capsys, "report", "--state", "3:2,1", "--q", "1")
        assert code == 0 and "Shannon" in err
        doc = json.loads(out)
        assert doc["renyi"]["1"] == doc["shannon"]

    @pytest.mark.parametrize(
        "argv",
        [
            ["report", "--state", "4:1,2,0"],
            ["report", "--state", "3;1,0"],
            ["report"],
            ["report", "--state", "3:1,0", "--q", "-1"],
            ["report", "--state", "3:1,0", "--rel-tol", "0"],
            ["report", "--state", "3:1,0", "--force-path", "magic"],
            ["bogus"],
        ],
    )
    def test_input_errors(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2
        assert err

    def test_chain_message(self, capsys):
        _, _, err = run(capsys, "report", "--state", "4:1,2,0")
        assert "index 2" in err

    def test_force_path(self, capsys):
        _, out, _ = run(capsys, "report", "--state", "3:4,1", "--q", "3", "--force-path", "quadrature")
        assert json.loads(out)["renyi"]["3"]["method"] == "quadrature"


class TestSweep:
    def test_fs_vs_m(self, capsys):
        code, out, _ = run(capsys, "sweep", "--mode", "fs_vs_m", "--l", "10")
        assert code == 0
        assert out.splitlines()[0] == ",".join(CSV_HEADER)
        table = rows(out)
        assert len(table) == 11
        vals = [float(r["value"]) for r in table]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert {r["measure"] for r in table} == {"c_fs"}

    def test_lmc_vs_m_interior_minimum(self, capsys):
        _, out, _ = run(capsys, "sweep", "--mode", "lmc_vs_m", "--l", "20")
        vals = [float(r["value"]) for r in rows(out)]
        k = vals.index(min(vals))
        assert 0 < k < len(vals) - 1
        assert all(b < a for a, b in zip(vals[: k + 1], vals[1 : k + 1]))
        assert all(b > a for a, b in zip(vals[k:], vals[k + 1 :]))

    def test_fr_vs_m_maximum_off_zero(self, capsys):
        _, out, _ = run(capsys, "sweep", "--mode", "fr_vs_m", "--l", "10")
        table = rows(out)
        vals = [float(r["value"]) for r in table]
        assert vals.index(max(vals)) > 0
        assert {r["q"] for r in table} == {"2"}

    def test_diag_grid(self, capsys):
        _, out, _ = run(capsys, "sweep", "--mode", "fs_diag", "--a", "2", "--l-max", "6")
        table = rows(out)
        assert [(int(r["l"]), int(r["m"])) for r in table] == [(l, l - 2) for l in range(2, 7)]

    def test_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (a, b):
            assert run(capsys, "sweep", "--mode", "lmc_vs_l", "--m", "2", "--l-max", "15", "--out", str(p))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_json(self, capsys):
        _, out, _ = run(capsys, "sweep", "--mode", "fr_diag", "--a", "0", "--l-max", "3", "--format", "json")
        doc = json.loads(out)
        assert [r["l"] for r in doc] == [0, 1, 2, 3]
        assert doc[0]["value"] == 0.0

    def test_custom(self, capsys):
        code, out, _ = run(capsys, "sweep", "--mode", "custom", "--state", "4:2,1,0", "--state", "3:1,0", "--q", "3")
        assert code == 0
        table = rows(out)
        assert [r["measure"] for r in table] == ["c_fs", "c_fr", "c_lmc"] * 2
        assert table[1]["q"] == "3"

    def test_custom_needs_grid(self, capsys):
        assert run(capsys, "sweep", "--mode", "custom")[0] == 2

    def test_unwritable(self, capsys, tmp_path):
        code, _, err = run(capsys, "sweep", "--mode", "fs_vs_m", "--l", "3", "--out", str(tmp_path / "no" / "such" / "x.csv"))
        assert code == 3 and err

    def test_all(self, tmp_path, capsys):
        code, _, _ = run(capsys, "sweep", "--mode", "all", "--l-max", "6", "--l", "4", "--out", str(tmp_path))
        assert code == 0
        assert sorted(p.stem for p in tmp_path.iterdir()) == sorted(FIGURE_MODES)

    def test_spec_rejects_empty(self):
        with pytest.raises(cli.InputError):
            SweepSpec("fs_vs_l", m_values=(5,), l_max=3).grid()


class TestValidate:
    def test_passes(self, capsys):
        code, out, err = run(capsys, "validate", "--l-max", "4", "--dim", "3", "--dim", "4", "--dim", "5")
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"] and doc["catalog"]["quarantined"] == ["d4_l_lm1_lm2"]
        assert doc["path_mismatches"] == []
        assert "quarantined" in err

    def test_trivial(self, capsys):
        assert run(capsys, "validate", "--l-max", "0")[0] == 0

    def test_failure_exit(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "_cross_check", lambda *a: [{"state": "3:1,0"}])
        code, out, _ = run(capsys, "validate", "--l-max", "1", "--format", "json")
        assert code == 4
        assert json.loads(out)["passed"] is False


class TestFormatting:
    @pytest.mark.parametrize(
        "x,text", [(0.1, "0.1"), (1 / 3, "0.333333333333333"), (8.0, "8"), (1e-20, "1e-20"), (float("inf"), "inf")]
    )
    def test_fmt(self, x, text):
        assert fmt(x) == text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyperrotor", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "report" in proc.stdout
