"""Command-line interface: subcommand behavior, exit-code contract,
output formats, and scan reproducibility."""

import json

import pytest

from twistkit import cli


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestField:
    def test_json_output_shape(self, capsys):
        code, out, _ = run(["field", "--kind", "tm", "--m", "1",
                            "--kperp", "0.8", "--kz", "1.2",
                            "--at", "1.0,0.5,0.2"], capsys)
        assert code == 0
        data = json.loads(out)
        assert set(data) == {"A", "E", "B", "omega"}
        for label in ("A", "E", "B"):
            assert set(data[label]) == {"x", "y", "z"}
        assert data["omega"] == pytest.approx((0.8 ** 2 + 1.2 ** 2) ** 0.5)

    def test_e_is_iwA(self, capsys):
        code, out, _ = run(["field", "--kind", "te", "--m", "2",
                            "--kperp", "1.0", "--kz", "0.7",
                            "--at", "1.3,0.2,0.0"], capsys)
        data = json.loads(out)
        w = data["omega"]
        ax = complex(*data["A"]["x"])
        ex = complex(*data["E"]["x"])
        assert ex == pytest.approx(1j * w * ax)

    def test_invalid_flag_exits_2(self, capsys):
        code, _, _ = run(["field", "--kind", "tm", "--m", "1",
                          "--badflag"], capsys)
        assert code == 2

    def test_domain_error_exits_3(self, capsys):
        code, _, err = run(["field", "--kind", "tm", "--m", "1",
                            "--kperp", "-0.5", "--kz", "1.0",
                            "--at", "1,0,0"], capsys)
        assert code == 3
        assert "domain error" in err


class TestChannels:
    def test_tm_dipole_row_count(self, capsys):
        code, out, _ = run(["channels", "--m", "2", "--kind", "tm",
                            "--interaction", "dipole"], capsys)
        assert code == 0
        rows = out.strip().splitlines()
        assert len(rows) == 1 + 3  # header + three channels

    def test_te_m0_dipole_row_count(self, capsys):
        code, out, _ = run(["channels", "--m", "0", "--kind", "te",
                            "--interaction", "dipole"], capsys)
        assert code == 0
        rows = out.strip().splitlines()
        assert len(rows) == 1 + 2

    def test_conservation_in_output(self, capsys):
        m = 3
        code, out, _ = run(["channels", "--m", str(m), "--kind", "tm",
                            "--interaction", "spin"], capsys)
        assert code == 0
        for row in out.strip().splitlines()[1:]:
            dmr, dmq, dsp = (int(c) for c in row.split(",")[:3])
            assert dmr + dmq + dsp == -m


class TestAmplitude:
    def test_hydrogen_emission(self, capsys):
        code, out, _ = run(["amplitude", "--kind", "tm", "--m", "0",
                            "--kperp", "0.8", "--kz", "1.2",
                            "--cm-in", "trapped:1,0,1.0",
                            "--cm-out", "trapped:1,0,1.0",
                            "--int-in", "2p:0", "--int-out", "1s"], capsys)
        assert code == 0
        records = json.loads(out)
        assert len(records) == 1
        assert records[0]["delta_m_R"] == 0
        assert abs(complex(*records[0]["amplitude"])) > 0.0


class TestScan:
    @staticmethod
    def _config(tmp_path, **overrides):
        cfg = {
            "quantity": "suppression",
            "fixed": {"alpha": 1.2},
            "grid": {"k_perp": {"start": 0.5, "stop": 2.0, "count": 4}},
            "output": {"path": str(tmp_path / "out.csv"), "format": "csv"},
        }
        cfg.update(overrides)
        path = tmp_path / "scan.json"
        path.write_text(json.dumps(cfg))
        return path, cfg

    def test_deterministic_across_runs(self, tmp_path, capsys):
        path, cfg = self._config(tmp_path)
        assert cli.main(["scan", "--config", str(path), "--seed", "0"]) == 0
        first = (tmp_path / "out.csv").read_bytes()
        assert cli.main(["scan", "--config", str(path), "--seed", "0"]) == 0
        assert (tmp_path / "out.csv").read_bytes() == first
        capsys.readouterr()

    def test_parallel_matches_serial(self, tmp_path, capsys):
        path, cfg = self._config(tmp_path)
        cli.main(["scan", "--config", str(path)])
        serial = (tmp_path / "out.csv").read_bytes()
        cli.main(["scan", "--config", str(path), "--jobs", "4"])
        assert (tmp_path / "out.csv").read_bytes() == serial
        capsys.readouterr()

    def test_csv_format(self, tmp_path, capsys):
        path, cfg = self._config(tmp_path)
        cli.main(["scan", "--config", str(path)])
        capsys.readouterr()
        text = (tmp_path / "out.csv").read_bytes().decode()
        lines = text.split("\r\n")
        assert lines[0] == "k_perp,value"
        assert len([l for l in lines if l]) == 5
        # 17 significant digits in scientific notation.
        cell = lines[1].split(",")[0]
        assert "e" in cell and len(cell.split("e")[0].replace(".", "").lstrip("-")) == 17

    def test_json_format_single_point(self, tmp_path, capsys):
        out = tmp_path / "out.json"
        path, _ = self._config(
            tmp_path,
            grid={"k_perp": {"start": 1.0, "stop": 1.0, "count": 1}},
            output={"path": str(out), "format": "json"})
        assert cli.main(["scan", "--config", str(path)]) == 0
        capsys.readouterr()
        rows = json.loads(out.read_text())
        assert len(rows) == 1
        assert rows[0]["k_perp"] == 1.0

    def test_unknown_quantity_exits_3(self, tmp_path, capsys):
        path, _ = self._config(tmp_path, quantity="nonsense")
        code, _, err = run(["scan", "--config", str(path)], capsys)
        assert code == 3
        assert "domain error" in err

    def test_bad_grid_exits_3(self, tmp_path, capsys):
        path, _ = self._config(
            tmp_path, grid={"k_perp": {"start": 2.0, "stop": 1.0, "count": 3}})
        code, _, _ = run(["scan", "--config", str(path)], capsys)
        assert code == 3


class TestVerify:
    def test_fast_battery_passes(self, capsys):
        code, out, _ = run(["verify", "--only", "overlap"], capsys)
        assert code == 0
        lines = [l for l in out.splitlines() if l.startswith(("PASS", "FAIL"))]
        assert lines and all(l.startswith("PASS") for l in lines)

    def test_report_line_format(self, capsys):
        _, out, _ = run(["verify", "--only", "overlap"], capsys)
        line = [l for l in out.splitlines() if l.startswith("PASS")][0]
        assert "margin=" in line and "bound=" in line
