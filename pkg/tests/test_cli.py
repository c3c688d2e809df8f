import json

import numpy as np
import pytest

import clusterchain.cli as cli
from clusterchain.cli import TaskConfig, main, parse_float_sweep, parse_int_sweep, run


class TestSweepGrammar:
    def test_inclusive_range(self):
        assert parse_int_sweep("3:7") == [3, 4, 5, 6, 7]

    def test_odd_range(self):
        assert parse_int_sweep("odd:9:16") == [9, 11, 13, 15]

    def test_comma_list_keeps_order(self):
        assert parse_int_sweep("5,8,2") == [5, 8, 2]

    def test_single_value(self):
        assert parse_int_sweep("42") == [42]
        assert parse_float_sweep("0.5") == [0.5]

    def test_float_list(self):
        assert parse_float_sweep("0,0.5,1.0,1.5") == [0.0, 0.5, 1.0, 1.5]

    def test_rejects_malformed(self):
        for bad in ("", "1:2:3", "odd:5", "a:b"):
            with pytest.raises(ValueError):
                parse_int_sweep(bad)
        with pytest.raises(ValueError):
            parse_float_sweep("")


class TestConfigValidation:
    def test_rejects_unknown_task(self):
        with pytest.raises(ValueError):
            TaskConfig(task="nope", n_list=[9], m_list=[3], h_list=[0.0],
                       output_path=None)

    def test_rejects_empty_sweep(self):
        with pytest.raises(ValueError):
            TaskConfig(task="degeneracy", n_list=[], m_list=[3], h_list=[0.0],
                       output_path=None)

    def test_rejects_bad_parallelism(self):
        with pytest.raises(ValueError):
            TaskConfig(task="degeneracy", n_list=[9], m_list=[3], h_list=[0.0],
                       output_path=None, parallelism=0)


class TestOutputs:
    def test_entropy_profile_schema_and_determinism(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (out1, out2):
            code = run(TaskConfig(task="entropy-profile", n_list=[21], m_list=[3],
                                  h_list=[0.0], output_path=str(out),
                                  l_range=list(range(3, 11)), parallelism=2))
            assert code == 0
        b1, b2 = out1.read_bytes(), out2.read_bytes()
        assert b1 == b2  # byte-identical reruns
        text = b1.decode()
        assert text.splitlines()[0] == "N,m,h,l,S"
        assert "\r" not in text
        # 17-significant-digit float formatting
        row = text.splitlines()[1].split(",")
        assert row[:4] == ["21", "3", "0", "3"]
        assert float(row[4]) == pytest.approx(2.0 + 0.996, abs=0.5)

    def test_meta_sidecar(self, tmp_path):
        out = tmp_path / "deg.csv"
        run(TaskConfig(task="degeneracy", n_list=[9, 10], m_list=[3],
                       h_list=[0.0], output_path=str(out)))
        meta = json.loads((tmp_path / "deg.csv.meta.json").read_text())
        assert meta["task"] == "degeneracy"
        assert meta["n"] == [9, 10]
        assert "conventions" in meta and "tolerances" in meta

    def test_degeneracy_values(self, tmp_path):
        out = tmp_path / "deg.csv"
        run(TaskConfig(task="degeneracy", n_list=[9, 10, 8], m_list=[3],
                       h_list=[0.0], output_path=str(out)))
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        got = {int(r[0]): int(r[3]) for r in rows}
        assert got == {9: 18, 10: 2, 8: 2}

    def test_json_format(self, tmp_path):
        out = tmp_path / "deg.json"
        run(TaskConfig(task="degeneracy", n_list=[9], m_list=[3], h_list=[0.0],
                       output_path=str(out), format="json"))
        records = json.loads(out.read_text())
        assert records == [{"N": 9, "m": 3, "h": 0.0, "degeneracy": 18}]

    def test_spectrum_rows(self, tmp_path):
        out = tmp_path / "sp.csv"
        run(TaskConfig(task="spectrum", n_list=[25], m_list=[3], h_list=[0.0],
                       output_path=str(out), k=60))
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        assert len(rows) == 60
        gaps = np.array([float(r[4]) for r in rows])
        assert gaps[0] == 0.0
        assert (np.diff(gaps) >= 0).all()

    def test_cmi_sweep_even_m_vanishes(self, tmp_path):
        # for m=4 the 4-part CMI is exactly zero once the arcs shield the
        # range-m correlations (N >= 15); below that it is a positive
        # integer (3, 2, 1 at N = 9, 11, 13 — ED-confirmed)
        out = tmp_path / "cmi.csv"
        code = run(TaskConfig(task="cmi-sweep", n_list=list(range(15, 42, 2)),
                              m_list=[4], h_list=[0.0], output_path=str(out),
                              parts=4, parallelism=2))
        assert code == 0
        vals = [float(line.split(",")[4]) for line in out.read_text().splitlines()[1:]]
        assert len(vals) == 14
        assert max(abs(v) for v in vals) < 1e-8

    def test_critical_scaling_fit_json(self, tmp_path):
        out = tmp_path / "scal.csv"
        code = run(TaskConfig(task="critical-scaling",
                              n_list=[51, 101, 151, 201], m_list=[2],
                              h_list=[1.0], output_path=str(out),
                              fit_path=str(tmp_path / "fit.json")))
        assert code == 0
        fit = json.loads((tmp_path / "fit.json").read_text())["2"]
        assert fit["central_charge"] == pytest.approx(3 * fit["slope"], abs=1e-12)
        assert fit["slope"] == pytest.approx(1 / 3, abs=0.02)
        header = out.read_text().splitlines()[0]
        assert header == "m,N,S_half"

    def test_verify_ok_point(self, tmp_path):
        out = tmp_path / "v.csv"
        code = run(TaskConfig(task="verify", n_list=[6], m_list=[2],
                              h_list=[0.5], output_path=str(out)))
        assert code == 0
        assert out.read_text().splitlines()[1].endswith("ok")


class TestExitCodes:
    def test_usage_error_bad_sweep(self, capsys):
        assert main(["degeneracy", "--n", "1:2:3", "--m", "3"]) == 2
        assert "usage error" in capsys.readouterr().err

    def test_usage_error_missing_l_range(self, tmp_path):
        # entropy-profile without --l-range is rejected by the parser
        with pytest.raises(SystemExit) as exc:
            main(["entropy-profile", "--n", "9", "--m", "3"])
        assert exc.value.code == 2

    def test_numerical_failure_exit_3(self, monkeypatch, tmp_path, capsys):
        def boom(params, k):
            raise np.linalg.LinAlgError("synthetic breakdown at N=9")

        monkeypatch.setattr(cli, "low_spectrum", boom)
        code = run(TaskConfig(task="spectrum", n_list=[9], m_list=[3],
                              h_list=[0.0], output_path=str(tmp_path / "x.csv")))
        assert code == 3
        assert "numerical failure" in capsys.readouterr().err

    def test_main_end_to_end(self, tmp_path):
        out = tmp_path / "cmi.csv"
        code = main(["cmi-sweep", "--n", "odd:9:15", "--m", "3", "--h", "0",
                     "--parts", "4", "--out", str(out)])
        assert code == 0
        assert out.exists() and (tmp_path / "cmi.csv.meta.json").exists()

    def test_threads_env_override(self, monkeypatch, tmp_path):
        monkeypatch.setenv("CLUSTERCHAIN_THREADS", "3")
        out = tmp_path / "d.csv"
        code = main(["degeneracy", "--n", "8,9", "--m", "3", "--h", "0",
                     "--out", str(out)])
        assert code == 0
        assert len(out.read_text().splitlines()) == 3
