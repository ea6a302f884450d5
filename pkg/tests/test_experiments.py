"""Experiment runners: CSV contracts, engine consistency, determinism."""

import numpy as np
import pytest

from nonherm.config import parse_config
from nonherm.errors import ConfigError
from nonherm.experiments import run_experiment, write_csv
from nonherm.heff import HeffParams, evolve_pure
from nonherm.observables import p0
from nonherm.states import PureState
from nonherm.vqc import load_checkpoint


def run(tmp_path, doc, name="out.csv"):
    doc = dict(doc, output_path=str(tmp_path / name))
    cfg = parse_config(doc)
    res = run_experiment(cfg, doc)
    return res, (tmp_path / name).read_text(encoding="utf-8")


def rows_of(text):
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


class TestCsvFormat:
    def test_seventeen_digit_floats_and_blank_cells(self, tmp_path):
        path = tmp_path / "fmt.csv"
        write_csv(path, ["a", "b", "c"], [(1, 0.1, None), (2, 1.0 / 3.0, "txt")])
        text = path.read_text()
        assert text == "a,b,c\n1,0.10000000000000001,\n2,0.33333333333333331,txt\n"

    def test_lf_line_endings(self, tmp_path):
        path = tmp_path / "lf.csv"
        write_csv(path, ["x"], [(1,), (2,)])
        raw = path.read_bytes()
        assert b"\r" not in raw and raw.endswith(b"\n")


class TestSpectrumSweep:
    def test_structure_and_exceptional_rows(self, tmp_path):
        doc = {
            "experiment": "spectrum_sweep",
            "gamma": 1.0,
            "omega_min": -2.0,
            "omega_max": 2.0,
            "omega_points": 65,  # power-of-two grid step lands on +-1 exactly
        }
        _, text = run(tmp_path, doc)
        header, rows = rows_of(text)
        assert header == [
            "omega",
            "gamma",
            "re_lambda_plus",
            "im_lambda_plus",
            "re_lambda_minus",
            "im_lambda_minus",
            "phase",
        ]
        assert len(rows) == 65
        for row in rows:
            omega = float(row[0])
            re_p, im_p = float(row[2]), float(row[3])
            if abs(omega) > 1.0:
                assert row[6] == "Symmetric" and im_p == 0.0 and re_p != 0.0
            elif abs(omega) < 1.0:
                assert row[6] == "Broken" and re_p == 0.0
            else:
                assert row[6] == "ExceptionalPoint"
                assert row[2] == row[3] == row[4] == row[5] == "0"


class TestP0Dynamics:
    def test_exact_engine_blank_success_column(self, tmp_path):
        doc = {"experiment": "p0_dynamics", "omega": 0.01, "omega_over_gamma": 8.0, "steps": 5}
        _, text = run(tmp_path, doc)
        header, rows = rows_of(text)
        assert header == ["step", "t", "p0", "cumulative_success_probability"]
        assert all(row[3] == "" for row in rows)
        assert float(rows[0][2]) == 1.0

    def test_trotter_engine_probability_column(self, tmp_path):
        doc = {
            "experiment": "p0_dynamics",
            "omega": 0.01,
            "omega_over_gamma": 0.89,
            "steps": 40,
            "engine": "trotter_exact_kraus",
        }
        _, text = run(tmp_path, doc)
        _, rows = rows_of(text)
        probs = [float(r[3]) for r in rows]
        assert probs[0] == 1.0
        assert np.all(np.diff(probs) <= 0)

    def test_trotter_converges_to_exact_when_tau_halves(self, tmp_path):
        base = {"experiment": "p0_dynamics", "omega": 0.01, "omega_over_gamma": 8.0}
        _, coarse = run(tmp_path, dict(base, steps=300, engine="trotter_exact_kraus"), "c.csv")
        _, fine = run(
            tmp_path, dict(base, steps=600, tau=0.5, record_every=2, engine="trotter_exact_kraus"), "f.csv"
        )
        _, exact = run(tmp_path, dict(base, steps=300, engine="exact"), "e.csv")
        p_coarse = np.array([float(r[2]) for r in rows_of(coarse)[1]])
        p_fine = np.array([float(r[2]) for r in rows_of(fine)[1]])
        p_exact = np.array([float(r[2]) for r in rows_of(exact)[1]])
        t_fine = np.array([float(r[1]) for r in rows_of(fine)[1]])
        assert np.allclose(t_fine, np.arange(301.0))  # aligned time grids
        err_coarse = np.max(np.abs(p_coarse - p_exact))
        err_fine = np.max(np.abs(p_fine - p_exact))
        assert 1.6 < err_coarse / err_fine < 2.4

    def test_trained_pqc_engine_matches_exact(self, tmp_path):
        train_doc = {
            "experiment": "train",
            "omega": 0.01,
            "gamma": 0.00125,
            "t": 300.0,
            "checkpoint_path": str(tmp_path / "ck.json"),
            "seed": 0,
        }
        res, _ = run(tmp_path, train_doc, "train.csv")
        assert res.extra["target_reached"]
        ck = load_checkpoint(tmp_path / "ck.json")
        assert ck.final_cost < 1e-3

        doc = {
            "experiment": "p0_dynamics",
            "omega": 0.01,
            "gamma": 0.00125,
            "engine": "trained_pqc",
            "checkpoint_paths": [str(tmp_path / "ck.json")],
        }
        _, text = run(tmp_path, doc, "pqc.csv")
        _, rows = rows_of(text)
        assert len(rows) == 1
        step, t, prob0, succ = rows[0]
        assert (int(step), float(t)) == (300, 300.0)
        exact = p0(evolve_pure(HeffParams(0.01, 0.00125), 300.0, PureState(1, np.array([1, 0], dtype=complex))))
        assert abs(float(prob0) - exact) < 0.02
        assert 0.0 < float(succ) <= 1.0

    def test_trained_pqc_task_mismatch_rejected(self, tmp_path):
        train_doc = {
            "experiment": "train",
            "omega": 0.01,
            "gamma": 0.00125,
            "t": 20.0,
            "checkpoint_path": str(tmp_path / "ck2.json"),
        }
        run(tmp_path, train_doc, "train2.csv")
        doc = {
            "experiment": "p0_dynamics",
            "omega": 0.01,
            "gamma": 0.002,
            "engine": "trained_pqc",
            "checkpoint_paths": [str(tmp_path / "ck2.json")],
            "output_path": str(tmp_path / "x.csv"),
        }
        with pytest.raises(ConfigError, match="does not match"):
            run_experiment(parse_config(doc), doc)


class TestMzExperiments:
    def test_mz_dynamics_columns_and_start(self, tmp_path):
        doc = {"experiment": "mz_dynamics", "omega": 0.01, "omega_over_gamma": 0.8, "steps": 40, "record_every": 4}
        _, text = run(tmp_path, doc)
        header, rows = rows_of(text)
        assert header == ["step", "t", "mz", "mz_asymptote"]
        assert float(rows[0][2]) == 0.0
        assert abs(float(rows[0][3]) - 0.6) < 1e-12
        assert len(rows) == 11

    def test_phase_sweep_values(self, tmp_path):
        doc = {"experiment": "mz_phase_sweep", "omega": 0.01, "gamma_ratios": [0.7, 0.8, 1.0, 1.2]}
        _, text = run(tmp_path, doc)
        _, rows = rows_of(text)
        table = {float(r[0]): (float(r[1]), float(r[2])) for r in rows}
        assert abs(table[0.7][0] - np.sqrt(0.51)) < 1e-12
        assert abs(table[0.8][0] - 0.6) < 1e-12
        assert table[1.0][0] == 0.0 and table[1.2][0] == 0.0
        for ratio, (formula, simulated) in table.items():
            assert abs(formula - simulated) < 0.01 if ratio < 1.0 else abs(simulated) < 0.02


class TestTwoQubitExperiments:
    def test_concurrence_columns_and_bell_start(self, tmp_path):
        doc = {"experiment": "concurrence_dynamics", "omega": 0.01, "omega_over_gamma": 2.0, "steps": 30, "record_every": 10}
        _, text = run(tmp_path, doc)
        header, rows = rows_of(text)
        assert header == ["step", "t", "concurrence", "bloch_x", "bloch_y", "bloch_z"]
        first = [float(v) for v in rows[0]]
        assert abs(first[2] - 1.0) < 1e-9
        assert abs(first[3]) < 1e-12 and abs(first[4]) < 1e-12 and abs(first[5]) < 1e-12

    def test_trotter_engine_tracks_exact(self, tmp_path):
        base = {"experiment": "concurrence_dynamics", "omega": 0.01, "omega_over_gamma": 0.89, "steps": 200, "record_every": 20}
        _, exact_text = run(tmp_path, dict(base, engine="exact"), "ce.csv")
        _, trot_text = run(tmp_path, dict(base, engine="trotter_exact_kraus"), "ct.csv")
        _, gauss_text = run(tmp_path, dict(base, engine="trotter_gaussian_kraus"), "cg.csv")
        c_exact = np.array([float(r[2]) for r in rows_of(exact_text)[1]])
        c_trot = np.array([float(r[2]) for r in rows_of(trot_text)[1]])
        c_gauss = np.array([float(r[2]) for r in rows_of(gauss_text)[1]])
        # phi is ~0.3 here, so the two Kraus modes themselves differ at the
        # per-step fourth-order level; both must still track the exact map
        assert np.max(np.abs(c_trot - c_exact)) < 5e-3
        assert np.max(np.abs(c_gauss - c_exact)) < 5e-3
        assert np.max(np.abs(c_gauss - c_trot)) < 5e-3

    def test_bloch_trajectory_columns(self, tmp_path):
        doc = {"experiment": "bloch_trajectory", "omega": 0.01, "omega_over_gamma": 8.0, "steps": 20, "record_every": 5}
        _, text = run(tmp_path, doc)
        header, rows = rows_of(text)
        assert header == ["step", "bloch_x", "bloch_y", "bloch_z", "bloch_norm"]
        assert float(rows[0][4]) < 1e-12


class TestTrainRunner:
    def test_trace_columns_and_checkpoint(self, tmp_path):
        doc = {
            "experiment": "train",
            "omega": 0.01,
            "gamma": 0.00125,
            "t": 300.0,
            "checkpoint_path": str(tmp_path / "ck.json"),
            "seed": 1,
        }
        res, text = run(tmp_path, doc)
        header, rows = rows_of(text)
        assert header == ["iteration", "cost", "grad_norm"]
        assert int(rows[0][0]) == 0
        costs = [float(r[1]) for r in rows]
        assert costs[0] <= 4.0 and costs[-1] <= 1e-3
        assert res.extra["target_reached"]
        ck = load_checkpoint(tmp_path / "ck.json")
        assert ck.t == 300.0 and ck.tau_convention == 1.0 and ck.seed == 1

    def test_sweep_writes_checkpoint_per_time(self, tmp_path):
        doc = {
            "experiment": "train",
            "omega": 0.01,
            "gamma": 0.00125,
            "t_values": [50.0, 100.0],
            "checkpoint_path": str(tmp_path / "ck_{t}.json"),
            "max_iterations": 1500,
            "seed": 0,
        }
        res, _ = run(tmp_path, doc)
        assert (tmp_path / "ck_50.json").exists()
        assert (tmp_path / "ck_100.json").exists()
        assert load_checkpoint(tmp_path / "ck_50.json").t == 50.0

    def test_target_missed_is_reported(self, tmp_path):
        doc = {
            "experiment": "train",
            "omega": 0.01,
            "gamma": 0.00125,
            "t": 300.0,
            "checkpoint_path": str(tmp_path / "ck.json"),
            "max_iterations": 2,
            "target_cost": 1e-9,
        }
        res, _ = run(tmp_path, doc)
        assert not res.extra["target_reached"]


class TestDeterminismAndManifest:
    CONFIGS = [
        {"experiment": "spectrum_sweep", "gamma": 1.0, "omega_min": -2.0, "omega_max": 2.0, "omega_points": 17},
        {"experiment": "p0_dynamics", "omega": 0.01, "omega_over_gamma": 8.0, "steps": 30, "engine": "trotter_exact_kraus"},
        {"experiment": "mz_dynamics", "omega": 0.01, "omega_over_gamma": 0.8, "steps": 20},
        {"experiment": "mz_phase_sweep", "omega": 0.01, "gamma_ratios": [0.8, 1.1]},
        {"experiment": "concurrence_dynamics", "omega": 0.01, "omega_over_gamma": 2.0, "steps": 15, "record_every": 5, "engine": "trotter_exact_kraus"},
        {"experiment": "bloch_trajectory", "omega": 0.01, "omega_over_gamma": 0.89, "steps": 15, "record_every": 5},
        {"experiment": "train", "omega": 0.01, "gamma": 0.00125, "t": 50.0, "max_iterations": 40, "target_cost": 0.0, "seed": 3},
    ]

    @pytest.mark.parametrize("doc", CONFIGS, ids=lambda d: d["experiment"])
    def test_reruns_are_byte_identical(self, tmp_path, doc):
        doc = dict(doc)
        if doc["experiment"] == "train":
            doc["checkpoint_path"] = str(tmp_path / "ck.json")
        _, first = run(tmp_path, doc, "a.csv")
        _, second = run(tmp_path, doc, "b.csv")
        assert first == second

    def test_manifest_contents(self, tmp_path):
        doc = {"experiment": "mz_dynamics", "omega": 0.01, "gamma": 0.0125, "steps": 5}
        res, _ = run(tmp_path, doc)
        import json

        manifest = json.loads(res.manifest_path.read_text())
        assert manifest["experiment"] == "mz_dynamics"
        assert manifest["rows_written"] == 6
        assert len(manifest["config_sha256"]) == 64
        assert manifest["kernel_backend"] in ("compiled", "python")
        assert manifest["library_version"]
