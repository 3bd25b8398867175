import json
import subprocess
import sys


from qnnwitness import cli
from qnnwitness.hamiltonian import load_schedule


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def witness_rows(out):
    lines = out.strip().splitlines()
    assert lines[0] == "state_kind,pair,method,value"
    rows = {}
    for line in lines[1:]:
        state, pair, method, value = line.split(",")
        rows[(state, method)] = float(value)
    return rows


class TestWitnessCommand:
    def test_bell_chunked(self, capsys):
        code, out, _ = run_cli(capsys, "witness", "--schedule", "table2", "--state", "Bell", "--method", "chunked")
        assert code == 0
        rows = witness_rows(out)
        assert abs(rows[("Bell", "chunked")] - 0.999) <= 5e-3

    def test_flat_gates_is_tiny(self, capsys):
        code, out, _ = run_cli(capsys, "witness", "--schedule", "table2", "--state", "Flat", "--method", "gates")
        assert code == 0
        assert witness_rows(out)[("Flat", "gates")] <= 1e-3

    def test_all_states_all_methods(self, capsys):
        code, out, _ = run_cli(capsys, "witness", "--schedule", "table2", "--state", "all", "--method", "all")
        assert code == 0
        assert len(out.strip().splitlines()) == 13  # header + 4 states x 3 methods

    def test_malformed_schedule_names_key(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"n_qubits": 2, "total_time": 1.0, "chunks": [], "bogus_key": 3}')
        code, _, err = run_cli(capsys, "witness", "--schedule", str(bad))
        assert code == 2
        assert "bogus_key" in err

    def test_missing_schedule_file(self, capsys):
        code, _, err = run_cli(capsys, "witness", "--schedule", "nope.json")
        assert code == 2
        assert "not found" in err

    def test_pair_out_of_range_is_dimension_error(self, capsys):
        code, _, err = run_cli(capsys, "witness", "--schedule", "table2", "--pair", "0,5")
        assert code == 3


class TestVerifyCommand:
    def test_table2_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--schedule", "table2")
        assert code == 0
        report = json.loads(out)
        assert report["frobenius_gate_vs_chunked"]["unitary"] < 1e-12
        for value in report["frobenius_chunked_vs_exact"]["density_matrix"].values():
            assert 0.005 <= value <= 0.05

    def test_zero_coupling_schedule(self, tmp_path, capsys):
        doc = {
            "n_qubits": 2,
            "total_time": 1.58,
            "symmetric": True,
            "chunks": [{"K": [2.49, 2.49], "eps": [0.093, 0.093], "zeta": {"0,1": 0.0}}] * 4,
        }
        path = tmp_path / "zeta0.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(capsys, "verify", "--schedule", str(path))
        assert code == 0
        assert json.loads(out)["frobenius_chunked_vs_exact"]["unitary"] < 1e-12

    def test_threshold_failure_exits_1(self, capsys, monkeypatch):
        def fake_verify(schedule):
            return {
                "n_qubits": 2,
                "frobenius_gate_vs_chunked": {"unitary": 1e-3, "density_matrix": {}},
                "frobenius_chunked_vs_exact": {"unitary": 0.01, "density_matrix": {}},
            }

        monkeypatch.setattr(cli, "verify_equivalence", fake_verify)
        code, _, err = run_cli(capsys, "verify", "--schedule", "table2")
        assert code == 1
        assert "FAIL" in err


class TestCompileCommand:
    def test_table2_counts(self, tmp_path, capsys):
        out_path = tmp_path / "t2.qasm"
        code, out, _ = run_cli(capsys, "compile", "--schedule", "table2", "--out", str(out_path), "--no-elide")
        assert code == 0
        assert out.strip() == "1q=28 2q=8"
        text = out_path.read_text()
        gate_lines = [l for l in text.splitlines() if l.startswith(("rx", "ry", "rz", "cx"))]
        assert len(gate_lines) == 36

    def test_all_zero_schedule(self, tmp_path, capsys):
        doc = {
            "n_qubits": 2,
            "total_time": 1.0,
            "chunks": [{"K": [0.0, 0.0], "eps": [0.0, 0.0], "zeta": {"0,1": 0.0}}] * 4,
        }
        path = tmp_path / "zero.json"
        path.write_text(json.dumps(doc))
        out_path = tmp_path / "zero.qasm"
        code, out, _ = run_cli(capsys, "compile", "--schedule", str(path), "--out", str(out_path))
        assert code == 0
        assert out.strip() == "1q=0 2q=0"
        assert all(not l.startswith(("rx", "ry", "rz", "cx")) for l in out_path.read_text().splitlines())

    def test_table3_counts(self, tmp_path, capsys):
        # 4 chunks x (3*21 pair gates + 3*7 rotations) = 336 gates total
        out_path = tmp_path / "t3.qasm"
        code, out, _ = run_cli(capsys, "compile", "--schedule", "table3", "--out", str(out_path), "--no-elide")
        assert code == 0
        assert out.strip() == "1q=168 2q=168"


class TestTrainCommand:
    def test_table2_rms_at_epoch_zero(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "train", "--schedule", "table2", "--epochs", "0", "--out-dir", str(tmp_path)
        )
        assert code == 0
        history = (tmp_path / "rms_history.csv").read_text().splitlines()
        assert float(history[1].split(",")[1]) <= 5e-3
        trained = load_schedule(tmp_path / "trained_schedule.json")
        assert trained.n_qubits == 2

    def test_random_init_writes_artifacts(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys,
            "train", "--n-qubits", "2", "--chunks", "4", "--seed", "0",
            "--epochs", "200", "--out-dir", str(tmp_path),
        )
        assert code == 0
        assert (tmp_path / "trained_schedule.json").exists()
        assert (tmp_path / "rms_history.csv").exists()
        assert "converged=True" in out

    def test_divergence_exit_code(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys,
            "train", "--schedule", "table2", "--learning-rate", "10.0", "--momentum", "0.0",
            "--epochs", "500", "--target-rms", "1e-9", "--out-dir", str(tmp_path),
        )
        assert code == 4
        assert (tmp_path / "last_good_schedule.json").exists()
        assert "diverged" in err


class TestBootstrapCommand:
    def test_small_chain(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys,
            "bootstrap", "--n-max", "3", "--seed", "0", "--out-dir", str(tmp_path),
        )
        assert code == 0
        summary = (tmp_path / "bootstrap_summary.csv").read_text().splitlines()
        assert len(summary) == 3  # header + n=2 + n=3
        assert (tmp_path / "schedule_n2.json").exists()
        assert (tmp_path / "schedule_n3.json").exists()
        for n in (2, 3):
            rms = float(summary[n - 1].split(",")[2])
            assert rms <= 1e-3


class TestSampleCommand:
    def test_single_count_ci(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys,
            "sample", "--schedule", "table2", "--state", "Bell", "--shots", "15000",
            "--iterations", "100", "--seed", "0", "--out-dir", str(tmp_path),
        )
        assert code == 0
        lines = (tmp_path / "sweep_Bell.csv").read_text().splitlines()
        header = lines[0].split(",")
        row = dict(zip(header, lines[1].split(",")))
        half_width = (float(row["ci_high"]) - float(row["ci_low"])) / 2
        assert half_width <= 0.002

    def test_default_grid_row_count(self, tmp_path, capsys):
        code, _, _ = run_cli(
            capsys,
            "sample", "--schedule", "table2", "--state", "Bell",
            "--iterations", "2", "--seed", "0", "--out-dir", str(tmp_path),
        )
        assert code == 0
        assert len((tmp_path / "sweep_Bell.csv").read_text().splitlines()) == 401

    def test_seed_reproducibility(self, tmp_path, capsys):
        args = ("sample", "--schedule", "table2", "--state", "P", "--shots", "300",
                "--iterations", "20", "--seed", "5")
        code, _, _ = run_cli(capsys, *args, "--out-dir", str(tmp_path / "a"))
        assert code == 0
        code, _, _ = run_cli(capsys, *args, "--out-dir", str(tmp_path / "b"))
        assert code == 0
        assert (tmp_path / "a" / "sweep_P.csv").read_bytes() == (tmp_path / "b" / "sweep_P.csv").read_bytes()

    def test_stdout_when_no_out_dir(self, capsys):
        code, out, _ = run_cli(
            capsys, "sample", "--schedule", "table2", "--shots", "100", "--iterations", "3", "--seed", "1"
        )
        assert code == 0
        assert out.splitlines()[0].startswith("shot_count,mean,variance")


class TestConfigFile:
    def test_values_from_config(self, tmp_path, capsys):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"schedule": "table2", "state": "Bell", "method": "chunked"}))
        code, out, _ = run_cli(capsys, "witness", "--config", str(config))
        assert code == 0
        assert abs(witness_rows(out)[("Bell", "chunked")] - 0.999) <= 5e-3

    def test_flags_override_config(self, tmp_path, capsys):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"schedule": "table2", "state": "Bell"}))
        code, out, _ = run_cli(capsys, "witness", "--config", str(config), "--state", "Flat")
        assert code == 0
        rows = witness_rows(out)
        assert ("Flat", "chunked") in rows and ("Bell", "chunked") not in rows

    def test_unknown_key_rejected(self, tmp_path, capsys):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"schedule": "table2", "shotz": 100}))
        code, _, err = run_cli(capsys, "witness", "--config", str(config))
        assert code == 2
        assert "shotz" in err


class TestTopLevel:
    def test_list_repro(self, capsys):
        code, out, _ = run_cli(capsys, "--list-repro")
        assert code == 0
        assert "Table 1" in out and "Figs 1-2" in out and "bootstrap" in out

    def test_no_command_shows_help(self, capsys):
        code, out, _ = run_cli(capsys)
        assert code == 2

    def test_installed_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "qnnwitness.cli", "--list-repro"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "Table 1" in proc.stdout
