import csv
import json
import math

import numpy as np
import pytest

from assoclearn import Topology, save_topology_json
from assoclearn.cli import main

pytestmark = pytest.mark.filterwarnings("ignore::pytest.PytestUnraisableExceptionWarning")


def write_json(path, doc):
    path.write_text(json.dumps(doc, indent=1))
    return str(path)


def minimal_config(tmp_path, **overrides):
    doc = {
        "seed": 7,
        "topology": {
            "source": "generate",
            "grid": {"nx": 2, "ny": 2, "spacing": 40.0},
            "radio": {
                "ap_positions": [[0.0, 0.0], [40.0, 40.0]],
                "ap_power_dbm": [43.0, 33.0],
                "omega": 2e-7,
            },
        },
        "traffic": {
            "source": "synthetic",
            "horizon": 12,
            "profile": {"slots_per_day": 6, "sigma": 0.0},
        },
        "partition": {"zones": 1, "slots_per_zone": 12},
        "cost": {"alpha": 0.0, "rho0": 1.0, "psi": 1.0},
        "eta": 0.1,
    }
    doc.update(overrides)
    return write_json(tmp_path / "config.json", doc)


def fast_slow_setup(tmp_path):
    """Config backed by a 1-location, 2-AP topology file and a CSV trace."""
    topo_path = tmp_path / "topology.json"
    save_topology_json(Topology(service_rate=np.array([[1.0], [1.0]])), topo_path)
    trace_path = tmp_path / "trace.csv"
    with open(trace_path, "w") as fh:
        fh.write("t,location_id,intensity\n")
        for t in range(1, 19):
            fh.write(f"{t},1,1.0\n")
    doc = {
        "seed": 1,
        "topology": {"source": "file", "path": str(topo_path)},
        "traffic": {"source": "csv", "path": str(trace_path), "n_locations": 1},
        "partition": {"zones": 2, "slots_per_zone": 3},
        "cost": {"alpha": 0.0, "rho0": 1.0, "psi": 1.0},
        "eta": "auto",
    }
    return write_json(tmp_path / "auto.json", doc)


class TestRun:
    def test_minimal_run_writes_three_outputs_plus_manifest(self, tmp_path):
        config = minimal_config(tmp_path)
        out = tmp_path / "out"
        assert main(["run", "--config", config, "--out", str(out)]) == 0
        names = sorted(p.name for p in out.iterdir())
        assert names == ["benchmark.json", "manifest.json", "regret.json", "runlog.csv"]
        manifest = json.loads((out / "manifest.json").read_text())
        assert {entry["path"] for entry in manifest["outputs"]} == {
            "benchmark.json",
            "regret.json",
            "runlog.csv",
        }

    def test_manifest_hashes_match_written_files(self, tmp_path):
        import hashlib

        config = minimal_config(tmp_path)
        out = tmp_path / "out"
        assert main(["run", "--config", config, "--out", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        for entry in manifest["outputs"]:
            digest = hashlib.sha256((out / entry["path"]).read_bytes()).hexdigest()
            assert digest == entry["sha256"], entry["path"]

    def test_auto_eta_recorded_in_manifest(self, tmp_path):
        config = fast_slow_setup(tmp_path)
        out = tmp_path / "out"
        assert main(["run", "--config", config, "--out", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        # L = 1 on unit rates with unit demand; K=2, T=18, one location, two APs
        expected = math.sqrt(2 * 2 * 1 * 1 * math.log(2) / (18 * 1 * 2))
        assert manifest["resolved"]["eta"] == pytest.approx(expected)

    def test_repeat_runs_byte_identical(self, tmp_path):
        config = minimal_config(tmp_path)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["run", "--config", config, "--out", str(out1)]) == 0
        assert main(["run", "--config", config, "--out", str(out2)]) == 0
        for p1 in sorted(out1.iterdir()):
            p2 = out2 / p1.name
            assert p1.read_bytes() == p2.read_bytes()

    def test_seed_override_changes_outputs(self, tmp_path):
        config = minimal_config(
            tmp_path,
            traffic={
                "source": "synthetic",
                "horizon": 12,
                "profile": {"slots_per_day": 6, "sigma": 0.3},
            },
        )
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["run", "--config", config, "--out", str(out1), "--seed", "1"]) == 0
        assert main(["run", "--config", config, "--out", str(out2), "--seed", "2"]) == 0
        assert (out1 / "runlog.csv").read_bytes() != (out2 / "runlog.csv").read_bytes()

    def test_benchmark_toggles_add_files(self, tmp_path):
        config = minimal_config(
            tmp_path, benchmarks={"static": True, "dynamic": True},
            partition={"zones": 2, "slots_per_zone": 6},
        )
        out = tmp_path / "out"
        assert main(["run", "--config", config, "--out", str(out)]) == 0
        names = {p.name for p in out.iterdir()}
        assert "benchmark_static.json" in names
        assert "benchmark_dynamic.json" in names


class TestValidateAndErrors:
    def test_validate_ok(self, tmp_path, capsys):
        config = minimal_config(tmp_path)
        assert main(["validate", "--config", config]) == 0
        assert "config OK" in capsys.readouterr().out

    def test_invalid_config_names_key(self, tmp_path, capsys):
        config = minimal_config(tmp_path, cost={"alpha": -1.0})
        assert main(["validate", "--config", config]) == 2
        assert "cost" in capsys.readouterr().err

    def test_missing_section_names_key(self, tmp_path, capsys):
        config = write_json(tmp_path / "bad.json", {"seed": 1})
        assert main(["validate", "--config", config]) == 2
        assert "topology" in capsys.readouterr().err

    def test_bad_partition_divisibility_is_config_error(self, tmp_path):
        config = minimal_config(tmp_path, partition={"zones": 5, "slots_per_zone": 5})
        out = tmp_path / "out"
        assert main(["run", "--config", config, "--out", str(out)]) == 2

    def test_missing_config_file_is_io_error(self, tmp_path):
        missing = tmp_path / "nope.json"
        assert main(["validate", "--config", str(missing)]) == 3

    def test_malformed_json_is_config_error(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["validate", "--config", str(path)]) == 2


class TestGenerators:
    def test_gen_topology_round_trip(self, tmp_path):
        config = minimal_config(tmp_path)
        out = tmp_path / "topology.json"
        assert main(["gen-topology", "--config", config, "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["n_aps"] == 2 and doc["n_locations"] == 4

    def test_gen_trace_deterministic(self, tmp_path):
        config = minimal_config(tmp_path)
        out1, out2 = tmp_path / "t1.csv", tmp_path / "t2.csv"
        assert main(["gen-trace", "--config", config, "--out", str(out1)]) == 0
        assert main(["gen-trace", "--config", config, "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_gen_topology_requires_generate_source(self, tmp_path):
        config = fast_slow_setup(tmp_path)
        assert main(["gen-topology", "--config", config, "--out", str(tmp_path / "x.json")]) == 2


class TestSweep:
    def sweep_config(self, tmp_path, **extra):
        topo_path = tmp_path / "topology.json"
        save_topology_json(
            Topology(service_rate=np.array([[1.0, 2.0], [2.0, 1.0]])), topo_path
        )
        doc = {
            "seed": 3,
            "topology": {"source": "file", "path": str(topo_path)},
            "traffic": {
                "source": "synthetic",
                "horizon": 24,
                "profile": {"slots_per_day": 12, "sigma": 0.2, "base_min": 0.4, "base_max": 0.9},
            },
            "partition": {"zones": 2, "slots_per_zone": 6},
            "cost": {"alpha": 0.0, "rho0": 1.0, "psi": 1.0},
            "eta": 0.5,
        }
        doc.update(extra)
        return write_json(tmp_path / "sweep.json", doc)

    def read_rows(self, out):
        with open(out / "sweep.csv", newline="") as fh:
            return list(csv.DictReader(fh))

    def test_zone_sweep_two_rows(self, tmp_path):
        config = self.sweep_config(tmp_path, sweep={"zones": [1, 2]})
        out = tmp_path / "out"
        assert main(["sweep", "--config", config, "--out", str(out)]) == 0
        rows = self.read_rows(out)
        assert [row["K"] for row in rows] == ["1", "2"]
        assert all(row["error"] == "" for row in rows)

    def test_rows_match_single_runs(self, tmp_path):
        config = self.sweep_config(tmp_path, sweep={"zones": [1, 2]})
        out = tmp_path / "out"
        assert main(["sweep", "--config", config, "--out", str(out)]) == 0
        rows = {row["K"]: row for row in self.read_rows(out)}
        for zones in (1, 2):
            single_out = tmp_path / f"single{zones}"
            single_config = self.sweep_config(
                tmp_path, partition={"zones": zones, "slots_per_zone": 12 // zones}
            )
            assert main(["run", "--config", single_config, "--out", str(single_out)]) == 0
            report = json.loads((single_out / "regret.json").read_text())
            assert float(rows[str(zones)]["regret"]) == pytest.approx(report["regret"])

    def test_rho0_sweep_violation_monotonicity(self, tmp_path):
        # with alpha=0 and psi=1 the optimizer is threshold-blind, so a
        # stricter threshold can only flag more of the same loads
        config = self.sweep_config(
            tmp_path,
            traffic={
                "source": "synthetic",
                "horizon": 24,
                "profile": {"slots_per_day": 12, "sigma": 0.2, "base_min": 0.8, "base_max": 1.6},
            },
            sweep={"rho0": [0.5, 1.0]},
        )
        out = tmp_path / "out"
        assert main(["sweep", "--config", config, "--out", str(out)]) == 0
        rows = {row["rho0"]: row for row in self.read_rows(out)}
        assert int(rows["0.5"]["violations_benchmark"]) >= int(rows["1.0"]["violations_benchmark"])

    def test_parallel_equals_serial(self, tmp_path):
        config = self.sweep_config(tmp_path, sweep={"zones": [1, 2], "eta": [0.2, 0.5]})
        out1, out2 = tmp_path / "serial", tmp_path / "parallel"
        assert main(["sweep", "--config", config, "--out", str(out1)]) == 0
        assert main(["sweep", "--config", config, "--out", str(out2), "--jobs", "2"]) == 0
        assert (out1 / "sweep.csv").read_bytes() == (out2 / "sweep.csv").read_bytes()

    def test_failed_combination_recorded(self, tmp_path):
        # alpha=2 with rho0=1 is an invalid cost combination
        config = self.sweep_config(tmp_path, sweep={"alpha": [0.0, 2.0]})
        out = tmp_path / "out"
        assert main(["sweep", "--config", config, "--out", str(out)]) == 0
        rows = self.read_rows(out)
        assert rows[0]["error"] == ""
        assert rows[1]["error"] != ""
