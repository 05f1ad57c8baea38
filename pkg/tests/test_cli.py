import json

import pytest

from iov_bazaar import cli
from iov_bazaar.config import ConfigError, ExperimentConfig
from iov_bazaar.experiment import read_metrics_csv, CSV_COLUMNS

SMALL = {"num_vehicles": 10, "slots_per_episode": 4,
         "episodes_per_epoch": 1, "epochs": 2}


@pytest.fixture
def small_cfg_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(SMALL))
    return path


class TestConfig:
    def test_round_trip(self):
        cfg = ExperimentConfig(num_vehicles=33, hidden_sizes=(8, 8))
        again = ExperimentConfig.from_json(cfg.to_json())
        assert again == cfg

    def test_partial_json_uses_defaults(self):
        cfg = ExperimentConfig.from_json('{"num_vehicles": 25}')
        assert cfg.num_vehicles == 25
        assert cfg.gamma == 0.95

    def test_unknown_field_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_json('{"warp_speed": 9}')

    @pytest.mark.parametrize("field,value", [
        ("num_vehicles", 0), ("num_rsus", 0), ("gamma", 1.5),
        ("learning_rate", -1.0), ("mechanism", "galactic"),
        ("urgent_mode", "nonsense"), ("buyer_probability", 2.0),
        ("clip_ratio", 0.0), ("kappa", -0.1),
    ])
    def test_validate_rejects_bad_values(self, field, value):
        cfg = ExperimentConfig(**{field: value})
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_defaults_validate(self):
        ExperimentConfig().validate()


class TestRunCommand:
    def test_run_writes_layout(self, small_cfg_file, tmp_path):
        rc = cli.main(["run", "--config", str(small_cfg_file), "--seed", "3",
                       "--mechanism", "random", "--out", str(tmp_path / "runs"),
                       "--name", "r"])
        assert rc == 0
        run_dir = tmp_path / "runs" / "r"
        assert (run_dir / "config.json").exists()
        assert (run_dir / "metrics.csv").exists()
        assert (run_dir / "checkpoint.json").exists()
        assert (run_dir / "figures").is_dir()
        rows = read_metrics_csv(run_dir / "metrics.csv")
        assert len(rows) == SMALL["epochs"]
        assert {r.mechanism for r in rows} == {"random"}

    def test_resolved_config_recorded(self, small_cfg_file, tmp_path):
        cli.main(["run", "--config", str(small_cfg_file), "--seed", "3",
                  "--mechanism", "random", "--out", str(tmp_path), "--name", "r"])
        dumped = json.loads((tmp_path / "r" / "config.json").read_text())
        assert dumped["num_vehicles"] == 10
        assert dumped["gamma"] == 0.95          # defaults included
        assert dumped["mechanism"] == "random"  # flag override recorded

    def test_identical_seed_identical_csv_bytes(self, small_cfg_file, tmp_path):
        for name in ("a", "b"):
            cli.main(["run", "--config", str(small_cfg_file), "--seed", "3",
                      "--mechanism", "madrl", "--out", str(tmp_path),
                      "--name", name])
        assert ((tmp_path / "a" / "metrics.csv").read_bytes()
                == (tmp_path / "b" / "metrics.csv").read_bytes())

    def test_invalid_config_exits_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"num_vehicles": -5}')
        assert cli.main(["run", "--config", str(bad), "--seed", "1"]) == 2

    def test_missing_config_file_exits_2(self, tmp_path):
        assert cli.main(["run", "--config", str(tmp_path / "nope.json"),
                         "--seed", "1"]) == 2

    def test_out_of_range_seed_exits_2(self, small_cfg_file, tmp_path):
        rc = cli.main(["run", "--config", str(small_cfg_file),
                       "--seed", str(2 ** 64), "--out", str(tmp_path)])
        assert rc == 2


class TestFiguresCommand:
    def test_summaries_emitted(self, small_cfg_file, tmp_path):
        out = tmp_path / "runs"
        for mech, seed in (("random", 1), ("random", 2), ("madrl", 1)):
            cli.main(["run", "--config", str(small_cfg_file), "--seed",
                      str(seed), "--mechanism", mech, "--out", str(out),
                      "--name", f"{mech}{seed}"])
        assert cli.main(["figures", str(out)]) == 0
        figs = out / "figures"
        fig4 = (figs / "fig4_convergence.csv").read_text().splitlines()
        assert fig4[0] == "epoch,reward_mean,reward_std"
        assert len(fig4) - 1 == SMALL["epochs"]  # one row per epoch
        assert (figs / "fig8_latency.csv").exists()
        assert (figs / "fig8_latency.svg").read_text().startswith("<svg")

    def test_missing_dir_exits_2(self, tmp_path):
        assert cli.main(["figures", str(tmp_path / "absent")]) == 2


class TestKpabeCommand:
    def test_workflow_and_exit_codes(self, tmp_path):
        keys = tmp_path / "keys"
        assert cli.main(["kpabe", "setup", "--attributes", "2",
                         "--seed", "1", "--out", str(keys)]) == 0
        sk = tmp_path / "sk.json"
        assert cli.main(["kpabe", "keygen", "--pk", str(keys / "pk.json"),
                         "--mk", str(keys / "mk.json"), "--identity", "5",
                         "--policy", "attr_1", "--start", "2022-01-01",
                         "--end", "2022-12-31", "--seed", "2",
                         "--out", str(sk)]) == 0
        plain = tmp_path / "m.bin"
        plain.write_bytes(b"payload")
        sealed = tmp_path / "m.sealed"
        assert cli.main(["kpabe", "seal", "--pk", str(keys / "pk.json"),
                         "--attributes", "1", "--start", "2022-06-01",
                         "--end", "2022-06-02", "--seed", "3",
                         "--in", str(plain), "--out", str(sealed)]) == 0
        opened = tmp_path / "m.out"
        assert cli.main(["kpabe", "open", "--pk", str(keys / "pk.json"),
                         "--key", str(sk), "--in", str(sealed),
                         "--out", str(opened)]) == 0
        assert opened.read_bytes() == b"payload"

    def test_refused_open_exits_3(self, tmp_path):
        keys = tmp_path / "keys"
        cli.main(["kpabe", "setup", "--attributes", "2", "--seed", "1",
                  "--out", str(keys)])
        sk = tmp_path / "sk.json"
        cli.main(["kpabe", "keygen", "--pk", str(keys / "pk.json"),
                  "--mk", str(keys / "mk.json"), "--identity", "5",
                  "--policy", "attr_2", "--start", "2022-01-01",
                  "--end", "2022-12-31", "--seed", "2", "--out", str(sk)])
        plain = tmp_path / "m.bin"
        plain.write_bytes(b"payload")
        sealed = tmp_path / "m.sealed"
        cli.main(["kpabe", "seal", "--pk", str(keys / "pk.json"),
                  "--attributes", "1", "--start", "2022-06-01",
                  "--end", "2022-06-02", "--seed", "3",
                  "--in", str(plain), "--out", str(sealed)])
        rc = cli.main(["kpabe", "open", "--pk", str(keys / "pk.json"),
                       "--key", str(sk), "--in", str(sealed),
                       "--out", str(tmp_path / "m.out")])
        assert rc == 3

    def test_bad_policy_exits_2(self, tmp_path):
        keys = tmp_path / "keys"
        cli.main(["kpabe", "setup", "--attributes", "2", "--seed", "1",
                  "--out", str(keys)])
        rc = cli.main(["kpabe", "keygen", "--pk", str(keys / "pk.json"),
                       "--mk", str(keys / "mk.json"), "--identity", "5",
                       "--policy", "attr_9", "--start", "2022-01-01",
                       "--end", "2022-12-31", "--seed", "2",
                       "--out", str(tmp_path / "sk.json")])
        assert rc == 2

    def test_cover_reversed_range_exits_2(self, capsys):
        assert cli.main(["kpabe", "cover", "--start", "2022-09-02",
                         "--end", "2022-07-01"]) == 2

    def test_cover_prints_worked_example(self, capsys):
        assert cli.main(["kpabe", "cover", "--start", "2022-07-01",
                         "--end", "2022-09-02"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out == ["2022-7", "2022-8", "2022-9-1", "2022-9-2"]


def test_csv_schema_stable():
    assert CSV_COLUMNS == ("mechanism", "V", "seed", "epoch", "reward",
                           "social_welfare", "budget", "latency_s")
