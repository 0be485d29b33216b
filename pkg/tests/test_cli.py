"""Configuration schema, file outputs, reproducibility, and the CLI."""

import dataclasses
import json

import pytest
import yaml

from tokensim.cli import (
    CSV_HEADER,
    compare,
    main,
    run_experiment,
)
from tokensim.config import (
    PRESET_NAMES,
    config_from_dict,
    config_to_dict,
    emit_config,
    load_config,
    preset_config,
)
from tokensim.engine import ExperimentConfig
from tokensim.errors import ParseError, SchemaMismatch, ValidationError
from tokensim.rewards import ExponentialDecay, IntrinsicTargeted, KpiDriven


def small(preset="baseline", **kw):
    config = preset_config(preset)
    return dataclasses.replace(config, n_runs=3, steps=12, **kw)


class TestPresets:
    def test_all_presets_resolve(self):
        for name in PRESET_NAMES:
            preset_config(name)

    def test_drift_presets_differ_only_in_p_up(self):
        base = preset_config("baseline")
        for name, p_up in (("high_spec", 0.58), ("low_spec", 0.52)):
            other = preset_config(name)
            assert other.params.p_up == p_up
            realigned = dataclasses.replace(
                other, params=dataclasses.replace(other.params, p_up=0.55))
            assert realigned == base

    def test_policy_presets_differ_only_in_policy(self):
        base = preset_config("baseline")
        targeted = preset_config("targeted")
        assert isinstance(targeted.policy, IntrinsicTargeted)
        assert dataclasses.replace(targeted, policy=base.policy) == base
        kpi = preset_config("kpi")
        assert isinstance(kpi.policy, KpiDriven)
        assert dataclasses.replace(kpi, policy=base.policy) == base

    def test_unknown_preset_rejected(self):
        with pytest.raises(ValidationError):
            preset_config("mystery")


class TestConfigSchema:
    def test_minimal_preset_file_resolves_fully(self, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text("preset: baseline\n")
        assert load_config(path) == preset_config("baseline")

    @pytest.mark.parametrize("name", PRESET_NAMES)
    def test_emit_load_round_trip(self, name, tmp_path):
        config = preset_config(name)
        path = tmp_path / "c.yaml"
        path.write_text(emit_config(config))
        assert load_config(path) == config

    def test_overrides_apply_on_top_of_preset(self, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text(
            "preset: baseline\n"
            "run: {steps: 20, n_runs: 2, base_seed: 7}\n"
            "params: {p_up: 0.6}\n")
        config = load_config(path)
        assert (config.steps, config.n_runs, config.base_seed) == (20, 2, 7)
        assert config.params.p_up == 0.6
        assert config.params.gamma == 0.5  # untouched default

    def test_invalid_mixture_weight_names_field(self, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text("params: {gamma: 1.5}\n")
        with pytest.raises(ValidationError, match="gamma"):
            load_config(path)

    def test_unknown_keys_rejected(self, tmp_path):
        for text in ("preset: baseline\nextra: 1\n",
                     "params: {warp: 9}\n",
                     "policy: {variant: exponential_decay, W0: 10, decay: 0.9, nope: 1}\n"):
            path = tmp_path / "c.yaml"
            path.write_text(text)
            with pytest.raises(ValidationError, match="unknown"):
                load_config(path)

    def test_policy_variants_parse(self):
        config = config_from_dict({"policy": {
            "variant": "exponential_decay", "W0": 1e6, "half_life": 100}})
        assert isinstance(config.policy, ExponentialDecay)
        assert config.policy.decay == pytest.approx(0.5 ** 0.01)
        config = config_from_dict({"policy": {
            "variant": "kpi_driven", "epsilon": 0.001, "W0": 1e6}})
        assert isinstance(config.policy, KpiDriven)
        config = config_from_dict({"policy": {
            "variant": "intrinsic_targeted", "B0": 100.0, "W0": 1e6}})
        assert isinstance(config.policy, IntrinsicTargeted)

    def test_exponential_policy_takes_one_rate_spelling(self):
        with pytest.raises(ValidationError):
            config_from_dict({"policy": {"variant": "exponential_decay",
                                         "W0": 1e6, "decay": 0.9,
                                         "half_life": 100}})
        with pytest.raises(ValidationError):
            config_from_dict({"policy": {"variant": "exponential_decay",
                                         "W0": 1e6}})

    def test_malformed_file_is_a_parse_error(self, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text("params: {gamma: [unclosed\n")
        with pytest.raises(ParseError):
            load_config(path)


class TestRunExperiment:
    def test_output_shape_and_header(self, tmp_path):
        config = small()
        out = run_experiment(config, tmp_path / "out")
        lines = (out / "trajectories.csv").read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + config.n_runs * (config.steps + 1)

    def test_rerun_is_byte_identical(self, tmp_path):
        config = small()
        a = run_experiment(config, tmp_path / "a")
        b = run_experiment(config, tmp_path / "b")
        for name in ("trajectories.csv", "summary.json", "manifest.json"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_manifest_reproduces_config(self, tmp_path):
        config = small("targeted")
        out = run_experiment(config, tmp_path / "out", preset="targeted")
        assert load_config(out / "manifest.json") == config
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["preset"] == "targeted"
        assert manifest["config"] == config_to_dict(config)

    def test_summary_contains_milestones_and_metrics(self, tmp_path):
        out = run_experiment(small("targeted"), tmp_path / "out")
        summary = json.loads((out / "summary.json").read_text())
        assert set(summary["milestones"]) == {"0.5", "0.75", "1"}
        assert "mean" in summary["aggregated_growth"]
        assert "variance" in summary["fiat_price"]

    def test_csv_quantity_is_min_of_supply_demand(self, tmp_path):
        out = run_experiment(small(), tmp_path / "out")
        rows = (out / "trajectories.csv").read_text().splitlines()[1:]
        cols = CSV_HEADER.split(",")
        s_i, d_i, q_i = cols.index("S"), cols.index("D"), cols.index("Q")
        for row in rows:
            parts = row.split(",")
            assert float(parts[q_i]) == min(float(parts[s_i]), float(parts[d_i]))


class TestCompare:
    def test_directory_against_itself_has_unit_ratios(self, tmp_path):
        out = run_experiment(small(), tmp_path / "out")
        rows = compare(out, out)
        for row in rows.values():
            if row["ratio"] is not None:
                assert row["ratio"] == 1.0

    def test_incompatible_manifests_rejected(self, tmp_path):
        out_a = run_experiment(small(), tmp_path / "a")
        out_b = run_experiment(small(), tmp_path / "b")
        manifest = json.loads((out_b / "manifest.json").read_text())
        manifest["schema_version"] = 99
        (out_b / "manifest.json").write_text(json.dumps(manifest))
        with pytest.raises(SchemaMismatch):
            compare(out_a, out_b)


class TestMainEntryPoint:
    def test_presets_command(self, capsys):
        assert main(["presets"]) == 0
        out = capsys.readouterr().out
        for name in PRESET_NAMES:
            assert f"# {name}" in out
        # printed parameters are resolved, not just names
        assert "p_up: 0.58" in out

    def test_simulate_with_preset(self, tmp_path, capsys):
        code = main(["simulate", "--preset", "baseline", "--runs", "2",
                     "--steps", "6", "--seed", "9",
                     "--out", str(tmp_path / "out")])
        assert code == 0
        assert (tmp_path / "out" / "trajectories.csv").exists()
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["config"]["run"] == {"steps": 6, "n_runs": 2,
                                             "base_seed": 9}

    def test_simulate_with_config_file(self, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text("preset: low_spec\nrun: {steps: 5, n_runs: 2, base_seed: 1}\n")
        assert main(["simulate", "--config", str(path),
                     "--out", str(tmp_path / "out")]) == 0

    def test_compare_command(self, tmp_path, capsys):
        main(["simulate", "--preset", "baseline", "--runs", "2", "--steps", "6",
              "--out", str(tmp_path / "a")])
        capsys.readouterr()
        assert main(["compare", str(tmp_path / "a"), str(tmp_path / "a")]) == 0
        out = capsys.readouterr().out
        assert "aggregated_growth_mean" in out

    def test_errors_are_machine_readable_and_nonzero(self, tmp_path, capsys):
        code = main(["simulate", "--preset", "baseline", "--config", "x.yaml",
                     "--out", str(tmp_path / "out")])
        assert code != 0
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "ValidationError"
        assert "--preset" in err["message"] or "preset" in err["message"]

    def test_missing_config_file_is_io_error(self, tmp_path, capsys):
        code = main(["simulate", "--config", str(tmp_path / "nope.yaml"),
                     "--out", str(tmp_path / "out")])
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "IoError"

    def test_invalid_config_value_exits_nonzero(self, tmp_path, capsys):
        path = tmp_path / "c.yaml"
        path.write_text("params: {gamma: 1.5}\n")
        code = main(["simulate", "--config", str(path),
                     "--out", str(tmp_path / "out")])
        assert code == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "ValidationError"
        assert "gamma" in err["message"]
