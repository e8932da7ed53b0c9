"""Command-line entry points and the line-oriented experiment runner."""

import json

import pytest

from catoolkit import (ExperimentSpec, parse_experiment, parse_rule,
                       run_experiment, serialize_experiment)
from catoolkit.cli import main
from conftest import DATA_DIR

SHIPPED_EXPERIMENTS = sorted(p.name for p in DATA_DIR.glob("*.exp"))


def run_cli(monkeypatch, capsys, cwd, *argv):
    monkeypatch.chdir(cwd)
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestStandaloneCommands:
    def test_entropy_json_fields(self, monkeypatch, capsys, data_copy):
        code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                               "--json", "entropy", "--rule", "021.ca",
                               "--n", "1", "--t", "6")
        assert code == 0
        doc = json.loads(out)
        assert doc["command"] == "entropy"
        assert doc["estimate"] == "0.532065"
        assert doc["count_t"] == "23" and doc["count_prev"] == "11"

    def test_trace_expectation_pass_and_fail(self, monkeypatch, capsys,
                                             data_copy):
        code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                               "trace", "--rule", "021.ca",
                               "--n", "1", "--t", "4", "--expect", "11")
        assert code == 0 and "status=pass" in out
        code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                               "trace", "--rule", "021.ca",
                               "--n", "1", "--t", "4", "--expect", "10")
        assert code == 1 and "status=fail" in out

    def test_check_reversible_writes_a_working_inverse(
            self, monkeypatch, capsys, data_copy):
        code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                               "--out", "inv.ca", "check-reversible",
                               "--rule", "021.ca", "--radius", "1",
                               "--expect", "yes")
        assert code == 0
        assert "found=yes inverse_radius=1" in out
        from catoolkit import compose, equal_ca, identity_rule, rule_021
        inv = parse_rule((data_copy / "inv.ca").read_text())
        assert equal_ca(compose(inv, rule_021()), identity_rule(3))

    def test_check_reversible_negative(self, monkeypatch, capsys, data_copy):
        code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                               "check-reversible", "--rule", "h_spread.ca",
                               "--radius", "2", "--expect", "no")
        assert code == 0 and "found=no" in out

    def test_sim_payload(self, monkeypatch, capsys, data_copy):
        code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                               "sim", "--rule", "021.ca",
                               "--init", "12", "--steps", "2")
        assert code == 0
        assert out.endswith("12\n20\n10\n")

    def test_sim_two_dimensional_init(self, monkeypatch, capsys, data_copy):
        code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                               "sim", "--rule", "east2.orient",
                               "--init", "00/00", "--steps", "1")
        assert code == 2  # orientations do not simulate as rule tables
        _, _, err = run_cli(monkeypatch, capsys, data_copy,
                            "sim", "--rule", "east2.orient",
                            "--init", "00/00", "--steps", "1")
        assert "error:" in err

    @pytest.mark.filterwarnings("ignore:k <= log2")
    def test_reduce_then_verify(self, monkeypatch, capsys, data_copy):
        code, _, _ = run_cli(monkeypatch, capsys, data_copy,
                             "reduce", "--h", "h_step.ca", "--q", "2",
                             "--k", "1", "--n", "2",
                             "--out-f", "f.ca", "--out-g", "g.ca",
                             "--out-phi", "phi.ca")
        assert code == 0
        code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                               "verify-witness", "--phi", "phi.ca",
                               "--f", "f.ca", "--g", "g.ca", "--radius", "3")
        assert code == 0
        assert "homomorphism=pass invertible=pass witnessed=yes" in out

    @pytest.mark.filterwarnings("ignore:k <= log2")
    def test_verify_witness_failure_exit_code(self, monkeypatch, capsys,
                                              data_copy):
        run_cli(monkeypatch, capsys, data_copy,
                "reduce", "--h", "h_spread.ca", "--q", "1", "--k", "1",
                "--n", "1", "--out-f", "f.ca", "--out-g", "g.ca",
                "--out-phi", "phi.ca")
        code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                               "verify-witness", "--phi", "phi.ca",
                               "--f", "f.ca", "--g", "g.ca", "--radius", "2")
        assert code == 1 and "witnessed=no" in out

    def test_graph_sft_listing(self, monkeypatch, capsys, data_copy):
        code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                               "graph-sft", "--rule", "021.ca")
        assert code == 0
        assert "width=2 anchor=0 forbidden=54" in out
        assert "(0,1) (0,0)" in out  # 021 sends 00 to 0, so (0,1) is forbidden

    def test_paths_grid(self, monkeypatch, capsys, data_copy):
        code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                               "paths", "--orient", "turns4.orient",
                               "--grid", "03/12")
        assert code == 0
        assert "paths=0 cycles=1 acyclic=no" in out
        assert "cycle: 0,0 1,0 1,1 0,1" in out

    def test_missing_input_file(self, monkeypatch, capsys, data_copy):
        code, _, err = run_cli(monkeypatch, capsys, data_copy,
                               "entropy", "--rule", "missing.ca",
                               "--n", "1", "--t", "4")
        assert code == 2
        assert "input file not found" in err

    def test_budget_exhaustion(self, monkeypatch, capsys, data_copy):
        code, _, err = run_cli(monkeypatch, capsys, data_copy,
                               "--budget", "10", "entropy",
                               "--rule", "021.ca", "--n", "1", "--t", "12")
        assert code == 2
        assert "budget" in err

    def test_unknown_subcommand(self, monkeypatch, capsys, data_copy):
        with pytest.raises(SystemExit):
            run_cli(monkeypatch, capsys, data_copy, "frobnicate")


class TestExperimentFiles:
    @pytest.mark.parametrize("name", SHIPPED_EXPERIMENTS)
    def test_round_trip(self, name):
        # comments are allowed in the files but are not part of the spec,
        # so the identity holds at the object level and the canonical text
        # produced by the serializer is a fixed point
        text = (DATA_DIR / name).read_text()
        spec = parse_experiment(text)
        canonical = serialize_experiment(spec)
        assert parse_experiment(canonical) == spec
        assert serialize_experiment(parse_experiment(canonical)) == canonical

    def test_unknown_command_rejected(self):
        with pytest.raises(ValueError, match="unknown experiment command"):
            ExperimentSpec("out", (("frobnicate", {}),))

    def test_first_entry_must_be_outdir(self):
        with pytest.raises(ValueError, match="outdir"):
            parse_experiment("trace rule=021.ca n=1 t=3 expect=7\n")

    @pytest.mark.filterwarnings("ignore:k <= log2")
    @pytest.mark.parametrize("name", SHIPPED_EXPERIMENTS)
    def test_shipped_experiments_pass(self, name, monkeypatch, capsys,
                                      data_copy):
        code, out, err = run_cli(monkeypatch, capsys, data_copy, "run", name)
        assert code == 0, err
        report = out
        assert "status=fail" not in report
        outdir = data_copy / "out" / name[:-len(".exp")]
        assert (outdir / "report.txt").read_text() == report

    @pytest.mark.filterwarnings("ignore:k <= log2")
    def test_reports_are_reproducible(self, monkeypatch, capsys, data_copy):
        first = {}
        for name in SHIPPED_EXPERIMENTS:
            code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                                   "run", name)
            assert code == 0
            first[name] = out
        for name in SHIPPED_EXPERIMENTS:
            code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                                   "run", name)
            assert code == 0
            assert out == first[name]

    def test_timing_goes_to_stderr_not_the_report(self, monkeypatch, capsys,
                                                  data_copy):
        _, out, err = run_cli(monkeypatch, capsys, data_copy,
                              "run", "zeta.exp")
        assert "timing" in err
        assert "timing" not in out and "ms" not in out

    def test_zot_cycle_returns_to_start(self, monkeypatch, capsys,
                                        data_copy):
        run_cli(monkeypatch, capsys, data_copy, "run", "paths.exp")
        before = (data_copy / "path3_zot.pathcfg").read_text()
        after = (data_copy / "out" / "paths" / "zot27.pathcfg").read_text()
        assert after == before

    def test_run_experiment_api(self, data_copy):
        spec = parse_experiment((data_copy / "zeta.exp").read_text())
        report, passed, results = run_experiment(spec, data_copy)
        assert passed
        assert len(results) == len(spec.commands)
        assert report.count("\n") == len(spec.commands)

    def test_failing_expectation_fails_the_run(self, monkeypatch, capsys,
                                               tmp_path, data_copy):
        bad = "outdir: out/bad\ntrace rule=021.ca n=1 t=3 expect=8\n"
        (data_copy / "bad.exp").write_text(bad)
        code, out, _ = run_cli(monkeypatch, capsys, data_copy,
                               "run", "bad.exp")
        assert code == 1
        assert "status=fail" in out
        # the report is still written for post-mortems
        assert (data_copy / "out" / "bad" / "report.txt").exists()
