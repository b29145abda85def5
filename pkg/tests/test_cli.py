"""Tests for the batch runner: manifest validation, exit-status contract,
deterministic report serialization, parallel execution, and the coset
enumeration entry point."""

import json
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from e8g2 import cli
from e8g2.cli import (
    DEFAULT_MANIFEST,
    REGISTRY,
    Manifest,
    ManifestEntry,
    RunConfig,
    UsageError,
    emit,
    run,
)
from e8g2.zeta import REPORT_FIELDS, CheckReport, SingularShift


def synthetic_report(check_id: str, status: str) -> CheckReport:
    return CheckReport(check_id, "synthetic", status, "x", "x", None, 0)


def synthetic_registry(statuses):
    reg = {}
    for i, status in enumerate(statuses):
        cid = f"syn.{i}"

        def func(params, config, _cid=cid, _status=status):
            return synthetic_report(_cid, _status)

        reg[cid] = (func, frozenset(), status == "report-only")
    return reg


# -- configuration and manifest validation -----------------------------------


class TestConfig:
    def test_degree_must_be_positive(self):
        with pytest.raises(UsageError):
            RunConfig(truncation_degree=0)

    def test_format_checked(self):
        with pytest.raises(UsageError):
            RunConfig(format="yaml")

    def test_parallelism_checked(self):
        with pytest.raises(UsageError):
            RunConfig(parallelism=0)

    def test_defaults(self):
        config = RunConfig()
        assert (config.truncation_degree, config.format,
                config.parallelism, config.output) == (10, "text", 1, None)


class TestManifest:
    def test_unknown_entry_key_rejected(self):
        with pytest.raises(UsageError, match="unknown keys"):
            Manifest.from_obj([{"id": "zeta.check3", "when": "now"}])

    def test_non_list_rejected(self):
        with pytest.raises(UsageError):
            Manifest.from_obj({"id": "zeta.check3"})

    def test_missing_id_rejected(self):
        with pytest.raises(UsageError):
            Manifest.from_obj([{"params": {}}])

    def test_non_dict_params_rejected(self):
        with pytest.raises(UsageError):
            Manifest.from_obj([{"id": "zeta.check3", "params": [10]}])

    def test_unknown_check_id_rejected(self):
        manifest = Manifest.from_obj([{"id": "zeta.bogus"}])
        with pytest.raises(UsageError, match="unknown check id"):
            run(manifest, RunConfig())

    def test_unknown_param_name_rejected(self):
        manifest = Manifest.from_obj([{"id": "zeta.check3", "params": {"deg": 3}}])
        with pytest.raises(UsageError, match="does not take params"):
            run(manifest, RunConfig())

    def test_non_integer_param_rejected(self):
        manifest = Manifest.from_obj([{"id": "zeta.check3", "params": {"D": "3"}}])
        with pytest.raises(UsageError, match="must be an integer"):
            run(manifest, RunConfig())

    def test_default_manifest_is_acceptance_suite(self):
        ids = [e.id for e in DEFAULT_MANIFEST.entries]
        assert ids == [
            "weyl.double_cosets", "rootsys.root_data", "cheval.structure",
            "cheval.conditions", "zeta.gk_products", "zeta.closed_forms",
            "zeta.check3", "zeta.sum_cases", "zeta.end_to_end",
            "g2chars.characters"]
        by_id = {e.id: e.params for e in DEFAULT_MANIFEST.entries}
        assert by_id["zeta.check3"] == {"D": 10}
        assert by_id["zeta.end_to_end"] == {"D": 8}
        assert by_id["zeta.sum_cases"] == {"n_max": 6, "m_max": 4}
        assert all(e.id in REGISTRY for e in DEFAULT_MANIFEST.entries)


# -- exit-status contract ---------------------------------------------------


class TestExitContract:
    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.sampled_from(["pass", "fail", "report-only"]), max_size=6))
    def test_synthetic_statuses(self, statuses):
        reg = synthetic_registry(statuses)
        manifest = Manifest(tuple(ManifestEntry(cid) for cid in reg))
        status, reports = run(manifest, RunConfig(), registry=reg)
        assert status == (1 if "fail" in statuses else 0)
        assert [r.id for r in reports] == [e.id for e in manifest.entries]
        assert [r.status for r in reports] == statuses

    def test_empty_manifest_passes(self):
        status, reports = run(Manifest(()), RunConfig())
        assert status == 0 and reports == []
        assert emit(reports, "json") == "[]\n"
        assert emit(reports, "text") == ""

    def test_report_only_does_not_gate_exit(self):
        reg = synthetic_registry(["report-only"])
        status, reports = run(
            Manifest((ManifestEntry("syn.0"),)), RunConfig(), registry=reg)
        assert status == 0
        assert reports[0].status == "report-only"

    def test_internal_error_exit_code(self, monkeypatch, capsys):
        def boom(params, config):
            raise SingularShift("engineered for the test")

        monkeypatch.setitem(cli.REGISTRY, "syn.boom", (boom, frozenset(), False))
        code = cli.main(["e8g2", "--check", "syn.boom"])
        assert code == 3
        assert "internal arithmetic error" in capsys.readouterr().err

    def test_unknown_id_exit_code(self, capsys):
        code = cli.main(["e8g2", "--check", "zeta.bogus"])
        assert code == 2
        assert "unknown check id" in capsys.readouterr().err


# -- real checks through the runner ------------------------------------------


def small_manifest():
    return Manifest((
        ManifestEntry("zeta.check3", {"D": 2}),
        ManifestEntry("zeta.gk_products"),
        ManifestEntry("zeta.pole_factors", {"order": 3}),
    ))


class TestRunner:
    def test_reports_in_manifest_order(self):
        status, reports = run(small_manifest(), RunConfig())
        assert status == 0
        assert [r.id for r in reports] == [
            "zeta.check3", "zeta.gk_products", "zeta.pole_factors"]
        assert [r.status for r in reports] == ["pass", "pass", "report-only"]
        assert reports[0].truncation == 2

    def test_degree_fallback_without_explicit_param(self):
        manifest = Manifest((ManifestEntry("zeta.check3"),))
        _, reports = run(manifest, RunConfig(truncation_degree=3))
        assert reports[0].truncation == 3

    def test_parallel_matches_serial(self):
        manifest = small_manifest()
        _, serial = run(manifest, RunConfig())
        _, parallel = run(manifest, RunConfig(parallelism=2))
        assert [r.id for r in serial] == [r.id for r in parallel]
        assert [r.status for r in serial] == [r.status for r in parallel]
        assert [r.computed for r in serial] == [r.computed for r in parallel]

    def test_json_deterministic_excluding_runtime(self):
        def normalized():
            _, reports = run(small_manifest(), RunConfig(format="json"))
            return re.sub(r'"runtime_ms": \d+', '"runtime_ms": 0',
                          emit(reports, "json"))

        assert normalized() == normalized()

    def test_json_key_order_is_schema_order(self):
        _, reports = run(small_manifest(), RunConfig())
        rows = json.loads(emit(reports, "json"),
                          object_pairs_hook=lambda pairs: pairs)
        for row in rows:
            assert [k for k, _ in row] == list(REPORT_FIELDS)

    def test_text_one_line_per_check(self):
        _, reports = run(small_manifest(), RunConfig())
        lines = emit(reports, "text").splitlines()
        assert len(lines) == 3
        assert lines[0].startswith("pass") and "zeta.check3" in lines[0]
        assert lines[2].startswith("report-only")

    def test_failing_report_line_shows_diff(self):
        rep = CheckReport("syn.bad", "synthetic", "fail",
                          {"count": 1}, {"count": 2}, None, 0)
        line = emit([rep], "text").splitlines()[0]
        assert "expected=" in line and '"count": 1' in line
        assert "computed=" in line and '"count": 2' in line


# -- command-line entry points ----------------------------------------------


class TestMain:
    def test_check_flag_json_output(self, capsys):
        code = cli.main(["e8g2", "--check", "zeta.check3", "--degree", "2",
                         "--json"])
        assert code == 0
        rows = json.loads(capsys.readouterr().out)
        assert rows[0]["id"] == "zeta.check3"
        assert rows[0]["status"] == "pass"
        assert rows[0]["truncation"] == 2

    def test_manifest_file(self, tmp_path, capsys):
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps(
            [{"id": "zeta.check3", "params": {"D": 2}},
             {"id": "zeta.tau_points"}]))
        code = cli.main(["e8g2", "--manifest", str(path), "--json"])
        assert code == 0
        rows = json.loads(capsys.readouterr().out)
        assert [r["id"] for r in rows] == ["zeta.check3", "zeta.tau_points"]

    def test_all_flag_covers_registry(self, monkeypatch, capsys):
        seen = []

        def record(manifest, config, registry=None):
            seen.extend(e.id for e in manifest.entries)
            return 0, []

        monkeypatch.setattr(cli, "run", record)
        assert cli.main(["e8g2", "--all"]) == 0
        assert seen == list(REGISTRY)

    def test_output_file(self, tmp_path):
        out = tmp_path / "report.json"
        code = cli.main(["e8g2", "--check", "zeta.check3", "--degree", "2",
                         "--json", "--output", str(out)])
        assert code == 0
        rows = json.loads(out.read_text())
        assert rows[0]["status"] == "pass"

    def test_unwritable_output(self, tmp_path, capsys):
        target = tmp_path / "missing-dir" / "report.json"
        code = cli.main(["e8g2", "--check", "zeta.check3", "--degree", "2",
                         "--output", str(target)])
        assert code == 2
        assert "cannot write" in capsys.readouterr().err

    def test_bad_degree(self, capsys):
        assert cli.main(["e8g2", "--check", "zeta.check3", "--degree", "0"]) == 2

    def test_bad_manifest_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert cli.main(["e8g2", "--manifest", str(path)]) == 2

    def test_enumerate_dispatch_small(self, capsys):
        code = cli.main(["weyl-enumerate",
                         "--left", "1,2,3,4,5,6,7,8",
                         "--right", "1,2,3,4,5,6,7,8"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "1"
        assert lines[1] == ""  # the identity's reduced word is empty

    def test_enumerate_bad_subset(self, capsys):
        code = cli.main(["weyl-enumerate", "--left", "M2", "--right", "4,9"])
        assert code == 2

    def test_enumerate_flagship_counts(self, capsys):
        code = cli.main(["weyl-enumerate", "--left", "M2", "--right", "4,7"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "6576"
        assert len(lines) == 6577
        # spot-check: every emitted word is nonempty past the identity and
        # uses only node labels
        assert all(set(w) <= set("12345678") for w in lines[1:])
