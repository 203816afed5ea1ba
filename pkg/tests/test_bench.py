from __future__ import annotations

import json

import pytest

from krnn import (
    PAPER_RESULTS,
    REGISTRY,
    BenchRecord,
    InstanceNotFoundError,
    InvalidOptimumError,
    desk_scale_names,
    emit_report,
    excess_percent,
    run_benchmark,
)
from krnn.bench import (
    DESK_SCALE_MAX_N,
    NAME_ALIASES,
    REPORT_COLUMNS,
    SCHEMA_VERSION,
    resolve_name,
)


class TestExcessPercent:
    def test_worked_examples(self):
        assert excess_percent(7968, 7542) == 5.65
        assert excess_percent(8181, 7542) == 8.47
        assert excess_percent(7542, 7542) == 0.0

    def test_half_up_rounding(self):
        # 100 * 5 / 4000 = 0.125 -> rounds half up to 0.13
        assert excess_percent(4005, 4000) == 0.13

    def test_published_columns_reproduce(self):
        # every published (result, excess) pair is self-consistent under
        # this arithmetic, for all 48 instances and both k
        for (name, k), (result, excess) in PAPER_RESULTS.items():
            assert excess_percent(result, REGISTRY[name].optimum) == excess, (name, k)

    def test_rejects_nonpositive_optimum(self):
        with pytest.raises(InvalidOptimumError):
            excess_percent(10, 0)
        with pytest.raises(InvalidOptimumError):
            excess_percent(10, -3)


class TestRegistry:
    def test_48_instances_96_published_cells(self):
        assert len(REGISTRY) == 48
        assert len(PAPER_RESULTS) == 96

    def test_entries_well_formed(self):
        for name, entry in REGISTRY.items():
            assert entry.name == name
            assert entry.n >= 17
            assert entry.optimum > 0

    def test_known_rows(self):
        assert REGISTRY["berlin52"].n == 52
        assert REGISTRY["berlin52"].optimum == 7542
        assert REGISTRY["brg180"].optimum == 1950
        assert PAPER_RESULTS[("brg180", 1)] == (8890, 355.90)
        assert PAPER_RESULTS[("ch150", 1)] == PAPER_RESULTS[("ch150", 2)]

    def test_monotone_k(self):
        # the published 2-RNN result never exceeds the 1-RNN result
        for name in REGISTRY:
            assert PAPER_RESULTS[(name, 2)][0] <= PAPER_RESULTS[(name, 1)][0], name

    def test_aliases_resolve(self):
        assert resolve_name("f1400") == "fl1400"
        assert resolve_name("f1417") == "fl417"
        assert resolve_name("berlin52") == "berlin52"
        assert set(NAME_ALIASES.values()) <= set(REGISTRY)

    def test_unknown_name_rejected(self):
        with pytest.raises(InstanceNotFoundError):
            resolve_name("atlantis99")

    def test_desk_scale_subset(self):
        names = desk_scale_names()
        assert names == sorted(names)
        assert all(REGISTRY[n].n <= DESK_SCALE_MAX_N for n in names)
        assert "berlin52" in names and "fl1400" not in names
        assert desk_scale_names(52) == ["berlin52", "dantzig42", "eil51", "fri26",
                                        "gr17", "gr21", "gr24", "gr48", "hk48", "swiss42"]


def make_record(**overrides):
    base = dict(
        name="fri26", n=26, optimum=937, k=2, status="ok",
        result_cost=959, excess=2.35, wall_time=0.01,
        paper_result=959, paper_excess=2.35,
    )
    base.update(overrides)
    return BenchRecord(**base)


class TestBenchRecord:
    def test_delta_and_divergence(self):
        assert make_record().delta == 0
        assert make_record().divergent is False
        off = make_record(result_cost=975)
        assert off.delta == 16
        assert off.divergent is True  # 16/937 > 1%
        near = make_record(result_cost=962)
        assert near.divergent is False

    def test_missing_fields_give_none(self):
        rec = make_record(status="unavailable", result_cost=None, excess=None,
                          wall_time=None, error="no such file")
        assert rec.delta is None and rec.divergent is None
        doc = rec.to_dict()
        assert doc["result"] is None and doc["error"] == "no such file"

    def test_times_opt_in(self):
        rec = make_record()
        assert rec.to_dict()["time"] is None
        assert rec.to_dict(include_times=True)["time"] == 0.01


class TestEmitReport:
    def test_csv_shape(self):
        out = emit_report([make_record(k=2), make_record(k=1, result_cost=965,
                                                         excess=2.99, paper_result=965,
                                                         paper_excess=2.99)], "csv")
        lines = out.splitlines()
        assert lines[0] == ",".join(REPORT_COLUMNS)
        assert len(lines) == 3
        assert lines[1].startswith("fri26,26,937,1,965,2.99,")
        assert out.endswith("\n")

    def test_csv_times_blank_without_flag(self):
        out = emit_report([make_record()], "csv")
        assert out.splitlines()[1].endswith(",")
        timed = emit_report([make_record()], "csv", include_times=True)
        assert timed.splitlines()[1].endswith("0.01")

    def test_json_envelope(self, monkeypatch):
        monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
        doc = json.loads(emit_report([make_record()], "json"))
        assert doc["schema_version"] == SCHEMA_VERSION
        assert doc["generated_at"] is None
        assert doc["records"][0]["name"] == "fri26"
        assert doc["records"][0]["delta"] == 0

    def test_json_stamp_from_epoch(self, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
        doc = json.loads(emit_report([], "json"))
        assert doc["generated_at"] == "1970-01-01T00:00:00Z"
        assert doc["records"] == []

    def test_markdown_table(self):
        out = emit_report([make_record()], "md")
        lines = out.splitlines()
        assert lines[0].startswith("| name | n | optimum |")
        assert set(lines[1].replace("|", "").split()) == {"---"}
        assert "| fri26 | 26 | 937 |" in lines[2]

    def test_rows_sorted_by_name_then_k(self):
        records = [make_record(name="gr17", n=17, optimum=2085, k=2,
                               result_cost=2178, excess=4.46,
                               paper_result=2178, paper_excess=4.46),
                   make_record(k=2), make_record(k=1)]
        lines = emit_report(records, "csv").splitlines()[1:]
        keys = [(line.split(",")[0], line.split(",")[3]) for line in lines]
        assert keys == sorted(keys)

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit_report([], "xml")


class TestRunBenchmark:
    def test_missing_file_is_reported_not_dropped(self, tmp_path):
        records = run_benchmark(["gr17"], ks=(1, 2), data_dir=tmp_path)
        assert [r.status for r in records] == ["unavailable", "unavailable"]
        assert all("gr17.tsp" in r.error for r in records)
        assert records[0].paper_result == 2178

    def test_fri26_results(self, data_dir, tsp):
        tsp("fri26")  # skip when the corpus is not fetched
        records = run_benchmark(["fri26"], ks=(1, 2), data_dir=data_dir)
        by_k = {r.k: r for r in records}
        assert by_k[1].result_cost == 965 and by_k[1].excess == 2.99
        assert by_k[2].result_cost == 959 and by_k[2].excess == 2.35
        assert by_k[1].delta == 0 and by_k[2].delta == 0
        assert all(r.status == "ok" for r in records)

    def test_alias_input(self, tmp_path):
        records = run_benchmark(["f1417"], ks=(1,), data_dir=tmp_path)
        assert records[0].name == "fl417"

    def test_budget_skip(self, data_dir, tsp):
        tsp("a280")
        records = run_benchmark(["a280"], ks=(2,), data_dir=data_dir,
                                budget_secs=1e-9)
        assert records[0].status == "skipped"
        assert "budget" in records[0].error

    def test_progress_lines(self, tmp_path):
        seen = []
        run_benchmark(["gr17"], ks=(1,), data_dir=tmp_path, progress=seen.append)
        assert seen and "gr17" in seen[0] and "unavailable" in seen[0]
