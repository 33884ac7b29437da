import json

import pytest

from steinerkit.bench import (
    BenchReport,
    BenchRow,
    metric_b,
    metric_gain,
    metric_r,
    reference_cost,
    run_bench,
    solve_with_method,
)
from steinerkit.generators import GeneratorConfig, generate
from steinerkit.graph import StpInstance
from steinerkit.qnet import init_params
from steinerkit.reductions import reduce_x3c
from steinerkit.solvers import dreyfus_wagner, kmb, verify_tree


def instances(count=4, n=9, seed0=0):
    return [generate(GeneratorConfig(model="er", n=n, terminal_ratio=0.4,
                                     weight_range=(1.0, 4.0), seed=seed0 + s))
            for s in range(count)]


class TestMetrics:
    def test_gain_value(self):
        assert metric_gain(86.0, 90.0) == pytest.approx(0.9556, abs=5e-5)

    def test_r_value(self):
        assert metric_r(90.0, 86.0) == pytest.approx(90 / 86)
        assert metric_r(86.0, 86.0) == 1.0

    def test_b_value(self):
        assert metric_b(8.0, 10.0) == pytest.approx(0.8)

    @pytest.mark.parametrize("fn", [metric_gain, metric_r, metric_b])
    def test_nonpositive_reference_rejected(self, fn):
        with pytest.raises(ValueError):
            fn(1.0, 0.0)


class TestBenchReport:
    def make_report(self):
        rows = [
            BenchRow("a", "classic", 4.0, 2.0, 2.0, 0.1),
            BenchRow("a", "exact", 2.0, 2.0, 1.0, 0.2),
            BenchRow("b", "classic", 3.0, 2.0, 1.5, 0.3),
            BenchRow("b", "exact", 2.0, 2.0, 1.0, 0.4),
        ]
        return BenchReport(reference_kind="exact", rows=rows)

    def test_methods_preserve_first_seen_order(self):
        assert self.make_report().methods() == ["classic", "exact"]

    def test_mean_ratio(self):
        rep = self.make_report()
        assert rep.mean_ratio("classic") == pytest.approx(1.75)
        assert rep.mean_ratio("exact") == 1.0
        with pytest.raises(ValueError, match="no rows"):
            rep.mean_ratio("agent")

    def test_aggregates(self):
        assert self.make_report().aggregates() == {
            "classic": pytest.approx(1.75), "exact": 1.0,
        }

    def test_json_timing_toggle(self, tmp_path):
        rep = self.make_report()
        p = tmp_path / "rep.json"
        rep.write_json(p, include_timing=False)
        payload = json.loads(p.read_text())
        assert all(r["wall_time"] == 0.0 for r in payload["rows"])
        assert payload["reference"] == "exact"
        rep.write_json(p, include_timing=True)
        payload = json.loads(p.read_text())
        assert payload["rows"][0]["wall_time"] == 0.1

    def test_csv_timing_toggle(self, tmp_path):
        rep = self.make_report()
        p = tmp_path / "rep.csv"
        rep.write_csv(p, include_timing=False)
        lines = p.read_text().splitlines()
        assert lines[0] == "instance,method,cost,reference,ratio,wall_time"
        assert lines[1] == "a,classic,4.0,2.0,2.0,0.0"


class TestSolveWithMethod:
    def test_classic_and_exact(self):
        inst = instances(1)[0]
        tree_c, wall_c = solve_with_method(inst, "classic")
        tree_e, wall_e = solve_with_method(inst, "exact")
        assert tree_e.cost <= tree_c.cost + 1e-9
        assert wall_c >= 0 and wall_e >= 0
        verify_tree(inst, tree_c.edges)
        verify_tree(inst, tree_e.edges)

    def test_agent_needs_params(self):
        with pytest.raises(ValueError, match="agent"):
            solve_with_method(instances(1)[0], "agent")

    def test_active_needs_params(self):
        with pytest.raises(ValueError, match="active"):
            solve_with_method(instances(1)[0], "active")

    def test_agent_runs_with_params(self):
        inst = instances(1)[0]
        tree, _ = solve_with_method(inst, "agent", params=init_params(2, 2, seed=0))
        assert tree.cost >= dreyfus_wagner(inst).cost - 1e-9

    def test_unknown_method(self):
        with pytest.raises(ValueError, match="unknown method"):
            solve_with_method(instances(1)[0], "magic")


class TestReferenceCost:
    def test_classic_and_exact(self):
        inst = instances(1)[0]
        assert reference_cost(inst, "classic") == kmb(inst).cost
        assert reference_cost(inst, "exact") == dreyfus_wagner(inst).cost

    def test_opt_requires_known_value(self):
        inst = instances(1)[0]
        with pytest.raises(ValueError, match="no known optimum"):
            reference_cost(inst, "opt")
        pinned = StpInstance(graph=inst.graph, terminals=inst.terminals,
                             known_opt=7.5, name="pinned")
        assert reference_cost(pinned, "opt") == 7.5

    def test_bound_from_reduction(self):
        red = reduce_x3c(6, [(0, 1, 2), (3, 4, 5)])
        assert reference_cost(red.instance, "bound") == red.bound

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown reference"):
            reference_cost(instances(1)[0], "fancy")


class TestRunBench:
    def test_ratios_against_exact(self):
        rep = run_bench(instances(4), ("classic", "exact"), reference="exact")
        assert len(rep.rows) == 8
        for row in rep.rows:
            if row.method == "exact":
                assert row.ratio == pytest.approx(1.0)
            else:
                assert 1.0 - 1e-9 <= row.ratio <= 2.0

    def test_row_order_instance_then_method(self):
        insts = instances(3)
        rep = run_bench(insts, ("classic", "exact"), reference="classic")
        expected = [(i.id, m) for i in insts for m in ("classic", "exact")]
        assert [(r.instance, r.method) for r in rep.rows] == expected

    def test_rejects_unknown_method(self):
        with pytest.raises(ValueError, match="unknown method"):
            run_bench(instances(1), ("classic", "psychic"))

    def test_parallel_matches_serial(self):
        insts = instances(3, n=8)
        params = init_params(2, 2, seed=1)
        serial = run_bench(insts, ("classic", "exact", "agent"),
                           reference="classic", params=params, workers=1)
        parallel = run_bench(insts, ("classic", "exact", "agent"),
                             reference="classic", params=params, workers=2)
        assert serial.to_dict(include_timing=False) == \
               parallel.to_dict(include_timing=False)

    def test_reports_reproducible_without_timing(self, tmp_path):
        insts = instances(2)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run_bench(insts, ("classic",)).write_json(a, include_timing=False)
        run_bench(insts, ("classic",)).write_json(b, include_timing=False)
        assert a.read_bytes() == b.read_bytes()
