"""Scenario parsing/validation (all errors at once, with context) and
report serialization (lossless round trip, deterministic canonical form)."""

from pathlib import Path

import pytest

from iterlab.config import ConfigError, load_config, parse_config
from iterlab.report import Report, TaskResult

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

MINIMAL = """
seed = 7

[systems.P]
order = 2
polys = ["1 2 0", "1 0 2"]

[[tasks]]
kind = "estimate_gamma"
system = "P"
"""


def test_minimal_config_parses():
    sc = parse_config(MINIMAL)
    assert sc.seed == 7
    assert set(sc.systems) == {"P"}
    assert sc.tasks[0].kind == "estimate_gamma"
    assert sc.box is None and sc.plan_params == {}


def test_undeclared_weight_named_in_error():
    bad = MINIMAL + """
[[tasks]]
kind = "check_axioms"
weight = "w9"
"""
    with pytest.raises(ConfigError) as exc:
        parse_config(bad)
    assert any("'w9'" in e for e in exc.value.errors)
    assert len(exc.value.errors) == 1


def test_all_errors_reported_at_once():
    bad = """
seed = "zero"
junk = 1

[systems.P]
order = 0
polys = ["1 2 0"]

[systems.R]
order = 1
polys = ["nope 1 0"]

[weights.w]
kind = "mystery"

[[tasks]]
kind = "estimate_h"
weaker = "P"

[[tasks]]
kind = "launch"
"""
    with pytest.raises(ConfigError) as exc:
        parse_config(bad)
    text = "\n".join(exc.value.errors)
    assert "seed" in text
    assert "junk" in text
    assert "systems.P.order" in text
    assert "systems.R.polys[0]" in text
    assert "mystery" in text
    assert "stronger" in text          # missing required key
    assert "launch" in text            # unknown task kind
    assert len(exc.value.errors) >= 6


def test_error_includes_line_context():
    with pytest.raises(ConfigError) as exc:
        parse_config(MINIMAL + "\njunk_key = 3\n")
    assert any("line" in e for e in exc.value.errors)


def test_unknown_task_keys_rejected():
    bad = MINIMAL + """
[[tasks]]
kind = "estimate_gamma"
system = "P"
surprise = true
"""
    with pytest.raises(ConfigError) as exc:
        parse_config(bad)
    assert any("surprise" in e for e in exc.value.errors)


def test_box_required_for_norm_tasks():
    bad = MINIMAL + """
[functions.f]
kind = "plane_wave"
xi = [1, 0]

[weights.w]
kind = "gevrey"
s = 2.0

[[tasks]]
kind = "classify"
system = "P"
function = "f"
weight = "w"
"""
    with pytest.raises(ConfigError) as exc:
        parse_config(bad)
    assert any("requires a [box]" in e for e in exc.value.errors)


def test_tabulated_weight_loads_from_file(tmp_path):
    (tmp_path / "w.txt").write_text("1 0\n10 2\n100 6\n1000 12\n")
    cfg = tmp_path / "c.toml"
    cfg.write_text("""
[weights.tab]
kind = "tabulated"
file = "w.txt"

[[tasks]]
kind = "sandwich"
weight = "tab"
h = 1.0
lam = 1.0
t = 5.0
""")
    sc = load_config(cfg)
    assert sc.weights["tab"].omega(10.0) == pytest.approx(2.0)


def test_empty_task_list_is_valid():
    sc = parse_config("seed = 1\n")
    assert sc.tasks == [] and sc.seed == 1
    from iterlab.runner import run_scenario
    rep = run_scenario(sc)
    assert rep.exit_code == 0 and rep.tasks == []


def test_shipped_scenarios_parse():
    for name in ("example_3_13", "gradient_vs_laplacian",
                 "weight_axioms_gevrey", "lemma_4_7_sweep"):
        sc = load_config(SCENARIOS / f"{name}.toml")
        assert sc.tasks


def test_example_scenario_contents():
    sc = load_config(SCENARIOS / "example_3_13.toml")
    P = sc.systems["P"]
    Q = sc.systems["Q"]
    assert P.size == 2 and P.order == 2
    assert Q.size == 1 and Q.order == 2
    assert sc.weights["gev2"].describe() == {"kind": "gevrey", "s": 2.0}
    kinds = [t.kind for t in sc.tasks]
    assert kinds.count("verify_inclusion") == 2


def test_report_round_trip_and_determinism():
    rep = Report(seed=3, plan={"2": {"seed": 3}}, tasks=[
        TaskResult(name="00_x", kind="estimate_h", op="growth.estimate_h",
                   status="ok", payload={"raw": 0.5, "inf": float("inf")},
                   wall_time=1.23),
        TaskResult(name="01_y", kind="compare", op="growth.compare_strength",
                   status="flagged", payload={}, error=None, wall_time=0.5),
    ])
    text = rep.to_json()
    again = Report.from_json(text)
    assert again.to_json() == text
    assert again.seed == 3 and again.tasks[1].status == "flagged"
    # wall times are summary-only
    assert "1.23" not in text
    assert "1.23" in rep.summary_text()
    assert rep.exit_code == 1


def test_report_exit_code_ok():
    rep = Report(seed=0, plan={}, tasks=[
        TaskResult(name="00", kind="sandwich", op="w.c", status="ok")])
    assert rep.exit_code == 0
