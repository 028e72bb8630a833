"""Scenario execution: dispatch tasks to the analysis modules, collect a
Report, and write the on-disk artifacts (report.json, summary.txt, CSVs).

Tasks run sequentially in declared order; a failure in one task is captured
in its result and does not abort the rest.  The process exit code is
nonzero iff some task errored or a consistency flag fired.
"""

from __future__ import annotations

import math
import time
import traceback
from pathlib import Path

import numpy as np

from . import growth, iterates, weights
from .config import Scenario, Task
from .growth import make_plan
from .report import Report, TaskResult

_PLAN_KEY_MAP = {"r_min": "r_min", "r_max": "r_max", "num_radii": "num_radii",
                 "num_directions": "num_random_directions"}


def run_scenario(scenario: Scenario, out_dir: str | Path | None = None,
                 threads: int = 1) -> Report:
    plans: dict[int, growth.SamplingPlan] = {}

    def plan_for(n: int) -> growth.SamplingPlan:
        if n not in plans:
            kwargs = {_PLAN_KEY_MAP[k]: v for k, v in scenario.plan_params.items()}
            plans[n] = make_plan(n, seed=scenario.seed, **kwargs)
        return plans[n]

    results: list[TaskResult] = []
    artifacts: dict[str, str] = {}
    for task in scenario.tasks:
        start = time.perf_counter()
        try:
            res = _dispatch(task, scenario, plan_for, threads, artifacts)
        except Exception as exc:  # captured per task, run continues
            res = TaskResult(name=task.name, kind=task.kind, op="",
                             status="error",
                             error=f"{type(exc).__name__}: {exc}")
            res.payload = {"traceback": traceback.format_exc(limit=4)}
        res.wall_time = time.perf_counter() - start
        results.append(res)

    plan_desc = {str(n): p.describe() for n, p in sorted(plans.items())}
    report = Report(seed=scenario.seed, plan=plan_desc, tasks=results)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report.to_json())
        (out / "summary.txt").write_text(report.summary_text())
        for fname, text in artifacts.items():
            (out / fname).write_text(text)
    return report


def _dispatch(task: Task, sc: Scenario, plan_for, threads: int,
              artifacts: dict[str, str]) -> TaskResult:
    kind = task.kind
    p = task.params
    snap_den = int(p.get("snap_den", growth.DEFAULT_SNAP_DEN))
    if kind == "estimate_gamma":
        system = sc.systems[p["system"]]
        fit = growth.estimate_gamma(system, plan_for(system.num_vars),
                                    alpha_max=p.get("alpha_max"),
                                    max_den=snap_den, threads=threads)
        artifacts[f"{task.name}_directions.csv"] = _directions_csv(fit)
        return TaskResult(task.name, kind, "growth.estimate_gamma", "ok",
                          fit.as_dict())
    if kind == "estimate_h":
        weaker = sc.systems[p["weaker"]]
        stronger = sc.systems[p["stronger"]]
        fit = growth.estimate_h(weaker, stronger, plan_for(weaker.num_vars),
                                max_den=snap_den, threads=threads)
        artifacts[f"{task.name}_directions.csv"] = _directions_csv(fit)
        return TaskResult(task.name, kind, "growth.estimate_h", "ok",
                          fit.as_dict())
    if kind == "check_elliptic":
        system = sc.systems[p["system"]]
        rep = growth.check_elliptic(system, plan_for(system.num_vars),
                                    sphere_points=p.get("sphere_points", 10_000),
                                    threads=threads)
        return TaskResult(task.name, kind, "growth.check_elliptic", "ok",
                          rep.as_dict())
    if kind == "compare":
        first = sc.systems[p["first"]]
        second = sc.systems[p["second"]]
        rep = growth.compare_strength(first, second, plan_for(first.num_vars),
                                      max_den=snap_den, threads=threads)
        status = "flagged" if rep.consistency == "violation" else "ok"
        return TaskResult(task.name, kind, "growth.compare_strength", status,
                          rep.as_dict())
    if kind == "check_axioms":
        w = sc.weights[p["weight"]]
        rep = weights.check_weight_axioms(w, t_max=p.get("t_max", 1e6))
        return TaskResult(task.name, kind, "weights.check_weight_axioms", "ok",
                          rep.as_dict())
    if kind == "sandwich":
        w = sc.weights[p["weight"]]
        rep = weights.check_sup_sandwich(w, h=float(p["h"]), lam=float(p["lam"]),
                                         t=float(p["t"]),
                                         j_max=int(p.get("j_max", 10 ** 9)))
        status = "ok" if rep.passed else ("flagged" if rep.plateau else "ok")
        return TaskResult(task.name, kind, "weights.check_sup_sandwich", status,
                          rep.as_dict())
    if kind == "sandwich_sweep":
        return _sandwich_sweep(task, sc)
    if kind == "shift_bound":
        w = sc.weights[p["weight"]]
        ax = weights.check_weight_axioms(w)
        rep = weights.shift_constants(w, rho=float(p["rho"]), lam=float(p["lam"]),
                                      L_e=ax.L_e, j_max=int(p.get("j_max", 500)))
        return TaskResult(task.name, kind, "weights.shift_constants",
                          "ok" if rep.passed else "flagged", rep.as_dict())
    if kind == "iterate_norms":
        system = sc.systems[p["system"]]
        u = sc.functions[p["function"]]
        table = iterates.iterate_norm_table(system, u, sc.box,
                                            b_max=p.get("b_max"))
        artifacts[f"{task.name}_norms.csv"] = table.to_csv()
        finite = [v for v in table.entries.values() if math.isfinite(v)]
        payload = {"b_max": table.b_max, "num_entries": len(table.entries),
                   "log_norm_max": max(finite) if finite else None,
                   "log_norm_at_zero": table.entries[(0,) * system.size],
                   "log_domain": True}
        return TaskResult(task.name, kind, "iterates.iterate_norm_table", "ok",
                          payload)
    if kind == "seminorm":
        system = sc.systems[p["system"]]
        u = sc.functions[p["function"]]
        w = sc.weights[p["weight"]]
        table = iterates.iterate_norm_table(system, u, sc.box,
                                            b_max=p.get("b_max"))
        res = iterates.seminorm(table, w, float(p["lam"]))
        return TaskResult(task.name, kind, "iterates.seminorm", "ok",
                          res.as_dict())
    if kind == "classify":
        system = sc.systems[p["system"]]
        u = sc.functions[p["function"]]
        w = sc.weights[p["weight"]]
        table = iterates.iterate_norm_table(system, u, sc.box,
                                            b_max=p.get("b_max"))
        rep = iterates.classify_membership(table, w, system.order,
                                           mode=p.get("mode", "beurling"))
        return TaskResult(task.name, kind, "iterates.classify_membership", "ok",
                          rep.as_dict())
    if kind == "verify_inclusion":
        source = sc.systems[p["source"]]
        target = sc.systems[p["target"]]
        w = sc.weights[p["weight"]]
        testset = [sc.functions[name] for name in p["functions"]]
        rep = iterates.verify_inclusion(
            source, target, w, s=float(p["s"]), h=float(p["h"]),
            testset=testset, box=sc.box, mode=p.get("mode", "beurling"),
            b_max_source=p.get("b_max_source"),
            b_max_target=p.get("b_max_target"),
            plan=plan_for(source.num_vars))
        return TaskResult(task.name, kind, "iterates.verify_inclusion",
                          "ok" if rep.ok else "flagged", rep.as_dict())
    raise ValueError(f"unhandled task kind {kind!r}")


def _sandwich_sweep(task: Task, sc: Scenario) -> TaskResult:
    p = task.params
    cases = int(p.get("cases", 500))
    s_lo, s_hi = p.get("s_range", [1.1, 4.0])
    h_lo, h_hi = p.get("h_range", [0.5, 4.0])
    l_lo, l_hi = p.get("lam_range", [0.25, 4.0])
    t_lo, t_hi = p.get("log_t_range", [0.0, 10.0])
    rng = np.random.default_rng(sc.seed)
    failures = []
    for i in range(cases):
        s = float(rng.uniform(s_lo, s_hi))
        h = float(rng.uniform(h_lo, h_hi))
        lam = float(rng.uniform(l_lo, l_hi))
        t = float(np.exp(rng.uniform(t_lo, t_hi)))
        rep = weights.check_sup_sandwich(weights.GevreyWeight(s), h, lam, t)
        if not rep.passed:
            failures.append({"case": i, "s": s, "h": h, "lam": lam, "t": t,
                             **rep.as_dict()})
    payload = {"cases": cases, "passes": cases - len(failures),
               "failures": failures[:10]}
    return TaskResult(task.name, task.kind, "weights.check_sup_sandwich",
                      "ok" if not failures else "flagged", payload)


def _directions_csv(fit: growth.GrowthFit) -> str:
    rows = ["direction,exponent"]
    for direction, exponent in fit.per_direction:
        dtxt = " ".join(repr(c) for c in direction)
        if exponent is None:
            etxt = ""
        elif exponent == math.inf:
            etxt = "inf"
        else:
            etxt = repr(exponent)
        rows.append(f"{dtxt},{etxt}")
    return "\n".join(rows) + "\n"
