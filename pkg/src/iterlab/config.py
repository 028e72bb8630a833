"""Scenario configuration: TOML tables declaring systems, weights, test
functions, a box, a sampling plan, and an ordered task list.

parse_config validates everything up front and reports *all* problems at
once (unknown keys, undeclared references, bad parameters), each with the
table path and, where the key can be located in the source, a line number.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .functions import Box, PlaneWave, PolyGaussian, TestFunction
from .polynomials import MultiPoly, OperatorSystem, parse_poly
from .weights import (GevreyWeight, LogPowerWeight, RescaledWeight,
                      TabulatedWeight, WeightFunction)


class ConfigError(ValueError):
    """Carries every validation problem found in a scenario config."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid scenario config:\n" +
                         "\n".join(f"  - {e}" for e in self.errors))


@dataclass
class Task:
    name: str
    kind: str
    params: dict


@dataclass
class Scenario:
    seed: int
    systems: dict[str, OperatorSystem]
    weights: dict[str, WeightFunction]
    functions: dict[str, TestFunction]
    box: Box | None
    plan_params: dict
    tasks: list[Task]


_TOP_KEYS = {"seed", "systems", "weights", "functions", "box", "plan", "tasks"}
_PLAN_KEYS = {"r_min", "r_max", "num_radii", "num_directions"}

_TASK_KEYS: dict[str, dict[str, set[str]]] = {
    # kind -> {"required": ..., "optional": ...}
    "estimate_gamma": {"required": {"system"},
                       "optional": {"alpha_max", "snap_den"}},
    "estimate_h": {"required": {"weaker", "stronger"}, "optional": {"snap_den"}},
    "check_elliptic": {"required": {"system"}, "optional": {"sphere_points"}},
    "compare": {"required": {"first", "second"}, "optional": {"snap_den"}},
    "check_axioms": {"required": {"weight"}, "optional": {"t_max"}},
    "sandwich": {"required": {"weight", "h", "lam", "t"}, "optional": {"j_max"}},
    "sandwich_sweep": {"required": set(),
                       "optional": {"cases", "s_range", "h_range", "lam_range",
                                    "log_t_range"}},
    "shift_bound": {"required": {"weight", "rho", "lam"}, "optional": {"j_max"}},
    "iterate_norms": {"required": {"system", "function"}, "optional": {"b_max"}},
    "seminorm": {"required": {"system", "function", "weight", "lam"},
                 "optional": {"b_max"}},
    "classify": {"required": {"system", "function", "weight"},
                 "optional": {"mode", "b_max"}},
    "verify_inclusion": {"required": {"source", "target", "weight", "s", "h",
                                      "functions"},
                         "optional": {"mode", "b_max_source", "b_max_target"}},
}

_NEEDS_BOX = {"iterate_norms", "seminorm", "classify", "verify_inclusion"}


def load_config(path: str | Path) -> Scenario:
    p = Path(path)
    return parse_config(p.read_text(), base_dir=p.parent)


def parse_config(text: str, base_dir: Path | None = None) -> Scenario:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError([f"TOML syntax: {exc}"]) from exc
    errors: list[str] = []

    def fail(path: str, message: str):
        line = _line_of(text, path.split(".")[-1].split("[")[0])
        where = f"{path} (line {line})" if line else path
        errors.append(f"{where}: {message}")

    for key in data:
        if key not in _TOP_KEYS:
            fail(key, "unknown top-level key")

    seed = data.get("seed", 0)
    if not isinstance(seed, int):
        fail("seed", "must be an integer")
        seed = 0

    systems = _parse_systems(data.get("systems", {}), fail)
    weights = _parse_weights(data.get("weights", {}), base_dir, fail)
    functions = _parse_functions(data.get("functions", {}), fail)
    box = _parse_box(data.get("box"), fail)
    plan_params = _parse_plan(data.get("plan", {}), fail)
    tasks = _parse_tasks(data.get("tasks", []), systems, weights, functions,
                         box, fail)
    if errors:
        raise ConfigError(errors)
    return Scenario(seed=seed, systems=systems, weights=weights,
                    functions=functions, box=box, plan_params=plan_params,
                    tasks=tasks)


def _line_of(text: str, token: str) -> int | None:
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0]
        if token and token in stripped:
            return i
    return None


def _parse_systems(raw, fail) -> dict[str, OperatorSystem]:
    out: dict[str, OperatorSystem] = {}
    if not isinstance(raw, dict):
        fail("systems", "must be a table of named systems")
        return out
    for name, spec in raw.items():
        path = f"systems.{name}"
        if not isinstance(spec, dict):
            fail(path, "must be a table")
            continue
        unknown = set(spec) - {"order", "polys", "num_vars"}
        for k in unknown:
            fail(f"{path}.{k}", "unknown key")
        order = spec.get("order")
        if not isinstance(order, int) or order < 1:
            fail(f"{path}.order", "must be a positive integer")
            continue
        polys_raw = spec.get("polys")
        if not isinstance(polys_raw, list) or not polys_raw:
            fail(f"{path}.polys", "must be a non-empty list of term-list strings")
            continue
        n = spec.get("num_vars")
        polys = []
        ok = True
        for i, ptext in enumerate(polys_raw):
            try:
                p = parse_poly(str(ptext), n)
                n = p.num_vars
                polys.append(p)
            except ValueError as exc:
                fail(f"{path}.polys[{i}]", str(exc))
                ok = False
        if not ok:
            continue
        try:
            out[name] = OperatorSystem(tuple(polys), order)
        except ValueError as exc:
            fail(path, str(exc))
    return out


def _parse_weights(raw, base_dir, fail) -> dict[str, WeightFunction]:
    out: dict[str, WeightFunction] = {}
    if not isinstance(raw, dict):
        fail("weights", "must be a table of named weights")
        return out
    for name, spec in raw.items():
        path = f"weights.{name}"
        if not isinstance(spec, dict):
            fail(path, "must be a table")
            continue
        kind = spec.get("kind")
        try:
            if kind == "gevrey":
                _reject_extra(spec, {"kind", "s"}, path, fail)
                out[name] = GevreyWeight(float(spec["s"]))
            elif kind == "log_power":
                _reject_extra(spec, {"kind", "p"}, path, fail)
                out[name] = LogPowerWeight(float(spec["p"]))
            elif kind == "rescaled":
                _reject_extra(spec, {"kind", "base", "a"}, path, fail)
                base = spec.get("base")
                if base not in out:
                    fail(f"{path}.base",
                         f"undeclared base weight {base!r} (must be declared earlier)")
                    continue
                out[name] = RescaledWeight(out[base], float(spec["a"]))
            elif kind == "tabulated":
                _reject_extra(spec, {"kind", "file", "ts", "values"}, path, fail)
                if "file" in spec:
                    fpath = Path(spec["file"])
                    if base_dir is not None and not fpath.is_absolute():
                        fpath = base_dir / fpath
                    out[name] = TabulatedWeight.from_text(fpath.read_text())
                else:
                    out[name] = TabulatedWeight(spec["ts"], spec["values"])
            else:
                fail(f"{path}.kind", f"unknown weight kind {kind!r}")
        except (KeyError, TypeError, ValueError, OSError) as exc:
            fail(path, f"bad weight declaration: {exc}")
    return out


def _parse_functions(raw, fail) -> dict[str, TestFunction]:
    out: dict[str, TestFunction] = {}
    if not isinstance(raw, dict):
        fail("functions", "must be a table of named test functions")
        return out
    for name, spec in raw.items():
        path = f"functions.{name}"
        if not isinstance(spec, dict):
            fail(path, "must be a table")
            continue
        kind = spec.get("kind")
        try:
            if kind == "plane_wave":
                _reject_extra(spec, {"kind", "xi", "coef"}, path, fail)
                xi = [Fraction(str(x)) if isinstance(x, str) else Fraction(x)
                      for x in spec["xi"]]
                coef = spec.get("coef", 1)
                out[name] = PlaneWave(tuple(xi), Fraction(str(coef))
                                      if isinstance(coef, str) else Fraction(coef))
            elif kind == "poly_gaussian":
                _reject_extra(spec, {"kind", "poly", "poly_im", "scale"}, path, fail)
                pre = parse_poly(str(spec["poly"]))
                scale = spec["scale"]
                scale = Fraction(str(scale)) if isinstance(scale, str) else Fraction(scale)
                if "poly_im" in spec:
                    pim = parse_poly(str(spec["poly_im"]), pre.num_vars)
                else:
                    pim = MultiPoly.zero(pre.num_vars)
                out[name] = PolyGaussian(pre, pim, scale)
            else:
                fail(f"{path}.kind", f"unknown function kind {kind!r}")
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            fail(path, f"bad function declaration: {exc}")
    return out


def _parse_box(raw, fail) -> Box | None:
    if raw is None:
        return None
    if not isinstance(raw, dict) or set(raw) != {"lower", "upper"}:
        fail("box", "must be a table with exactly 'lower' and 'upper' arrays")
        return None
    try:
        return Box(tuple(raw["lower"]), tuple(raw["upper"]))
    except (TypeError, ValueError) as exc:
        fail("box", str(exc))
        return None


def _parse_plan(raw, fail) -> dict:
    if not isinstance(raw, dict):
        fail("plan", "must be a table")
        return {}
    out = {}
    for k, v in raw.items():
        if k not in _PLAN_KEYS:
            fail(f"plan.{k}", "unknown key")
            continue
        out[k] = int(v) if k in ("num_radii", "num_directions") else float(v)
    if "num_radii" in out and out["num_radii"] < 2:
        fail("plan.num_radii", "must be at least 2")
    return out


def _parse_tasks(raw, systems, weights, functions, box, fail) -> list[Task]:
    tasks: list[Task] = []
    if not isinstance(raw, list):
        fail("tasks", "must be an array of tables")
        return tasks
    for i, spec in enumerate(raw):
        path = f"tasks[{i}]"
        if not isinstance(spec, dict):
            fail(path, "must be a table")
            continue
        kind = spec.get("kind")
        if kind not in _TASK_KEYS:
            fail(f"{path}.kind", f"unknown task kind {kind!r}")
            continue
        allowed = _TASK_KEYS[kind]
        params = {k: v for k, v in spec.items() if k != "kind"}
        for k in set(params) - allowed["required"] - allowed["optional"]:
            fail(f"{path}.{k}", f"unknown key for task kind {kind!r}")
        for k in allowed["required"] - set(params):
            fail(f"{path}.{k}", f"missing required key for task kind {kind!r}")
        for key, pool, label in (
            ("system", systems, "system"), ("weaker", systems, "system"),
            ("stronger", systems, "system"), ("first", systems, "system"),
            ("second", systems, "system"), ("source", systems, "system"),
            ("target", systems, "system"), ("weight", weights, "weight"),
            ("function", functions, "function"),
        ):
            if key in params and params[key] not in pool:
                fail(f"{path}.{key}", f"undeclared {label} {params[key]!r}")
        if kind == "verify_inclusion" and isinstance(params.get("functions"), list):
            for fname in params["functions"]:
                if fname not in functions:
                    fail(f"{path}.functions", f"undeclared function {fname!r}")
        if kind in _NEEDS_BOX and box is None:
            fail(path, f"task kind {kind!r} requires a [box] table")
        if "mode" in params and params["mode"] not in ("beurling", "roumieu"):
            fail(f"{path}.mode", "must be 'beurling' or 'roumieu'")
        tasks.append(Task(name=f"{i:02d}_{kind}", kind=kind, params=params))
    return tasks


def _reject_extra(spec, allowed, path, fail):
    for k in set(spec) - allowed:
        fail(f"{path}.{k}", "unknown key")
