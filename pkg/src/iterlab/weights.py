"""Weight functions, their Young conjugates, and the inequality toolbox.

A weight is a continuous increasing function omega: [0, inf) -> [0, inf),
normalized here so that omega vanishes on [0, 1] (raw kinds are clamped at
construction).  phi(t) = omega(e^t) is the exponential substitution whose
Young conjugate

    phi*(y) = sup_{t >= 0} ( y t - phi(t) )

drives every discount factor exp(-lam * phi*(. / lam)) used by the iterate
semi-norms.  The conjugate is computed numerically: an adaptive log-spaced
grid locates the maximizer (phi is convex, so y t - phi(t) is concave and
unimodal), then golden-section refinement polishes it.

Axiom checking fits the usual constants on finite grids: doubling bound
omega(2t) <= L (omega(t) + 1), tail integral of omega(t)/t^2, log t =
o(omega(t)), convexity of phi, the doubling-from-above bound
2 omega(t) <= omega(H t) + H, and the lower bound omega(t) >= a + b log(1+t).
Everything is reported with margins rather than proved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

_GOLD = (math.sqrt(5.0) - 1.0) / 2.0
NEG_INF = float("-inf")


class WeightFunction:
    """Base class: increasing, continuous, zero on [0, 1]."""

    kind = "abstract"

    def __init__(self):
        self._conj_cache: dict[float, float] = {}

    # evaluation ---------------------------------------------------------
    def omega(self, t: float) -> float:
        if t < 0:
            raise ValueError("weight argument must be non-negative")
        return float(self.omega_many(np.array([t]))[0])

    def omega_many(self, ts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def phi(self, t: float) -> float:
        """phi(t) = omega(e^t) for t >= 0, evaluated overflow-safely."""
        return float(self.phi_many(np.array([t]))[0])

    def phi_many(self, ts: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore"):
            return self.omega_many(np.minimum(np.exp(ts), _BIG))

    def conjugate(self, y: float) -> float:
        """phi*(y), cached per instance (instances are otherwise immutable)."""
        y = float(y)
        hit = self._conj_cache.get(y)
        if hit is None:
            hit = _conjugate_sup(self.phi_many, y)
            self._conj_cache[y] = hit
        return hit

    def describe(self) -> dict:
        return {"kind": self.kind}


_BIG = 1e300


class GevreyWeight(WeightFunction):
    """omega(t) = max(0, t^(1/s) - 1); the scale of the classical Gevrey classes."""

    kind = "gevrey"

    def __init__(self, s: float):
        super().__init__()
        if s <= 0:
            raise ValueError("gevrey index s must be positive")
        self.s = float(s)

    def omega_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        with np.errstate(over="ignore"):
            return np.maximum(0.0, ts ** (1.0 / self.s) - 1.0)

    def phi_many(self, ts):
        # omega(e^t) = e^{t/s} - 1 for t >= 0; expm1 keeps small t accurate
        ts = np.asarray(ts, dtype=float)
        with np.errstate(over="ignore"):
            return np.maximum(0.0, np.expm1(ts / self.s))

    def conjugate_closed_form(self, y: float) -> float:
        """Exact conjugate, used as an independent oracle for the grid machinery."""
        if self.s * y <= 1.0:
            return 0.0
        sy = self.s * y
        return sy * math.log(sy) - sy + 1.0

    def describe(self):
        return {"kind": self.kind, "s": self.s}


class LogPowerWeight(WeightFunction):
    """omega(t) = max(0, log(1+t)^p - log(2)^p), p > 1; an auxiliary slow scale."""

    kind = "log_power"

    def __init__(self, p: float):
        super().__init__()
        if p <= 1:
            raise ValueError("log-power exponent p must exceed 1")
        self.p = float(p)
        self._off = math.log(2.0) ** self.p

    def omega_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        return np.maximum(0.0, np.log1p(ts) ** self.p - self._off)

    def phi_many(self, ts):
        # log(1 + e^t) = logaddexp(0, t) avoids overflow for large t
        ts = np.asarray(ts, dtype=float)
        return np.maximum(0.0, np.logaddexp(0.0, ts) ** self.p - self._off)

    def describe(self):
        return {"kind": self.kind, "p": self.p}


class RescaledWeight(WeightFunction):
    """sigma(t) = base(t^a), a > 0.  Evaluation composes exactly, never approximates."""

    kind = "rescaled"

    def __init__(self, base: WeightFunction, a: float):
        super().__init__()
        if a <= 0:
            raise ValueError("rescaling exponent a must be positive")
        self.base = base
        self.a = float(a)

    def omega_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        with np.errstate(over="ignore"):
            return self.base.omega_many(np.minimum(ts ** self.a, _BIG))

    def phi_many(self, ts):
        # omega(e^{t a}) = phi_base(a t): exact in the exponential variable
        return self.base.phi_many(self.a * np.asarray(ts, dtype=float))

    def describe(self):
        return {"kind": self.kind, "a": self.a, "base": self.base.describe()}


class TabulatedWeight(WeightFunction):
    """Weight interpolated from (t, omega(t)) samples; clamped to vanish on [0,1].

    Linear interpolation inside the grid; beyond the last node the final
    slope is continued.  Tail-dependent verdicts (the integral axiom) are
    reported as inconclusive for this kind since samples cannot decide them.
    """

    kind = "tabulated"

    def __init__(self, ts: Sequence[float], values: Sequence[float]):
        super().__init__()
        t = np.asarray(ts, dtype=float)
        v = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or len(t) < 2:
            raise ValueError("tabulated weight needs matching 1-d t and value arrays")
        if np.any(np.diff(t) <= 0):
            raise ValueError("tabulated grid must be strictly increasing")
        if np.any(np.diff(v) < 0):
            raise ValueError("tabulated values must be non-decreasing")
        self._t = t
        self._raw = v
        self._at_one = float(np.interp(1.0, t, v)) if t[0] <= 1.0 <= t[-1] else float(v[0])
        self._slope = (v[-1] - v[-2]) / (t[-1] - t[-2])

    @staticmethod
    def from_text(text: str) -> "TabulatedWeight":
        ts, vs = [], []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 't omega(t)', got {raw!r}")
            ts.append(float(parts[0]))
            vs.append(float(parts[1]))
        return TabulatedWeight(ts, vs)

    def omega_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        inner = np.interp(ts, self._t, self._raw)
        tail = self._raw[-1] + self._slope * (ts - self._t[-1])
        raw = np.where(ts > self._t[-1], tail, inner)
        return np.maximum(0.0, raw - self._at_one)

    def describe(self):
        return {"kind": self.kind, "nodes": int(len(self._t))}


def make_weight(kind: str, **params) -> WeightFunction:
    kind = kind.lower()
    if kind == "gevrey":
        return GevreyWeight(params["s"])
    if kind == "log_power":
        return LogPowerWeight(params["p"])
    if kind == "rescaled":
        return RescaledWeight(params["base"], params["a"])
    if kind == "tabulated":
        return TabulatedWeight(params["ts"], params["values"])
    raise ValueError(f"unknown weight kind {kind!r}")


def rescale_weight(w: WeightFunction, a: float) -> WeightFunction:
    """sigma with sigma(t) = omega(t^a); a = 1 returns the same object."""
    if a <= 0:
        raise ValueError("rescaling exponent a must be positive")
    if a == 1.0:
        return w
    return RescaledWeight(w, a)


def omega_eval(w: WeightFunction, t: float) -> float:
    return w.omega(t)


def young_conjugate(w: WeightFunction, y: float) -> float:
    """phi*(y) = sup_{t>=0} (y t - omega(e^t)), numeric grid supremum."""
    return w.conjugate(y)


# ---------------------------------------------------------------------------
# conjugate machinery


def _conjugate_sup(phi_many: Callable[[np.ndarray], np.ndarray], y: float,
                   n_grid: int = 4096) -> float:
    if y < 0:
        raise ValueError("conjugate argument must be non-negative")
    if y == 0.0:
        return 0.0
    T = 32.0
    tg = vals = None
    i = 0
    for _ in range(64):
        tg = np.concatenate(([0.0], np.logspace(-8.0, math.log10(T), n_grid - 1)))
        vals = y * tg - phi_many(tg)
        i = int(np.argmax(vals))
        if i < n_grid - 4 and np.isfinite(vals[i]):
            break
        T *= 2.0
    else:
        raise RuntimeError("conjugate maximizer never became interior")

    def f(t: float) -> float:
        return y * t - float(phi_many(np.array([t]))[0])

    a = tg[max(i - 1, 0)]
    b = tg[min(i + 1, n_grid - 1)]
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(90):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = f(d)
        if b - a <= 1e-14 * max(1.0, abs(b)):
            break
    best = max(float(vals[i]), float(f(0.5 * (a + b))))
    return max(0.0, best)


@dataclass(frozen=True)
class ConjugateTable:
    """phi* sampled on an increasing y-grid, for property checks and reports.

    lam-scaling rule: the semi-norm discount at level lam is
    lam * phi*(y / lam), evaluated through the same conjugate.
    """

    y_grid: np.ndarray
    values: np.ndarray

    def scaled(self, lam: float, y: float, w: WeightFunction) -> float:
        return lam * w.conjugate(y / lam)

    def second_differences(self) -> np.ndarray:
        y, v = self.y_grid, self.values
        dy1 = y[1:-1] - y[:-2]
        dy2 = y[2:] - y[1:-1]
        return (v[2:] - v[1:-1]) / dy2 - (v[1:-1] - v[:-2]) / dy1


def conjugate_table(w: WeightFunction, y_min: float, y_max: float,
                    num: int = 200) -> ConjugateTable:
    ys = np.logspace(math.log10(y_min), math.log10(y_max), num)
    vals = np.array([w.conjugate(float(y)) for y in ys])
    return ConjugateTable(y_grid=ys, values=vals)


def biconjugate(table: ConjugateTable, x: float) -> float:
    """(phi*)*(x) by the same grid-sup mechanism, over the table's y-grid."""
    return float(np.max(x * table.y_grid - table.values))


# ---------------------------------------------------------------------------
# axiom verification


@dataclass
class AxiomResult:
    status: str              # "pass" | "fail" | "inconclusive"
    margin: float = math.nan
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "pass"


@dataclass
class WeightAxiomReport:
    """Fitted constants and verdicts for the weight axioms on [0, t_max]."""

    doubling: AxiomResult           # omega(2t) <= L (omega(t)+1)
    tail_integral: AxiomResult      # int_1^inf omega(t)/t^2 dt finite
    beats_log: AxiomResult          # log t = o(omega(t))
    phi_convex: AxiomResult         # omega(e^t) convex
    doubling_above: AxiomResult     # 2 omega(t) <= omega(H t) + H
    log_lower: AxiomResult          # omega(t) >= a + b log(1+t)
    L: float = math.nan
    H: float = math.nan
    L_e: float = math.nan           # omega(e t) <= L_e (1 + omega(t))
    L_sum: float = math.nan         # omega(u+v) <= L_sum (omega(u)+omega(v)+1)
    tail_estimate: float = math.nan
    convexity_violations: int = 0
    gamma_prime_a: float = math.nan
    gamma_prime_b: float = math.nan
    t_max: float = math.nan

    def all_pass(self) -> bool:
        return all(r.ok for r in (self.doubling, self.tail_integral,
                                  self.beats_log, self.phi_convex))

    def as_dict(self) -> dict:
        out = {}
        for name in ("doubling", "tail_integral", "beats_log", "phi_convex",
                     "doubling_above", "log_lower"):
            r = getattr(self, name)
            out[name] = {"status": r.status, "margin": r.margin, "detail": r.detail}
        out["constants"] = {
            "L": self.L, "H": self.H, "L_e": self.L_e, "L_sum": self.L_sum,
            "tail_estimate": self.tail_estimate,
            "convexity_violations": self.convexity_violations,
            "gamma_prime_a": self.gamma_prime_a, "gamma_prime_b": self.gamma_prime_b,
            "t_max": self.t_max,
        }
        return out


def _ratio_fit(w: WeightFunction, factor: float, t_max: float) -> tuple[float, AxiomResult]:
    """Fit sup omega(factor*t) / (omega(t)+1) and judge whether the sup has settled."""
    ts = np.logspace(-2, math.log10(t_max), 4000)
    ratios = w.omega_many(factor * ts) / (w.omega_many(ts) + 1.0)
    fit = float(np.max(ratios))
    third = len(ts) // 3
    head = float(np.max(ratios[:-third]))
    tail = float(np.max(ratios[-third:]))
    if tail > head * 1.05 + 1e-9:
        status = AxiomResult("inconclusive", margin=tail - head,
                             detail="ratio still climbing at t_max")
    else:
        status = AxiomResult("pass", margin=head - tail)
    return max(fit, 1.0) * (1.0 + 1e-12), status


def check_weight_axioms(w: WeightFunction, t_max: float = 1e6) -> WeightAxiomReport:
    """Verify the weight axioms numerically on [0, t_max] (t_max >= 1e3)."""
    if t_max < 1e3:
        raise ValueError("t_max must be at least 1e3 for meaningful tail checks")

    L, doubling = _ratio_fit(w, 2.0, t_max)
    L_e, _ = _ratio_fit(w, math.e, t_max)

    tail_integral, tail_estimate = _check_tail_integral(w, t_max)
    beats_log = _check_beats_log(w, t_max)
    phi_convex, violations = _check_phi_convex(w, t_max)
    doubling_above, H = _check_doubling_above(w, t_max)
    log_lower, a_const, b_const = _check_log_lower(w, t_max)
    L_sum = _fit_sum_constant(w, t_max)

    return WeightAxiomReport(
        doubling=doubling, tail_integral=tail_integral, beats_log=beats_log,
        phi_convex=phi_convex, doubling_above=doubling_above, log_lower=log_lower,
        L=L, H=H, L_e=L_e, L_sum=L_sum, tail_estimate=tail_estimate,
        convexity_violations=violations,
        gamma_prime_a=a_const, gamma_prime_b=b_const, t_max=t_max,
    )


def _check_tail_integral(w: WeightFunction, t_max: float) -> tuple[AxiomResult, float]:
    # Known kinds carry analytic tails; otherwise judge the doubling increments
    # of int_1^T omega/t^2 and extrapolate geometrically when they shrink.
    analytic = _analytic_tail(w)
    n_doubles = max(8, int(math.floor(math.log2(t_max))))
    increments = []
    total = 0.0
    lo = 1.0
    for _ in range(n_doubles):
        hi = lo * 2.0
        ts = np.linspace(lo, hi, 257)
        ys = w.omega_many(ts) / ts ** 2
        inc = float(np.trapezoid(ys, ts))
        increments.append(inc)
        total += inc
        lo = hi
    tail = np.array(increments[-4:])
    if np.all(tail <= 1e-15):
        ratio = 0.0
    else:
        ratio = float(tail[-1] / max(tail[-2], 1e-300))
    estimate = total
    if 0.0 < ratio < 0.98:
        estimate = total + increments[-1] * ratio / (1.0 - ratio)

    if analytic is not None:
        converges, analytic_value = analytic
        if converges:
            return AxiomResult("pass", margin=1.0 - ratio,
                               detail="analytic tail finite"), analytic_value
        return AxiomResult("fail", margin=ratio,
                           detail="analytic tail diverges"), math.inf
    if isinstance(w, TabulatedWeight):
        return AxiomResult("inconclusive", margin=ratio,
                           detail="tabulated tail undecidable from samples"), estimate
    if ratio >= 0.98:
        return AxiomResult("fail", margin=ratio,
                           detail="doubling increments not shrinking"), math.inf
    return AxiomResult("pass", margin=1.0 - ratio), estimate


def _analytic_tail(w: WeightFunction):
    """(converges, integral over [1, inf)) for closed-form kinds, else None."""
    if isinstance(w, GevreyWeight):
        s = w.s
        if s <= 1.0:
            return False, math.inf
        # int_1^inf (t^{1/s} - 1)/t^2 dt = s/(s-1) - 1
        return True, s / (s - 1.0) - 1.0
    if isinstance(w, LogPowerWeight):
        # log(1+t)^p / t^2 integrable for every p
        ts = np.logspace(0, 14, 20001)
        ys = w.omega_many(ts) / ts ** 2
        return True, float(np.trapezoid(ys, np.log(ts)) if False else np.trapezoid(ys, ts))
    if isinstance(w, RescaledWeight):
        inner = _analytic_tail(w.base)
        if inner is None:
            return None
        if isinstance(w.base, GevreyWeight):
            s_eff = w.base.s / w.a
            if s_eff <= 1.0:
                return False, math.inf
            return True, s_eff / (s_eff - 1.0) - 1.0
        if isinstance(w.base, LogPowerWeight):
            return True, math.nan  # converges; value not tabulated
    return None


def _check_beats_log(w: WeightFunction, t_max: float) -> AxiomResult:
    ts = np.logspace(1, math.log10(t_max), 64)
    om = w.omega_many(ts)
    if np.any(om <= 0):
        return AxiomResult("fail", margin=0.0, detail="omega vanishes at large t")
    margin = om / np.log(ts)
    half = len(ts) // 2
    growing = float(np.min(margin[half:])) >= float(margin[:half].min()) * 0.999
    final = float(margin[-1])
    if growing and final > float(margin[0]):
        return AxiomResult("pass", margin=final)
    if final < 1.0:
        return AxiomResult("fail", margin=final, detail="omega(t)/log t shrinking")
    return AxiomResult("inconclusive", margin=final, detail="trend not settled")


def _check_phi_convex(w: WeightFunction, t_max: float) -> tuple[AxiomResult, int]:
    T = math.log(t_max)
    ts = np.linspace(0.0, T, 4001)
    ph = w.phi_many(ts)
    second = ph[2:] - 2.0 * ph[1:-1] + ph[:-2]
    tol = 1e-9 * max(1.0, float(np.max(np.abs(ph))))
    violations = int(np.sum(second < -tol))
    worst = float(np.min(second))
    if violations == 0:
        return AxiomResult("pass", margin=worst), 0
    return AxiomResult("fail", margin=worst,
                       detail=f"{violations} second-difference violations"), violations


def _check_doubling_above(w: WeightFunction, t_max: float) -> tuple[AxiomResult, float]:
    # smallest H >= 1 with sup_t [2 omega(t) - omega(H t)] <= H; monotone in H
    # necessary condition first: iterating the bound forces omega(t) >= c t^rho
    # for some rho > 0, so a log-log slope that keeps decaying (halving per
    # squaring of t, the logarithmic signature) rules it out

    def slope_at(T: float) -> float:
        lo, hi = w.omega(T / 10.0), w.omega(T)
        if lo <= 0 or hi <= 0:
            return math.nan
        return (math.log(hi) - math.log(lo)) / math.log(10.0)

    s_top = slope_at(t_max)
    s_mid = slope_at(math.sqrt(t_max))
    if math.isfinite(s_top) and math.isfinite(s_mid) and s_mid > 0:
        ratio = s_top / s_mid
        if ratio < 0.6:
            return AxiomResult(
                "fail", margin=s_top,
                detail="omega grows slower than every power of t; the "
                       "doubling-from-above bound needs a power lower bound",
            ), math.inf

    ts = np.logspace(-2, math.log10(t_max), 4000)
    om2 = 2.0 * w.omega_many(ts)

    def excess(H: float) -> float:
        return float(np.max(om2 - w.omega_many(H * ts))) - H

    def tail_climbing(H: float) -> bool:
        # a grid sup attained at the right edge while still growing
        # understates the true sup; such an H is a finite-grid artifact
        gap = om2 - w.omega_many(H * ts)
        i = int(np.argmax(gap))
        return i >= len(ts) - 2 and bool(np.all(np.diff(gap[-8:]) > 0))

    H_cap = 1e6
    H_hi = 1.0
    while excess(H_hi) > 0:
        H_hi *= 2.0
        if H_hi > H_cap:
            return AxiomResult("fail", margin=excess(H_cap),
                               detail=f"no H up to {H_cap:g} bounds the grid "
                                      "excess"), math.inf
    lo, hi = H_hi / 2.0, H_hi
    if hi == 1.0:
        lo = 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if excess(mid) <= 0:
            hi = mid
        else:
            lo = mid
    H = max(1.0, hi)
    while tail_climbing(H):
        H *= 1.25
        if H > H_cap:
            return AxiomResult("fail", margin=math.inf,
                               detail="doubling excess keeps growing with t "
                                      f"for every H up to {H_cap:g}"), math.inf
    gap_max = float(np.max(2.0 * w.omega_many(ts) - w.omega_many(H * ts)))
    return AxiomResult("pass", margin=H - gap_max), H


def _check_log_lower(w: WeightFunction, t_max: float) -> tuple[AxiomResult, float, float]:
    # omega(t) >= a + b log(1+t) with a = -b log 2 (so the bound is <= 0 on [0,1])
    ts = np.logspace(math.log10(1.0 + 1e-3), math.log10(t_max), 4000)
    denom = np.log1p(ts) - math.log(2.0)
    keep = denom > 1e-12
    b = float(np.min(w.omega_many(ts[keep]) / denom[keep]))
    if b > 1e-9:
        return AxiomResult("pass", margin=b), -b * math.log(2.0), b
    return AxiomResult("fail", margin=b,
                       detail="no positive log slope fits below omega"), math.nan, 0.0


def _fit_sum_constant(w: WeightFunction, t_max: float) -> float:
    us = np.logspace(-2, math.log10(t_max / 2.0), 240)
    u, v = np.meshgrid(us, us)
    ratio = w.omega_many(u + v) / (w.omega_many(u) + w.omega_many(v) + 1.0)
    return max(1.0, float(np.max(ratio))) * (1.0 + 1e-12)


# ---------------------------------------------------------------------------
# inequality toolbox


@dataclass
class SandwichReport:
    """sup_j t^j e^{-lam phi*(h j / lam)} against its two-sided envelope.

    All quantities are logs.  pass_ means
    lam*omega(t^(1/h)) - log t <= log_sup <= lam*omega(t^(1/h)),
    up to `slack` relative tolerance.
    """

    log_sup: float
    log_lower: float
    log_upper: float
    argmax_j: int
    plateau: bool
    passed: bool
    slack: float

    def as_dict(self) -> dict:
        return {
            "log_sup": self.log_sup, "log_lower": self.log_lower,
            "log_upper": self.log_upper, "argmax_j": self.argmax_j,
            "plateau": self.plateau, "passed": self.passed, "slack": self.slack,
        }


def check_sup_sandwich(w: WeightFunction, h: float, lam: float, t: float,
                       j_max: int = 10 ** 9, slack: float = 1e-6) -> SandwichReport:
    """Locate sup_j of t^j e^{-lam phi*(h j/lam)} and test the two-sided bounds.

    The sequence j -> j log t - lam phi*(h j / lam) is concave (phi* is
    convex), so the integer argmax is found by bracketed ternary search
    rather than enumeration; j_max only caps the search range.
    """
    if t < 1.0:
        raise ValueError("the sandwich bounds require t >= 1")
    if h <= 0 or lam <= 0:
        raise ValueError("h and lam must be positive")
    log_t = math.log(t)
    memo: dict[int, float] = {}

    def term(j: int) -> float:
        val = memo.get(j)
        if val is None:
            val = j * log_t - lam * w.conjugate(h * j / lam)
            memo[j] = val
        return val

    hi = 8
    while hi < j_max and term(hi) > term(hi - 1):
        hi = min(hi * 4, j_max)
    lo = 0
    while hi - lo > 3:
        m1 = lo + (hi - lo) // 3
        m2 = hi - (hi - lo) // 3
        f1, f2 = term(m1), term(m2)
        if f1 > f2:
            hi = m2
        elif f1 < f2:
            lo = m1
        else:
            lo, hi = m1, m2
    window = range(max(lo - 2, 0), min(hi + 3, j_max + 1))
    j_star = max(window, key=term)
    log_sup = term(j_star)

    plateau = j_star + 2 <= j_max and term(j_star + 1) <= log_sup \
        and term(j_star + 2) <= term(j_star + 1)
    log_omega = lam * w.omega(t ** (1.0 / h))
    upper = log_omega
    lower = log_omega - log_t
    tol = slack * max(1.0, abs(upper))
    passed = plateau and (lower - tol <= log_sup <= upper + tol)
    return SandwichReport(log_sup=log_sup, log_lower=lower, log_upper=upper,
                          argmax_j=j_star, plateau=plateau, passed=passed,
                          slack=slack)


@dataclass
class ShiftReport:
    """rho^j e^{lam phi*(j/lam)} <= D e^{lam2 phi*(j/lam2)} verified termwise."""

    lam2: float
    D: float
    max_violation: float    # log-domain; <= tol means the bound held
    passed: bool

    def as_dict(self) -> dict:
        return {"lam2": self.lam2, "D": self.D,
                "max_violation": self.max_violation, "passed": self.passed}


def shift_constants(w: WeightFunction, rho: float, lam: float,
                    L_e: float | None = None, j_max: int = 500,
                    tol: float = 1e-9) -> ShiftReport:
    """Constants absorbing a geometric factor rho^j into a smaller conjugate level.

    Uses lam2 = lam / L_e^k and D = exp(lam * k) with k = floor(log rho + 1),
    where L_e satisfies omega(e t) <= L_e (1 + omega(t)).  For rho <= 1/e the
    factor is already <= 1 and (lam, 1) works.
    """
    if rho <= 0 or lam <= 0:
        raise ValueError("rho and lam must be positive")
    k = math.floor(math.log(rho) + 1.0)
    if k <= 0:
        lam2, D = lam, 1.0
    else:
        if L_e is None or not math.isfinite(L_e):
            raise ValueError("L_e from check_weight_axioms is required for rho > 1/e")
        lam2 = lam / L_e ** k
        D = math.exp(lam * k)
    log_rho = math.log(rho)
    worst = NEG_INF
    for j in range(j_max + 1):
        lhs = j * log_rho + lam * w.conjugate(j / lam)
        rhs = math.log(D) + lam2 * w.conjugate(j / lam2)
        worst = max(worst, lhs - rhs)
    scale = max(1.0, abs(lam * w.conjugate(j_max / lam)))
    return ShiftReport(lam2=lam2, D=D, max_violation=worst,
                       passed=worst <= tol * scale)


def check_conjugate_product_bound(w: WeightFunction, lam: float, L_sum: float,
                                  j_max: int = 60, tol: float = 1e-9) -> dict:
    """Splitting bound: lam phi*(j/lam) + lam phi*(k/lam) <= lam + lam' phi*((j+k)/lam')
    with lam' = lam / L_sum, checked on the (j, k) grid."""
    lam2 = lam / L_sum
    worst = NEG_INF
    arg = (0, 0)
    for j in range(j_max + 1):
        pj = lam * w.conjugate(j / lam)
        for k in range(j, j_max + 1):
            lhs = pj + lam * w.conjugate(k / lam)
            rhs = lam + lam2 * w.conjugate((j + k) / lam2)
            if lhs - rhs > worst:
                worst = lhs - rhs
                arg = (j, k)
    scale = max(1.0, lam * w.conjugate(2 * j_max / lam))
    return {"max_violation": worst, "at": arg, "passed": worst <= tol * scale,
            "lam2": lam2}
