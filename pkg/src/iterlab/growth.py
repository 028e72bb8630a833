"""Numeric growth-exponent estimation for polynomial symbol systems.

The global comparisons treated here all have the shape

    num(xi) <= C * (1 + den(xi))^e   for all xi in R^n,

with num and den sums of absolute symbol values.  The smallest admissible
e is a rational number, but it is not computable by sampling alone; this
module estimates it by following rays r * d for log-spaced radii r and a
seeded set of unit directions d, extracting per-direction exponents from
the slope of log num against log(1 + den) over the top decile of radii
(the asymptotic regime; additive constants cancel in the slope), then
maximizing over directions and snapping to a small-denominator rational.

Directions along which den stays bounded while num keeps growing admit no
finite exponent at all and raise the infinite marker instead.  Every fit
carries an explicit caveat: these are numeric estimates of semi-algebraic
quantities, not proofs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .polynomials import MultiPoly, OperatorSystem, multi_indices_up_to

NUMERIC_CAVEAT = ("numeric estimate from ray sampling; asymptotic behaviour "
                  "off the sampled rays is not certified")

BOUNDED_LOG_DEN = 2.0      # log(1+den) below this: skip for slopes, test for markers
GROWTH_MARKER_LOG = 4.0    # log num above this while den bounded => no finite exponent
DEFAULT_SNAP_DEN = 12
DEFAULT_SNAP_TOL = 0.05


@dataclass(frozen=True)
class SamplingPlan:
    """Log-spaced radii and a deterministic direction set (unit l2 norm)."""

    radii: np.ndarray
    directions: np.ndarray
    seed: int

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        d = np.asarray(self.directions, dtype=float)
        if np.any(np.diff(r) <= 0):
            raise ValueError("radii must be strictly increasing")
        norms = np.linalg.norm(d, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("directions must be unit vectors (l2)")
        r.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "directions", d)

    @property
    def num_vars(self) -> int:
        return self.directions.shape[1]

    def describe(self) -> dict:
        return {"seed": self.seed, "num_radii": int(len(self.radii)),
                "r_min": float(self.radii[0]), "r_max": float(self.radii[-1]),
                "num_directions": int(len(self.directions))}


def make_plan(num_vars: int, seed: int = 0, r_min: float = 10.0,
              r_max: float = 1e6, num_radii: int = 40,
              num_random_directions: int = 256) -> SamplingPlan:
    """Default plan: structured directions (axes, diagonal sign patterns)
    followed by seeded random ones."""
    if num_vars < 1:
        raise ValueError("num_vars must be positive")
    radii = np.logspace(math.log10(r_min), math.log10(r_max), num_radii)
    rows = []
    for i in range(num_vars):
        e = np.zeros(num_vars)
        e[i] = 1.0
        rows.append(e.copy())
        rows.append(-e)
    for bits in range(2 ** num_vars):
        v = np.array([1.0 if not (bits >> i) & 1 else -1.0
                      for i in range(num_vars)])
        rows.append(v / np.linalg.norm(v))
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((num_random_directions, num_vars))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return SamplingPlan(radii=radii, directions=np.vstack([np.array(rows), g]),
                        seed=seed)


@dataclass(frozen=True)
class GrowthFit:
    """Outcome of one exponent-estimation run.

    snapped is None when the raw exponent had no nearby small-denominator
    rational (see warning) or when infinite is set; constant is the fitted
    C for the snapped (or raw) exponent, always >= 1.
    """

    raw: float
    snapped: Fraction | None
    infinite: bool
    constant: float
    residual: float
    per_direction: tuple = ()
    per_alpha: dict | None = None
    warning: str | None = None
    caveat: str = NUMERIC_CAVEAT

    @property
    def exponent(self) -> float:
        if self.infinite:
            return math.inf
        return float(self.snapped) if self.snapped is not None else self.raw

    def as_dict(self) -> dict:
        d = {
            "raw": self.raw, "infinite": self.infinite,
            "snapped": None if self.snapped is None else
            {"num": self.snapped.numerator, "den": self.snapped.denominator},
            "constant": self.constant, "residual": self.residual,
            "warning": self.warning, "caveat": self.caveat,
        }
        if self.per_alpha is not None:
            d["per_alpha"] = {" ".join(map(str, a)): v
                              for a, v in sorted(self.per_alpha.items())}
        return d


def snap_to_rational(x: float, max_den: int = DEFAULT_SNAP_DEN,
                     tol: float = DEFAULT_SNAP_TOL) -> Fraction | None:
    """Nearest rational with denominator <= max_den, or None beyond tol."""
    if not math.isfinite(x):
        return None
    fr = Fraction(x).limit_denominator(max_den)
    return fr if abs(float(fr) - x) <= tol else None


# ---------------------------------------------------------------------------
# sampling core


def _sample_points(plan: SamplingPlan) -> np.ndarray:
    return plan.directions[:, None, :] * plan.radii[None, :, None]


def _field_values(fn, pts: np.ndarray, threads: int = 1) -> np.ndarray:
    """Evaluate fn over the (D, R, n) point array; returns (D, R)."""
    D, R, n = pts.shape
    flat = pts.reshape(D * R, n)
    if threads <= 1 or D * R < 4 * threads:
        vals = fn(flat)
    else:
        chunks = np.array_split(flat, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = np.concatenate(list(pool.map(fn, chunks)))
    return vals.reshape(D, R)


@dataclass
class _RayFit:
    raw: float              # -inf when no direction constrained the exponent
    infinite: bool
    rows: list              # (direction tuple, exponent | inf | None)
    log_num: np.ndarray
    log_den: np.ndarray


def _fit_rays(log_num: np.ndarray, log_den: np.ndarray,
              plan: SamplingPlan) -> _RayFit:
    D, R = log_num.shape
    top = max(2, R // 10)
    raw = -math.inf
    infinite = False
    rows = []
    for i in range(D):
        ln = log_num[i]
        ld = log_den[i]
        exponent = None
        den_bounded = ld[-1] < BOUNDED_LOG_DEN or (ld[-1] - ld[0]) < 1e-6
        if den_bounded:
            if ln[-1] > GROWTH_MARKER_LOG and ln[-1] > ln[min(top, R - 1)] + 2.0:
                infinite = True
                exponent = math.inf
        else:
            sel = slice(R - top, R)
            lns, lds = ln[sel], ld[sel]
            ok = np.isfinite(lns) & (lds >= BOUNDED_LOG_DEN)
            if int(np.sum(ok)) >= 2 and float(np.ptp(lds[ok])) > 1e-9:
                x = lds[ok]
                y = lns[ok]
                xm, ym = x.mean(), y.mean()
                exponent = float(np.dot(x - xm, y - ym) / np.dot(x - xm, x - xm))
                raw = max(raw, exponent)
        rows.append((tuple(float(c) for c in plan.directions[i]), exponent))
    return _RayFit(raw=raw, infinite=infinite, rows=rows,
                   log_num=log_num, log_den=log_den)


def _log_values(vals: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(vals)


def _fit_constant(log_num: np.ndarray, log_den: np.ndarray, exponent: float) -> float:
    finite = np.isfinite(log_num)
    if not np.any(finite):
        return 1.0
    log_c = float(np.max(log_num[finite] - exponent * log_den[finite]))
    return max(1.0, math.exp(min(log_c, 700.0)))


# ---------------------------------------------------------------------------
# h-weakness


def estimate_h(weaker: OperatorSystem, stronger: OperatorSystem,
               plan: SamplingPlan | None = None,
               max_den: int = DEFAULT_SNAP_DEN, snap_tol: float = DEFAULT_SNAP_TOL,
               threads: int = 1) -> GrowthFit:
    """Smallest h with sum|Q_j| <= C (1 + sum|P_j|)^h, Q=weaker, P=stronger.

    The infinite marker (no finite h) is a valid outcome, reported rather
    than raised.
    """
    if weaker.num_vars != stronger.num_vars:
        raise ValueError("systems must share num_vars")
    if plan is None:
        plan = make_plan(weaker.num_vars)
    pts = _sample_points(plan)
    num = _field_values(weaker.symbol_sum_many, pts, threads)
    den = _field_values(stronger.symbol_sum_many, pts, threads)
    log_num = _log_values(num)
    log_den = np.log1p(den)
    fit = _fit_rays(log_num, log_den, plan)
    if fit.infinite:
        return GrowthFit(raw=math.inf, snapped=None, infinite=True,
                         constant=1.0, residual=math.nan,
                         per_direction=tuple(fit.rows))
    raw = max(fit.raw, 0.0) if math.isfinite(fit.raw) else 0.0
    snapped = snap_to_rational(raw, max_den, snap_tol)
    warning = None if snapped is not None else \
        f"no rational with denominator <= {max_den} within {snap_tol} of {raw:.6f}"
    exponent = float(snapped) if snapped is not None else raw
    const = _fit_constant(log_num, log_den, exponent)
    residual = abs(raw - float(snapped)) if snapped is not None else math.nan
    return GrowthFit(raw=raw, snapped=snapped, infinite=False, constant=const,
                     residual=residual, per_direction=tuple(fit.rows),
                     warning=warning)


# ---------------------------------------------------------------------------
# derivative-decay exponent


def estimate_gamma(system: OperatorSystem, plan: SamplingPlan | None = None,
                   alpha_max: int | None = None,
                   max_den: int = DEFAULT_SNAP_DEN,
                   snap_tol: float = DEFAULT_SNAP_TOL,
                   threads: int = 1) -> GrowthFit:
    """Smallest gamma >= m with sum|d^alpha P_j| <= C (1+sum|P_j|)^(1-|alpha|/gamma).

    Each derivative order alpha contributes gamma_alpha = |alpha| / (1 - e_alpha)
    from its fitted exponent e_alpha; gamma is their maximum, floored at the
    system order.  e_alpha at or above 1 - 1/alpha_max (or any direction with
    unbounded derivatives over bounded symbols) raises the infinite marker:
    the decay condition fails.
    """
    m = system.order
    if alpha_max is None:
        alpha_max = m + 2
    if alpha_max < m:
        raise ValueError(f"alpha_max must be at least the system order {m}")
    if plan is None:
        plan = make_plan(system.num_vars)
    pts = _sample_points(plan)
    den = _field_values(system.symbol_sum_many, pts, threads)
    log_den = np.log1p(den)

    per_alpha: dict[tuple[int, ...], dict] = {}
    per_direction = None
    gamma_raw = float(m)
    infinite = False
    e_cap = 1.0 - 1.0 / alpha_max
    pieces = []   # (log_num, exponent 1-|alpha|/gamma placeholder) for C fit

    for alpha in multi_indices_up_to(system.num_vars, alpha_max):
        order = sum(alpha)
        if order == 0:
            continue
        derivs = [p.derivative(alpha) for p in system.polys]
        if all(d.is_zero() for d in derivs):
            continue

        def num_fn(flat, _derivs=derivs):
            acc = np.zeros(flat.shape[0])
            for dpoly in _derivs:
                acc += np.abs(dpoly.eval_many(flat))
            return acc

        num = _field_values(num_fn, pts, threads)
        log_num = _log_values(num)
        fit = _fit_rays(log_num, log_den, plan)
        if per_direction is None and order == 1:
            per_direction = tuple(fit.rows)
        entry: dict = {"order": order}
        if fit.infinite:
            infinite = True
            entry.update(exponent=math.inf, gamma=math.inf, infinite=True)
        elif not math.isfinite(fit.raw):
            entry.update(exponent=None, gamma=None, infinite=False)
        else:
            e_alpha = fit.raw
            entry["exponent"] = e_alpha
            if e_alpha >= e_cap:
                infinite = True
                entry.update(gamma=math.inf, infinite=True)
            else:
                g = order / (1.0 - e_alpha) if e_alpha < 1.0 else math.inf
                entry.update(gamma=g, infinite=False)
                gamma_raw = max(gamma_raw, g)
                pieces.append((log_num, order))
        per_alpha[tuple(alpha)] = entry

    if infinite:
        return GrowthFit(raw=math.inf, snapped=None, infinite=True, constant=1.0,
                         residual=math.nan, per_direction=per_direction or (),
                         per_alpha=per_alpha)

    snapped = snap_to_rational(gamma_raw, max_den, snap_tol)
    warning = None if snapped is not None else \
        f"no rational with denominator <= {max_den} within {snap_tol} of {gamma_raw:.6f}"
    gamma_hat = float(snapped) if snapped is not None else gamma_raw
    const = 1.0
    for log_num, order in pieces:
        const = max(const, _fit_constant(log_num, log_den, 1.0 - order / gamma_hat))
    residual = abs(gamma_raw - gamma_hat) if snapped is not None else math.nan
    return GrowthFit(raw=gamma_raw, snapped=snapped, infinite=False,
                     constant=const, residual=residual,
                     per_direction=per_direction or (), per_alpha=per_alpha,
                     warning=warning)


# ---------------------------------------------------------------------------
# ellipticity


@dataclass(frozen=True)
class EllipticityReport:
    """Two-route ellipticity verdict: ray exponent of |xi|_1^m against the
    symbol sum, and the minimum of the principal symbol sum on the l1 sphere."""

    elliptic: bool | None      # None = the two tests disagreed
    margin: float              # sphere minimum
    ray_exponent: float        # inf when some ray had bounded symbols
    sphere_min: float
    status: str                # "elliptic" | "not_elliptic" | "inconclusive"
    detail: str = ""
    caveat: str = NUMERIC_CAVEAT

    def as_dict(self) -> dict:
        return {"elliptic": self.elliptic, "margin": self.margin,
                "ray_exponent": self.ray_exponent, "sphere_min": self.sphere_min,
                "status": self.status, "detail": self.detail, "caveat": self.caveat}


def check_elliptic(system: OperatorSystem, plan: SamplingPlan | None = None,
                   sphere_points: int = 10_000, threads: int = 1) -> EllipticityReport:
    """|xi|_1^m <= C (1 + sum|P_j(xi)|) tested asymptotically and on the sphere."""
    if plan is None:
        plan = make_plan(system.num_vars)
    m = system.order
    pts = _sample_points(plan)
    den = _field_values(system.symbol_sum_many, pts, threads)
    log_den = np.log1p(den)
    l1 = np.sum(np.abs(pts), axis=2)
    log_num = m * np.log(l1)
    fit = _fit_rays(log_num, log_den, plan)
    ray_exp = math.inf if fit.infinite else fit.raw
    ray_ok = (not fit.infinite) and fit.raw <= 1.0 + DEFAULT_SNAP_TOL

    thetas = _l1_sphere(system.num_vars, sphere_points, plan.seed)
    principal = system.principal_parts()
    tot = np.zeros(len(thetas))
    for p in principal:
        if not p.is_zero():
            tot += np.abs(p.eval_many(thetas))
    sphere_min = float(np.min(tot)) if len(thetas) else 0.0
    coeff_scale = max(1.0, max((float(p.max_abs_coeff()) for p in principal
                                if not p.is_zero()), default=1.0))
    sphere_ok = sphere_min > 1e-6 * coeff_scale

    if ray_ok and sphere_ok:
        return EllipticityReport(True, sphere_min, ray_exp, sphere_min, "elliptic")
    if not ray_ok and not sphere_ok:
        return EllipticityReport(False, sphere_min, ray_exp, sphere_min,
                                 "not_elliptic")
    return EllipticityReport(
        None, sphere_min, ray_exp, sphere_min, "inconclusive",
        detail="ray test and sphere test disagree; raise sphere_points or "
               "extend radii to resolve")


def _l1_sphere(n: int, count: int, seed: int) -> np.ndarray:
    rows = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        rows.append(e.copy())
        rows.append(-e)
    for bits in range(2 ** n):
        v = np.array([1.0 if not (bits >> i) & 1 else -1.0 for i in range(n)])
        rows.append(v / np.sum(np.abs(v)))
    rng = np.random.default_rng(seed + 1)
    g = rng.standard_normal((count, n))
    g /= np.sum(np.abs(g), axis=1, keepdims=True)
    return np.vstack([np.array(rows), g])


# ---------------------------------------------------------------------------
# strength comparison


@dataclass(frozen=True)
class StrengthReport:
    h_second_under_first: GrowthFit   # sum|Q| vs sum|P|
    h_first_under_second: GrowthFit
    equally_strong_1: bool
    orders: tuple[int, int]
    gamma_first: GrowthFit | None
    gamma_second: GrowthFit | None
    consistency: str                  # "ok" | "violation" | "not_applicable"
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "h_second_under_first": self.h_second_under_first.as_dict(),
            "h_first_under_second": self.h_first_under_second.as_dict(),
            "equally_strong_1": self.equally_strong_1,
            "orders": list(self.orders),
            "gamma_first": None if self.gamma_first is None else self.gamma_first.as_dict(),
            "gamma_second": None if self.gamma_second is None else self.gamma_second.as_dict(),
            "consistency": self.consistency, "detail": self.detail,
        }


def compare_strength(first: OperatorSystem, second: OperatorSystem,
                     plan: SamplingPlan | None = None,
                     max_den: int = DEFAULT_SNAP_DEN,
                     snap_tol: float = DEFAULT_SNAP_TOL,
                     threads: int = 1) -> StrengthReport:
    """Run the weakness estimate both ways; when both snap to 1, the orders
    must agree and the two derivative-decay exponents must coincide — a
    violation there flags the estimator, not the systems."""
    if plan is None:
        plan = make_plan(first.num_vars)
    h_21 = estimate_h(second, first, plan, max_den=max_den, threads=threads)
    h_12 = estimate_h(first, second, plan, max_den=max_den, threads=threads)
    one = Fraction(1)
    equal1 = (h_21.snapped == one and h_12.snapped == one)
    if not equal1:
        return StrengthReport(h_21, h_12, False, (first.order, second.order),
                              None, None, "not_applicable")
    g1 = estimate_gamma(first, plan, max_den=max_den, threads=threads)
    g2 = estimate_gamma(second, plan, max_den=max_den, threads=threads)
    problems = []
    if first.order != second.order:
        problems.append(f"orders differ: {first.order} vs {second.order}")
    if g1.infinite != g2.infinite or (
            not g1.infinite and abs(g1.exponent - g2.exponent) > snap_tol):
        problems.append(f"gamma mismatch: {g1.exponent} vs {g2.exponent}")
    return StrengthReport(h_21, h_12, True, (first.order, second.order), g1, g2,
                          "ok" if not problems else "violation",
                          "; ".join(problems))


# ---------------------------------------------------------------------------
# oracle re-verification on fresh samples


def verify_h_fit(weaker: OperatorSystem, stronger: OperatorSystem,
                 fit: GrowthFit, plan: SamplingPlan) -> float:
    """Fraction of fresh samples satisfying num <= C (1+den)^e for the fit."""
    if fit.infinite:
        raise ValueError("cannot verify an infinite marker against samples")
    pts = _sample_points(plan).reshape(-1, plan.num_vars)
    num = weaker.symbol_sum_many(pts)
    den = stronger.symbol_sum_many(pts)
    rhs = math.log(fit.constant) + fit.exponent * np.log1p(den)
    lhs = _log_values(num)
    ok = lhs <= rhs + 1e-9 * np.maximum(1.0, np.abs(rhs))
    return float(np.mean(ok))


def verify_gamma_fit(system: OperatorSystem, fit: GrowthFit,
                     plan: SamplingPlan, alpha_max: int | None = None) -> float:
    if fit.infinite:
        raise ValueError("cannot verify an infinite marker against samples")
    if alpha_max is None:
        alpha_max = system.order + 2
    gamma = fit.exponent
    pts = _sample_points(plan).reshape(-1, plan.num_vars)
    log_den = np.log1p(system.symbol_sum_many(pts))
    total = 0
    good = 0
    for alpha in multi_indices_up_to(system.num_vars, alpha_max):
        order = sum(alpha)
        if order == 0:
            continue
        derivs = [p.derivative(alpha) for p in system.polys]
        if all(d.is_zero() for d in derivs):
            continue
        num = np.zeros(pts.shape[0])
        for d in derivs:
            num += np.abs(d.eval_many(pts))
        lhs = _log_values(num)
        rhs = math.log(fit.constant) + (1.0 - order / gamma) * log_den
        ok = lhs <= rhs + 1e-9 * np.maximum(1.0, np.abs(rhs))
        total += len(ok)
        good += int(np.sum(ok))
    return good / total if total else 1.0
