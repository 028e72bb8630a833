"""Symbolic test functions closed under constant-coefficient operators.

Two closed families, applied with the convention D_j = -i d/dx_j so that a
polynomial symbol p acts multiplicatively on plane waves:

* plane waves  c * exp(i <x, xi>):  p(D) u = p(xi) u, exactly, with the
  frequency and coefficient kept as rationals;
* polynomial-times-Gaussian  (q_re(x) + i q_im(x)) * exp(-scale * |x|^2):
  p(D) u stays in the family; the polynomial part is exact rational, so
  iterate orders in the hundreds neither overflow nor lose digits.  Floats
  only appear at norm time, where coefficients are split into a shared
  log-scale and unit-sized mantissas.

L2 norms over boxes are returned in the log domain (-inf for the zero
function).  Plane-wave norms are exact: |u| is constant |c| so the norm is
|c| * volume^(1/2).  Gaussian norms tensorize into 1-d moments (see
moments.py); `check=True` routes those through the cross-checked oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .moments import cross_checked_moments, gauss_moments
from .polynomials import MultiPoly, OperatorSystem, _check_beta

NEG_INF = float("-inf")


@dataclass(frozen=True)
class Box:
    """Axis-aligned product of intervals [lower_i, upper_i]."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(x) for x in self.lower)
        hi = tuple(float(x) for x in self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("box needs matching non-empty lower/upper bounds")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError("box intervals must satisfy lower < upper")

    @property
    def num_vars(self) -> int:
        return len(self.lower)

    @property
    def volume(self) -> float:
        v = 1.0
        for a, b in zip(self.lower, self.upper):
            v *= b - a
        return v

    @property
    def log_volume(self) -> float:
        return sum(math.log(b - a) for a, b in zip(self.lower, self.upper))


def _as_fraction_tuple(xs) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True)
class PlaneWave:
    """coef * exp(i <x, xi>); eigenfunction of every constant-coefficient operator."""

    xi: tuple[Fraction, ...]
    coef: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "xi", _as_fraction_tuple(self.xi))
        object.__setattr__(self, "coef", Fraction(self.coef))
        if not self.xi:
            raise ValueError("plane wave needs at least one frequency component")

    @property
    def num_vars(self) -> int:
        return len(self.xi)

    def is_zero(self) -> bool:
        return self.coef == 0

    def describe(self) -> dict:
        return {"kind": "plane_wave", "xi": [float(x) for x in self.xi],
                "coef": float(self.coef)}


@dataclass(frozen=True)
class PolyGaussian:
    """(poly_re + i poly_im)(x) * exp(-scale * |x|^2), scale > 0, exact rational."""

    poly_re: MultiPoly
    poly_im: MultiPoly
    scale: Fraction

    def __post_init__(self):
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.scale <= 0:
            raise ValueError("Gaussian scale must be positive")
        if self.poly_re.num_vars != self.poly_im.num_vars:
            raise ValueError("real and imaginary parts must share num_vars")

    @staticmethod
    def real(poly: MultiPoly, scale) -> "PolyGaussian":
        return PolyGaussian(poly, MultiPoly.zero(poly.num_vars), Fraction(scale))

    @property
    def num_vars(self) -> int:
        return self.poly_re.num_vars

    def is_zero(self) -> bool:
        return self.poly_re.is_zero() and self.poly_im.is_zero()

    def describe(self) -> dict:
        return {"kind": "poly_gaussian", "scale": float(self.scale),
                "poly": self.poly_re.format(),
                "poly_im": self.poly_im.format()}


@dataclass(frozen=True)
class FunctionSum:
    """Finite sum of family members; closed under operators term by term."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ValueError("empty sum; use a zero plane wave instead")
        n = parts[0].num_vars
        if any(p.num_vars != n for p in parts):
            raise ValueError("sum members must share num_vars")

    @property
    def num_vars(self) -> int:
        return self.parts[0].num_vars

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def describe(self) -> dict:
        return {"kind": "sum", "parts": [p.describe() for p in self.parts]}


TestFunction = PlaneWave | PolyGaussian | FunctionSum


# ---------------------------------------------------------------------------
# algebra on functions


def add_functions(u: TestFunction, v: TestFunction) -> TestFunction:
    """u + v, merging exactly when both live on the same carrier."""
    if u.num_vars != v.num_vars:
        raise ValueError("dimension mismatch in function sum")
    if isinstance(u, PlaneWave) and isinstance(v, PlaneWave) and u.xi == v.xi:
        return PlaneWave(u.xi, u.coef + v.coef)
    if isinstance(u, PolyGaussian) and isinstance(v, PolyGaussian) \
            and u.scale == v.scale:
        return PolyGaussian(u.poly_re + v.poly_re, u.poly_im + v.poly_im, u.scale)
    us = u.parts if isinstance(u, FunctionSum) else (u,)
    vs = v.parts if isinstance(v, FunctionSum) else (v,)
    return FunctionSum(us + vs)


def scale_function(u: TestFunction, c) -> TestFunction:
    c = Fraction(c)
    if isinstance(u, PlaneWave):
        return PlaneWave(u.xi, c * u.coef)
    if isinstance(u, PolyGaussian):
        return PolyGaussian(u.poly_re.scale(c), u.poly_im.scale(c), u.scale)
    return FunctionSum(tuple(scale_function(p, c) for p in u.parts))


# ---------------------------------------------------------------------------
# operator application, D_j = -i d/dx_j


def apply_operator(op: MultiPoly, u: TestFunction) -> TestFunction:
    """Apply the operator with symbol `op` to u, staying inside the family."""
    if op.num_vars != u.num_vars:
        raise ValueError(
            f"operator in {op.num_vars} variables applied to a function in "
            f"{u.num_vars}"
        )
    if isinstance(u, PlaneWave):
        return PlaneWave(u.xi, u.coef * op.eval(u.xi))
    if isinstance(u, FunctionSum):
        return FunctionSum(tuple(apply_operator(op, p) for p in u.parts))

    n = u.num_vars
    acc_re = MultiPoly.zero(n)
    acc_im = MultiPoly.zero(n)
    for exps, coeff in op.terms.items():
        q_re, q_im = u.poly_re, u.poly_im
        for axis, k in enumerate(exps):
            for _ in range(k):
                q_re, q_im = _apply_D(q_re, q_im, axis, u.scale)
        acc_re = acc_re + q_re.scale(coeff)
        acc_im = acc_im + q_im.scale(coeff)
    return PolyGaussian(acc_re, acc_im, u.scale)


def _apply_D(q_re: MultiPoly, q_im: MultiPoly, axis: int, scale: Fraction):
    # D (q G) = -i (dq - 2 scale x_axis q) G, componentwise on re/im
    a_re = _carried_derivative(q_re, axis, scale)
    a_im = _carried_derivative(q_im, axis, scale)
    return a_im, -a_re


def _carried_derivative(q: MultiPoly, axis: int, scale: Fraction) -> MultiPoly:
    e = [0] * q.num_vars
    e[axis] = 1
    return q.derivative(e) + q.shift_exponents(e).scale(-2 * scale)


def apply_iterate(system: OperatorSystem, beta, u: TestFunction) -> TestFunction:
    """Composition prod_j P_j(D)^{beta_j} applied to u; beta = 0 returns u."""
    b = _check_beta(system, beta)
    if system.num_vars != u.num_vars:
        raise ValueError("system and function dimension mismatch")
    out = u
    for p, k in zip(system.polys, b):
        for _ in range(k):
            out = apply_operator(p, out)
    return out


# ---------------------------------------------------------------------------
# L2 norms on boxes, log domain


def l2_norm_on_box(u: TestFunction, box: Box, check: bool = False) -> float:
    """log of the L2(box) norm of u; -inf for the zero function.

    check=True routes Gaussian moments through the cross-checked oracle
    (recurrence vs incomplete gamma), raising on disagreement.
    """
    if u.num_vars != box.num_vars:
        raise ValueError("function and box dimension mismatch")
    if isinstance(u, PlaneWave):
        if u.coef == 0:
            return NEG_INF
        return _frac_log_abs(u.coef) + 0.5 * box.log_volume
    if isinstance(u, PolyGaussian):
        return _gaussian_norm(u, box, check)
    kinds = {type(p) for p in u.parts}
    if kinds == {PlaneWave}:
        return _plane_wave_sum_norm(u.parts, box)
    if kinds == {PolyGaussian}:
        return _gaussian_sum_norm(u.parts, box, check)
    raise NotImplementedError(
        "L2 norm of a mixed plane-wave / Gaussian sum is not supported"
    )


def _frac_log_abs(fr: Fraction) -> float:
    if fr == 0:
        return NEG_INF
    return math.log(abs(fr.numerator)) - math.log(fr.denominator)


def _poly_mantissas(p: MultiPoly) -> tuple[float, np.ndarray]:
    """(log_scale, dense mantissa grid) with mantissas in [-1, 1]."""
    if p.is_zero():
        return NEG_INF, np.zeros((1,) * p.num_vars)
    logs = {e: _frac_log_abs(c) for e, c in p.terms.items()}
    log_scale = max(logs.values())
    shape = tuple(max(e[i] for e in p.terms) + 1 for i in range(p.num_vars))
    grid = np.zeros(shape)
    for e, c in p.terms.items():
        grid[e] = math.copysign(math.exp(logs[e] - log_scale), c.numerator)
    return log_scale, grid


def _hankel(moments: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.array([[moments[i + j] for j in range(cols)] for i in range(rows)])


def _moment_tensor_apply(grid: np.ndarray, per_axis_moments: list[np.ndarray]) -> np.ndarray:
    out = grid
    for axis in range(grid.ndim):
        H = _hankel(per_axis_moments[axis], grid.shape[axis], grid.shape[axis])
        out = np.moveaxis(np.tensordot(H, np.moveaxis(out, axis, 0), axes=(1, 0)), 0, axis)
    return out


def _axis_moments(c2: float, box: Box, k_needed: tuple[int, ...], check: bool):
    fn = cross_checked_moments if check else gauss_moments
    return [fn(c2, box.lower[i], box.upper[i], k_needed[i])
            for i in range(box.num_vars)]


def _gaussian_norm(u: PolyGaussian, box: Box, check: bool) -> float:
    if u.is_zero():
        return NEG_INF
    c2 = 2.0 * float(u.scale)
    parts = []
    shapes = []
    for q in (u.poly_re, u.poly_im):
        if q.is_zero():
            continue
        log_scale, grid = _poly_mantissas(q)
        parts.append((log_scale, grid))
        shapes.append(grid.shape)
    k_needed = tuple(2 * max(s[i] for s in shapes) for i in range(u.num_vars))
    ms = _axis_moments(c2, box, k_needed, check)
    log_ref = max(ls for ls, _ in parts)
    total = 0.0
    for log_scale, grid in parts:
        v = float(np.sum(grid * _moment_tensor_apply(grid, ms)))
        total += math.exp(2.0 * (log_scale - log_ref)) * max(v, 0.0)
    if total <= 0.0:
        return NEG_INF
    return log_ref + 0.5 * math.log(total)


def _gaussian_sum_norm(parts, box: Box, check: bool) -> float:
    live = [p for p in parts if not p.is_zero()]
    if not live:
        return NEG_INF
    comps = []   # (log_scale, grid_re_or_None, grid_im_or_None, scale)
    for p in live:
        lr, gr = _poly_mantissas(p.poly_re)
        li, gi = _poly_mantissas(p.poly_im)
        comps.append((p, lr, gr, li, gi))
    log_ref = max(max(lr, li) for _, lr, gr, li, gi in comps)
    total = 0.0
    for a, (pa, lra, gra, lia, gia) in enumerate(comps):
        for b_idx, (pb, lrb, grb, lib, gib) in enumerate(comps):
            c2 = float(pa.scale + pb.scale)
            # Re(qa * conj(qb)) = qa_re qb_re + qa_im qb_im
            for (la, ga), (lb, gb) in (((lra, gra), (lrb, grb)),
                                       ((lia, gia), (lib, gib))):
                if la == NEG_INF or lb == NEG_INF:
                    continue
                k_needed = tuple(ga.shape[i] + gb.shape[i] - 2
                                 for i in range(box.num_vars))
                ms = _axis_moments(c2, box, k_needed, check)
                out = gb
                for axis in range(gb.ndim):
                    H = _hankel(ms[axis], ga.shape[axis], gb.shape[axis])
                    out = np.moveaxis(
                        np.tensordot(H, np.moveaxis(out, axis, 0), axes=(1, 0)),
                        0, axis)
                total += math.exp(la + lb - 2.0 * log_ref) * float(np.sum(ga * out))
    if total <= 0.0:
        return NEG_INF
    return log_ref + 0.5 * math.log(total)


def _plane_wave_sum_norm(parts, box: Box) -> float:
    live = [p for p in parts if p.coef != 0]
    if not live:
        return NEG_INF
    logs = [_frac_log_abs(p.coef) for p in live]
    log_ref = max(logs)
    mants = [math.copysign(math.exp(l - log_ref), p.coef)
             for l, p in zip(logs, live)]
    total = 0.0
    for j, pj in enumerate(live):
        for k, pk in enumerate(live):
            delta = [float(a - b) for a, b in zip(pj.xi, pk.xi)]
            total += mants[j] * mants[k] * _box_wave_integral(delta, box).real
    if total <= 0.0:
        return NEG_INF
    return log_ref + 0.5 * math.log(total)


def _box_wave_integral(delta, box: Box) -> complex:
    out = complex(1.0)
    for d, a, b in zip(delta, box.lower, box.upper):
        if d == 0.0:
            out *= b - a
        else:
            out *= (np.exp(1j * b * d) - np.exp(1j * a * d)) / (1j * d)
    return out
