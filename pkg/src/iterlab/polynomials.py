"""Exact multivariate polynomial arithmetic for operator symbols.

A polynomial in n variables is stored as a sparse map from exponent
multi-indices (tuples of n non-negative ints) to rational coefficients
(Fraction).  Zero-coefficient terms are never stored, so equality of the
term maps is equality of polynomials.  Evaluation at a rational point is
exact; evaluation at floats (or numpy arrays of sample points) is done in
floating point for throughput inside sampling loops.

Multi-indices are plain tuples of ints throughout: length n when they
index derivatives/exponents in the variables, length N when they count
iterate applications of the N members of an operator system.

The on-disk format is a plain text term list, one term per line:

    coeff  e1 e2 ... en

with the coefficient an integer or a rational written as p/q.  Lines may
also be separated by ';'.  Blank lines and '#' comments are skipped.
Parsing and formatting round-trip exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

NEG_INF = float("-inf")


def _canonical(terms: dict) -> dict[tuple[int, ...], Fraction]:
    out = {}
    for exps, coeff in terms.items():
        c = Fraction(coeff)
        if c == 0:
            continue
        e = tuple(int(k) for k in exps)
        if any(k < 0 for k in e):
            raise ValueError(f"negative exponent in term {exps}")
        out[e] = c
    return out


@dataclass(frozen=True)
class MultiPoly:
    """Sparse polynomial with exact rational coefficients.

    Treat instances as immutable: the term map is built once and never
    mutated afterwards, so values can be shared freely across workers.
    """

    num_vars: int
    terms: dict[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("num_vars must be a positive integer")
        object.__setattr__(self, "terms", _canonical(self.terms))
        for e in self.terms:
            if len(e) != self.num_vars:
                raise ValueError(
                    f"term {e} has {len(e)} exponents, expected {self.num_vars}"
                )

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(num_vars: int) -> "MultiPoly":
        return MultiPoly(num_vars, {})

    @staticmethod
    def constant(num_vars: int, value) -> "MultiPoly":
        return MultiPoly(num_vars, {(0,) * num_vars: Fraction(value)})

    @staticmethod
    def variable(num_vars: int, idx: int) -> "MultiPoly":
        if not 0 <= idx < num_vars:
            raise ValueError(f"variable index {idx} out of range for n={num_vars}")
        e = [0] * num_vars
        e[idx] = 1
        return MultiPoly(num_vars, {tuple(e): Fraction(1)})

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> float:
        """Total degree; -inf for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return float(max(sum(e) for e in self.terms))

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.num_vars == other.num_vars \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.num_vars, frozenset(self.terms.items())))

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_same_vars(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly(self.num_vars, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.num_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            self._check_same_vars(other)
            out: dict[tuple[int, ...], Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
            return MultiPoly(self.num_vars, out)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        return MultiPoly(self.num_vars, {e: c * v for e, v in self.terms.items()})

    def shift_exponents(self, delta: Sequence[int]) -> "MultiPoly":
        """Multiply by the monomial x^delta."""
        d = tuple(int(k) for k in delta)
        return MultiPoly(self.num_vars,
                         {tuple(a + b for a, b in zip(e, d)): c
                          for e, c in self.terms.items()})

    def _check_same_vars(self, other: "MultiPoly"):
        if self.num_vars != other.num_vars:
            raise ValueError(
                f"dimension mismatch: {self.num_vars} vs {other.num_vars} variables"
            )

    # -- evaluation ------------------------------------------------------
    def eval(self, point: Sequence):
        """Evaluate at a point; exact (Fraction) when all coordinates are rational."""
        if len(point) != self.num_vars:
            raise ValueError(
                f"point has {len(point)} coordinates, expected {self.num_vars}"
            )
        exact = all(isinstance(x, (int, Fraction)) for x in point)
        if exact:
            acc = Fraction(0)
            for e, c in self.terms.items():
                t = c
                for x, k in zip(point, e):
                    if k:
                        t *= Fraction(x) ** k
                acc += t
            return acc
        acc_f = 0.0
        for e, c in self.terms.items():
            t = float(c)
            for x, k in zip(point, e):
                if k:
                    t *= float(x) ** k
            acc_f += t
        return acc_f

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized float evaluation at an (S, n) array of sample points."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.num_vars:
            raise ValueError(f"expected an (S, {self.num_vars}) array")
        acc = np.zeros(pts.shape[0])
        for e, c in self.terms.items():
            t = np.full(pts.shape[0], float(c))
            for i, k in enumerate(e):
                if k:
                    t = t * pts[:, i] ** k
            acc += t
        return acc

    # -- calculus ----------------------------------------------------------
    def derivative(self, alpha: Sequence[int]) -> "MultiPoly":
        """Partial derivative of multi-order alpha, term-wise power rule."""
        a = tuple(int(k) for k in alpha)
        if len(a) != self.num_vars:
            raise ValueError(
                f"derivative order has length {len(a)}, expected {self.num_vars}"
            )
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            if any(ei < ai for ei, ai in zip(e, a)):
                continue
            coeff = c
            for ei, ai in zip(e, a):
                for r in range(ai):
                    coeff *= ei - r
            new_e = tuple(ei - ai for ei, ai in zip(e, a))
            out[new_e] = out.get(new_e, Fraction(0)) + coeff
        return MultiPoly(self.num_vars, out)

    def principal_part(self, m: int) -> "MultiPoly":
        """Terms of total degree exactly m (zero polynomial if none)."""
        return MultiPoly(self.num_vars,
                         {e: c for e, c in self.terms.items() if sum(e) == m})

    def max_abs_coeff(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return max(abs(c) for c in self.terms.values())

    # -- text format -------------------------------------------------------
    def format(self) -> str:
        """Canonical term-list text: graded-lex sorted, one term per line."""
        lines = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t)):
            c = self.terms[e]
            cs = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            lines.append(" ".join([cs] + [str(k) for k in e]))
        return "\n".join(lines)

    def __repr__(self):
        if not self.terms:
            return f"MultiPoly(n={self.num_vars}, 0)"
        return f"MultiPoly(n={self.num_vars}, {self.format().replace(chr(10), '; ')})"


def parse_poly(text: str, num_vars: int | None = None) -> MultiPoly:
    """Parse the term-list format; infers num_vars from the first term if not given."""
    terms: dict[tuple[int, ...], Fraction] = {}
    n = num_vars
    for lineno, raw in enumerate(_term_lines(text), start=1):
        parts = raw.split()
        if len(parts) < 2:
            raise ValueError(f"line {lineno}: expected 'coeff e1 ... en', got {raw!r}")
        try:
            coeff = Fraction(parts[0])
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"line {lineno}: bad coefficient {parts[0]!r}: {exc}") from exc
        try:
            exps = tuple(int(p) for p in parts[1:])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad exponent in {raw!r}") from exc
        if any(k < 0 for k in exps):
            raise ValueError(f"line {lineno}: negative exponent in {raw!r}")
        if n is None:
            n = len(exps)
        if len(exps) != n:
            raise ValueError(f"line {lineno}: expected {n} exponents, got {len(exps)}")
        terms[exps] = terms.get(exps, Fraction(0)) + coeff
    if n is None:
        raise ValueError("empty polynomial text and no num_vars given")
    return MultiPoly(n, terms)


def _term_lines(text: str) -> Iterator[str]:
    for chunk in text.replace(";", "\n").splitlines():
        line = chunk.split("#", 1)[0].strip()
        if line:
            yield line


@dataclass(frozen=True)
class OperatorSystem:
    """Ordered list of polynomial symbols sharing num_vars, of declared order m.

    Every member must have degree <= order and at least one member must
    attain it.  Members of lower degree are admitted but flagged
    (`attains_order`), and a warning is emitted at construction, since
    mixing orders changes the meaning of order-dependent quantities.
    """

    polys: tuple[MultiPoly, ...]
    order: int

    def __post_init__(self):
        polys = tuple(self.polys)
        object.__setattr__(self, "polys", polys)
        if not polys:
            raise ValueError("operator system must contain at least one symbol")
        if self.order < 1:
            raise ValueError("system order must be a positive integer")
        n = polys[0].num_vars
        for p in polys:
            if p.num_vars != n:
                raise ValueError("all symbols in a system must share num_vars")
            if p.degree() > self.order:
                raise ValueError(
                    f"symbol of degree {p.degree()} exceeds declared order {self.order}"
                )
        if not any(p.degree() == self.order for p in polys):
            raise ValueError(
                f"no symbol attains the declared order {self.order}"
            )
        if not all(self.attains_order):
            warnings.warn(
                "system declares order %d but some members have lower degree; "
                "order-dependent results treat every member as order %d"
                % (self.order, self.order),
                stacklevel=2,
            )

    @property
    def num_vars(self) -> int:
        return self.polys[0].num_vars

    @property
    def size(self) -> int:
        return len(self.polys)

    @property
    def attains_order(self) -> tuple[bool, ...]:
        return tuple(p.degree() == self.order for p in self.polys)

    def symbol_sum(self, point: Sequence) -> float:
        """Sum of |P_j(xi)| over the system members; >= 0."""
        vals = [p.eval(point) for p in self.polys]
        if all(isinstance(v, Fraction) for v in vals):
            return sum(abs(v) for v in vals)
        return float(sum(abs(float(v)) for v in vals))

    def symbol_sum_many(self, points: np.ndarray) -> np.ndarray:
        acc = np.zeros(np.asarray(points).shape[0])
        for p in self.polys:
            acc += np.abs(p.eval_many(points))
        return acc

    def principal_parts(self) -> tuple[MultiPoly, ...]:
        return tuple(p.principal_part(self.order) for p in self.polys)


def iterate_symbol(system: OperatorSystem, beta: Sequence[int], point: Sequence):
    """Symbol of the iterate: prod_j P_j(xi)^{beta_j}; 1 when beta = 0.

    Exact (Fraction) when the point is rational.  May overflow to inf in
    float mode for extreme inputs; use log_abs_iterate_symbol for large
    iterate orders.
    """
    b = _check_beta(system, beta)
    vals = [p.eval(point) for p in system.polys]
    exact = all(isinstance(v, Fraction) for v in vals)
    acc = Fraction(1) if exact else 1.0
    for v, k in zip(vals, b):
        if k:
            acc = acc * v ** k
    return acc


def log_abs_iterate_symbol(system: OperatorSystem, beta: Sequence[int],
                           point: Sequence) -> tuple[int, float]:
    """(sign, log|prod P_j(xi)^{beta_j}|) with log -inf when the product is 0."""
    b = _check_beta(system, beta)
    sign = 1
    log_abs = 0.0
    for p, k in zip(system.polys, b):
        if not k:
            continue
        v = float(p.eval([float(x) for x in point]))
        if v == 0.0:
            return 0, NEG_INF
        if v < 0 and k % 2:
            sign = -sign
        log_abs += k * math.log(abs(v))
    return sign, log_abs


def _check_beta(system: OperatorSystem, beta: Sequence[int]) -> tuple[int, ...]:
    b = tuple(int(k) for k in beta)
    if len(b) != system.size:
        raise ValueError(
            f"iterate index has length {len(b)}, expected {system.size}"
        )
    if any(k < 0 for k in b):
        raise ValueError("iterate index components must be non-negative")
    return b


def multi_indices(length: int, total: int) -> Iterator[tuple[int, ...]]:
    """All multi-indices of the given length with |alpha| == total."""
    if length == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in multi_indices(length - 1, total - first):
            yield (first,) + rest


def multi_indices_up_to(length: int, max_total: int) -> Iterator[tuple[int, ...]]:
    """All multi-indices with 0 <= |alpha| <= max_total, graded order."""
    for total in range(max_total + 1):
        yield from multi_indices(length, total)


# spec-level operation aliases over the method API
def poly_derivative(p: MultiPoly, alpha: Sequence[int]) -> MultiPoly:
    return p.derivative(alpha)


def poly_eval(p: MultiPoly, point: Sequence):
    return p.eval(point)


def system_symbol_sum(system: OperatorSystem, point: Sequence) -> float:
    return system.symbol_sum(point)


def principal_part(p: MultiPoly, m: int) -> MultiPoly:
    return p.principal_part(m)
