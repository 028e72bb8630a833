"""One-dimensional Gaussian moments M_k = int_a^b x^k exp(-c x^2) dx.

Box L2 norms of polynomial-times-Gaussian functions tensorize into these
1-d moments, so they have to stay accurate up to k of a few hundred.  The
integration-by-parts recurrence

    2c M_k = (k-1) M_{k-2} - [x^{k-1} exp(-c x^2)]_a^b

is run upward from erf-seeded M_0, M_1 while k <= 2 c max(a^2, b^2)
(interior-peak regime, where upward is the stable direction) and downward
with a zero start and a generous buffer above that (endpoint regime, where
the boundary forcing dominates and start-up error decays geometrically).
An independent evaluation through the regularized incomplete gamma
function serves as the cross-check oracle.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special


def gauss_moments(c: float, a: float, b: float, k_max: int) -> np.ndarray:
    """Moments M_0..M_k_max of exp(-c x^2) over [a, b], by the stable recurrence."""
    if c <= 0:
        raise ValueError("Gaussian decay rate c must be positive")
    if not a < b:
        raise ValueError("interval must satisfy a < b")
    ea = math.exp(-c * a * a)
    eb = math.exp(-c * b * b)
    sc = math.sqrt(c)
    M = np.zeros(k_max + 1)
    M[0] = math.sqrt(math.pi) / (2.0 * sc) * (special.erf(sc * b) - special.erf(sc * a))
    if k_max >= 1:
        M[1] = (ea - eb) / (2.0 * c)

    def boundary(k: int) -> float:
        # [x^{k-1} e^{-c x^2}]_a^b; 0^0 = 1 convention matches the k=1 seed
        return b ** (k - 1) * eb - a ** (k - 1) * ea

    A = 2.0 * c * max(a * a, b * b)
    k_up = min(k_max, max(int(math.floor(A)), 1))
    for k in range(2, k_up + 1):
        M[k] = ((k - 1) * M[k - 2] - boundary(k)) / (2.0 * c)

    if k_max > k_up:
        buffer = max(48, int(math.ceil(12.0 * math.sqrt(max(A, 1.0)))))
        k_top = max(k_max, int(math.ceil(A))) + buffer
        hi = np.zeros(k_top + 3)
        for k in range(k_top, k_up - 1, -1):
            hi[k] = (2.0 * c * hi[k + 2] + boundary(k + 2)) / (k + 1)
        M[k_up + 1:] = hi[k_up + 1:k_max + 1]
        # junction guard: one more downward step must reproduce the stable side
        if k_up >= 1:
            down = (2.0 * c * hi[k_up + 1] + boundary(k_up + 1)) / k_up
            ref = M[k_up - 1]
            scale = max(abs(ref), abs(M[k_up]), 1e-300)
            if abs(down - ref) > 1e-8 * scale:
                raise ArithmeticError(
                    "moment recurrence junction mismatch: "
                    f"c={c}, [{a}, {b}], k={k_up - 1}: {down} vs {ref}"
                )
    return M


def gauss_moments_gamma(c: float, a: float, b: float, k_max: int) -> np.ndarray:
    """Independent oracle via the regularized lower incomplete gamma function."""
    ks = np.arange(k_max + 1)
    s = (ks + 1) / 2.0

    def half(X: float) -> np.ndarray:
        # int_0^X x^k e^{-c x^2} dx for X >= 0
        if X == 0.0:
            return np.zeros(k_max + 1)
        return 0.5 * np.exp(special.gammaln(s) - s * math.log(c)) \
            * special.gammainc(s, c * X * X)

    signs = (-1.0) ** ks
    if a >= 0:
        return half(b) - half(a)
    if b <= 0:
        return signs * (half(-a) - half(-b))
    return half(b) + signs * half(-a)


def gauss_moments_quad(c: float, a: float, b: float, k_max: int) -> np.ndarray:
    """Adaptive-quadrature oracle; slow, used by cross-checks only."""
    from scipy.integrate import quad

    out = np.zeros(k_max + 1)
    for k in range(k_max + 1):
        out[k], _ = quad(lambda x, kk=k: x ** kk * math.exp(-c * x * x),
                         a, b, limit=400)
    return out


def cross_checked_moments(c: float, a: float, b: float, k_max: int,
                          rel_tol: float = 1e-8) -> np.ndarray:
    """Recurrence moments validated against the incomplete-gamma oracle.

    Raises if the two routes disagree beyond rel_tol relative to the
    dominant moment scale; that indicates an implementation bug, not an
    input problem.
    """
    rec = gauss_moments(c, a, b, k_max)
    orc = gauss_moments_gamma(c, a, b, k_max)
    scale = np.maximum(np.abs(orc), float(np.max(np.abs(orc))) * 1e-12 + 1e-300)
    worst = float(np.max(np.abs(rec - orc) / scale))
    if worst > rel_tol:
        raise ArithmeticError(
            f"moment cross-check failed: c={c}, [{a}, {b}], k_max={k_max}, "
            f"max relative gap {worst:.3e}"
        )
    return rec
