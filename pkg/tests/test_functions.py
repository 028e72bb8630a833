"""Test-function family: closure under operators, exact plane-wave action,
Gaussian derivative algebra against quadrature, and log-domain box norms."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import nquad

from iterlab import (Box, FunctionSum, MultiPoly, OperatorSystem, PlaneWave,
                     PolyGaussian, add_functions, apply_iterate,
                     apply_operator, iterate_symbol, l2_norm_on_box,
                     parse_poly, scale_function)

BOX2 = Box((-1.0, -1.0), (1.0, 1.0))
LAPLACE = parse_poly("-1 2 0; -1 0 2")
PQ = OperatorSystem((parse_poly("1 2 0"), parse_poly("1 0 2")), 2)
GAUSS = PolyGaussian.real(MultiPoly.constant(2, 1), Fraction(1))


def test_box_validation_and_volume():
    assert BOX2.volume == 4.0
    assert BOX2.log_volume == pytest.approx(math.log(4.0))
    with pytest.raises(ValueError):
        Box((0.0,), (0.0,))
    with pytest.raises(ValueError):
        Box((0.0, 0.0), (1.0,))


def test_plane_wave_eigenvalue_action():
    f = PlaneWave((Fraction(3), Fraction(0)))
    out = apply_operator(parse_poly("1 1 0"), f)
    assert out.coef == 3 and out.xi == f.xi


def test_gaussian_laplacian_example():
    out = apply_operator(LAPLACE, GAUSS)
    assert out.poly_im.is_zero()
    assert out.poly_re == parse_poly("4 2 0; 4 0 2; -4 0 0")
    assert out.scale == 1


def test_odd_symbol_makes_imaginary_part():
    out = apply_operator(parse_poly("1 1 0"), GAUSS)  # D_1 G = 2 i x1 G
    assert out.poly_re.is_zero()
    assert out.poly_im == parse_poly("2 1 0")


def test_apply_operator_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_operator(parse_poly("1 1"), GAUSS)


def test_linearity_exact():
    rng = np.random.default_rng(5)
    for _ in range(10):
        terms_u = {(int(rng.integers(0, 3)), int(rng.integers(0, 3))):
                   Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
                   for _ in range(3)}
        u = PolyGaussian.real(MultiPoly(2, terms_u), Fraction(1, 2))
        v = PolyGaussian.real(parse_poly("1 1 1"), Fraction(1, 2))
        op = LAPLACE
        lhs = apply_operator(op, add_functions(u, v))
        rhs = add_functions(apply_operator(op, u), apply_operator(op, v))
        assert lhs == rhs


def test_apply_iterate_identity_and_symbol_correspondence():
    f = PlaneWave((Fraction(2), Fraction(-1)))
    assert apply_iterate(PQ, (0, 0), f) is f
    out = apply_iterate(PQ, (3, 2), f)
    assert out.coef == iterate_symbol(PQ, (3, 2), f.xi)


def test_apply_iterate_semigroup_exact():
    beta, gamma = (2, 1), (1, 3)
    combined = tuple(b + g for b, g in zip(beta, gamma))
    one_shot = apply_iterate(PQ, combined, GAUSS)
    two_step = apply_iterate(PQ, beta, apply_iterate(PQ, gamma, GAUSS))
    assert one_shot == two_step  # exact rational coefficients


def test_plane_wave_norm_exact():
    f = PlaneWave((Fraction(3), Fraction(4)))
    assert l2_norm_on_box(f, Box((0.0, 0.0), (1.0, 1.0))) == pytest.approx(0.0, abs=1e-15)
    assert l2_norm_on_box(f, BOX2) == pytest.approx(0.5 * math.log(4.0))
    zero = PlaneWave(f.xi, Fraction(0))
    assert l2_norm_on_box(zero, BOX2) == -math.inf


def test_gaussian_norm_1d_against_quadrature():
    g1 = PolyGaussian.real(MultiPoly.constant(1, 1), Fraction(1))
    got = l2_norm_on_box(g1, Box((-1.0,), (1.0,)), check=True)
    want, _ = nquad(lambda x: math.exp(-2.0 * x * x), [[-1.0, 1.0]])
    assert got == pytest.approx(0.5 * math.log(want), abs=1e-10)


def test_gaussian_norm_2d_against_quadrature():
    u = PolyGaussian(parse_poly("1 2 0; -1 0 0"), parse_poly("1 1 1"),
                     Fraction(3, 4))
    got = l2_norm_on_box(u, BOX2, check=True)

    def integrand(x, y):
        re = x * x - 1.0
        im = x * y
        return (re * re + im * im) * math.exp(-1.5 * (x * x + y * y))

    want, _ = nquad(integrand, [[-1.0, 1.0], [-1.0, 1.0]])
    assert got == pytest.approx(0.5 * math.log(want), rel=1e-10)


def test_norm_scaling_homogeneity():
    u = PolyGaussian.real(parse_poly("1 1 0; 1 0 0"), Fraction(1))
    base = l2_norm_on_box(u, BOX2)
    scaled = l2_norm_on_box(scale_function(u, Fraction(-7, 2)), BOX2)
    assert scaled == pytest.approx(base + math.log(3.5), abs=1e-12)


def test_norm_monotone_in_box():
    u = PolyGaussian.real(parse_poly("1 1 1; 1 0 0"), Fraction(1, 2))
    small = Box((-0.5, -0.5), (0.5, 0.5))
    assert l2_norm_on_box(u, small) <= l2_norm_on_box(u, BOX2)


def test_plane_wave_sum_norm_against_quadrature():
    u = FunctionSum((PlaneWave((Fraction(1), Fraction(0))),
                     PlaneWave((Fraction(3), Fraction(2)), Fraction(1, 2))))
    got = l2_norm_on_box(u, BOX2)

    def integrand(x, y):
        val = np.exp(1j * x) + 0.5 * np.exp(1j * (3 * x + 2 * y))
        return abs(val) ** 2

    want, _ = nquad(integrand, [[-1.0, 1.0], [-1.0, 1.0]])
    assert got == pytest.approx(0.5 * math.log(want), rel=1e-10)


def test_gaussian_sum_norm_mixed_scales():
    u = PolyGaussian.real(MultiPoly.constant(2, 1), Fraction(1))
    v = PolyGaussian.real(parse_poly("1 1 0"), Fraction(1, 2))
    got = l2_norm_on_box(FunctionSum((u, v)), BOX2, check=True)

    def integrand(x, y):
        val = math.exp(-(x * x + y * y)) + x * math.exp(-0.5 * (x * x + y * y))
        return val * val

    want, _ = nquad(integrand, [[-1.0, 1.0], [-1.0, 1.0]])
    assert got == pytest.approx(0.5 * math.log(want), rel=1e-10)


def test_mixed_sum_norm_unsupported():
    u = FunctionSum((PlaneWave((Fraction(1), Fraction(0))), GAUSS))
    out = apply_operator(LAPLACE, u)      # application still closed
    assert isinstance(out, FunctionSum)
    with pytest.raises(NotImplementedError):
        l2_norm_on_box(u, BOX2)


def test_high_iterate_order_stays_finite():
    # iterate order ~50 would overflow naive float coefficients
    f = apply_iterate(OperatorSystem((LAPLACE,), 2), (25,), GAUSS)
    val = l2_norm_on_box(f, BOX2)
    assert math.isfinite(val) and val > 0


def test_sum_linearity_of_application():
    f = PlaneWave((Fraction(1), Fraction(2)))
    g = PlaneWave((Fraction(2), Fraction(1)), Fraction(3))
    u = add_functions(f, g)
    lhs = apply_operator(LAPLACE, u)
    rhs = add_functions(apply_operator(LAPLACE, f), apply_operator(LAPLACE, g))
    assert lhs == rhs
