import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entire_symmetry.expr import differentiate, evaluate, parse
from entire_symmetry.series import (
    AllCoefficientsVanish,
    CenterMismatch,
    OrderMismatch,
    TaylorSeries,
    add,
    compose,
    compose_affine,
    derivative,
    expand,
    mul,
    scale,
    zero_order,
)

from conftest import CORPUS

S2 = math.sqrt(2)


def _close(got, want, tol=1e-12):
    got = np.asarray(got)
    assert got.shape == np.shape(want)
    assert np.max(np.abs(got - np.asarray(want, dtype=complex))) <= tol


def test_expand_cos_at_pi():
    _close(expand(parse("cos(z)"), math.pi, 4).coeffs, [-1, 0, 0.5, 0, -1 / 24])


def test_expand_monomial():
    _close(expand(parse("z^2"), 0, 4).coeffs, [0, 0, 1, 0, 0])


def test_expand_quartic_at_critical_point():
    s = expand(parse("z^4+z^2"), 1j / S2, 2)
    _close(s.coeffs, [-0.25, 0, -2], tol=1e-12)


def test_expand_rejects_order_zero():
    with pytest.raises(ValueError):
        expand(parse("z"), 0, 0)


def test_expand_overflow():
    with pytest.raises(OverflowError):
        expand(parse("exp(z)"), 800, 8)


def test_ring_examples():
    _close(add(TaylorSeries(0, [0, 1]), TaylorSeries(0, [1, 0])).coeffs, [1, 1])
    _close(mul(TaylorSeries(0, [0, 1, 0]), TaylorSeries(0, [0, 1, 0])).coeffs, [0, 0, 1])
    _close(scale(TaylorSeries(0, [1, 2]), 3).coeffs, [3, 6])


def test_mismatches():
    with pytest.raises(CenterMismatch):
        add(TaylorSeries(0, [1, 2]), TaylorSeries(1, [1, 2]))
    with pytest.raises(OrderMismatch):
        mul(TaylorSeries(0, [1, 2]), TaylorSeries(0, [1, 2, 3]))


def test_series_is_immutable():
    s = TaylorSeries(0, [1, 2])
    with pytest.raises(ValueError):
        s.coeffs[0] = 5


def test_compose_affine_examples():
    sq = expand(parse("z^2"), 0, 2)
    _close(compose_affine(sq, -1, 0, 0).coeffs, [0, 0, 1])

    w = cmath.exp(2j * math.pi / 3)
    cu = compose_affine(expand(parse("z^3"), 0, 3), w, 0, 0)
    _close(cu.coeffs, [0, 0, 0, 1], tol=1e-15)

    c = expand(parse("cos(z)"), math.pi, 12)
    back = compose_affine(c, -1, 2 * math.pi, math.pi)
    _close(back.coeffs, c.coeffs, tol=1e-15)


def test_compose_affine_center_check():
    s = expand(parse("z^2"), 1, 4)
    with pytest.raises(CenterMismatch):
        compose_affine(s, -1, 0, 1)


def test_derivative_examples():
    _close(derivative(TaylorSeries(0, [0, 0, 1])).coeffs, [0, 2])
    _close(derivative(TaylorSeries(math.pi, [-1, 0, 0.5, 0, -1 / 24])).coeffs, [0, 1, 0, -1 / 6])
    _close(derivative(TaylorSeries(0, [5, 0])).coeffs, [0])


def test_zero_order_examples():
    assert zero_order(expand(parse("z^2"), 0, 8)) == 2
    assert zero_order(expand(parse("cos(z) + 1"), math.pi, 16)) == 2
    assert zero_order(expand(parse("z^4 + z^2 + 1/4"), 1j / S2, 8)) == 2


def test_zero_order_is_relative():
    # scaling must not change the answer
    big = expand(parse("1e12*(z^3 + z^5)"), 0, 8)
    small = expand(parse("1e-12*(z^3 + z^5)"), 0, 8)
    assert zero_order(big) == zero_order(small) == 3


def test_zero_order_all_vanish():
    with pytest.raises(AllCoefficientsVanish):
        zero_order(TaylorSeries(0, [0, 0, 0]))


def test_compose_general_inner():
    # exp(sin z) about 0, compared against direct expansion
    outer = expand(parse("exp(z)"), 0, 10)
    inner = expand(parse("sin(z)"), 0, 10)
    _close(compose(outer, inner).coeffs, expand(parse("exp(sin(z))"), 0, 10).coeffs, tol=1e-14)


def test_horner_evaluation():
    s = expand(parse("exp(z)"), 0.5, 30)
    assert abs(s(0.9) - cmath.exp(0.9)) <= 1e-14


# properties ---------------------------------------------------------------

coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
series3 = st.lists(coef, min_size=6, max_size=6).map(lambda c: TaylorSeries(0.5, c))


@settings(max_examples=100, deadline=None)
@given(series3, series3, series3)
def test_ring_axioms(s, t, u):
    tol = 1e-12 * 1e3 * 3  # coefficients up to 10, products of three sums of 6 terms
    assert (s + t).allclose(t + s, 1e-12)
    assert ((s + t) + u).allclose(s + (t + u), 1e-12)
    assert (s * t).allclose(t * s, tol)
    assert ((s * t) * u).allclose(s * (t * u), tol)
    assert (s * (t + u)).allclose(s * t + s * u, tol)


def _c(x):
    x = complex(x)
    return f"({x.real!r} + {x.imag!r}*i)"


def _poly_text(coeffs, var="z"):
    return " + ".join(f"{_c(c)}*({var})^{k}" for k, c in enumerate(coeffs))


def compose_affine_case(seed):
    rng = np.random.default_rng(seed)
    deg = int(rng.integers(1, 9))
    coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
    lam = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    b = complex(*rng.normal(size=2))
    z0 = complex(*rng.normal(size=2))
    w0 = lam * z0 + b
    f = parse(_poly_text(coeffs))
    g = parse(_poly_text(coeffs, var=f"{_c(lam)}*z + {_c(b)}"))
    n = 12
    got = compose_affine(expand(f, w0, n), lam, b, z0).coeffs
    want = expand(g, z0, n).coeffs
    return float(np.max(np.abs(got - want)))


@pytest.mark.parametrize("seed", range(100))
def test_compose_affine_matches_direct_expansion(seed):
    assert compose_affine_case(seed) <= 1e-10


def halving_ratios(text, n, center=0.3, r=0.5):
    f = parse(text)
    s = expand(f, center, n)
    errs = []
    for k in range(3):
        h = r / 2**k * cmath.exp(0.7j)
        errs.append(abs(s(center + h) - evaluate(f, center + h)))
    return [errs[i] / errs[i + 1] for i in range(2)]


@pytest.mark.parametrize("text", ["exp(z)", "sin(z)", "cos(z)", "z^3*exp(2*z)/7 - i*z", "cosh(z)^2+z^2"])
def test_truncation_error_halves(text):
    n = 6
    for ratio in halving_ratios(text, n):
        assert ratio >= 2 ** (n - 1)


@pytest.mark.parametrize("text", CORPUS)
def test_derivative_commutes_with_expand(text):
    f = parse(text)
    for c in (0.0, 0.4 - 0.3j, 1.1j):
        a = derivative(expand(f, c, 24)).coeffs
        b = expand(differentiate(f), c, 23).coeffs
        assert np.max(np.abs(a - b)) <= 1e-10 * max(1.0, np.max(np.abs(b)))


@pytest.mark.parametrize("text", CORPUS)
def test_coefficients_match_derivatives(text):
    # a_j = f^(j)(c)/j! checked through the first few symbolic derivatives
    f = parse(text)
    c = 0.2 + 0.1j
    s = expand(f, c, 6)
    g = f
    for j in range(5):
        want = evaluate(g, c) / math.factorial(j)
        assert abs(s[j] - want) <= 1e-12 * (1 + abs(want))
        g = differentiate(g)
