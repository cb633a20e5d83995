import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entire_symmetry.expr import differentiate, evaluate, parse, to_polynomial
from entire_symmetry.roots import (
    BoxRequired,
    ConstantFunctionError,
    SearchBox,
    critical_points,
    polynomial_root_clusters,
    polynomial_roots,
)

S2 = math.sqrt(2)


def _match(got, want, tol):
    got = sorted(got, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    want = sorted(want, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    assert len(got) == len(want)
    for g, w in zip(got, want):
        assert abs(g - w) <= tol, (got, want)


def test_cubic_derivative_roots():
    _match(polynomial_roots(to_polynomial(parse("4*z^3 + 2*z"))), [0, 1j / S2, -1j / S2], 1e-10)


def test_double_root():
    p = to_polynomial(parse("z^2"))
    assert polynomial_roots(p) == [0, 0]
    assert polynomial_root_clusters(p)[0][1] == 2


def test_linear():
    assert polynomial_roots(to_polynomial(parse("z - 1"))) == [1]


def test_exact_multiple_roots_come_back_exact():
    clusters = polynomial_root_clusters(to_polynomial(parse("(z - 1/3)^3 * (z + i)^2 * (z^2 + 2)")))
    mults = {c[1] for c in clusters}
    assert mults == {1, 3, 2}
    thirds = [c for c in clusters if c[1] == 3][0]
    assert str(thirds[2]) == "1/3"


def test_degree_zero_rejected():
    with pytest.raises(ValueError):
        polynomial_roots(to_polynomial(parse("3")))


@pytest.mark.parametrize("seed", range(20))
def test_against_numpy_roots(seed):
    # numpy's companion-matrix eigenvalues serve as an independent oracle
    rng = np.random.default_rng(seed)
    deg = int(rng.integers(1, 13))
    coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
    text = " + ".join(f"({float(c.real)!r} + {float(c.imag)!r}*i)*z^{k}" for k, c in enumerate(coeffs))
    got = polynomial_roots(to_polynomial(parse(text)))
    want = list(np.roots(coeffs[::-1]))
    _match(got, want, 1e-8)


def test_critical_points_polynomial():
    cps = critical_points(parse("z^4+z^2"))
    _match([c.location for c in cps], [0, 1j / S2, -1j / S2], 1e-12)
    assert all(c.multiplicity == 1 for c in cps)
    assert [c.location for c in cps] == sorted([c.location for c in cps], key=lambda z: (z.real, z.imag))


def test_critical_points_multiplicity():
    cps = critical_points(parse("z^5"))
    assert len(cps) == 1 and cps[0].multiplicity == 4


def test_critical_points_cos():
    cps = critical_points(parse("cos(z)"), SearchBox(-7 - 1j, 7 + 1j, 40))
    _match([c.location for c in cps], [k * math.pi for k in range(-2, 3)], 1e-9)


def test_critical_points_exp_empty():
    assert critical_points(parse("exp(z)"), SearchBox(-3 - 3j, 3 + 3j, 20)) == []


def test_box_required():
    with pytest.raises(BoxRequired):
        critical_points(parse("sin(z)"))


def test_constant_function():
    with pytest.raises(ConstantFunctionError):
        critical_points(parse("5"))


def test_box_validation():
    with pytest.raises(ValueError):
        SearchBox(1, 0)
    with pytest.raises(ValueError):
        SearchBox(0, 1 + 1j, 1)


@pytest.mark.parametrize("text,box", [
    ("z^5+z^3-z+2", None),
    ("(z+1)^2", None),
    ("sinh(2*z)-cosh(z)^3", SearchBox(-2 - 2j, 2 + 2j, 30)),
    ("exp(z)*sin(z)", SearchBox(-4 - 1j, 4 + 1j, 30)),
    ("cosh(z)^2+z^2", SearchBox(-2 - 2j, 2 + 2j, 30)),
])
def test_residuals_and_determinism(text, box):
    f = parse(text)
    df = differentiate(f)
    first = critical_points(f, box)
    assert first == critical_points(f, box)
    for c in first:
        assert 0 <= c.residual <= 1e-9 * (1 + abs(c.location)) ** 8
        assert abs(evaluate(df, c.location)) <= 1e-9 * (1 + abs(c.location)) ** 8
        if box is not None:
            assert box.contains(c.location)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=9).filter(lambda c: c[-1] != 0))
def test_root_count_equals_degree(coeffs):
    text = " + ".join(f"{c}*z^{k}" for k, c in enumerate(coeffs))
    p = to_polynomial(parse(text))
    roots = polynomial_roots(p)
    assert len(roots) == p.degree
    scale = lambda z: sum(abs(c) * abs(z) ** k for k, c in enumerate(coeffs))
    for r in roots:
        assert abs(p(r)) <= 1e-9 * scale(r)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
def test_critical_point_count_equals_derivative_degree(coeffs):
    text = " + ".join(f"{c}*z^{k}" for k, c in enumerate(coeffs))
    f = parse(text)
    deg = to_polynomial(f).degree
    cps = critical_points(f)
    assert sum(c.multiplicity for c in cps) == deg - 1
