from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfrac.jackson import (
    Integrand,
    as_integrand,
    composed_xp_dq,
    jackson_integral,
    jackson_integral_between,
    q_derivative,
)
from qfrac.qcore import DomainError, QContext, Truncation, q_number

qs = st.floats(0.1, 0.9)
coeffs = st.lists(st.floats(-3.0, 3.0), min_size=1, max_size=5)


def exact_monomial(n: int, b: Fraction, q: Fraction) -> Fraction:
    # int_0^b t^n d_q t = (1 - q) b^{n+1} / (1 - q^{n+1})
    return (1 - q) * b ** (n + 1) / (1 - q ** (n + 1))


@pytest.mark.parametrize("n", [0, 1, 2, 5])
@pytest.mark.parametrize("b", [Fraction(1, 2), Fraction(3, 2)])
def test_monomials_exact(n, b):
    q = Fraction(1, 2)
    r = jackson_integral(Integrand.power(float(n)), float(b), float(q))
    assert r.converged
    assert r.value == pytest.approx(float(exact_monomial(n, b, q)), rel=1e-14)


def test_pointwise_and_vectorized_agree():
    f = Integrand.polynomial([1.0, -2.0, 0.5])
    g = as_integrand(lambda t: 1.0 - 2.0 * t + 0.5 * t * t)
    a = jackson_integral(f, 1.3, 0.6).value
    b = jackson_integral(g, 1.3, 0.6).value
    assert a == pytest.approx(b, rel=1e-14)


def test_unbounded_integrand_converges():
    # t^(-1/2) satisfies the boundedness contract with exponent 1/2
    q = 0.5
    r = jackson_integral(Integrand.power(-0.5), 1.0, q)
    assert r.converged
    assert r.value == pytest.approx((1 - q) / (1 - q**0.5), rel=1e-11)


def test_classical_limit():
    r = jackson_integral(Integrand.power(2.0), 1.0, 1.0 - 1e-4, Truncation(1e-12, 10**6))
    assert abs(r.value - 1.0 / 3.0) <= 1e-3


def test_nonconvergence_flag():
    r = jackson_integral(Integrand.constant(1.0), 1.0, 0.999, Truncation(1e-12, 100))
    assert not r.converged
    assert r.terms_used == 100


def test_between():
    q = 0.5
    f = Integrand.power(2.0)
    r = jackson_integral_between(f, 0.25, 1.0, q)
    exact = exact_monomial(2, Fraction(1), Fraction(1, 2)) - exact_monomial(2, Fraction(1, 4), Fraction(1, 2))
    assert r.value == pytest.approx(float(exact), rel=1e-13)
    assert jackson_integral_between(f, 0.7, 0.7, q).value == 0.0
    with pytest.raises(DomainError):
        jackson_integral_between(f, 1.0, 0.5, q)


@settings(max_examples=40)
@given(coeffs, coeffs, qs, st.floats(0.1, 2.0))
def test_linearity(c1, c2, q, b):
    f, g = Integrand.polynomial(c1), Integrand.polynomial(c2)
    both = Integrand(lambda t: 2.0 * f.values(t) - 3.0 * g.values(t), vectorized=True)
    lhs = jackson_integral(both, b, q).value
    rhs = 2.0 * jackson_integral(f, b, q).value - 3.0 * jackson_integral(g, b, q).value
    scale = 2.0 * abs(jackson_integral(f, b, q).value) + 3.0 * abs(jackson_integral(g, b, q).value)
    assert abs(lhs - rhs) <= 1e-12 * max(scale, 1.0)


@settings(max_examples=40)
@given(st.lists(st.floats(0.0, 3.0), min_size=1, max_size=5), qs, st.floats(0.1, 2.0))
def test_positivity(c, q, b):
    assert jackson_integral(Integrand.polynomial(c), b, q).value >= 0.0


@settings(max_examples=30)
@given(coeffs, coeffs, qs, st.floats(0.05, 1.0), st.floats(0.05, 1.0))
def test_integration_by_parts(cf, cg, q, a, width):
    f, g = Integrand.polynomial(cf), Integrand.polynomial(cg)
    b = a + width
    first = jackson_integral_between(lambda t: g(t) * q_derivative(f, t, q), a, b, q).value
    boundary = g(b) * f(b) - g(a) * f(a)
    second = jackson_integral_between(lambda t: f(q * t) * q_derivative(g, t, q), a, b, q).value
    scale = max(abs(first), abs(boundary), abs(second), 1.0)
    assert abs(first - boundary + second) <= 1e-10 * scale


@settings(max_examples=20, deadline=None)
@given(coeffs, qs, st.sampled_from([0.5, 1.0, 2.0]))
def test_interchange(c, q, x):
    f = Integrand.polynomial(c)
    nested = jackson_integral(lambda v: jackson_integral(f, v, q).value, x, q).value
    single = jackson_integral(lambda s: (x - q * s) * f(s), x, q).value
    assert abs(nested - single) <= 1e-10 * max(abs(single), 1e-3)


def test_q_derivative_monomial():
    q, x = 0.5, 1.7
    assert q_derivative(Integrand.power(3.0), x, q) == pytest.approx(q_number(3, q) * x**2, rel=1e-14)


def test_composed_xp_dq():
    ctx = QContext(0.5, 1.0)
    x = 0.8
    # n = 1 on t^{p+1} gives [p+1]_q
    assert composed_xp_dq(Integrand.power(2.0), x, 1, ctx) == pytest.approx(q_number(2, 0.5), rel=1e-14)
    # n = 2 on t^{2(p+1)}: [2p+2]_q then [p+1]_q
    expected = q_number(4, 0.5) * q_number(2, 0.5)
    assert composed_xp_dq(Integrand.power(4.0), x, 2, ctx) == pytest.approx(expected, rel=1e-13)


def test_fundamental_theorem():
    ctx = QContext(0.5, 1.0)
    f = Integrand.polynomial([1.0, -1.0, 2.0])

    def antiderivative(t: float) -> float:
        return jackson_integral(lambda w: w * f(w), t, ctx.q).value

    for x in (0.3, 1.0, 1.9):
        assert composed_xp_dq(antiderivative, x, 1, ctx) == pytest.approx(f(x), rel=1e-10)


def test_integrand_helpers():
    t = np.array([0.5, 2.0])
    np.testing.assert_allclose(Integrand.constant(3.0).values(t), [3.0, 3.0])
    np.testing.assert_allclose(Integrand.power(2.0, 0.5).values(t), [0.125, 2.0])
    assert Integrand.polynomial([1.0, 2.0, 3.0])(2.0) == 17.0
    with pytest.raises(TypeError):
        as_integrand(3.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        jackson_integral(Integrand.constant(1.0), 0.0, 0.5)
    with pytest.raises(DomainError):
        jackson_integral(Integrand.constant(1.0), 1.0, 1.0)
    with pytest.raises(DomainError):
        q_derivative(Integrand.constant(1.0), -1.0, 0.5)
