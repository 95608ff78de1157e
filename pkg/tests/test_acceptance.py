"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Every criterion runs on its stated grid at its stated tolerance. Run with
``pytest tests/test_acceptance.py -v`` to see the summary lines.
"""

from __future__ import annotations

import itertools
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from qfrac.exprparse import Add, Mul, Neg, Number, ParseError, Pow, Variable, evaluate, parse, to_string
from qfrac.jackson import Integrand, jackson_integral, jackson_integral_between, q_derivative
from qfrac.operators import (
    OperatorSpec,
    as_operator_integrand,
    beta_type_integral,
    classical_reference,
    frac_derivative,
    frac_integral,
    hadamard_kernel_limit_check,
    heine_type_sum,
    integer_kernel_integral,
    iterated_integral,
    power_rule_closed_form,
    prefactor_forms,
    q_riemann_liouville,
)
from qfrac.qcore import QContext, Truncation, q_gamma, q_number


@pytest.fixture
def report(capsys):
    """Print ``criterion N: PASS|FAIL`` with the worst residual, bypassing capture."""

    def emit(number: int, title: str, worst: float, tol: float, elapsed: float, budget: float) -> None:
        ok = worst <= tol and elapsed < budget
        with capsys.disabled():
            print(
                f"\ncriterion {number:2d} {title:32s} {'PASS' if ok else 'FAIL'}"
                f"  worst={worst:.3e} tol={tol:.0e}  {elapsed:.2f}s (< {budget:g}s)"
            )
        assert worst <= tol, f"criterion {number}: worst residual {worst:.3e} exceeds {tol:.0e}"
        assert elapsed < budget, f"criterion {number}: took {elapsed:.2f}s, budget {budget}s"

    return emit


def rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def test_c01_gamma_recurrence(report):
    t0 = time.perf_counter()
    worst = 0.0
    for q in (0.1, 0.5, 0.9):
        for i in range(1, 51):
            t = i / 10
            g1 = q_gamma(t + 1.0, q).value
            worst = max(worst, abs(g1 - q_number(t, q) * q_gamma(t, q).value) / g1)
    report(1, "q-Gamma recurrence", worst, 1e-10, time.perf_counter() - t0, 1.0)


def test_c02_prefactor_forms(report):
    t0 = time.perf_counter()
    worst = 0.0
    for alpha, p, q in itertools.product((0.3, 1.0, 2.7), (0.0, 0.5, 2.0), (0.3, 0.7)):
        forms = prefactor_forms(alpha, QContext(q, p))
        worst = max(worst, *(rel(a, b) for a, b in itertools.combinations(forms, 2)))
    report(2, "prefactor equivalence", worst, 1e-12, time.perf_counter() - t0, 1.0)


def test_c03_integer_consistency(report):
    t0 = time.perf_counter()
    worst = 0.0
    fs = (Integrand.constant(1.0), Integrand.power(1.0), Integrand.power(2.0))
    for k, f, p, x in itertools.product((1, 2, 3), fs, (0.0, 1.0), (0.5, 1.0)):
        ctx = QContext(0.5, p)
        values = (
            frac_integral(f, x, OperatorSpec(float(k), ctx)).value,
            integer_kernel_integral(f, x, k, ctx).value,
            iterated_integral(f, x, k, ctx).value,
        )
        worst = max(worst, *(rel(a, b) for a, b in itertools.combinations(values, 2)))
    report(3, "integer-order consistency", worst, 1e-6, time.perf_counter() - t0, 30.0)


def test_c04_power_rule(report):
    t0 = time.perf_counter()
    worst = 0.0
    for lam, alpha, p, x in itertools.product((0.0, 0.5, 1.0, 2.0), (0.5, 1.0, 1.7), (0.0, 1.0), (0.5, 1.0)):
        ctx = QContext(0.5, p)
        numeric = frac_integral(Integrand.power(lam * (p + 1.0)), x, OperatorSpec(alpha, ctx)).value
        worst = max(worst, rel(numeric, power_rule_closed_form(x, alpha, lam, ctx)))
    report(4, "power rule", worst, 1e-9, time.perf_counter() - t0, 5.0)


def test_c05_semigroup(report):
    t0 = time.perf_counter()
    worst = 0.0
    orders = (0.5, 1.0, 1.5)
    for p in (0.0, 1.0):
        ctx = QContext(0.5, p)
        fs = (Integrand.constant(1.0), Integrand.power(1.0), Integrand.power(p + 1.0), Integrand.power(2.0))
        for f, x, alpha, beta in itertools.product(fs, (0.5, 1.0), orders, orders):
            inner = as_operator_integrand(f, OperatorSpec(beta, ctx))
            lhs = frac_integral(inner, x, OperatorSpec(alpha, ctx)).value
            rhs = frac_integral(f, x, OperatorSpec(alpha + beta, ctx)).value
            worst = max(worst, rel(lhs, rhs))
    report(5, "semigroup", worst, 1e-7, time.perf_counter() - t0, 60.0)


def test_c06_left_inverse(report):
    t0 = time.perf_counter()
    worst = 0.0
    polys = ([1.0], [0.0, 1.0], [2.0, -1.0], [0.0, 0.0, 1.0], [1.0, -2.0, 3.0], [-0.5, 0.25, -1.5])
    for alpha, p, coeffs, x in itertools.product((0.25, 0.5, 0.75), (0.0, 1.0), polys, (0.5, 1.0)):
        spec = OperatorSpec(alpha, QContext(0.5, p))
        f = Integrand.polynomial(coeffs)
        value = frac_derivative(as_operator_integrand(f, spec), x, spec)
        worst = max(worst, abs(value - f(x)) / (1.0 + abs(f(x))))
    report(6, "left inverse", worst, 1e-6, time.perf_counter() - t0, 10.0)


def test_c07_heine_type_sum(report):
    t0 = time.perf_counter()
    worst = 0.0
    for mu, alpha, beta, p in itertools.product((0.0, 0.3, 0.7), (0.5, 1.5), (0.5, 1.5), (0.0, 1.0)):
        lhs, rhs = heine_type_sum(mu, alpha, beta, QContext(0.5, p))
        worst = max(worst, rel(lhs, rhs))
    report(7, "Heine-type summation", worst, 1e-8, time.perf_counter() - t0, 5.0)


def test_c08_beta_type_integral(report):
    t0 = time.perf_counter()
    worst = 0.0
    for a, alpha, lam, p in itertools.product((0.0, 0.25), (0.5, 1.5), (0.0, 0.5), (0.0, 1.0)):
        lhs, rhs = beta_type_integral(a, 1.0, alpha, lam, QContext(0.5, p))
        worst = max(worst, rel(lhs, rhs))
    report(8, "beta-type integral", worst, 1e-8, time.perf_counter() - t0, 10.0)


def test_c09_p0_reduction(report):
    t0 = time.perf_counter()
    worst = 0.0
    for lam, alpha, x in itertools.product((0.0, 0.5, 1.0, 2.0), (0.5, 1.0, 1.7), (0.5, 1.0)):
        f = Integrand.power(lam)
        ours = frac_integral(f, x, OperatorSpec(alpha, QContext(0.5, 0.0))).value
        worst = max(worst, rel(ours, q_riemann_liouville(f, x, alpha, 0.5).value))
    report(9, "p=0 reduction", worst, 1e-10, time.perf_counter() - t0, 2.0)


def test_c10_q_to_one(report):
    t0 = time.perf_counter()
    worst = 0.0
    trunc = Truncation(1e-12, 100_000)
    for p, alpha in itertools.product((0.0, 1.0), (0.5, 1.5)):
        spec = OperatorSpec(alpha, QContext(1.0 - 1e-3, p), trunc=trunc)
        for f in (Integrand.constant(1.0), Integrand.power(p + 1.0)):
            r = frac_integral(f, 1.0, spec)
            assert r.converged
            worst = max(worst, rel(r.value, classical_reference(f, 1.0, alpha, p)))
    report(10, "q -> 1 classical limit", worst, 1e-2, time.perf_counter() - t0, 60.0)


def test_c11_hadamard_kernel(report):
    t0 = time.perf_counter()
    worst = 0.0
    for t, a, lam in ((2.0, 1.0, 1.0), (2.0, 1.0, 2.0), (math.e, 1.0, 1.0)):
        q_side, log_side = hadamard_kernel_limit_check(t, a, lam, 1e-3, 1e-2)
        worst = max(worst, abs(q_side - log_side))
    report(11, "Hadamard kernel limit", worst, 5e-2, time.perf_counter() - t0, 30.0)


def test_c12_jackson_identities(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    for q in (0.3, 0.5, 0.9):
        for i in range(8):
            f = Integrand.polynomial(rng.uniform(-2, 2, rng.integers(1, 6)))
            g = Integrand.polynomial(rng.uniform(-2, 2, rng.integers(1, 6)))
            a, b = sorted(rng.uniform(0.05, 2.0, 2))
            first = jackson_integral_between(lambda t: g(t) * q_derivative(f, t, q), a, b, q).value
            boundary = g(b) * f(b) - g(a) * f(a)
            second = jackson_integral_between(lambda t: f(q * t) * q_derivative(g, t, q), a, b, q).value
            scale = max(abs(first), abs(boundary), abs(second), 1e-300)
            worst = max(worst, abs(first - boundary + second) / scale)
            x = (0.5, 1.0, 2.0)[i % 3]
            nested = jackson_integral(lambda v: jackson_integral(f, v, q).value, x, q).value
            single = jackson_integral(lambda s: (x - q * s) * f(s), x, q).value
            worst = max(worst, rel(nested, single))
    report(12, "by-parts and interchange", worst, 1e-10, time.perf_counter() - t0, 2.0)


def test_c13_parser(report):
    t0 = time.perf_counter()
    failures = 0
    t = Variable()
    failures += parse("t") != t
    failures += parse("t^2 + 3*t") != Add(Pow(t, Number(2.0)), Mul(Number(3.0), t))
    failures += evaluate(parse("2+3*4^2"), 1.0) != 50.0
    failures += evaluate(parse("-t^2"), 3.0) != -9.0
    failures += parse("-t^2") != Neg(Pow(t, Number(2.0)))
    corpus = ["t", "t^2 + 3*t", "2+3*4^2", "-t^2", "2^3^2", "(t-1)/(t+1)", "-(t+1)^-0.5", "t-(t-t)", "1e-3*t^.5", "2*-t"]
    for s in corpus:
        failures += parse(to_string(parse(s))) != parse(s)
    for text, offset in (("2*(1-t", 6), ("", 0), ("t+", 2), ("(t))", 3), ("3 t", 2)):
        try:
            parse(text)
            failures += 1
        except ParseError as exc:
            failures += exc.position != offset
    report(13, "parser round-trip and errors", float(failures), 0.0, time.perf_counter() - t0, 1.0)


def test_c14_cli_determinism(report):
    t0 = time.perf_counter()
    runs = [
        subprocess.run([sys.executable, "-m", "qfrac", "verify", "--suite", "all"], capture_output=True, check=False)
        for _ in range(2)
    ]
    mismatches = float(runs[0].stdout != runs[1].stdout) + sum(float(r.returncode != 0) for r in runs)
    assert runs[0].stdout.startswith(b"identity,params,")
    report(14, "CLI verify determinism", mismatches, 0.0, time.perf_counter() - t0, math.inf)
