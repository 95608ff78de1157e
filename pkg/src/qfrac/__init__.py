"""Generalized q-fractional integrals and derivatives on Jackson grids."""

from __future__ import annotations

from qfrac.exprparse import EvaluationError, ParseError, evaluate, parse, to_integrand, to_string
from qfrac.identities import Cell, VerificationReport, run_identity_suite
from qfrac.jackson import (
    Integrand,
    IntegralResult,
    composed_xp_dq,
    jackson_integral,
    jackson_integral_between,
    q_derivative,
)
from qfrac.operators import (
    OperatorSpec,
    beta_type_integral,
    classical_reference,
    frac_derivative,
    frac_derivative_result,
    frac_integral,
    frac_integral_kernel,
    hadamard_kernel_limit_check,
    heine_type_sum,
    integer_kernel_integral,
    iterated_integral,
    power_rule_closed_form,
    prefactor_forms,
    q_riemann_liouville,
)
from qfrac.qcore import (
    DomainError,
    E_q,
    EvalResult,
    QContext,
    Truncation,
    bracket_exponent,
    bracket_exponent_product,
    e_q,
    gen_power,
    q_beta,
    q_binomial,
    q_factorial,
    q_gamma,
    q_number,
    q_pochhammer,
    q_pochhammer_inf,
)

__version__ = "0.1.0"

__all__ = [
    "Cell",
    "DomainError",
    "E_q",
    "EvalResult",
    "EvaluationError",
    "Integrand",
    "IntegralResult",
    "OperatorSpec",
    "ParseError",
    "QContext",
    "Truncation",
    "VerificationReport",
    "beta_type_integral",
    "bracket_exponent",
    "bracket_exponent_product",
    "classical_reference",
    "composed_xp_dq",
    "e_q",
    "evaluate",
    "frac_derivative",
    "frac_derivative_result",
    "frac_integral",
    "frac_integral_kernel",
    "gen_power",
    "hadamard_kernel_limit_check",
    "heine_type_sum",
    "integer_kernel_integral",
    "iterated_integral",
    "jackson_integral",
    "jackson_integral_between",
    "parse",
    "power_rule_closed_form",
    "prefactor_forms",
    "q_beta",
    "q_binomial",
    "q_derivative",
    "q_factorial",
    "q_gamma",
    "q_number",
    "q_pochhammer",
    "q_pochhammer_inf",
    "q_riemann_liouville",
    "run_identity_suite",
    "to_integrand",
    "to_string",
]
