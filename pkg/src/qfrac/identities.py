"""Registry of numerical identities and the suite runner.

Each identity maps one parameter cell to an ``(abs_err, rel_err)`` pair by
evaluating both sides through independent routes. Default grids depend on
the suite-wide ``(q, p)``; every grid can be replaced per identity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from qfrac.exprparse import to_integrand
from qfrac.jackson import (
    Integrand,
    jackson_integral,
    jackson_integral_between,
    q_derivative,
)
from qfrac.operators import (
    OperatorSpec,
    as_operator_integrand,
    beta_type_integral,
    classical_reference,
    frac_derivative,
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
from qfrac.qcore import FLOOR_SCALE, QContext, Truncation, _qpow, q_beta, q_gamma, q_number

__all__ = ["IDENTITIES", "Cell", "Identity", "VerificationReport", "default_grid", "run_identity_suite"]

Params = dict[str, Any]


@dataclass(frozen=True)
class Cell:
    """Residual of one identity at one parameter cell."""

    params: Params
    abs_err: float
    rel_err: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and math.isfinite(self.rel_err)


@dataclass(frozen=True)
class VerificationReport:
    identity_name: str
    grid: tuple[Params, ...]
    max_abs_err: float
    max_rel_err: float
    passed: bool
    threshold: float
    cells: tuple[Cell, ...] = field(default=(), repr=False)

    @classmethod
    def from_cells(cls, name: str, cells: Sequence[Cell], threshold: float) -> VerificationReport:
        abs_errs = [c.abs_err if c.ok else math.inf for c in cells]
        rel_errs = [c.rel_err if c.ok else math.inf for c in cells]
        max_rel = max(rel_errs)
        return cls(
            identity_name=name,
            grid=tuple(c.params for c in cells),
            max_abs_err=max(abs_errs),
            max_rel_err=max_rel,
            passed=max_rel <= threshold,
            threshold=threshold,
            cells=tuple(cells),
        )


@dataclass(frozen=True)
class Identity:
    name: str
    threshold: float
    check: Callable[[Params], tuple[float, float]]
    grid: Callable[[float, float], list[Params]]
    description: str = ""


def _rel(lhs: float, rhs: float) -> tuple[float, float]:
    err = abs(lhs - rhs)
    return err, err / max(abs(rhs), FLOOR_SCALE)


def _product(**axes: Iterable[Any]) -> list[Params]:
    keys = list(axes)
    return [dict(zip(keys, values)) for values in itertools.product(*axes.values())]


def _ctx(c: Params) -> QContext:
    return QContext(c["q"], c["p"])


def _poly_text(coeffs: Sequence[float]) -> str:
    return " + ".join(f"{c!r}*t^{k}" for k, c in enumerate(coeffs))


# {{{ checks


def _semigroup(c: Params) -> tuple[float, float]:
    ctx, f = _ctx(c), to_integrand(c["f"])
    inner = as_operator_integrand(f, OperatorSpec(c["beta"], ctx))
    lhs = frac_integral(inner, c["x"], OperatorSpec(c["alpha"], ctx)).value
    rhs = frac_integral(f, c["x"], OperatorSpec(c["alpha"] + c["beta"], ctx)).value
    return _rel(lhs, rhs)


def _power_rule(c: Params) -> tuple[float, float]:
    ctx = _ctx(c)
    f = Integrand.power(c["lam"] * (ctx.p + 1.0))
    lhs = frac_integral(f, c["x"], OperatorSpec(c["alpha"], ctx)).value
    return _rel(lhs, power_rule_closed_form(c["x"], c["alpha"], c["lam"], ctx))


def _left_inverse(c: Params) -> tuple[float, float]:
    spec = OperatorSpec(c["alpha"], _ctx(c))
    f = to_integrand(c["f"])
    value = frac_derivative(as_operator_integrand(f, spec), c["x"], spec)
    target = f(c["x"])
    err = abs(value - target)
    return err, err / (1.0 + abs(target))


def _heine(c: Params) -> tuple[float, float]:
    return _rel(*heine_type_sum(c["mu"], c["alpha"], c["beta"], _ctx(c)))


def _beta_type(c: Params) -> tuple[float, float]:
    return _rel(*beta_type_integral(c["a"], c["x"], c["alpha"], c["lam"], _ctx(c)))


def _p0_reduction(c: Params) -> tuple[float, float]:
    f = Integrand.power(c["lam"])
    lhs = frac_integral(f, c["x"], OperatorSpec(c["alpha"], QContext(c["q"], 0.0))).value
    return _rel(lhs, q_riemann_liouville(f, c["x"], c["alpha"], c["q"]).value)


def _q1_limit(c: Params) -> tuple[float, float]:
    f = to_integrand(c["f"])
    spec = OperatorSpec(c["alpha"], _ctx(c), trunc=Truncation(1e-12, c["max_terms"]))
    r = frac_integral(f, c["x"], spec)
    if not r.converged:
        raise ArithmeticError(f"series did not converge within {c['max_terms']} terms")
    return _rel(r.value, classical_reference(f, c["x"], c["alpha"], c["p"]))


def _hadamard(c: Params) -> tuple[float, float]:
    return _rel(*hadamard_kernel_limit_check(c["t"], c["a"], c["lam"], c["eps_q"], c["eps_p"]))


def _integer_consistency(c: Params) -> tuple[float, float]:
    ctx, f, x, k = _ctx(c), to_integrand(c["f"]), c["x"], c["k"]
    ref = iterated_integral(f, x, k, ctx).value
    values = (frac_integral(f, x, OperatorSpec(k, ctx)).value, integer_kernel_integral(f, x, k, ctx).value)
    return max((_rel(v, ref) for v in values), key=lambda e: e[1])


def _gamma_recurrence(c: Params) -> tuple[float, float]:
    t, q = c["t"], c["q"]
    lhs = q_gamma(t + 1.0, q).value
    return _rel(q_number(t, q) * q_gamma(t, q).value, lhs)


def _beta_crosscheck(c: Params) -> tuple[float, float]:
    # B_q(t, s) = int_0^1 u^{t-1} (1 - qu)^{(s-1)} d_q u
    t, s, q = c["t"], c["s"], c["q"]
    trunc = Truncation(1e-13)

    def g(u: float) -> float:
        return u ** (t - 1.0) * _qpow(1.0, q * u, s - 1.0, q, trunc).value

    return _rel(jackson_integral(g, 1.0, q, trunc).value, q_beta(t, s, q).value)


def _interchange(c: Params) -> tuple[float, float]:
    f, x, q = to_integrand(c["f"]), c["x"], c["q"]
    nested = jackson_integral(lambda v: jackson_integral(f, v, q).value, x, q).value
    single = jackson_integral(
        Integrand(lambda s: (x - q * s) * f.values(s), vectorized=True), x, q
    ).value
    return _rel(nested, single)


def _by_parts(c: Params) -> tuple[float, float]:
    f, g = to_integrand(c["f"]), to_integrand(c["g"])
    a, b, q = c["a"], c["b"], c["q"]
    first = jackson_integral_between(lambda t: g(t) * q_derivative(f, t, q), a, b, q).value
    boundary = g(b) * f(b) - g(a) * f(a)
    second = jackson_integral_between(lambda t: f(q * t) * q_derivative(g, t, q), a, b, q).value
    err = abs(first - boundary + second)
    scale = max(abs(first), abs(boundary), abs(second), FLOOR_SCALE)
    return err, err / scale


def _prefactor(c: Params) -> tuple[float, float]:
    forms = prefactor_forms(c["alpha"], _ctx(c))
    ref = forms[2]
    err = max(abs(v - ref) for v in forms)
    return err, err / abs(ref)


def _kernel_route(c: Params) -> tuple[float, float]:
    ctx, f = _ctx(c), to_integrand(c["f"])
    spec = OperatorSpec(c["alpha"], ctx, lower=c["lower"])
    return _rel(frac_integral(f, c["x"], spec).value, frac_integral_kernel(f, c["x"], spec).value)


# }}}


# {{{ default grids

_ORDERS = (0.5, 1.0, 1.5)
_POWERS = (0.0, 0.5, 1.0, 2.0)


def _semigroup_grid(q: float, p: float) -> list[Params]:
    fs = ["1", "t", f"t^{p + 1.0!r}", "t^2"]
    return _product(q=[q], p=[p], f=fs, x=[0.5, 1.0], alpha=_ORDERS, beta=_ORDERS)


def _power_rule_grid(q: float, p: float) -> list[Params]:
    return _product(q=[q], p=[p], x=[0.5, 1.0], alpha=[0.5, 1.0, 1.7], lam=_POWERS)


def _left_inverse_grid(q: float, p: float) -> list[Params]:
    fs = ["1", "2 - t", "1 - 2*t + 3*t^2"]
    return _product(q=[q], p=[p], f=fs, x=[0.5, 1.0], alpha=[0.25, 0.5, 0.75])


def _heine_grid(q: float, p: float) -> list[Params]:
    big = q ** (p + 1.0)
    # the identity is exact on mu in {0} and the lattice Q^k
    return _product(q=[q], p=[p], mu=[0.0, big, big**2, big**3], alpha=[0.5, 1.5], beta=[0.5, 1.5])


def _beta_type_grid(q: float, p: float) -> list[Params]:
    # lower limits on the q-grid of x = 1
    return _product(q=[q], p=[p], x=[1.0], a=[0.0, q**2, q], alpha=[0.5, 1.5], lam=[0.0, 0.5, 1.0])


def _p0_grid(q: float, p: float) -> list[Params]:
    return _product(q=[q], x=[0.5, 1.0], alpha=[0.5, 1.0, 1.7], lam=_POWERS)


def _q1_grid(q: float, p: float) -> list[Params]:
    cells = []
    for pp in sorted({0.0, p}):
        fs = ["1", f"t^{pp + 1.0!r}"]
        cells += _product(q=[1.0 - 1e-3], p=[pp], max_terms=[100_000], f=fs, x=[1.0], alpha=[0.5, 1.5])
    return cells


def _hadamard_grid(q: float, p: float) -> list[Params]:
    triples = [(2.0, 1.0, 1.0), (2.0, 1.0, 2.0), (math.e, 1.0, 1.0)]
    return [dict(t=t, a=a, lam=lam, eps_q=1e-3, eps_p=1e-2) for t, a, lam in triples]


def _integer_grid(q: float, p: float) -> list[Params]:
    return _product(q=[q], p=[p], k=[1, 2, 3], f=["1", "t", "t^2"], x=[0.5, 1.0])


def _gamma_grid(q: float, p: float) -> list[Params]:
    ts = [round(0.1 * i, 1) for i in range(1, 51)]
    return _product(q=sorted({0.1, 0.5, 0.9, q}), t=ts)


def _beta_grid(q: float, p: float) -> list[Params]:
    return _product(q=[q], t=[0.5, 1.0, 2.5], s=[0.5, 1.0, 2.5])


def _interchange_grid(q: float, p: float) -> list[Params]:
    fs = ["1", "t", "1 - t + t^2", "t^3 - 2*t", "1 + t^4"]
    return _product(q=[q], f=fs, x=[0.5, 1.0, 2.0])


def _by_parts_grid(q: float, p: float) -> list[Params]:
    rng = np.random.default_rng(20240607)
    cells = []
    for deg_f, deg_g in [(0, 4), (1, 3), (2, 2), (3, 1), (4, 0), (4, 4)]:
        f = np.round(rng.uniform(-2.0, 2.0, deg_f + 1), 3).tolist()
        g = np.round(rng.uniform(-2.0, 2.0, deg_g + 1), 3).tolist()
        a, b = sorted(np.round(rng.uniform(0.05, 2.0, 2), 3).tolist())
        cells.append(dict(q=q, f=_poly_text(f), g=_poly_text(g), a=a, b=b))
    return cells


def _prefactor_grid(q: float, p: float) -> list[Params]:
    return _product(q=[0.3, 0.7], p=[0.0, 0.5, 2.0], alpha=[0.3, 1.0, 2.7])


def _kernel_route_grid(q: float, p: float) -> list[Params]:
    return _product(q=[q], p=[p], f=["1", "t^2 + 1"], x=[1.0], lower=[0.0, 0.3], alpha=[0.5, 1.7])


# }}}

IDENTITIES: dict[str, Identity] = {
    ident.name: ident
    for ident in [
        Identity("semigroup", 1e-7, _semigroup, _semigroup_grid, "J^a J^b f = J^(a+b) f"),
        Identity("power-rule", 1e-9, _power_rule, _power_rule_grid, "J^a of t^(lam(p+1)) vs Gamma_Q closed form"),
        Identity("left-inverse", 1e-6, _left_inverse, _left_inverse_grid, "D^a J^a f = f, error over 1 + |f|"),
        Identity("lemma5", 1e-8, _heine, _heine_grid, "Heine-type summation over base Q"),
        Identity("lemma6", 1e-8, _beta_type, _beta_type_grid, "beta-type integral with lower limit a"),
        Identity("p0-reduction", 1e-10, _p0_reduction, _p0_grid, "p = 0 equals the base-q Riemann-Liouville integral"),
        Identity("q1-limit", 1e-2, _q1_limit, _q1_grid, "q -> 1 against classical quadrature"),
        Identity("hadamard-kernel", 5e-2, _hadamard, _hadamard_grid, "kernel ratio -> log(t/a)^lam"),
        Identity("integer-consistency", 1e-6, _integer_consistency, _integer_grid, "series, product kernel, nested sums"),
        Identity("gamma-recurrence", 1e-10, _gamma_recurrence, _gamma_grid, "Gamma_q(t+1) = [t]_q Gamma_q(t)"),
        Identity("beta-crosscheck", 1e-8, _beta_crosscheck, _beta_grid, "q-Beta as Gamma ratio vs Jackson integral"),
        Identity("interchange", 1e-10, _interchange, _interchange_grid, "nested Jackson sum vs (x - qs) weight"),
        Identity("by-parts", 1e-10, _by_parts, _by_parts_grid, "q-integration by parts"),
        Identity("prefactor-consistency", 1e-12, _prefactor, _prefactor_grid, "three forms of the normalization"),
        Identity("kernel-route", 1e-10, _kernel_route, _kernel_route_grid, "grid series vs literal kernel integral"),
    ]
}


def default_grid(name: str, q: float = 0.5, p: float = 1.0) -> list[Params]:
    return IDENTITIES[name].grid(q, p)


def _run_cell(ident: Identity, params: Params) -> Cell:
    try:
        abs_err, rel_err = ident.check(params)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        return Cell(params, math.inf, math.inf, f"{type(exc).__name__}: {exc}")
    return Cell(params, abs_err, rel_err)


def run_identity_suite(
    which: Iterable[str] | None = None,
    *,
    q: float = 0.5,
    p: float = 1.0,
    grids: Mapping[str, Sequence[Params]] | None = None,
    thresholds: Mapping[str, float] | None = None,
) -> list[VerificationReport]:
    """Run the named identities (all when ``which`` is None), in registry order.

    An identity whose grid is empty produces no report. Failures inside a
    cell are recorded on the cell rather than raised. Unknown names raise
    :class:`KeyError`.
    """
    names = list(IDENTITIES) if which is None else list(which)
    unknown = [n for n in names if n not in IDENTITIES]
    if unknown:
        raise KeyError(f"unknown identities: {', '.join(unknown)}")
    grids = grids or {}
    thresholds = thresholds or {}

    reports = []
    for name in IDENTITIES:
        if name not in names:
            continue
        ident = IDENTITIES[name]
        grid = list(grids[name]) if name in grids else ident.grid(q, p)
        if not grid:
            continue
        cells = [_run_cell(ident, dict(params)) for params in grid]
        reports.append(VerificationReport.from_cells(name, cells, thresholds.get(name, ident.threshold)))
    return reports
