r"""Generalized q-fractional integral and derivative.

The integral of order :math:`\alpha > 0` is

.. math::

    J^\alpha_{p,q} f(x) = \frac{[p+1]_q^{1-\alpha}}{\Gamma_Q(\alpha)}
        \int_0^x w^p f(w) \left(x^{p+1} - (wq)^{p+1}\right)^{(\alpha-1)}_Q d_q w,
    \qquad Q = q^{p+1}.

On its own Jackson grid ``w = x q^i`` the kernel reduces to finite
q-Pochhammer ratios, giving the series used by :func:`frac_integral`

.. math::

    J^\alpha_{p,q} f(x) = (1-q)^\alpha x^{\alpha(p+1)}
        \sum_{i \ge 0} Q^i \frac{(Q^\alpha; Q)_i}{(Q; Q)_i} f(x q^i).

:func:`frac_integral_kernel` evaluates the defining integral literally and is
kept as an independent route.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate, special

from qfrac._series import sum_series
from qfrac.jackson import (
    Integrand,
    IntegralResult,
    as_integrand,
    composed_xp_dq,
    jackson_integral,
    jackson_integral_between,
)
from qfrac.qcore import (
    DEFAULT_TRUNCATION,
    FLOOR_SCALE,
    DomainError,
    EvalResult,
    QContext,
    Truncation,
    _qpow,
    bracket_exponent,
    q_gamma,
    q_number,
)

__all__ = [
    "IdentityPair",
    "OperatorSpec",
    "as_operator_integrand",
    "beta_type_integral",
    "classical_reference",
    "frac_derivative",
    "frac_derivative_result",
    "frac_integral",
    "frac_integral_kernel",
    "hadamard_kernel_limit_check",
    "heine_type_sum",
    "integer_kernel_integral",
    "iterated_integral",
    "power_rule_closed_form",
    "prefactor",
    "prefactor_forms",
    "q_riemann_liouville",
]

log = logging.getLogger(__name__)

AnyIntegrand = Integrand | Callable[[float], float]


@dataclass(frozen=True)
class OperatorSpec:
    """Order, lower limit, q-context and truncation policy of an operator."""

    alpha: float
    ctx: QContext
    lower: float = 0.0
    trunc: Truncation = field(default=DEFAULT_TRUNCATION)

    def __post_init__(self) -> None:
        if not self.alpha >= 0.0:
            raise DomainError(f"alpha must be nonnegative, got {self.alpha!r}")
        if not self.lower >= 0.0:
            raise DomainError(f"lower limit must be nonnegative, got {self.lower!r}")

    def with_alpha(self, alpha: float) -> OperatorSpec:
        return OperatorSpec(alpha, self.ctx, self.lower, self.trunc)


class IdentityPair(NamedTuple):
    """Both sides of an identity, evaluated independently."""

    lhs: float
    rhs: float

    @property
    def abs_err(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_err(self) -> float:
        return self.abs_err / max(abs(self.rhs), FLOOR_SCALE)


def _difference(a: EvalResult, b: EvalResult, tol: float) -> EvalResult:
    value = a.value - b.value
    est = a.est_tail + b.est_tail
    converged = a.converged and b.converged and est <= tol * max(abs(value), FLOOR_SCALE)
    return EvalResult(value, a.terms_used + b.terms_used, est, converged)


# {{{ prefactors


def prefactor(alpha: float, ctx: QContext, trunc: Truncation = DEFAULT_TRUNCATION) -> float:
    """Normalization ``[p+1]_q**(1-alpha) / Gamma_Q(alpha)``."""
    return q_number(ctx.p + 1.0, ctx.q) ** (1.0 - alpha) / q_gamma(alpha, ctx.base, trunc).value


def prefactor_forms(
    alpha: float, ctx: QContext, trunc: Truncation = DEFAULT_TRUNCATION
) -> tuple[float, float, float]:
    """The three equivalent normalizations of the integral operator.

    In order: ``1 / ([p+1]^{(alpha-1)} Gamma_q(alpha))``,
    ``(1-q)**(alpha-1) / (1-Q)^{(alpha-1)}_Q`` and
    ``[p+1]_q**(1-alpha) / Gamma_Q(alpha)``.
    """
    if not alpha > 0.0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    q, big = ctx.q, ctx.base
    first = 1.0 / (bracket_exponent(alpha - 1.0, ctx, trunc) * q_gamma(alpha, q, trunc).value)
    second = (1.0 - q) ** (alpha - 1.0) / _qpow(1.0, big, alpha - 1.0, big, trunc).value
    return first, second, prefactor(alpha, ctx, trunc)


# }}}


# {{{ integral operator


def _series(f: Integrand, x: float, alpha: float, ctx: QContext, trunc: Truncation) -> EvalResult:
    q, big = ctx.q, ctx.base
    state = [0.0]  # log of the Pochhammer ratio at the start of the next chunk

    def chunk(start: int, stop: int) -> np.ndarray:
        j = np.arange(start, stop, dtype=np.float64)
        steps = np.log1p(-(big ** (alpha + j))) - np.log1p(-(big ** (j + 1.0)))
        logc = state[0] + np.concatenate(([0.0], np.cumsum(steps)[:-1]))
        state[0] += float(np.sum(steps))
        return big**j * np.exp(logc) * f.values(x * q**j)

    if f.vectorized:
        return sum_series(chunk, big, trunc, first_chunk=64)
    return sum_series(chunk, big, trunc, first_chunk=8, growth=1)


def _kernel_integrand(f: Integrand, x: float, alpha: float, ctx: QContext, trunc: Truncation) -> Integrand:
    q, p, big = ctx.q, ctx.p, ctx.base
    top = x ** (p + 1.0)

    def g(w: float) -> float:
        return w**p * f(w) * _qpow(top, (w * q) ** (p + 1.0), alpha - 1.0, big, trunc).value

    return Integrand(g, f"kernel[{f.description}]")


def _check_integral_args(x: float, spec: OperatorSpec) -> None:
    if not spec.alpha > 0.0:
        raise DomainError(f"integral order must be positive, got {spec.alpha!r}")
    if not x > spec.lower:
        raise DomainError(f"need x > lower limit, got x={x!r}, lower={spec.lower!r}")


def frac_integral(f: AnyIntegrand, x: float, spec: OperatorSpec) -> IntegralResult:
    """Generalized q-fractional integral ``J^alpha_{p,q} f(x)``.

    The ``int_0^x`` part uses the grid series; with ``spec.lower = a > 0`` the
    Jackson piece ``int_0^a`` is subtracted through the kernel.
    """
    _check_integral_args(x, spec)
    f = as_integrand(f)
    ctx, alpha = spec.ctx, spec.alpha
    trunc = spec.trunc if spec.lower == 0.0 else spec.trunc.split(2)

    s = _series(f, x, alpha, ctx, trunc)
    scale = (1.0 - ctx.q) ** alpha * x ** (alpha * (ctx.p + 1.0))
    main = EvalResult(scale * s.value, s.terms_used, scale * s.est_tail, s.converged)
    if spec.lower == 0.0:
        return main

    c = prefactor(alpha, ctx, trunc)
    low = jackson_integral(_kernel_integrand(f, x, alpha, ctx, trunc), spec.lower, ctx.q, trunc)
    low = EvalResult(c * low.value, low.terms_used, abs(c) * low.est_tail, low.converged)
    return _difference(main, low, spec.trunc.tol)


def frac_integral_kernel(f: AnyIntegrand, x: float, spec: OperatorSpec) -> IntegralResult:
    """Same operator as :func:`frac_integral`, computed as prefactor times a Jackson
    integral of ``w**p f(w)`` against the generalized-power kernel."""
    _check_integral_args(x, spec)
    f = as_integrand(f)
    trunc = spec.trunc.split(2)
    c = prefactor(spec.alpha, spec.ctx, trunc)
    r = jackson_integral_between(
        _kernel_integrand(f, x, spec.alpha, spec.ctx, trunc), spec.lower, x, spec.ctx.q, trunc
    )
    return EvalResult(c * r.value, r.terms_used, abs(c) * r.est_tail, r.converged)


def as_operator_integrand(f: AnyIntegrand, spec: OperatorSpec) -> Integrand:
    """``w -> J^alpha f(w)`` as an integrand, memoized on ``w``.

    Composite operators (semigroup checks, derivatives of integrals) evaluate
    the inner operator on overlapping q-grids; the cache makes each inner
    value a single computation.
    """
    f = as_integrand(f)
    cache: dict[float, float] = {}

    def g(w: float) -> float:
        if w not in cache:
            cache[w] = frac_integral(f, w, spec).value
        return cache[w]

    return Integrand(g, f"J^{spec.alpha!r}[{f.description}]")


def q_riemann_liouville(
    f: AnyIntegrand,
    x: float,
    alpha: float,
    q: float,
    trunc: Truncation = DEFAULT_TRUNCATION,
    lower: float = 0.0,
) -> IntegralResult:
    """q-Riemann-Liouville integral ``1/Gamma_q(alpha) int (x - qt)^{(alpha-1)} f(t) d_q t``.

    Built directly from the base-``q`` kernel; the generalized operator must
    reduce to this at ``p = 0``.
    """
    if not alpha > 0.0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    f = as_integrand(f)
    sub = trunc.split(2)

    def g(t: float) -> float:
        return _qpow(x, q * t, alpha - 1.0, q, sub).value * f(t)

    r = jackson_integral_between(Integrand(g), lower, x, q, sub)
    gamma = q_gamma(alpha, q, sub).value
    return EvalResult(r.value / gamma, r.terms_used, r.est_tail / gamma, r.converged)


# }}}


# {{{ integer orders


def iterated_integral(f: AnyIntegrand, x: float, k: int, ctx: QContext, trunc: Truncation = DEFAULT_TRUNCATION) -> IntegralResult:
    """Brute-force ``k``-fold nested integral ``int_0^x w^p int_0^w ... f``.

    Cost grows like ``terms**k``; ``k`` is limited to 4.
    """
    if int(k) != k or not 1 <= k <= 4:
        raise DomainError(f"iterated_integral supports k = 1..4, got {k!r}")
    f = as_integrand(f)
    q, p = ctx.q, ctx.p
    failures = []

    def nested(level: int, v: float) -> float:
        if level == 0:
            return f(v)
        r = jackson_integral(lambda w: w**p * nested(level - 1, w), v, q, trunc)
        if not r.converged:
            failures.append(v)
        return r.value

    r = jackson_integral(lambda w: w**p * nested(int(k) - 1, w), x, q, trunc)
    return EvalResult(r.value, r.terms_used, r.est_tail, r.converged and not failures)


def integer_kernel_integral(f: AnyIntegrand, x: float, k: int, ctx: QContext, trunc: Truncation = DEFAULT_TRUNCATION) -> IntegralResult:
    """Integer-order operator as one Jackson integral against a finite product kernel.

    ``J^k f(x) = prod_{n=1}^{k-1} [n(p+1)]_q^{-1} int_0^x w^p f(w)
    prod_{n=0}^{k-2} (x^{p+1} - (wq)^{p+1} Q^n) d_q w``
    """
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    f = as_integrand(f)
    q, p, big = ctx.q, ctx.p, ctx.base
    top = x ** (p + 1.0)
    norm = math.prod(q_number(n * (p + 1.0), q) for n in range(1, int(k)))

    def g(w):
        w = np.asarray(w, dtype=np.float64)
        kernel = np.ones_like(w)
        for n in range(int(k) - 1):
            kernel = kernel * (top - (w * q) ** (p + 1.0) * big**n)
        return w**p * f.values(w) * kernel

    r = jackson_integral(Integrand(g, vectorized=True), x, q, trunc)
    return EvalResult(r.value / norm, r.terms_used, r.est_tail / norm, r.converged)


# }}}


# {{{ derivative


def frac_derivative_result(f: AnyIntegrand, x: float, spec: OperatorSpec) -> EvalResult:
    """``D^alpha f(x) = (x^{-p} D_q)^n J^{n-alpha} f(x)`` with ``n = floor(alpha) + 1``.

    Also reports the diagnostics of the inner integrals; the tail estimate is
    propagated through the ``n`` q-differences.
    """
    f = as_integrand(f)
    if spec.alpha == 0.0:
        return EvalResult(f(x), 0, 0.0, True)
    ctx = spec.ctx
    n = math.floor(spec.alpha) + 1
    if not x * ctx.q**n > spec.lower:
        raise DomainError(f"derivative at x={x!r} needs x q^{n} above the lower limit {spec.lower!r}")

    inner = spec.with_alpha(n - spec.alpha)
    stats: list[EvalResult] = []

    def g(t: float) -> float:
        r = frac_integral(f, t, inner)
        stats.append(r)
        return r.value

    value = composed_xp_dq(g, x, n, ctx)
    amplification = 2.0**n / math.prod((1.0 - ctx.q) * (x * ctx.q**m) ** (ctx.p + 1.0) for m in range(n))
    est = amplification * max(r.est_tail for r in stats)
    return EvalResult(value, sum(r.terms_used for r in stats), est, all(r.converged for r in stats))


def frac_derivative(f: AnyIntegrand, x: float, spec: OperatorSpec) -> float:
    """Generalized q-fractional derivative ``D^alpha_{p,q} f(x)``; ``alpha = 0`` is the identity."""
    return frac_derivative_result(f, x, spec).value


# }}}


# {{{ closed forms and identities


def _unit_power(s: float, big: float, trunc: Truncation) -> float:
    # (1 - Q)^{(s)}_Q = Gamma_Q(s + 1) (1 - Q)^s
    return _qpow(1.0, big, s, big, trunc).value


def power_rule_closed_form(x: float, alpha: float, lam: float, ctx: QContext, lower: float = 0.0, trunc: Truncation = DEFAULT_TRUNCATION) -> float:
    """Closed form of ``J^alpha`` applied to ``(t^{p+1} - a^{p+1})^{(lam)}_Q``.

    With ``lower = a = 0`` the integrand is the power ``t**(lam (p+1))`` and

    ``J^alpha t^{lam(p+1)} = [p+1]_q^{-alpha} Gamma_Q(lam+1) / Gamma_Q(lam+alpha+1) x^{(p+1)(lam+alpha)}``.
    """
    if not lam > -1.0:
        raise DomainError(f"power rule needs lam > -1, got {lam!r}")
    big = ctx.base
    sub = trunc.split(3)
    ratio = q_gamma(lam + 1.0, big, sub).value / q_gamma(lam + alpha + 1.0, big, sub).value
    shifted = _qpow(x ** (ctx.p + 1.0), lower ** (ctx.p + 1.0), alpha + lam, big, sub).value
    return q_number(ctx.p + 1.0, ctx.q) ** (-alpha) * ratio * shifted


def heine_type_sum(mu: float, alpha: float, beta: float, ctx: QContext, trunc: Truncation = DEFAULT_TRUNCATION) -> IdentityPair:
    """Both sides of the Heine-type summation over base ``Q = q^{p+1}``.

    ``lhs = sum_t (1 - mu Q^{1-t})^{(alpha-1)} (1 - Q^{1+t})^{(beta-1)} Q^{t alpha}``
    and ``rhs = W(alpha-1) W(beta-1) / W(alpha+beta-1) (1 - mu Q)^{(alpha+beta-1)}``
    with ``W(s) = (1 - Q)^{(s)}_Q``.

    The identity holds for ``mu = 0`` and for ``mu`` on the lattice ``Q^k``;
    for other ``mu`` the two sides differ.
    """
    if not 0.0 <= mu < 1.0:
        raise DomainError(f"mu must lie in [0, 1), got {mu!r}")
    if not (alpha > 0.0 and beta > 0.0):
        raise DomainError(f"need alpha, beta > 0, got {alpha!r}, {beta!r}")
    big = ctx.base
    sub = trunc.split(4)

    def chunk(start: int, stop: int) -> np.ndarray:
        out = np.empty(stop - start)
        for i, t in enumerate(range(start, stop)):
            first = _qpow(1.0, mu * big ** (1 - t), alpha - 1.0, big, sub).value if mu else 1.0
            second = _qpow(1.0, big ** (1 + t), beta - 1.0, big, sub).value
            out[i] = first * second * big ** (t * alpha)
        return out

    lhs = sum_series(chunk, big, trunc, first_chunk=16, growth=1)
    if not lhs.converged:
        log.warning("Heine-type sum did not converge (mu=%r, alpha=%r, beta=%r)", mu, alpha, beta)
    rhs = (
        _unit_power(alpha - 1.0, big, sub)
        * _unit_power(beta - 1.0, big, sub)
        / _unit_power(alpha + beta - 1.0, big, sub)
        * _qpow(1.0, mu * big, alpha + beta - 1.0, big, sub).value
    )
    return IdentityPair(lhs.value, rhs)


def _grid_index(a: float, x: float, q: float) -> int | None:
    """``m`` with ``a = x q^m`` (``m >= 1``), if ``a`` lies on the q-grid of ``x``."""
    m = math.log(a / x) / math.log(q)
    k = round(m)
    if k >= 1 and abs(m - k) < 1e-9:
        return k
    return None


def beta_type_integral(a: float, x: float, alpha: float, lam: float, ctx: QContext, trunc: Truncation = DEFAULT_TRUNCATION) -> IdentityPair:
    """Both sides of the beta-type Jackson integral with lower limit ``a``.

    ``lhs = int_a^x t^p (x^{p+1} - (qt)^{p+1})^{(alpha-1)}_Q (t^{p+1} - a^{p+1})^{(lam)}_Q d_q t``
    and ``rhs = (1-q) W(alpha-1) W(lam) / W(alpha+lam) (x^{p+1} - a^{p+1})^{(alpha+lam)}_Q``.

    For non-integer ``lam`` the second factor vanishes on the whole q-grid of
    ``a``, so ``int_0^a`` is dropped; when ``a = x q^m`` the ``int_0^x`` sum also
    stops after the ``m`` grid points in ``[a, x)``. For integer ``lam`` the
    factor is a finite product and both Jackson pieces are computed.
    """
    if not 0.0 <= a < x:
        raise DomainError(f"need 0 <= a < x, got a={a!r}, x={x!r}")
    if not (alpha > 0.0 and lam > -1.0):
        raise DomainError(f"need alpha > 0 and lam > -1, got {alpha!r}, {lam!r}")
    q, p, big = ctx.q, ctx.p, ctx.base
    sub = trunc.split(4)
    top, bottom = x ** (p + 1.0), a ** (p + 1.0)

    def g(t: float) -> float:
        kernel = _qpow(top, (q * t) ** (p + 1.0), alpha - 1.0, big, sub).value
        return t**p * kernel * _qpow(t ** (p + 1.0), bottom, lam, big, sub).value

    integrand = Integrand(g, "beta-type")
    m = _grid_index(a, x, q) if a > 0.0 else None
    if float(lam).is_integer():
        lhs = jackson_integral_between(integrand, a, x, q, sub).value
    elif m is not None:
        lhs = (1.0 - q) * x * math.fsum(q**i * g(x * q**i) for i in range(m))
    else:
        lhs = jackson_integral(integrand, x, q, sub).value

    rhs = (
        (1.0 - q)
        * _unit_power(alpha - 1.0, big, sub)
        * _unit_power(lam, big, sub)
        / _unit_power(alpha + lam, big, sub)
        * _qpow(top, bottom, alpha + lam, big, sub).value
    )
    return IdentityPair(lhs, rhs)


def hadamard_kernel_limit_check(t: float, a: float, lam: float, eps_q: float, eps_p: float, trunc: Truncation | None = None) -> IdentityPair:
    """``(t^{p+1} - a^{p+1})^{(lam)}_Q / [p+1]^{(lam)}`` at ``q = 1 - eps_q``, ``p = -1 + eps_p``,
    paired with its double limit ``log(t/a)**lam``.

    Products over ``Q`` need ``O(1/(eps_q eps_p))`` factors; the default
    truncation scales ``max_terms`` accordingly.
    """
    if not 0.0 < a < t:
        raise DomainError(f"need 0 < a < t, got a={a!r}, t={t!r}")
    if not lam >= 0.0:
        raise DomainError(f"need lam >= 0, got {lam!r}")
    ctx = QContext(1.0 - eps_q, -1.0 + eps_p)
    if trunc is None:
        trunc = Truncation(1e-12, max(10_000, math.ceil(40.0 / (1.0 - ctx.base))))
    sub = trunc.split(2)
    num = _qpow(t ** (ctx.p + 1.0), a ** (ctx.p + 1.0), lam, ctx.base, sub).value
    den = bracket_exponent(lam, ctx, sub)
    return IdentityPair(num / den, math.log(t / a) ** lam)


def classical_reference(f: AnyIntegrand, x: float, alpha: float, p: float) -> float:
    """Classical limit ``(p+1)^{1-alpha} / Gamma(alpha) int_0^x w^p f(w) (x^{p+1} - w^{p+1})^{alpha-1} dw``.

    After ``u = w^{p+1}`` the endpoint singularity at ``u = x^{p+1}`` is an
    algebraic weight, handled by QUADPACK's QAWS rule.
    """
    if not (x > 0.0 and alpha > 0.0 and p > -1.0):
        raise DomainError(f"need x > 0, alpha > 0, p > -1; got {x!r}, {alpha!r}, {p!r}")
    f = as_integrand(f)
    top = x ** (p + 1.0)

    def g(u: float) -> float:
        return f(u ** (1.0 / (p + 1.0)))

    value, abserr = integrate.quad(g, 0.0, top, weight="alg", wvar=(0.0, alpha - 1.0), limit=200)
    if not abserr <= 1e-8 * abs(value) + 1e-14:
        raise RuntimeError(f"classical quadrature did not reach accuracy (estimate {abserr:.3g})")
    return (p + 1.0) ** (-alpha) * value / special.gamma(alpha)


# }}}


def __getattr__(name: str):
    # the identity registry builds on this module; import it on first use
    if name in ("run_identity_suite", "VerificationReport"):
        from qfrac import identities

        return getattr(identities, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
