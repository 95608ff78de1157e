"""q-arithmetic primitives and q-special functions.

Everything here works for real ``0 < q < 1``. Infinite products are truncated
under a :class:`Truncation` policy and return an :class:`EvalResult` carrying
the number of factors used and an absolute tail-error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_TRUNCATION",
    "FLOOR_SCALE",
    "DomainError",
    "E_q",
    "EvalResult",
    "QContext",
    "Truncation",
    "bracket_exponent",
    "bracket_exponent_product",
    "e_q",
    "gen_power",
    "q_beta",
    "q_binomial",
    "q_factorial",
    "q_gamma",
    "q_number",
    "q_pochhammer",
    "q_pochhammer_inf",
]

#: guards relative tolerances against values that are (numerically) zero
FLOOR_SCALE = 1e-30

_CHUNK = 1 << 16


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


def _check_q(q: float) -> None:
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q!r}")


@dataclass(frozen=True)
class QContext:
    """The parameter pair ``(q, p)`` shared by every operator evaluation."""

    q: float
    p: float = 0.0

    def __post_init__(self) -> None:
        _check_q(self.q)
        if not self.p > -1.0:
            raise DomainError(f"p must be greater than -1, got {self.p!r}")

    @property
    def base(self) -> float:
        """The operator base ``Q = q**(p + 1)``."""
        return self.q ** (self.p + 1.0)


@dataclass(frozen=True)
class Truncation:
    """Relative tail tolerance and hard cap on series/product terms."""

    tol: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self) -> None:
        if not self.tol > 0.0:
            raise DomainError(f"tol must be positive, got {self.tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms!r}")

    def split(self, parts: int) -> Truncation:
        """Share the tolerance budget between ``parts`` sub-evaluations."""
        return Truncation(self.tol / parts, self.max_terms)


DEFAULT_TRUNCATION = Truncation()


@dataclass(frozen=True)
class EvalResult:
    """A truncated evaluation: value, terms used, absolute tail estimate, flag."""

    value: float
    terms_used: int
    est_tail: float
    converged: bool

    def __float__(self) -> float:
        return float(self.value)


def _combine(value: float, parts: list[EvalResult]) -> EvalResult:
    # first-order relative error propagation through products and quotients
    rel = 0.0
    for r in parts:
        if r.value != 0.0:
            rel += r.est_tail / abs(r.value)
    return EvalResult(
        value,
        sum(r.terms_used for r in parts),
        abs(value) * rel,
        all(r.converged for r in parts),
    )


# {{{ finite objects


def q_number(a: float, q: float) -> float:
    """Return ``[a]_q = (1 - q**a) / (1 - q)``."""
    _check_q(q)
    if float(a).is_integer() and 0 <= a <= 64:
        return math.fsum(q**k for k in range(int(a)))
    return -math.expm1(a * math.log1p(q - 1.0)) / (1.0 - q)


def q_factorial(n: int, q: float) -> float:
    """Return ``[n]_q! = [1]_q [2]_q ... [n]_q``."""
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    return math.prod(q_number(k, q) for k in range(1, int(n) + 1))


def q_pochhammer(a: float, q: float, n: int) -> float:
    """Return the finite q-shifted factorial ``(a; q)_n``."""
    _check_q(q)
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    return math.prod(1.0 - q**j * a for j in range(int(n)))


def q_binomial(n: int, k: int, q: float) -> float:
    """Gaussian binomial coefficient ``(q;q)_n / ((q;q)_{n-k} (q;q)_k)``."""
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got n={n!r}, k={k!r}")
    return q_pochhammer(q, q, n) / (q_pochhammer(q, q, n - k) * q_pochhammer(q, q, k))


# }}}


# {{{ truncated infinite products


def _log_abs_1m(u: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(np.abs(u) < 0.5, np.log1p(-u), np.log(np.abs(1.0 - u)))


def _tail_bound(r: float, base: float, shift: float | None, k: int) -> float:
    """Bound on the log of the omitted factors ``k, k+1, ...``."""
    u = abs(r) * base**k
    v = abs(r) * base ** (k + shift) if shift is not None else 0.0
    m = max(u, v)
    if m >= 1.0:
        return math.inf
    return (u + v) / ((1.0 - base) * (1.0 - m))


def _ratio_product(
    r: float, base: float, shift: float | None, trunc: Truncation
) -> tuple[float, int, float, bool]:
    """Evaluate ``prod_k (1 - r B^k) / (1 - r B^(k+shift))``.

    With ``shift=None`` there is no denominator. Returns the value, number of
    factors, the log-tail bound and the convergence flag.
    """
    if r == 0.0:
        return 1.0, 0, 0.0, True

    target = 0.5 * trunc.tol
    lead = abs(r) * (1.0 + (base**shift if shift is not None else 0.0))
    # in logs so a denormal r cannot overflow the ratio
    guess = (math.log(target * (1.0 - base)) - math.log(2.0 * lead)) / math.log(base)
    n = max(0, math.ceil(guess))
    while _tail_bound(r, base, shift, n) > target and n <= trunc.max_terms:
        n += 1
    while n > 0 and _tail_bound(r, base, shift, n - 1) <= target:
        n -= 1

    converged = n <= trunc.max_terms
    n = min(n, trunc.max_terms)

    logsum = 0.0
    negatives = 0
    vanishes = False
    for start in range(0, n, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, n), dtype=np.float64)
        u = r * base**k
        num = 1.0 - u
        vanishes = vanishes or bool(np.any(num == 0.0))
        negatives += int(np.count_nonzero(num < 0.0))
        logsum += float(np.sum(_log_abs_1m(u)))
        if shift is not None:
            v = r * base ** (k + shift)
            den = 1.0 - v
            if np.any(den == 0.0):
                raise DomainError("generalized q-power has a pole at this argument")
            negatives += int(np.count_nonzero(den < 0.0))
            logsum -= float(np.sum(_log_abs_1m(v)))

    if vanishes:
        return 0.0, n, 0.0, True
    value = math.exp(logsum) if logsum < 709.0 else math.inf
    if negatives % 2:
        value = -value
    return value, n, _tail_bound(r, base, shift, n), converged


def _abs_tail(value: float, logbound: float) -> float:
    if value == 0.0:
        return 0.0
    if not logbound < 700.0:
        return math.inf
    return abs(value) * math.expm1(logbound)


def q_pochhammer_inf(
    a: float, q: float, trunc: Truncation = DEFAULT_TRUNCATION
) -> EvalResult:
    """Truncated ``(a; q)_inf = prod_{j>=0} (1 - q^j a)``."""
    _check_q(q)
    value, n, bound, converged = _ratio_product(a, q, None, trunc)
    return EvalResult(value, n, _abs_tail(value, bound), converged)


def _qpow(
    x: float, y: float, alpha: float, base: float, trunc: Truncation
) -> EvalResult:
    """``(x - y)^(alpha)`` over an arbitrary base, no sign restriction on ``y``."""
    if not x > 0.0:
        raise DomainError(f"generalized q-power needs x > 0, got {x!r}")
    if y == 0.0:
        return EvalResult(x**alpha, 0, 0.0, True)

    if float(alpha).is_integer():
        n = int(alpha)
        if n >= 0:
            return EvalResult(math.prod(x - y * base**k for k in range(n)), n, 0.0, True)
        den = math.prod(x - y * base ** (-k) for k in range(1, 1 - n))
        if den == 0.0:
            raise DomainError("generalized q-power has a pole at this argument")
        return EvalResult(1.0 / den, -n, 0.0, True)

    ratio, n, bound, converged = _ratio_product(y / x, base, alpha, trunc)
    value = x**alpha * ratio
    return EvalResult(value, n, _abs_tail(value, bound), converged)


def gen_power(
    x: float,
    y: float,
    alpha: float,
    ctx: QContext,
    trunc: Truncation = DEFAULT_TRUNCATION,
) -> EvalResult:
    r"""Generalized q-power over the base ``Q = q**(p+1)``.

    .. math::

        (x - y)^{(\alpha)}_Q = x^\alpha \frac{(y/x; Q)_\infty}{(Q^\alpha y/x; Q)_\infty}

    For integer ``alpha = n >= 0`` this is the finite product
    ``prod_{k<n} (x - y Q^k)``, evaluated exactly. With ``p = 0`` it is the
    usual q-power ``(x - y)^{(alpha)}`` over base ``q``.
    """
    if y < 0.0:
        raise DomainError(f"gen_power needs y >= 0, got {y!r}")
    return _qpow(x, y, alpha, ctx.base, trunc)


# }}}


# {{{ exponentials


def e_q(z: float, q: float, trunc: Truncation = DEFAULT_TRUNCATION) -> EvalResult:
    """Small q-exponential ``e_q(z) = 1 / ((1-q) z; q)_inf``, for ``|z| < 1/(1-q)``."""
    _check_q(q)
    if abs(z) >= 1.0 / (1.0 - q):
        raise DomainError(f"e_q needs |z| < 1/(1-q) = {1.0 / (1.0 - q)!r}, got {z!r}")
    r = q_pochhammer_inf((1.0 - q) * z, q, trunc)
    return _combine(1.0 / r.value, [r])


def E_q(z: float, q: float, trunc: Truncation = DEFAULT_TRUNCATION) -> EvalResult:
    """Big q-exponential ``E_q(z) = (-(1-q) z; q)_inf``; entire in ``z``."""
    _check_q(q)
    return q_pochhammer_inf(-(1.0 - q) * z, q, trunc)


# }}}


# {{{ gamma and beta


def q_gamma(t: float, q: float, trunc: Truncation = DEFAULT_TRUNCATION) -> EvalResult:
    """q-Gamma function through the product form ``(1-q)^{(t-1)} / (1-q)^{t-1}``.

    The generalized power is taken with ``x = 1, y = q`` over base ``q``, so
    ``Gamma_q(t) = (q;q)_inf / (q^t;q)_inf * (1-q)^{1-t}``. Non-positive ``t``
    is rejected.
    """
    _check_q(q)
    if not t > 0.0:
        raise DomainError(f"q_gamma needs t > 0, got {t!r}")
    r = _qpow(1.0, q, t - 1.0, q, trunc)
    scale = (1.0 - q) ** (t - 1.0)
    return EvalResult(r.value / scale, r.terms_used, r.est_tail / scale, r.converged)


def q_beta(
    t: float, s: float, q: float, trunc: Truncation = DEFAULT_TRUNCATION
) -> EvalResult:
    """q-Beta function ``Gamma_q(t) Gamma_q(s) / Gamma_q(t + s)``."""
    if not (t > 0.0 and s > 0.0):
        raise DomainError(f"q_beta needs t, s > 0, got t={t!r}, s={s!r}")
    sub = trunc.split(3)
    gt, gs, gts = q_gamma(t, q, sub), q_gamma(s, q, sub), q_gamma(t + s, q, sub)
    return _combine(gt.value * gs.value / gts.value, [gt, gs, gts])


def bracket_exponent(
    alpha: float, ctx: QContext, trunc: Truncation = DEFAULT_TRUNCATION
) -> float:
    """``[p+1]^{(alpha)} = Gamma_Q(alpha+1) / Gamma_q(alpha+1) * [p+1]_q**alpha``."""
    if not alpha > -1.0:
        raise DomainError(f"bracket_exponent needs alpha > -1, got {alpha!r}")
    sub = trunc.split(2)
    num = q_gamma(alpha + 1.0, ctx.base, sub).value
    den = q_gamma(alpha + 1.0, ctx.q, sub).value
    return num / den * q_number(ctx.p + 1.0, ctx.q) ** alpha


def bracket_exponent_product(
    alpha: float, ctx: QContext, trunc: Truncation = DEFAULT_TRUNCATION
) -> EvalResult:
    """``[p+1]^{(alpha)}`` as the truncated product ``prod_{k>=1} [p+1]_{q^k} / [p+1]_{q^{k+alpha}}``."""
    if not alpha > -1.0:
        raise DomainError(f"bracket_exponent needs alpha > -1, got {alpha!r}")
    q, big = ctx.q, ctx.base
    worst = max(q, big)

    def bound(k: int) -> float:
        u = (big**k, q ** (k + alpha), q**k, big ** (k + alpha))
        m = max(u)
        return math.inf if m >= 1.0 else sum(u) / ((1.0 - worst) * (1.0 - m))

    target = 0.5 * trunc.tol
    lead = 2.0 * (1.0 + max(1.0, q**alpha, big**alpha))
    n = max(1, math.ceil(math.log(target * (1.0 - worst) / lead) / math.log(worst)))
    while bound(n) > target and n <= trunc.max_terms:
        n += 1
    while n > 1 and bound(n - 1) <= target:
        n -= 1
    converged = n <= trunc.max_terms
    n = min(n, trunc.max_terms)

    logsum = 0.0
    for start in range(1, n, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, n), dtype=np.float64)
        logsum += float(
            np.sum(
                np.log1p(-(big**k))
                + np.log1p(-(q ** (k + alpha)))
                - np.log1p(-(q**k))
                - np.log1p(-(big ** (k + alpha)))
            )
        )
    value = math.exp(logsum)
    return EvalResult(value, n - 1, _abs_tail(value, bound(n)), converged)


# }}}
