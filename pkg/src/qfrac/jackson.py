"""Jackson q-integration and the q-difference operator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from qfrac._series import sum_series
from qfrac.qcore import (
    DEFAULT_TRUNCATION,
    FLOOR_SCALE,
    DomainError,
    EvalResult,
    QContext,
    Truncation,
    _check_q,
)

__all__ = [
    "IntegralResult",
    "Integrand",
    "as_integrand",
    "composed_xp_dq",
    "jackson_integral",
    "jackson_integral_between",
    "q_derivative",
]

#: Jackson integrals report the same diagnostics as any truncated evaluation
IntegralResult = EvalResult


@dataclass(frozen=True)
class Integrand:
    """A real function of one positive variable.

    ``vectorized`` integrands accept and return numpy arrays; others are
    evaluated point by point. Callers assert the Jackson boundedness contract
    (``|f(t) t**a|`` bounded near 0 for some ``0 <= a < 1``); violations only
    show up as non-convergence.
    """

    func: Callable[[Any], Any]
    description: str = ""
    vectorized: bool = False

    def __call__(self, t: float) -> float:
        return float(self.func(t))

    def values(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        if self.vectorized:
            return np.broadcast_to(np.asarray(self.func(t), dtype=np.float64), t.shape)
        return np.fromiter((self.func(float(v)) for v in t), dtype=np.float64, count=t.size)

    @classmethod
    def constant(cls, c: float) -> Integrand:
        return cls(lambda t: np.full_like(np.asarray(t, dtype=np.float64), c), f"{c!r}", True)

    @classmethod
    def power(cls, lam: float, coeff: float = 1.0) -> Integrand:
        """``coeff * t**lam``."""
        return cls(lambda t: coeff * np.asarray(t, dtype=np.float64) ** lam, f"{coeff!r}*t^{lam!r}", True)

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> Integrand:
        """``sum_k coeffs[k] * t**k``."""
        c = tuple(float(v) for v in coeffs)

        def func(t: Any) -> Any:
            t = np.asarray(t, dtype=np.float64)
            out = np.zeros_like(t)
            for a in reversed(c):
                out = out * t + a
            return out

        return cls(func, "poly" + repr(c), True)


def as_integrand(f: Integrand | Callable[[float], float]) -> Integrand:
    """Wrap a plain scalar callable; :class:`Integrand` instances pass through."""
    if isinstance(f, Integrand):
        return f
    if not callable(f):
        raise TypeError(f"integrand must be callable, got {type(f).__name__}")
    return Integrand(f, getattr(f, "__name__", "callable"), False)


def _grid_chunk(f: Integrand, b: float, q: float) -> Callable[[int, int], np.ndarray]:
    def chunk(start: int, stop: int) -> np.ndarray:
        weights = q ** np.arange(start, stop, dtype=np.float64)
        return weights * f.values(b * weights)

    return chunk


def jackson_integral(
    f: Integrand | Callable[[float], float],
    b: float,
    q: float,
    trunc: Truncation = DEFAULT_TRUNCATION,
) -> IntegralResult:
    """``int_0^b f(t) d_q t = (1 - q) b sum_i q^i f(q^i b)``."""
    _check_q(q)
    if not b > 0.0:
        raise DomainError(f"upper limit must be positive, got {b!r}")
    f = as_integrand(f)
    if f.vectorized:
        s = sum_series(_grid_chunk(f, b, q), q, trunc, first_chunk=64)
    else:
        # pointwise integrands are often nested operators; avoid overshooting
        s = sum_series(_grid_chunk(f, b, q), q, trunc, first_chunk=8, growth=1)
    scale = (1.0 - q) * b
    return EvalResult(scale * s.value, s.terms_used, scale * s.est_tail, s.converged)


def jackson_integral_between(
    f: Integrand | Callable[[float], float],
    a: float,
    b: float,
    q: float,
    trunc: Truncation = DEFAULT_TRUNCATION,
) -> IntegralResult:
    """``int_a^b = int_0^b - int_0^a`` for ``0 <= a <= b``."""
    if not 0.0 <= a <= b:
        raise DomainError(f"need 0 <= a <= b, got a={a!r}, b={b!r}")
    if a == b:
        return EvalResult(0.0, 0, 0.0, True)
    if a == 0.0:
        return jackson_integral(f, b, q, trunc)
    f = as_integrand(f)
    sub = trunc.split(2)
    upper = jackson_integral(f, b, q, sub)
    lower = jackson_integral(f, a, q, sub)
    value = upper.value - lower.value
    est = upper.est_tail + lower.est_tail
    converged = (
        upper.converged
        and lower.converged
        and est <= trunc.tol * max(abs(value), abs(upper.value), FLOOR_SCALE)
    )
    return EvalResult(value, upper.terms_used + lower.terms_used, est, converged)


def q_derivative(f: Integrand | Callable[[float], float], x: float, q: float) -> float:
    """Jackson difference ``(f(x) - f(qx)) / ((1 - q) x)``."""
    _check_q(q)
    if not x > 0.0:
        raise DomainError(f"q_derivative needs x > 0, got {x!r}")
    f = as_integrand(f)
    return (f(x) - f(q * x)) / ((1.0 - q) * x)


def composed_xp_dq(
    f: Integrand | Callable[[float], float], x: float, n: int, ctx: QContext
) -> float:
    """Apply ``g -> t**(-p) D_q g`` to ``f`` ``n`` times and evaluate at ``x``.

    Needs ``f`` at the ``n + 1`` points ``x, xq, ..., xq^n``.
    """
    if not x > 0.0:
        raise DomainError(f"composed_xp_dq needs x > 0, got {x!r}")
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    f = as_integrand(f)
    q, p = ctx.q, ctx.p
    points = [x * q**j for j in range(int(n) + 1)]
    vals = [f(t) for t in points]
    for _ in range(int(n)):
        vals = [
            (vals[j] - vals[j + 1]) / ((1.0 - q) * points[j] * points[j] ** p)
            for j in range(len(vals) - 1)
        ]
    result = vals[0]
    if not math.isfinite(result):
        raise DomainError(f"composed q-difference is not finite at x={x!r}")
    return result
