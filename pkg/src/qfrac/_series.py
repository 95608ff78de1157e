"""Truncated summation of geometric-grid series."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from qfrac.qcore import FLOOR_SCALE, DomainError, EvalResult, Truncation

#: number of trailing terms in the tail envelope
ENVELOPE = 8

ChunkFn = Callable[[int, int], np.ndarray]


def sum_series(
    chunk: ChunkFn,
    rho: float,
    trunc: Truncation,
    *,
    first_chunk: int = 32,
    growth: int = 2,
) -> EvalResult:
    """Sum ``chunk(start, stop)`` blocks until the tail estimate meets ``trunc.tol``.

    The tail after index ``i`` is estimated as ``env * r / (1 - r)`` where
    ``env`` is the largest magnitude among the last :data:`ENVELOPE` terms and
    ``r`` is the larger of ``rho`` and the decay rate observed between the last
    two envelope windows. The sum itself is exactly rounded (``math.fsum``).
    """
    k = ENVELOPE
    parts: list[np.ndarray] = []
    history = np.zeros(0)
    running = 0.0
    start, size = 0, first_chunk
    est = math.inf

    while start < trunc.max_terms:
        stop = min(start + size, trunc.max_terms)
        terms = np.asarray(chunk(start, stop), dtype=np.float64)
        if not np.all(np.isfinite(terms)):
            bad = start + int(np.argmin(np.isfinite(terms)))
            raise DomainError(f"series term {bad} is not finite")

        absvals = np.concatenate([history, np.abs(terms)])
        offset = len(history)
        cums = running + np.cumsum(terms)

        if len(absvals) >= 2 * k:
            win = sliding_window_view(absvals, k).max(axis=1)
            # win[j] covers absvals[j : j + k]; entry for term index m is win[m - k + 1]
            idx = np.arange(offset, len(absvals))
            ok_idx = idx >= 2 * k - 1
            env = np.where(ok_idx, win[np.clip(idx - k + 1, 0, None)], np.inf)
            prev = np.where(ok_idx, win[np.clip(idx - 2 * k + 1, 0, None)], np.inf)
            with np.errstate(divide="ignore", invalid="ignore"):
                observed = np.where(prev > 0.0, (env / prev) ** (1.0 / k), np.where(env > 0.0, np.inf, 0.0))
            r = np.maximum(rho, observed)
            with np.errstate(invalid="ignore"):
                tail = np.where(r < 1.0, env * r / (1.0 - r), np.inf)
            tail = np.where(env == 0.0, 0.0, tail)
            tail = np.where(ok_idx, tail, np.inf)
            good = tail <= trunc.tol * np.maximum(np.abs(cums), FLOOR_SCALE)
            if np.any(good):
                j = int(np.argmax(good))
                parts.append(terms[: j + 1])
                value = math.fsum(np.concatenate(parts))
                return EvalResult(value, start + j + 1, float(tail[j]), True)
            est = float(tail[-1])

        parts.append(terms)
        history = absvals[-2 * k :]
        running = float(cums[-1])
        start, size = stop, size * growth

    value = math.fsum(np.concatenate(parts)) if parts else 0.0
    return EvalResult(value, start, est, False)
