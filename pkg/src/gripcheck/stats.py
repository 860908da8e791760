"""Binomial confidence bounds for success-rate verdicts."""

from __future__ import annotations

from scipy.stats import beta


def clopper_pearson_lower(k: int, n: int, confidence: float = 0.95) -> float:
    """Exact one-sided lower confidence bound on a binomial proportion.

    Returns the ``p`` at which observing ``k`` or more successes out of ``n``
    has probability ``1 - confidence``; 0 when ``k == 0``.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0, {n}]")
    if k == 0:
        return 0.0
    return float(beta.ppf(1.0 - confidence, k, n - k + 1))


def clopper_pearson_upper(k: int, n: int, confidence: float = 0.95) -> float:
    if n <= 0:
        raise ValueError("n must be positive")
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0, {n}]")
    if k == n:
        return 1.0
    return float(beta.ppf(confidence, k + 1, n - k))
