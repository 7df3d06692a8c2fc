"""Tunable constants and small numeric helpers shared by the settlers."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

DEFAULT_MAX_RETRIES = 50
RETRY_ENV = "SHORTCUT_FORGE_MAX_RETRIES"


@dataclass(frozen=True)
class Constants:
    """Proof constants; defaults are the published ones.

    Small instances may prefer smaller values, which keeps every output
    valid (outputs are always verified) but voids the w.h.p. arguments.
    """

    hub_sample: float = 9.0  # |R| = hub_sample * log n * n / beta
    chain_sample: float = 999.0  # |Q| = chain_sample * log n * n / (alpha_d d)^2
    thick_cap: float = 999.0  # leading constant of the F1 size bound
    round_prob: float = 500.0  # inclusion probability factor in Cut-or-Round
    round_cap: float = 1000.0  # |F2| acceptance factor in Cut-or-Round
    log_regime: float = 4.0  # alpha_d d <= log_regime * log n selects the small regime


DEFAULT_CONSTANTS = Constants()


def log2n(n: int) -> float:
    """log2(n) clamped below at 1."""
    return max(1.0, math.log2(n)) if n > 0 else 1.0


def ceil_log2(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def max_retries() -> int:
    raw = os.environ.get(RETRY_ENV)
    if raw is None:
        return DEFAULT_MAX_RETRIES
    value = int(raw)
    if value < 1:
        raise ValueError(f"{RETRY_ENV} must be >= 1")
    return value


def thick_size_cap(n: int, beta: float, reach_bound: int, c: Constants = DEFAULT_CONSTANTS) -> float:
    """Upper bound on |F1|: C n^2 log^2 n / (beta (alpha_d d)^2) + n ceil(log n)."""
    lg = log2n(n)
    return c.thick_cap * n * n * lg * lg / (beta * reach_bound**2) + n * ceil_log2(n)


def thin_size_cap(n: int, beta: float, alpha_d: int, s: float, c: Constants = DEFAULT_CONSTANTS) -> float:
    """Acceptance cap on |F2|: 1000 log^2 n (beta / alpha_d) s."""
    lg = log2n(n)
    return c.round_cap * lg * lg * (beta / alpha_d) * s


def theorem_cap(n: int, s: float, d: int, alpha_d: int, c: Constants = DEFAULT_CONSTANTS) -> float:
    """Size guarantee of the combined algorithm at the balancing beta.

    Substituting beta = n / (d sqrt(s alpha_d)) into the two settler caps gives
    (C1 + C2) n log^2 n sqrt(s) / (d alpha_d^1.5) + n ceil(log n).
    """
    lg = log2n(n)
    lead = (c.thick_cap + c.round_cap) * n * lg * lg * math.sqrt(s) / (d * alpha_d**1.5)
    return lead + n * ceil_log2(n)
