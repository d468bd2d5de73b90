"""Log-utility betting math for all-or-nothing contracts.

Everything here is pure: probabilities in, fractions out, no state.
Conventions:

* A positive fraction is a long position in the event ("yes"); a negative
  fraction is a long position in the complement ("no") bought at 1 - p.
  Shorting is not modelled, so fractions are capped at magnitude 1.
* Prices p of exactly 0 or 1 are rejected everywhere (odds diverge);
  beliefs q of exactly 0 or 1 are fine and give fractions of -1 / +1.
"""

import math

from ._validation import check_fraction, check_probability

__all__ = [
    "probability_to_odds",
    "odds_to_probability",
    "log_utility",
    "log_utility_alpha",
    "optimal_fraction",
    "optimal_fraction_alpha",
    "even_odds_growth_rate",
]


def probability_to_odds(prob):
    """Odds x/(1-x) for a probability strictly inside (0, 1)."""
    p = check_probability(prob, "prob", open_interval=True)
    return p / (1.0 - p)


def odds_to_probability(odds):
    """Inverse of :func:`probability_to_odds`."""
    x = float(odds)
    if not (math.isfinite(x) and x >= 0.0):
        raise ValueError(f"odds must be a non-negative finite number, got {odds!r}")
    return x / (1.0 + x)


def log_utility(q, p, f):
    """Expected log wealth growth from staking fraction ``f`` at price ``p``
    when the bettor's own probability is ``q``.

    For f >= 0 this is ``(1-q) log(1-f) + q log(1 + f (1-p)/p)``.  Negative
    fractions are evaluated on the complement contract, i.e. with
    (q, p, f) -> (1-q, 1-p, -f); the two branches agree at f = 0.
    """
    q = check_probability(q, "q")
    p = check_probability(p, "p", open_interval=True)
    f = check_fraction(f, "f")
    if f < 0.0:
        q, p, f = 1.0 - q, 1.0 - p, -f
    # (1-q) log(1-f): the weight-zero convention 0*log(0) = 0 applies at
    # q = 1, otherwise f = 1 means certain ruin on the losing branch.
    if f == 1.0 and q < 1.0:
        raise ValueError("f = 1 has log(0) loss branch unless q = 1")
    loss_term = 0.0 if q == 1.0 else (1.0 - q) * math.log1p(-f)
    gain_term = q * math.log1p(f * (1.0 - p) / p)
    return loss_term + gain_term


def optimal_fraction(q, p):
    """Signed fraction of capital maximizing :func:`log_utility`.

    For q >= p the stationary point of the long-side utility is
    ``q - p (1-q)/(1-p)``; for q < p the bettor instead goes long the
    complement at price 1 - p, and the result is the negated long
    fraction of that mirrored problem.  Zero at q = p.
    """
    q = check_probability(q, "q")
    p = check_probability(p, "p", open_interval=True)
    if q >= p:
        return q - p * (1.0 - q) / (1.0 - p)
    return -((1.0 - q) - (1.0 - p) * q / p)


def log_utility_alpha(q, p, f, alpha):
    """Log utility of a long fraction when the winning payout multiplier
    is ``((1-p)/p) ** alpha``; alpha = 1 recovers :func:`log_utility` on
    f >= 0."""
    q = check_probability(q, "q")
    p = check_probability(p, "p", open_interval=True)
    f = check_fraction(f, "f", lo=0.0)
    a = float(alpha)
    if not (math.isfinite(a) and a >= 0.0):
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")
    if f == 1.0 and q < 1.0:
        raise ValueError("f = 1 has log(0) loss branch unless q = 1")
    loss_term = 0.0 if q == 1.0 else (1.0 - q) * math.log1p(-f)
    return loss_term + q * math.log1p(f * ((1.0 - p) / p) ** a)


def optimal_fraction_alpha(q, p, alpha):
    """Optimal long fraction when the winning payout multiplier is
    ``((1-p)/p) ** alpha`` instead of the plain odds ``(1-p)/p``.

    Maximizes ``(1-q) log(1-f) + q log(1 + f ((1-p)/p)^alpha)`` over
    f in [0, 1]; the interior stationary point is
    ``q - (1-q) (p/(1-p))^alpha``, clamped at 0 when the edge is gone.
    alpha = 1 reproduces :func:`optimal_fraction` for q >= p.  Only the
    long side is defined; no short-side contract exists for alpha != 1.
    """
    q = check_probability(q, "q")
    p = check_probability(p, "p", open_interval=True)
    a = float(alpha)
    if not (math.isfinite(a) and a >= 0.0):
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")
    f = q - (1.0 - q) * (p / (1.0 - p)) ** a
    return max(f, 0.0)


def even_odds_growth_rate(p, f):
    """Per-step expected log growth ``p log(1+f) + (1-p) log(1-f)`` of the
    double-or-nothing game; maximized at f = 2p - 1."""
    p = check_probability(p, "p")
    f = check_fraction(f, "f", open_lo=True, open_hi=True)
    up = 0.0 if p == 0.0 else p * math.log1p(f)
    down = 0.0 if p == 1.0 else (1.0 - p) * math.log1p(-f)
    return up + down
