"""Market clearing for a population of log-utility bettors.

Each investor stakes the signed Kelly fraction of their capital at the
quoted price; the clearing price is where the signed dollar exposures sum
to zero.  Aggregate exposure is continuous and non-increasing in the
price, so bisection is used (kinks appear where an investor's belief
crosses the price, ruling out derivative-based methods).
"""

import math
from dataclasses import dataclass, field

from ._validation import check_positive, check_probability
from .kelly import optimal_fraction

__all__ = [
    "Investor",
    "MarketPopulation",
    "ClearingResult",
    "NoInteriorClearing",
    "signed_exposure",
    "aggregate_exposure",
    "mean_belief",
    "clearing_price",
    "confident_no_capital",
    "mean_belief_confident_no",
    "confident_yes_capital",
    "mean_belief_confident_yes",
]

# Bisection bracket: prices never reach the endpoints (odds diverge there).
_PRICE_LO = 1e-9
_PRICE_HI = 1.0 - 1e-9
_MAX_BISECT = 200
_WIDTH_TOL = 1e-13


class NoInteriorClearing(ValueError):
    """Aggregate exposure never crosses zero on (0, 1).

    Happens when every belief sits at the same endpoint, or when all
    beliefs are extreme (0 or 1) with a capital imbalance: the one-sided
    demand is constant in the price, so no interior price clears.
    """


@dataclass(frozen=True)
class Investor:
    capital: float  # dollars, > 0
    belief: float   # subjective probability, [0, 1]

    def __post_init__(self):
        object.__setattr__(self, "capital", check_positive(self.capital, "capital"))
        object.__setattr__(self, "belief", check_probability(self.belief, "belief"))


@dataclass(frozen=True)
class MarketPopulation:
    investors: tuple

    def __post_init__(self):
        inv = tuple(self.investors)
        if not inv:
            raise ValueError("population must contain at least one investor")
        object.__setattr__(self, "investors", inv)

    @property
    def total_capital(self):
        return sum(i.capital for i in self.investors)

    def scaled(self, factor):
        """Every capital multiplied by ``factor``; beliefs unchanged."""
        factor = check_positive(factor, "factor")
        return MarketPopulation(
            tuple(Investor(i.capital * factor, i.belief) for i in self.investors)
        )


@dataclass(frozen=True)
class ClearingResult:
    price: float
    exposures: tuple = field(repr=False)
    mean_belief: float = 0.0
    gap: float = 0.0        # mean_belief - price
    residual: float = 0.0   # aggregate exposure at the returned price


def signed_exposure(inv, p):
    """Dollar position ``capital * optimal_fraction(belief, p)``; positive
    means long the event."""
    return inv.capital * optimal_fraction(inv.belief, p)


def aggregate_exposure(pop, p):
    """Sum of signed exposures over the population at price ``p``."""
    p = check_probability(p, "p", open_interval=True)
    return sum(signed_exposure(inv, p) for inv in pop.investors)


def mean_belief(pop):
    """Capital-weighted average belief, in [0, 1]."""
    total = pop.total_capital
    return sum(i.capital * i.belief for i in pop.investors) / total


def clearing_price(pop, tol=1e-9):
    """Solve for the price at which the market clears.

    Returns a :class:`ClearingResult` whose residual is the (tiny) leftover
    aggregate exposure.  A population with one shared interior belief
    clears trivially at that belief with zero volume.  Raises
    :class:`NoInteriorClearing` when exposure has the same sign across the
    whole interior bracket.
    """
    tol = check_positive(tol, "tol")
    beliefs = [i.belief for i in pop.investors]
    if min(beliefs) == max(beliefs):
        q = beliefs[0]
        if not 0.0 < q < 1.0:
            raise NoInteriorClearing(
                f"all beliefs are {q:g}; exposure is one-sided everywhere"
            )
        zeros = tuple(0.0 for _ in pop.investors)
        return ClearingResult(price=q, exposures=zeros, mean_belief=q,
                              gap=0.0, residual=0.0)

    lo, hi = _PRICE_LO, _PRICE_HI
    g_lo = aggregate_exposure(pop, lo)
    g_hi = aggregate_exposure(pop, hi)
    if g_lo == 0.0:
        price = lo
    elif g_hi == 0.0:
        price = hi
    elif g_lo < 0.0 or g_hi > 0.0:
        # exposure is non-increasing, so same-signed ends mean no root
        raise NoInteriorClearing(
            f"aggregate exposure does not change sign on ({lo:g}, {hi:g}): "
            f"{g_lo:.6g} at the lower end, {g_hi:.6g} at the upper end"
        )
    else:
        price = 0.5 * (lo + hi)
        for _ in range(_MAX_BISECT):
            price = 0.5 * (lo + hi)
            g = aggregate_exposure(pop, price)
            if g == 0.0 or price in (lo, hi):
                break
            if g > 0.0:
                lo = price
            else:
                hi = price
            if hi - lo <= _WIDTH_TOL and abs(g) <= tol:
                break

    exposures = tuple(signed_exposure(inv, price) for inv in pop.investors)
    residual = math.fsum(exposures)
    if abs(residual) > tol:
        raise ValueError(
            f"bisection stalled: residual {residual:.3g} exceeds tolerance "
            f"{tol:.3g} at price {price:.12g}"
        )
    mb = mean_belief(pop)
    return ClearingResult(price=price, exposures=exposures, mean_belief=mb,
                          gap=mb - price, residual=residual)


def confident_no_capital(q, p):
    """Capital the q-believer needs to clear against one dollar held by a
    bettor certain the event will not happen: ``(1-p)/(q-p)``, q > p."""
    q = check_probability(q, "q")
    p = check_probability(p, "p", open_interval=True)
    if q - p < 1e-12:
        raise ValueError(f"q must exceed p (pole at q = p): q={q}, p={p}")
    return (1.0 - p) / (q - p)


def mean_belief_confident_no(q, p):
    """Mean belief of the two-investor market {(confident_no_capital, q),
    (1 dollar, belief 0)}: ``(1-p) q / (q - 2p + 1)``.

    Over q in (p, 1] its value runs between p and 1/2, so it sits in
    [0, 1/2] for p < 1/2 and in [1/2, 1] for p > 1/2.
    """
    confident_no_capital(q, p)  # domain checks
    return (1.0 - p) * q / (q - 2.0 * p + 1.0)


def confident_yes_capital(q, p):
    """Capital the q-believer needs to clear against one dollar held by a
    bettor certain the event will happen: ``(1-p)/(p-q)``, q < p."""
    q = check_probability(q, "q")
    p = check_probability(p, "p", open_interval=True)
    if p - q < 1e-12:
        raise ValueError(f"q must be below p (pole at q = p): q={q}, p={p}")
    return (1.0 - p) / (p - q)


def mean_belief_confident_yes(q, p):
    """Mean belief of {(confident_yes_capital, q), (1 dollar, belief 1)}.

    Collapses algebraically to the price itself: the market's mean belief
    equals p for every admissible (q, p).
    """
    confident_yes_capital(q, p)  # domain checks
    return p
