"""One-period fund dynamics for homogeneous PAF, GSA and AOF memberships.

Every member starts with one unit of wealth and consumes ``consumption_t0``
of it at time 0; investment returns are zero except in
:func:`immortal_gsa_consumption`.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .model import DomainError, FundState, annuity_factor_two_period, perpetuity_factor

__all__ = [
    "HomogeneousScenario",
    "paf_survivor_value",
    "gsa_homog_survivor_value",
    "gsa_paf_equivalence_check",
    "aof_redistribute_on_death",
    "aof_redistribute_deaths",
    "aof_survivor_value",
    "aof_gsa_gap",
    "immortal_gsa_consumption",
]

REL_TOL = 1e-12


@dataclass(frozen=True)
class HomogeneousScenario:
    members: int
    deaths: int
    consumption_t0: float = 0.0

    def __post_init__(self):
        if self.members < 1:
            raise DomainError(f"members must be >= 1, got {self.members}")
        if not 0 <= self.deaths <= self.members:
            raise DomainError(f"deaths must lie in [0, {self.members}], got {self.deaths}")
        if not 0.0 <= self.consumption_t0 < 1.0:
            raise DomainError(f"consumption_t0 must lie in [0, 1), got {self.consumption_t0}")

    @property
    def survivors(self) -> int:
        return self.members - self.deaths


def _require_survivor(s: HomogeneousScenario) -> None:
    # The all-dead event is valued by the estate rule, not here.
    if s.deaths >= s.members:
        raise DomainError("no survivor to value: every member died (see estate_rule)")


def paf_survivor_value(s: HomogeneousScenario) -> float:
    """Time 1 wealth of each PAF survivor, ``(1 + N/(L-N)) (1 - c0)``."""
    _require_survivor(s)
    return (1.0 + s.deaths / s.survivors) * (1.0 - s.consumption_t0)


def gsa_homog_survivor_value(s: HomogeneousScenario) -> float:
    """Notional GSA fund per survivor: the whole remaining fund split over survivors."""
    _require_survivor(s)
    return s.members * (1.0 - s.consumption_t0) / s.survivors


def gsa_paf_equivalence_check(L: int, p: float) -> bool:
    """True iff PAF and GSA survivor values coincide for every death count.

    Both schemes consume ``1 / (1 + p)`` at time 0.
    """
    if L < 2:
        raise DomainError(f"L must be >= 2, got {L}")
    c0 = 1.0 / annuity_factor_two_period(p).factor_t0
    n = np.arange(L, dtype=float)
    paf = (1.0 + n / (L - n)) * (1.0 - c0)
    gsa = L * (1.0 - c0) / (L - n)
    return bool(np.all(np.abs(paf - gsa) <= REL_TOL * np.abs(gsa)))


def aof_redistribute_on_death(state: FundState, deceased_index: int) -> FundState:
    """Share a death among everyone alive just before it, the deceased included.

    The deceased's wealth ``W`` is cut into ``M`` equal shares, ``M`` being the
    number alive immediately before the death. Each of the ``M - 1`` survivors
    gains ``W / M`` and the remaining share is paid to the estate, which is
    recorded in the deceased's ``wealth`` slot.
    """
    if not 0 <= deceased_index < len(state.alive):
        raise DomainError(f"no member with index {deceased_index}")
    if not state.alive[deceased_index]:
        raise DomainError(f"member {deceased_index} is already dead")
    alive_w = state.survivor_wealth()
    if max(alive_w) - min(alive_w) > REL_TOL * max(alive_w):
        raise DomainError("equal-share redistribution requires equal wealth among the living")

    m = len(alive_w)
    share = state.wealth[deceased_index] / m
    wealth = list(state.wealth)
    alive = list(state.alive)
    for i, a in enumerate(alive):
        if a and i != deceased_index:
            wealth[i] += share
    wealth[deceased_index] = share
    alive[deceased_index] = False
    return FundState(tuple(wealth), tuple(alive), state.time)


def aof_redistribute_deaths(state: FundState, order: Sequence[int]) -> FundState:
    """Apply :func:`aof_redistribute_on_death` for each index in ``order``."""
    for idx in order:
        state = aof_redistribute_on_death(state, idx)
    return state


def aof_survivor_value(s: HomogeneousScenario) -> float:
    """AOF survivor wealth after ``N`` deaths, ``(1 + N/(L+1-N)) (1 - c0)``."""
    _require_survivor(s)
    return (1.0 + s.deaths / (s.members + 1 - s.deaths)) * (1.0 - s.consumption_t0)


def aof_gsa_gap(s: HomogeneousScenario) -> float:
    """``F1_AOF - F1_GSA``; never positive, zero only without deaths."""
    _require_survivor(s)
    L, N = s.members, s.deaths
    return -N * (1.0 - s.consumption_t0) / ((L - N) * (L + 1 - N))


def immortal_gsa_consumption(r: float, returns: Sequence[float]) -> list[float]:
    """Consumption path ``c_0 .. c_T`` of a GSA whose members never die.

    The annuity is priced at the constant rate ``r`` while the fund earns the
    realised returns ``R_1 .. R_T``, so payment ``n`` is
    ``r / (1+r)**(n+1) * prod(1 + R_k, k <= n)``.
    """
    factor = perpetuity_factor(r)
    for k, R in enumerate(returns, start=1):
        if not R > -1.0:
            raise DomainError(f"return R_{k} must exceed -1, got {R!r}")
    out = [1.0 / factor]
    growth = 1.0
    for n, R in enumerate(returns, start=1):
        growth *= 1.0 + R
        out.append(r / (1.0 + r) ** (n + 1) * growth)
    return out

