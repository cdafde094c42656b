"""Two-period heterogeneous group self-annuitization.

Each group ``i`` consumes ``F0 / (1 + p)`` at time 0. At time 1 every
survivor's payment is scaled by the common mortality experience adjustment
(MEA) and exhausts the notional fund, since nobody lives past time 2.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .model import DomainError, GroupProfile, annuity_factor_two_period, validate_profile

__all__ = [
    "HeterogeneousFund",
    "MortalityOutcome",
    "ConsumptionReport",
    "initial_consumption",
    "post_consumption_wealth",
    "mea",
    "time1_consumption",
    "estate_rule",
    "settle",
]


@dataclass(frozen=True)
class HeterogeneousFund:
    groups: tuple[GroupProfile, ...]

    def __post_init__(self):
        groups = tuple(self.groups)
        if not groups:
            raise DomainError("a fund needs at least one group")
        for g in groups:
            validate_profile(g)
        object.__setattr__(self, "groups", groups)

    @classmethod
    def two_group(cls, la: int, pa: float, fa: float, lb: int, pb: float, fb: float) -> "HeterogeneousFund":
        return cls((GroupProfile(la, pa, fa), GroupProfile(lb, pb, fb)))

    def __len__(self) -> int:
        return len(self.groups)

    @property
    def total_lives(self) -> int:
        return sum(g.size for g in self.groups)

    def all_dead_probability(self) -> float:
        prob = 1.0
        for g in self.groups:
            prob *= g.death_prob**g.size
        return prob


@dataclass(frozen=True)
class MortalityOutcome:
    deaths: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "deaths", tuple(int(d) for d in self.deaths))

    def check(self, fund: HeterogeneousFund) -> None:
        if len(self.deaths) != len(fund.groups):
            raise DomainError(f"expected {len(fund.groups)} death counts, got {len(self.deaths)}")
        for i, (d, g) in enumerate(zip(self.deaths, fund.groups)):
            if not 0 <= d <= g.size:
                raise DomainError(f"deaths[{i}]={d} outside [0, {g.size}]")

    def is_all_dead(self, fund: HeterogeneousFund) -> bool:
        return all(d == g.size for d, g in zip(self.deaths, fund.groups))


@dataclass(frozen=True)
class ConsumptionReport:
    """Per-group payments for one realised outcome.

    ``c1`` is zero for a group with no survivors and ``estate`` is nonzero only
    on the all-dead outcome, where ``mea`` is ``None``.
    """

    c0: tuple[float, ...]
    c1: tuple[float, ...]
    estate: tuple[float, ...]
    mea: float | None


def initial_consumption(g: GroupProfile) -> float:
    validate_profile(g)
    return g.initial_wealth / annuity_factor_two_period(g.survival_prob).factor_t0


def post_consumption_wealth(g: GroupProfile) -> float:
    """Notional fund per member just after the time 0 payment, ``F0 p / (1 + p)``."""
    validate_profile(g)
    p = g.survival_prob
    return g.initial_wealth * p / (1.0 + p)


def mea(fund: HeterogeneousFund, outcome: MortalityOutcome) -> float:
    """Mortality experience adjustment: remaining fund over the expected-basis survivor fund.

    Equals one when every group's deaths match ``L (1 - p)`` exactly.
    """
    outcome.check(fund)
    if outcome.is_all_dead(fund):
        raise DomainError("MEA is undefined when every member dies; use estate_rule")
    num = 0.0
    den = 0.0
    for g, d in zip(fund.groups, outcome.deaths):
        w = post_consumption_wealth(g)
        num += w * g.size
        den += w * (g.size - d) / g.survival_prob
    return num / den


def time1_consumption(fund: HeterogeneousFund, outcome: MortalityOutcome, i: int) -> float:
    """Payment at time 1 to each survivor of group ``i``, ``MEA * c0``."""
    outcome.check(fund)
    if outcome.deaths[i] >= fund.groups[i].size:
        raise DomainError(f"group {i} has no survivors at time 1")
    return mea(fund, outcome) * initial_consumption(fund.groups[i])


def estate_rule(fund: HeterogeneousFund, outcome: MortalityOutcome | None = None) -> tuple[float, ...]:
    """Estate payment per member of each group when nobody survives to time 1.

    Each estate receives the member's own post-consumption notional fund; no
    mortality risk is shared. Passing any outcome other than all-dead raises.
    """
    if outcome is not None:
        outcome.check(fund)
        if not outcome.is_all_dead(fund):
            raise DomainError("estate_rule applies only to the all-dead outcome")
    return tuple(post_consumption_wealth(g) for g in fund.groups)


def settle(fund: HeterogeneousFund, deaths: Sequence[int] | MortalityOutcome) -> ConsumptionReport:
    """Full per-group payments for one realised outcome."""
    outcome = deaths if isinstance(deaths, MortalityOutcome) else MortalityOutcome(tuple(deaths))
    outcome.check(fund)
    c0 = tuple(initial_consumption(g) for g in fund.groups)
    if outcome.is_all_dead(fund):
        return ConsumptionReport(c0, (0.0,) * len(c0), estate_rule(fund, outcome), None)
    factor = mea(fund, outcome)
    c1 = tuple(
        factor * c if d < g.size else 0.0
        for c, d, g in zip(c0, outcome.deaths, fund.groups)
    )
    return ConsumptionReport(c0, c1, (0.0,) * len(c0), factor)
