"""Domain types, validation and annuity factors shared by every scheme."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "ProfileError",
    "GroupProfile",
    "AnnuityBasis",
    "FundState",
    "annuity_factor_two_period",
    "perpetuity_factor",
    "validate_profile",
]


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class ProfileError(DomainError):
    """A group profile violates one or more of its invariants.

    ``fields`` lists the offending field names, one entry per violation.
    """

    def __init__(self, fields: list[str], messages: list[str]):
        self.fields = fields
        self.messages = messages
        super().__init__("; ".join(messages))


@dataclass(frozen=True)
class GroupProfile:
    """Wealth-mortality description of a homogeneous subgroup.

    Attributes:
        size: number of members at time 0.
        survival_prob: probability that a member survives to time 1.
        initial_wealth: contribution of each member at time 0.
    """

    size: int
    survival_prob: float
    initial_wealth: float

    @property
    def death_prob(self) -> float:
        return 1.0 - self.survival_prob


@dataclass(frozen=True)
class AnnuityBasis:
    factor_t0: float
    factor_t1: float


@dataclass(frozen=True)
class FundState:
    """Per-member wealth and alive flags at one instant.

    A dead member's ``wealth`` entry holds the amount paid to their estate,
    so the total over all entries is conserved by every redistribution.
    """

    wealth: tuple[float, ...]
    alive: tuple[bool, ...]
    time: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "wealth", tuple(float(w) for w in self.wealth))
        object.__setattr__(self, "alive", tuple(bool(a) for a in self.alive))
        if len(self.wealth) != len(self.alive):
            raise DomainError("wealth and alive must have equal length")
        if any(w < 0 or not math.isfinite(w) for w in self.wealth):
            raise DomainError("wealth entries must be finite and nonnegative")
        if self.time < 0:
            raise DomainError("time must be nonnegative")

    @classmethod
    def homogeneous(cls, members: int, wealth: float = 1.0, time: float = 0.0) -> "FundState":
        return cls((wealth,) * members, (True,) * members, time)

    @property
    def n_alive(self) -> int:
        return sum(self.alive)

    @property
    def total_wealth(self) -> float:
        return math.fsum(self.wealth)

    def survivor_wealth(self) -> list[float]:
        return [w for w, a in zip(self.wealth, self.alive) if a]

    def estate_payments(self) -> list[float]:
        return [w for w, a in zip(self.wealth, self.alive) if not a]


def _check_probability(p: float, name: str = "survival_prob") -> None:
    if not (0.0 < p < 1.0):
        raise DomainError(f"{name} must lie in the open interval (0, 1), got {p!r}")


def annuity_factor_two_period(p: float) -> AnnuityBasis:
    """Annuity-due factors at times 0 and 1 for the two-period model.

    Death is certain by time 2 and the interest rate is zero, so the time 0
    factor is ``1 + p`` and the time 1 factor is exactly one.

    >>> annuity_factor_two_period(0.9)
    AnnuityBasis(factor_t0=1.9, factor_t1=1.0)
    """
    _check_probability(p)
    return AnnuityBasis(1.0 + p, 1.0)


def perpetuity_factor(r: float) -> float:
    """Present value of 1 per annum paid in advance forever, ``(1 + r) / r``."""
    if not r > 0:
        raise DomainError(f"interest rate must be strictly positive, got {r!r}")
    return (1.0 + r) / r


def validate_profile(g: GroupProfile) -> GroupProfile:
    """Return ``g`` unchanged, or raise :class:`ProfileError` naming each bad field."""
    bad: list[str] = []
    msgs: list[str] = []
    if isinstance(g.size, bool) or not isinstance(g.size, int) or g.size < 1:
        bad.append("size")
        msgs.append(f"size must be a positive integer, got {g.size!r}")
    if not (0.0 < g.survival_prob < 1.0):
        bad.append("survival_prob")
        msgs.append(f"survival_prob must lie in (0, 1), got {g.survival_prob!r}")
    if not (g.initial_wealth > 0 and math.isfinite(g.initial_wealth)):
        bad.append("initial_wealth")
        msgs.append(f"initial_wealth must be finite and > 0, got {g.initial_wealth!r}")
    if bad:
        raise ProfileError(bad, msgs)
    return g
