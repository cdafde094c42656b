"""Pooled annuity fund mortality risk-sharing: PAF, GSA and AOF dynamics,
exact expected benefits, and actuarial fairness checks."""

from .fairness import (
    GainReport,
    closed_sum_report,
    expected_consumption_same_size,
    expected_consumption_solo_bob,
    expected_gain_per_unit,
    paf_expected_survivor_value,
    proposition_sign_check,
)
from .hetero import ConsumptionReport, HeterogeneousFund, MortalityOutcome, mea, settle
from .model import DomainError, FundState, GroupProfile, ProfileError
from .oracle import (
    EnumerationTooLarge,
    SimConfig,
    enumerate_expected_consumption,
    gain_report,
    monte_carlo_expected_consumption,
)

__version__ = "0.1.0"

__all__ = [
    "ConsumptionReport",
    "DomainError",
    "EnumerationTooLarge",
    "FundState",
    "GainReport",
    "GroupProfile",
    "HeterogeneousFund",
    "MortalityOutcome",
    "ProfileError",
    "SimConfig",
    "closed_sum_report",
    "enumerate_expected_consumption",
    "expected_consumption_same_size",
    "expected_consumption_solo_bob",
    "expected_gain_per_unit",
    "gain_report",
    "mea",
    "monte_carlo_expected_consumption",
    "paf_expected_survivor_value",
    "proposition_sign_check",
    "settle",
]
