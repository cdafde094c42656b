"""Exact expected benefits and fairness verdicts from closed binomial sums.

Notation follows the two-group setup: group A members contribute 1 and Bob,
the member of group B being valued, contributes ``beta``. ``f`` is Bob's
expected total consumption given he survives to time 1 and ``g`` is his
unconditional expected total consumption. Funds with a group A contribution
other than 1 are handled by scaling, since every payoff is homogeneous of
degree one in wealth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import gammaln

from .hetero import HeterogeneousFund
from .model import DomainError

__all__ = [
    "GainReport",
    "SignVerdict",
    "MeaBoundVerdict",
    "binomial_weights",
    "paf_expected_survivor_value",
    "homogeneous_conditional_consumption",
    "same_size_f",
    "same_size_g",
    "same_size_difference",
    "solo_bob_f",
    "solo_bob_g",
    "solo_bob_difference",
    "expected_consumption_same_size",
    "expected_consumption_solo_bob",
    "expected_gain_per_unit",
    "conditional_relative_gain_per_unit",
    "proposition_sign_check",
    "mea_no_death_bound_check",
    "closed_sum_config",
    "closed_sum_report",
]

Method = Literal["closed_sum", "enumeration", "monte_carlo"]
Config = Literal["same_size", "solo_bob"]

# closed-form differences vs direct sums, absolute
AGREEMENT_TOL = 1e-10
ZERO_TOL = 1e-10


@dataclass(frozen=True)
class GainReport:
    expected_consumption: float
    conditional_consumption: float
    gain_per_unit: float
    conditional_relative_gain_per_unit: float
    method: Method
    std_error: float = 0.0

    def __post_init__(self):
        if self.std_error < 0:
            raise DomainError("std_error must be nonnegative")
        if (self.method == "monte_carlo") != (self.std_error > 0):
            raise DomainError("std_error must be positive exactly for monte_carlo reports")


def binomial_weights(n: int, q: float) -> np.ndarray:
    """``P(X = k)`` for ``X ~ BIN(n, q)``, ``k = 0..n``, via log-gamma.

    Stays finite for ``n`` in the tens of thousands where ``C(n, k)`` itself
    overflows a double. The log terms reach ~1e5 there, so exponentiating
    leaves a near-common relative error of a few 1e-12; dividing by the
    exact sum removes it.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    k = np.arange(n + 1, dtype=float)
    log_c = gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_w = log_c + k * math.log(q) + (n - k) * math.log1p(-q)
    w = np.exp(log_w)
    return w / _fsum(w)


def _check_p(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise DomainError(f"survival probability must lie in (0, 1), got {p!r}")
    return 1.0 - p


def _check_beta(beta: float) -> None:
    if not (beta > 0 and math.isfinite(beta)):
        raise DomainError(f"beta must be finite and > 0, got {beta!r}")


def _fsum(a: np.ndarray) -> float:
    # exactly rounded, hence independent of evaluation order
    return math.fsum(np.ravel(a).tolist())


def paf_expected_survivor_value(L: int, p: float) -> float:
    """Expected time 1 PAF fund value of one member, zero consumption.

    All-dead estates keep their own unit, probability ``q**L``; otherwise a
    survivor holds ``L / (L - n)`` with ``n ~ BIN(L-1, q)`` other deaths.
    """
    if L < 1:
        raise DomainError(f"L must be >= 1, got {L}")
    q = _check_p(p)
    n = np.arange(L, dtype=float)
    terms = L / (L - n) * binomial_weights(L - 1, q)
    return q**L + p * _fsum(terms)


def homogeneous_conditional_consumption(M: int, p: float, wealth: float = 1.0) -> float:
    """Expected total consumption of a survivor in a homogeneous GSA of ``M`` members.

    This is the benchmark a member is compared with when everyone in the
    fund looks exactly like them.
    """
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")
    q = _check_p(p)
    c0 = wealth / (1.0 + p)
    n = np.arange(M, dtype=float)
    mea_given = p * M / (M - n)
    return c0 + c0 * _fsum(mea_given * binomial_weights(M - 1, q))


# Same-size fund: L members with wealth 1 and L with wealth beta.

def _same_size_h(L: int, p: float, beta: float) -> np.ndarray:
    q = 1.0 - p
    n = np.arange(L + 1, dtype=float)[:, None]
    m = np.arange(L, dtype=float)[None, :]
    w = binomial_weights(L, q)[:, None] * binomial_weights(L - 1, q)[None, :]
    # c1 given Bob alive is c0 * p (beta+1) L / (L - nA + beta (L - nB))
    return L * beta * (beta + 1.0) / (L - n + beta * (L - m)) * w


def same_size_f(L: int, p: float, beta: float) -> float:
    _check_p(p)
    _check_beta(beta)
    if L < 2:
        raise DomainError(f"same-size configuration needs L >= 2, got {L}")
    return beta / (1.0 + p) + p / (1.0 + p) * _fsum(_same_size_h(L, p, beta))


def same_size_g(L: int, p: float, beta: float, f: float | None = None) -> float:
    q = 1.0 - p
    if f is None:
        f = same_size_f(L, p, beta)
    return p * f + q * (beta / (1.0 + p) + beta * p / (1.0 + p) * q ** (2 * L - 1))


def same_size_difference(L: int, p: float, beta: float) -> float:
    """Closed form of ``beta * f(1) - f(beta)`` with the ``(n - m)**2`` kernel.

    Pairing the ``(n, m)`` and ``(m, n)`` summands leaves
    ``beta (beta-1) (n-m)**2 / D`` times the binomial weights, with no
    ``1/L`` prefactor; the all-A-dead row contributes ``q**L (1 - q**L)``.
    """
    q = _check_p(p)
    _check_beta(beta)
    if L < 2:
        raise DomainError(f"same-size configuration needs L >= 2, got {L}")
    w = binomial_weights(L, q)[:L]
    n = np.arange(L, dtype=float)[:, None]
    m = np.arange(L, dtype=float)[None, :]
    kernel = (n - m) ** 2 / ((L - n + beta * (L - m)) * (L - m + beta * (L - n)))
    # symmetric in (n, m) with zero diagonal: half the full sum is the n < m sum
    upper = 0.5 * _fsum(kernel * (w[:, None] * w[None, :])) / p
    bracket = beta * p * upper + q**L * (1.0 - q**L)
    return (beta - 1.0) / (1.0 + p) * bracket


# Solo-Bob fund: LA members with wealth 1 and Bob alone with beta.

def solo_bob_f(LA: int, p: float, beta: float) -> float:
    q = _check_p(p)
    _check_beta(beta)
    if LA < 1:
        raise DomainError(f"solo-Bob configuration needs LA >= 1, got {LA}")
    n = np.arange(LA + 1, dtype=float)
    terms = beta * (LA + beta) / (LA + beta - n) * binomial_weights(LA, q)
    return beta / (1.0 + p) + p / (1.0 + p) * _fsum(terms)


def solo_bob_g(LA: int, p: float, beta: float, f: float | None = None) -> float:
    q = 1.0 - p
    if f is None:
        f = solo_bob_f(LA, p, beta)
    return p * f + q * (beta / (1.0 + p) + beta * p / (1.0 + p) * q**LA)


def solo_bob_difference(LA: int, p: float, beta: float) -> float:
    """Closed form of ``beta * f(1) - f(beta)`` for the solo-Bob fund."""
    q = _check_p(p)
    _check_beta(beta)
    n = np.arange(LA + 1, dtype=float)
    terms = binomial_weights(LA, q) * n / ((LA + 1 - n) * (LA + beta - n))
    return beta * (beta - 1.0) * p / (1.0 + p) * _fsum(terms)


def _report(f: float, g: float, f1: float, beta: float) -> GainReport:
    return GainReport(
        expected_consumption=g,
        conditional_consumption=f,
        gain_per_unit=(g - beta) / beta,
        conditional_relative_gain_per_unit=(f - beta * f1) / beta,
        method="closed_sum",
    )


def _agree(direct: float, closed: float, what: str) -> None:
    if abs(direct - closed) > AGREEMENT_TOL:
        raise ArithmeticError(f"{what}: direct sum {direct!r} and closed form {closed!r} disagree")


def expected_consumption_same_size(L: int, p: float, beta: float) -> GainReport:
    """Bob's expected consumption when both groups have ``L`` members."""
    f = same_size_f(L, p, beta)
    f1 = same_size_f(L, p, 1.0)
    _agree(beta * f1 - f, same_size_difference(L, p, beta), "same-size beta*f(1) - f(beta)")
    return _report(f, same_size_g(L, p, beta, f), f1, beta)


def expected_consumption_solo_bob(LA: int, p: float, beta: float) -> GainReport:
    """Bob's expected consumption as the only member of group B."""
    f = solo_bob_f(LA, p, beta)
    f1 = solo_bob_f(LA, p, 1.0)
    _agree(beta * f1 - f, solo_bob_difference(LA, p, beta), "solo-Bob beta*f(1) - f(beta)")
    return _report(f, solo_bob_g(LA, p, beta, f), f1, beta)


def expected_gain_per_unit(report: GainReport | float, F0B: float) -> float:
    """``(E[c0 + c1] - F0B) / F0B``; zero in an actuarially fair fund."""
    if not F0B > 0:
        raise DomainError(f"contribution must be > 0, got {F0B!r}")
    g = report.expected_consumption if isinstance(report, GainReport) else float(report)
    return (g - F0B) / F0B


def conditional_relative_gain_per_unit(config: Config, L: int, p: float, beta: float) -> float:
    if config == "same_size":
        return expected_consumption_same_size(L, p, beta).conditional_relative_gain_per_unit
    if config == "solo_bob":
        return expected_consumption_solo_bob(L, p, beta).conditional_relative_gain_per_unit
    raise DomainError(f"unknown configuration {config!r}")


@dataclass(frozen=True)
class SignVerdict:
    config: Config
    L: int
    p: float
    beta: float
    unconditional_diff: float  # F0B - g(beta)
    conditional_diff: float  # beta f(1) - f(beta)
    passed: bool

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.config} L={self.L} p={self.p:g} beta={self.beta:g} "
            f"F0B-g={self.unconditional_diff:.3e} beta*f(1)-f={self.conditional_diff:.3e}"
        )


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def proposition_sign_check(config: Config, L: int, p: float, beta: float) -> SignVerdict:
    """Check ``sign(beta - 1) == sign(F0B - g) == sign(beta f(1) - f)``.

    At ``beta == 1`` both differences must vanish to within ``1e-10``.
    """
    if L < 2:
        raise DomainError(f"both propositions need more than one group A member, got {L}")
    if config == "same_size":
        f, f1 = same_size_f(L, p, beta), same_size_f(L, p, 1.0)
        g = same_size_g(L, p, beta, f)
    elif config == "solo_bob":
        f, f1 = solo_bob_f(L, p, beta), solo_bob_f(L, p, 1.0)
        g = solo_bob_g(L, p, beta, f)
    else:
        raise DomainError(f"unknown configuration {config!r}")
    d_unc = beta - g
    d_cond = beta * f1 - f
    if beta == 1.0:
        ok = abs(d_unc) < ZERO_TOL and abs(d_cond) < ZERO_TOL
    else:
        s = _sign(beta - 1.0)
        ok = _sign(d_unc) == s and _sign(d_cond) == s
    return SignVerdict(config, L, p, beta, d_unc, d_cond, ok)


@dataclass(frozen=True)
class MeaBoundVerdict:
    pA: float
    pB: float
    mea: float
    passed: bool


def mea_no_death_bound_check(pA: float, pB: float) -> MeaBoundVerdict:
    """On the no-death event of two equal groups, MEA is the harmonic mean of pA and pB."""
    _check_p(pA)
    _check_p(pB)
    if not pA < pB:
        raise DomainError(f"need pA < pB, got pA={pA!r}, pB={pB!r}")
    value = 2.0 * pA * pB / (pA + pB)
    return MeaBoundVerdict(pA, pB, value, pA < value < pB)


def closed_sum_config(fund: HeterogeneousFund, target: int = 1) -> Config | None:
    """Which closed-sum configuration ``fund`` matches with Bob in group ``target``."""
    if len(fund.groups) != 2 or target not in (0, 1):
        return None
    bob, other = fund.groups[target], fund.groups[1 - target]
    if bob.survival_prob != other.survival_prob:
        return None
    if bob.size == other.size and bob.size >= 2:
        return "same_size"
    if bob.size == 1 and other.size >= 1:
        return "solo_bob"
    return None


def closed_sum_report(fund: HeterogeneousFund, target: int = 1) -> GainReport:
    """Gain report for a fund matching one of the closed-sum configurations."""
    config = closed_sum_config(fund, target)
    if config is None:
        raise DomainError("fund does not match a closed-sum configuration")
    bob, other = fund.groups[target], fund.groups[1 - target]
    scale = other.initial_wealth
    beta = bob.initial_wealth / scale
    if config == "same_size":
        r = expected_consumption_same_size(other.size, bob.survival_prob, beta)
    else:
        r = expected_consumption_solo_bob(other.size, bob.survival_prob, beta)
    return GainReport(
        expected_consumption=scale * r.expected_consumption,
        conditional_consumption=scale * r.conditional_consumption,
        gain_per_unit=r.gain_per_unit,
        conditional_relative_gain_per_unit=r.conditional_relative_gain_per_unit,
        method="closed_sum",
    )
