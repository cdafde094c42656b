"""Independent verification engines for heterogeneous GSA expectations.

Three routes compute a target member's expected total consumption:

* :func:`enumerate_expected_consumption` with ``mode="counts"`` sums over the
  joint death counts, weighted by binomial probabilities;
* the same function with ``mode="lives"`` walks every one of the ``2**n``
  alive/dead patterns and settles each through :func:`poolfair.hetero.settle`;
* :func:`monte_carlo_expected_consumption` samples death counts from a
  seeded, block-partitioned generator.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.stats import binom

from .fairness import GainReport, closed_sum_config, closed_sum_report, homogeneous_conditional_consumption
from .hetero import HeterogeneousFund, initial_consumption, post_consumption_wealth, settle
from .model import DomainError

__all__ = [
    "EnumerationTooLarge",
    "EnumerationResult",
    "SimConfig",
    "MonteCarloRun",
    "MAX_COUNT_STATES",
    "MAX_LIVES",
    "count_state_space",
    "enumerate_expected_consumption",
    "monte_carlo_run",
    "monte_carlo_expected_consumption",
    "benchmark_conditional_consumption",
    "gain_report",
]

MAX_COUNT_STATES = 10**7
MAX_LIVES = 20
BLOCK_SIZE = 8192


class EnumerationTooLarge(DomainError):
    """The requested enumeration exceeds its state-space budget."""

    def __init__(self, size: int, limit: int, what: str):
        self.size = size
        self.limit = limit
        super().__init__(f"{what} has {size} states, above the limit of {limit}")


@dataclass(frozen=True)
class EnumerationResult:
    expectation: float
    conditional_expectation: float
    outcome_count: int
    total_probability: float


@dataclass(frozen=True)
class SimConfig:
    fund: HeterogeneousFund
    replications: int
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.replications, bool) or int(self.replications) < 1:
            raise DomainError(f"replications must be >= 1, got {self.replications!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


def count_state_space(fund: HeterogeneousFund) -> int:
    return math.prod(g.size + 1 for g in fund.groups)


def _check_target(fund: HeterogeneousFund, target: int) -> None:
    if not 0 <= target < len(fund.groups):
        raise DomainError(f"target group {target} out of range for {len(fund.groups)} groups")


def _enumerate_counts(fund: HeterogeneousFund, target: int) -> EnumerationResult:
    size = count_state_space(fund)
    if size > MAX_COUNT_STATES:
        raise EnumerationTooLarge(size, MAX_COUNT_STATES, "count-space enumeration")
    k = len(fund.groups)
    prob = np.ones(())
    remaining = np.zeros(())  # expected-basis survivor fund, the MEA denominator
    budget = 0.0
    for i, g in enumerate(fund.groups):
        d = np.arange(g.size + 1)
        shape = [1] * k
        shape[i] = g.size + 1
        w = post_consumption_wealth(g)
        prob = prob * binom.pmf(d, g.size, g.death_prob).reshape(shape)
        remaining = remaining + (w * (g.size - d) / g.survival_prob).reshape(shape)
        budget += w * g.size

    tg = fund.groups[target]
    shape = [1] * k
    shape[target] = tg.size + 1
    alive_frac = ((tg.size - np.arange(tg.size + 1)) / tg.size).reshape(shape)
    alive_frac = np.broadcast_to(alive_frac, prob.shape)
    remaining = np.broadcast_to(remaining, prob.shape)

    c0 = initial_consumption(tg)
    all_dead = (slice(-1, None),) * k
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(remaining > 0, budget / remaining, 0.0)
    survive_part = prob * alive_frac * (c0 + factor * c0)
    dead_part = prob * (1.0 - alive_frac) * c0
    estate = float(prob[all_dead].sum()) * post_consumption_wealth(tg)

    survive = float(np.sum(survive_part))
    return EnumerationResult(
        expectation=survive + float(np.sum(dead_part)) + estate,
        conditional_expectation=survive / tg.survival_prob,
        outcome_count=size,
        total_probability=float(np.sum(prob)),
    )


def _enumerate_lives(fund: HeterogeneousFund, target: int) -> EnumerationResult:
    n = fund.total_lives
    if n > MAX_LIVES:
        raise EnumerationTooLarge(2**n, 2**MAX_LIVES, "life-space enumeration")
    idx = np.arange(2**n, dtype=np.int64)
    prob = np.ones(2**n)
    code = np.zeros(2**n, dtype=np.int64)  # mixed-radix encoding of the death counts
    strides = []
    target_alive = None
    life = 0
    stride = 1
    for i, g in enumerate(fund.groups):
        strides.append(stride)
        for j in range(g.size):
            alive = ((idx >> life) & 1).astype(bool)
            prob *= np.where(alive, g.survival_prob, g.death_prob)
            code += np.where(alive, 0, stride)
            if i == target and j == 0:
                target_alive = alive
            life += 1
        stride *= g.size + 1

    # settle each count vector once through the reference model
    alive_pay = np.zeros(stride)
    dead_pay = np.zeros(stride)
    for key in np.unique(code).tolist():
        deaths = tuple((key // st) % (g.size + 1) for st, g in zip(strides, fund.groups))
        rep = settle(fund, deaths)
        alive_pay[key] = rep.c0[target] + rep.c1[target]
        dead_pay[key] = rep.c0[target] + rep.estate[target]
    payoff = np.where(target_alive, alive_pay[code], dead_pay[code])

    total = math.fsum(prob.tolist())
    survive = math.fsum((prob * payoff)[target_alive].tolist())
    return EnumerationResult(
        expectation=math.fsum((prob * payoff).tolist()),
        conditional_expectation=survive / fund.groups[target].survival_prob,
        outcome_count=2**n,
        total_probability=total,
    )


def enumerate_expected_consumption(
    fund: HeterogeneousFund,
    target: int = 1,
    mode: Literal["counts", "lives"] = "counts",
) -> EnumerationResult:
    """Exact expected consumption of one member of group ``target``.

    The conditional expectation restricts to outcomes where that member
    survives and renormalises by their survival probability.
    """
    _check_target(fund, target)
    if mode == "counts":
        return _enumerate_counts(fund, target)
    if mode == "lives":
        return _enumerate_lives(fund, target)
    raise DomainError(f"unknown enumeration mode {mode!r}")


@dataclass(frozen=True)
class MonteCarloRun:
    mean: float
    std_error: float
    conditional_mean: float
    survivors: int
    replications: int
    batch_means: tuple[float, ...] = field(repr=False)


def _block_stream(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(block,))))


def _simulate_block(fund: HeterogeneousFund, target: int, seed: int, block: int, n: int):
    rng = _block_stream(seed, block)
    tg = fund.groups[target]
    target_alive = rng.random(n) < tg.survival_prob
    remaining = np.zeros(n)
    budget = 0.0
    everyone_dead = ~target_alive
    for i, g in enumerate(fund.groups):
        others = g.size - 1 if i == target else g.size
        d = rng.binomial(others, g.death_prob, size=n)
        survivors = others - d
        if i == target:
            survivors = survivors + target_alive
        w = post_consumption_wealth(g)
        remaining += w * survivors / g.survival_prob
        budget += w * g.size
        everyone_dead &= survivors == 0

    c0 = initial_consumption(tg)
    with np.errstate(divide="ignore", invalid="ignore"):
        c1 = np.where(target_alive, budget / remaining * c0, 0.0)
    estate = np.where(everyone_dead, post_consumption_wealth(tg), 0.0)
    pay = c0 + c1 + estate
    alive_pay = pay[target_alive]
    return float(pay.sum()), float((pay * pay).sum()), float(alive_pay.sum()), int(target_alive.sum())


def monte_carlo_run(cfg: SimConfig, target: int = 1, threads: int = 1) -> MonteCarloRun:
    """Sample the target's total consumption ``cfg.replications`` times.

    Replications are cut into fixed blocks of ``BLOCK_SIZE``; block ``b``
    draws from a stream keyed by ``(seed, b)`` and partial sums are combined
    in block order, so the result does not depend on ``threads``.
    """
    _check_target(cfg.fund, target)
    reps = int(cfg.replications)
    blocks = [(b, min(BLOCK_SIZE, reps - b * BLOCK_SIZE)) for b in range(-(-reps // BLOCK_SIZE))]

    def run(item):
        b, n = item
        return _simulate_block(cfg.fund, target, int(cfg.seed), b, n)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(item) for item in blocks]

    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    alive_total = math.fsum(p[2] for p in parts)
    survivors = sum(p[3] for p in parts)
    mean = total / reps
    var = (total_sq - reps * mean * mean) / (reps - 1) if reps > 1 else 0.0
    return MonteCarloRun(
        mean=mean,
        std_error=math.sqrt(max(var, 0.0) / reps),
        conditional_mean=alive_total / survivors if survivors else float("nan"),
        survivors=survivors,
        replications=reps,
        batch_means=tuple(p[0] / n for p, (_, n) in zip(parts, blocks)),
    )


def benchmark_conditional_consumption(fund: HeterogeneousFund, target: int = 1) -> float:
    """Conditional consumption in a homogeneous fund of the same size made of copies of the target."""
    tg = fund.groups[target]
    return homogeneous_conditional_consumption(fund.total_lives, tg.survival_prob, tg.initial_wealth)


def monte_carlo_expected_consumption(cfg: SimConfig, target: int = 1, threads: int = 1) -> GainReport:
    run = monte_carlo_run(cfg, target, threads)
    contribution = cfg.fund.groups[target].initial_wealth
    bench = benchmark_conditional_consumption(cfg.fund, target)
    return GainReport(
        expected_consumption=run.mean,
        conditional_consumption=run.conditional_mean,
        gain_per_unit=(run.mean - contribution) / contribution,
        conditional_relative_gain_per_unit=(run.conditional_mean - bench) / contribution,
        method="monte_carlo",
        std_error=run.std_error,
    )


def gain_report(
    fund: HeterogeneousFund,
    target: int = 1,
    method: Literal["exact", "enumerate"] = "exact",
) -> GainReport:
    """Exact gain report by the fastest valid route.

    ``exact`` uses the closed sums when the fund matches a proposition
    configuration and count enumeration otherwise; ``enumerate`` always
    enumerates.
    """
    _check_target(fund, target)
    if method == "exact" and closed_sum_config(fund, target) is not None:
        return closed_sum_report(fund, target)
    if method not in ("exact", "enumerate"):
        raise DomainError(f"unknown method {method!r}")
    res = enumerate_expected_consumption(fund, target, "counts")
    contribution = fund.groups[target].initial_wealth
    bench = benchmark_conditional_consumption(fund, target)
    return GainReport(
        expected_consumption=res.expectation,
        conditional_consumption=res.conditional_expectation,
        gain_per_unit=(res.expectation - contribution) / contribution,
        conditional_relative_gain_per_unit=(res.conditional_expectation - bench) / contribution,
        method="enumeration",
    )

