"""Invariant suites run by ``poolfair verify``.

Each suite returns a :class:`SuiteResult`; failures carry the parameters of
the offending case so a red run can be reproduced directly.
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from . import fairness, schemes
from .hetero import HeterogeneousFund, MortalityOutcome, mea, settle
from .model import FundState, GroupProfile
from .oracle import SimConfig, enumerate_expected_consumption, gain_report, monte_carlo_run
from .sweep import figure_points, sweep

__all__ = ["SuiteResult", "run_suites", "suite_names", "P_GRID"]

P_GRID = tuple(round(k / 100, 2) for k in range(1, 100))
SIGN_L = (2, 5, 10, 50, 100)
SIGN_P = (0.1, 0.3, 0.5, 0.7, 0.9)
SIGN_BETA = (0.1, 0.5, 1.0, 2.0, 10.0)
MAX_REPORTED = 5


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status} {self.name}: {self.checked} checks in {self.seconds:.2f}s"
        for msg in self.failures[:MAX_REPORTED]:
            out += f"\n    {msg}"
        if len(self.failures) > MAX_REPORTED:
            out += f"\n    ... {len(self.failures) - MAX_REPORTED} more"
        return out


def _rel_close(a: float, b: float, tol: float = 1e-12) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def paf_fairness(res: SuiteResult, max_l: int) -> None:
    for L in range(1, max_l + 1):
        for p in P_GRID:
            value = fairness.paf_expected_survivor_value(L, p)
            res.checked += 1
            if abs(value - 1.0) >= 1e-12:
                res.fail(f"L={L} p={p}: E[F1]={value!r}")


def gsa_paf_equivalence(res: SuiteResult, max_l: int) -> None:
    for L in range(2, max_l + 1):
        for p in P_GRID:
            res.checked += 1
            if not schemes.gsa_paf_equivalence_check(L, p):
                res.fail(f"L={L} p={p}")


def aof_ordering(res: SuiteResult, max_l: int) -> None:
    for c0 in (0.0, 1.0 / 1.9):
        for L in range(1, max_l + 1):
            paf_prod = 1.0
            aof_prod = 1.0
            for N in range(L):
                if N:
                    paf_prod *= 1.0 + 1.0 / (L - N)
                    aof_prod *= 1.0 + 1.0 / (L + 1 - N)
                s = schemes.HomogeneousScenario(L, N, c0)
                aof = schemes.aof_survivor_value(s)
                gsa = schemes.gsa_homog_survivor_value(s)
                gap = schemes.aof_gsa_gap(s)
                res.checked += 1
                ordered = aof < gsa if N else abs(aof - gsa) <= 1e-12 * gsa
                if not ordered:
                    res.fail(f"L={L} N={N} c0={c0:.6g}: AOF={aof!r} GSA={gsa!r}")
                if abs(gap - (aof - gsa)) > 1e-12 * max(1.0, gsa):
                    res.fail(f"L={L} N={N} c0={c0:.6g}: gap={gap!r} vs {aof - gsa!r}")
                if not _rel_close(paf_prod * (1 - c0), schemes.paf_survivor_value(s)):
                    res.fail(f"L={L} N={N}: PAF telescoping product mismatch")
                if not _rel_close(aof_prod * (1 - c0), aof):
                    res.fail(f"L={L} N={N}: AOF telescoping product mismatch")


def aof_worked_example(res: SuiteResult, max_l: int) -> None:
    state = schemes.aof_redistribute_on_death(FundState.homogeneous(10, 500.0), 3)
    res.checked += 1
    if state.survivor_wealth() != [550.0] * 9 or state.estate_payments() != [50.0]:
        res.fail(f"survivors={state.survivor_wealth()} estate={state.estate_payments()}")
    if state.total_wealth != 5000.0:
        res.fail(f"total wealth {state.total_wealth!r} != 5000")


def proposition_signs(res: SuiteResult, max_l: int) -> None:
    for config in ("same_size", "solo_bob"):
        for L in (x for x in SIGN_L if x <= max_l):
            for p in SIGN_P:
                for beta in SIGN_BETA:
                    verdict = fairness.proposition_sign_check(config, L, p, beta)
                    res.checked += 1
                    if not verdict.passed:
                        res.fail(str(verdict))


def mea_properties(res: SuiteResult, max_l: int, seed: int = 20140101, n: int = 10_000) -> None:
    rng = np.random.default_rng(seed)
    # deaths exactly as expected: p = (L - d) / L makes L (1 - p) = d
    for _ in range(200):
        k = int(rng.integers(1, 4))
        sizes = [int(x) for x in rng.integers(2, 60, size=k)]
        deaths = tuple(int(rng.integers(1, s)) for s in sizes)
        fund = HeterogeneousFund(
            tuple(GroupProfile(s, (s - d) / s, float(rng.uniform(0.1, 10))) for s, d in zip(sizes, deaths))
        )
        value = mea(fund, MortalityOutcome(deaths))
        res.checked += 1
        if abs(value - 1.0) > 1e-12:
            res.fail(f"expected deaths {deaths} in {fund.groups}: MEA={value!r}")

    for _ in range(n):
        pa, pb = sorted(rng.uniform(1e-6, 1 - 1e-6, size=2))
        if pa == pb:
            continue
        verdict = fairness.mea_no_death_bound_check(float(pa), float(pb))
        res.checked += 1
        if not verdict.passed:
            res.fail(f"pA={pa!r} pB={pb!r}: MEA={verdict.mea!r}")

    for _ in range(n):
        k = int(rng.integers(1, 4))
        groups = tuple(
            GroupProfile(int(rng.integers(1, 60)), float(rng.uniform(0.01, 0.99)), float(rng.uniform(0.1, 20)))
            for _ in range(k)
        )
        fund = HeterogeneousFund(groups)
        deaths = tuple(int(rng.integers(0, g.size + 1)) for g in groups)
        if all(d == g.size for d, g in zip(deaths, groups)):
            continue
        rep = settle(fund, deaths)
        spent = math.fsum((g.size - d) * c for g, d, c in zip(groups, deaths, rep.c1))
        budget = math.fsum(g.initial_wealth * g.survival_prob / (1 + g.survival_prob) * g.size for g in groups)
        res.checked += 1
        if not _rel_close(spent, budget):
            res.fail(f"{groups} deaths={deaths}: spent {spent!r} vs budget {budget!r}")


def _random_small_fund(rng: np.random.Generator) -> HeterogeneousFund:
    kind = rng.integers(0, 3)
    p = float(np.round(rng.uniform(0.05, 0.95), 3))
    beta = float(np.round(rng.uniform(0.1, 10), 3))
    if kind == 0:
        L = int(rng.integers(2, 11))
        return HeterogeneousFund.two_group(L, p, 1.0, L, p, beta)
    if kind == 1:
        L = int(rng.integers(1, 20))
        return HeterogeneousFund.two_group(L, p, 1.0, 1, p, beta)
    k = int(rng.integers(1, 4))
    groups = []
    budget = 20
    for _ in range(k):
        size = int(rng.integers(1, max(2, budget - (k - 1))))
        size = min(size, budget)
        budget -= size
        groups.append(GroupProfile(size, float(rng.uniform(0.05, 0.95)), float(rng.uniform(0.1, 10))))
        if budget <= 0:
            break
    return HeterogeneousFund(tuple(groups))


def random_small_funds(n: int = 200, seed: int = 7) -> list[HeterogeneousFund]:
    """Fixed-seed instances with at most 20 lives, a third of them in each proposition configuration."""
    rng = np.random.default_rng(seed)
    return [_random_small_fund(rng) for _ in range(n)]


def oracle_agreement(res: SuiteResult, max_l: int, tol: float = 1e-10) -> None:
    for fund in random_small_funds():
        target = len(fund.groups) - 1
        counts = enumerate_expected_consumption(fund, target, "counts")
        lives = enumerate_expected_consumption(fund, target, "lives")
        res.checked += 1
        if abs(counts.total_probability - 1) > 1e-12 or abs(lives.total_probability - 1) > 1e-12:
            res.fail(f"{fund.groups}: atom probabilities sum to {counts.total_probability!r}/{lives.total_probability!r}")
        pairs = [(counts.expectation, lives.expectation), (counts.conditional_expectation, lives.conditional_expectation)]
        if fairness.closed_sum_config(fund, target):
            closed = fairness.closed_sum_report(fund, target)
            pairs += [(closed.expected_consumption, counts.expectation), (closed.conditional_consumption, counts.conditional_expectation)]
        for a, b in pairs:
            if abs(a - b) > tol:
                res.fail(f"{fund.groups}: {a!r} vs {b!r}")


def sweep_spot_checks(res: SuiteResult, max_l: int, per_sweep: int = 10) -> None:
    for figure in ("2a", "2c", "4b", "4d"):
        metric, points = figure_points(figure)
        if max(g.size for g in points[0].fund.groups) > max_l:
            continue
        step = max(1, len(points) // per_sweep)
        picked = points[::step][:per_sweep]
        exact = sweep(picked, metric, "exact")
        enum = sweep(picked, metric, "enumerate")
        for a, b in zip(exact, enum):
            res.checked += 1
            if a.method != "closed_sum" or abs(a.value - b.value) > 1e-10:
                res.fail(f"figure {figure} x={a.x} {a.series}: {a.value!r} ({a.method}) vs {b.value!r}")


MC_SEEDS = (1, 2, 3, 4, 5)


def monte_carlo(res: SuiteResult, max_l: int, reps: int = 100_000) -> None:
    fund = HeterogeneousFund.two_group(1, 0.5, 1.0, 1, 0.5, 2.0)
    exact = 23 / 12
    for seed in MC_SEEDS:
        run = monte_carlo_run(SimConfig(fund, reps, seed))
        res.checked += 1
        if abs(run.mean - exact) > 3 * run.std_error:
            res.fail(f"seed={seed}: mean={run.mean!r} se={run.std_error!r}")
        if monte_carlo_run(SimConfig(fund, reps, seed), threads=4) != run:
            res.fail(f"seed={seed}: result depends on thread count")
    ref = gain_report(HeterogeneousFund.two_group(10, 0.9, 1.0, 1, 0.9, 10.0))
    run = monte_carlo_run(SimConfig(HeterogeneousFund.two_group(10, 0.9, 1.0, 1, 0.9, 10.0), reps, 11))
    res.checked += 1
    if abs(run.mean - ref.expected_consumption) > 3 * run.std_error:
        res.fail(f"solo Bob L=10: mean={run.mean!r} exact={ref.expected_consumption!r} se={run.std_error!r}")


def immortals(res: SuiteResult, max_l: int, seed: int = 99) -> None:
    rng = np.random.default_rng(seed)
    for _ in range(100):
        r = float(rng.uniform(0.001, 0.2))
        returns = rng.uniform(-0.5, 0.5, size=50).tolist()
        c = schemes.immortal_gsa_consumption(r, returns)
        growth = 1.0
        for n, cn in enumerate(c):
            if n:
                growth *= 1 + returns[n - 1]
            res.checked += 1
            if not _rel_close(cn * (1 + r) ** (n + 1) / r, growth):
                res.fail(f"r={r!r} n={n}: replication identity broken")
    flat = schemes.immortal_gsa_consumption(0.05, [0.05] * 50)
    res.checked += 1
    if max(flat) - min(flat) > 1e-12 * max(flat):
        res.fail("R_k = r does not give a constant stream")


def _injected_fault(res: SuiteResult, max_l: int) -> None:
    # harness self-test: a deliberately wrong identity must be reported
    res.checked += 1
    value = fairness.paf_expected_survivor_value(10, 0.9) + 1e-9
    if abs(value - 1.0) >= 1e-12:
        res.fail(f"injected fault: L=10 p=0.9 E[F1]={value!r}")


SUITES: dict[str, Callable[[SuiteResult, int], None]] = {
    "paf_fairness": paf_fairness,
    "gsa_paf_equivalence": gsa_paf_equivalence,
    "aof_ordering": aof_ordering,
    "aof_worked_example": aof_worked_example,
    "proposition_signs": proposition_signs,
    "mea_properties": mea_properties,
    "oracle_agreement": oracle_agreement,
    "sweep_spot_checks": sweep_spot_checks,
    "monte_carlo": monte_carlo,
    "immortals": immortals,
}


def suite_names() -> list[str]:
    return list(SUITES)


def run_suites(max_l: int = 200, names: list[str] | None = None, inject_fault: bool = False) -> list[SuiteResult]:
    selected = list(SUITES.items()) if names is None else [(n, SUITES[n]) for n in names]
    if inject_fault:
        selected.append(("injected_fault", _injected_fault))
    results = []
    for name, fn in selected:
        res = SuiteResult(name)
        start = time.perf_counter()
        try:
            fn(res, max_l)
        except Exception as exc:  # a crash is a failure of that suite, not of the run
            res.fail(f"raised {type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - start
        results.append(res)
    return results
