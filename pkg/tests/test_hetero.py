import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poolfair.hetero import (
    HeterogeneousFund,
    MortalityOutcome,
    estate_rule,
    initial_consumption,
    mea,
    post_consumption_wealth,
    settle,
    time1_consumption,
)
from poolfair.model import DomainError, GroupProfile, ProfileError
from poolfair.schemes import HomogeneousScenario, gsa_homog_survivor_value


def test_initial_consumption_examples():
    assert initial_consumption(GroupProfile(10, 0.5, 1.0)) == pytest.approx(2 / 3, rel=1e-15)
    assert initial_consumption(GroupProfile(10, 0.9, 1.0)) == pytest.approx(0.526316, abs=1e-6)


def test_post_consumption_wealth():
    g = GroupProfile(3, 0.9, 2.0)
    assert post_consumption_wealth(g) + initial_consumption(g) == pytest.approx(2.0, rel=1e-15)


def test_mea_worked_example():
    # group A: 10 @ p=0.5, group B: 10 @ p=0.9, one death in each
    fund = HeterogeneousFund.two_group(10, 0.5, 1.0, 10, 0.9, 1.0)
    wa, wb = 0.5 / 1.5, 0.9 / 1.9
    expected = (10 * wa + 10 * wb) / (9 * wa / 0.5 + 9 * wb / 0.9)
    assert mea(fund, MortalityOutcome((1, 1))) == pytest.approx(expected, rel=1e-14)


def test_mea_is_one_at_expected_deaths():
    fund = HeterogeneousFund.two_group(10, 0.5, 1.0, 20, 0.9, 3.0)
    assert mea(fund, MortalityOutcome((5, 2))) == pytest.approx(1.0, rel=1e-14)


def test_all_dead_has_no_mea():
    fund = HeterogeneousFund.two_group(2, 0.5, 1.0, 1, 0.9, 1.0)
    with pytest.raises(DomainError):
        mea(fund, MortalityOutcome((2, 1)))
    rep = settle(fund, (2, 1))
    assert rep.mea is None
    assert rep.c1 == (0.0, 0.0)
    assert rep.estate == pytest.approx((0.5 / 1.5, 0.9 / 1.9), rel=1e-15)


def test_estate_rule_rejects_survivors():
    fund = HeterogeneousFund.two_group(2, 0.5, 1.0, 1, 0.9, 1.0)
    with pytest.raises(DomainError):
        estate_rule(fund, MortalityOutcome((1, 1)))
    assert estate_rule(fund) == estate_rule(fund, MortalityOutcome((2, 1)))


def test_time1_needs_survivors():
    fund = HeterogeneousFund.two_group(2, 0.5, 1.0, 1, 0.9, 1.0)
    with pytest.raises(DomainError):
        time1_consumption(fund, MortalityOutcome((0, 1)), 1)
    assert time1_consumption(fund, MortalityOutcome((0, 1)), 0) > 0


@pytest.mark.parametrize("deaths", [(0,), (3, 0), (-1, 0), (0, 2)])
def test_outcome_validation(deaths):
    fund = HeterogeneousFund.two_group(2, 0.5, 1.0, 1, 0.9, 1.0)
    with pytest.raises(DomainError):
        settle(fund, deaths)


def test_fund_rejects_bad_profiles():
    with pytest.raises(ProfileError):
        HeterogeneousFund.two_group(0, 0.5, 1.0, 1, 0.9, 1.0)
    with pytest.raises(DomainError):
        HeterogeneousFund(())


@pytest.mark.parametrize("L, p", [(10, 0.9), (5, 0.5), (100, 0.3)])
def test_identical_groups_reduce_to_homogeneous_gsa(L, p):
    la = L // 2
    fund = HeterogeneousFund.two_group(la, p, 1.0, L - la, p, 1.0)
    c0 = 1 / (1 + p)
    for da in range(la + 1):
        for db in range(L - la + 1):
            if da + db == L:
                continue
            rep = settle(fund, (da, db))
            expected = gsa_homog_survivor_value(HomogeneousScenario(L, da + db, c0))
            for i, (d, n) in enumerate(((da, la), (db, L - la))):
                assert rep.c1[i] == (pytest.approx(expected, rel=1e-12) if d < n else 0.0)


groups_st = st.lists(
    st.tuples(st.integers(1, 30), st.floats(0.01, 0.99), st.floats(0.01, 100.0)),
    min_size=1,
    max_size=4,
)


@settings(max_examples=300, deadline=None)
@given(groups_st, st.data())
def test_budget_balance(groups, data):
    fund = HeterogeneousFund(tuple(GroupProfile(*g) for g in groups))
    deaths = tuple(data.draw(st.integers(0, g.size)) for g in fund.groups)
    rep = settle(fund, deaths)
    paid = math.fsum(
        (g.size - d) * c1 + g.size * e for g, d, c1, e in zip(fund.groups, deaths, rep.c1, rep.estate)
    )
    budget = math.fsum(g.size * post_consumption_wealth(g) for g in fund.groups)
    assert paid == pytest.approx(budget, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(2, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))), min_size=1, max_size=4),
       st.lists(st.floats(0.01, 100.0), min_size=4, max_size=4))
def test_mea_one_when_deaths_match_expectation(sizes, wealth):
    # p chosen so that L (1 - p) is exactly the realised death count
    fund = HeterogeneousFund(tuple(GroupProfile(n, (n - d) / n, w) for (n, d), w in zip(sizes, wealth)))
    assert mea(fund, MortalityOutcome(tuple(d for _, d in sizes))) == pytest.approx(1.0, rel=1e-12)
