from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poolfair.model import DomainError, FundState
from poolfair.schemes import (
    HomogeneousScenario as S,
    aof_gsa_gap,
    aof_redistribute_deaths,
    aof_redistribute_on_death,
    aof_survivor_value,
    gsa_homog_survivor_value,
    gsa_paf_equivalence_check,
    immortal_gsa_consumption,
    paf_survivor_value,
)


def paf_sequential(L, N, c0):
    """Equal split of each death among the survivors, one death at a time."""
    w = Fraction(1) - Fraction(c0)
    for k in range(1, N + 1):
        w *= 1 + Fraction(1, L - k)
    return w


def aof_sequential(L, N, c0=0.0, order=None):
    state = FundState.homogeneous(L, 1.0 - c0)
    order = list(range(N)) if order is None else order
    return aof_redistribute_deaths(state, order)


@pytest.mark.parametrize(
    "scenario, expected",
    [
        (S(10, 0, 0.0), 1.0),
        (S(10, 1, 0.0), float(paf_sequential(10, 1, 0))),
        (S(4, 2, 0.5), float(paf_sequential(4, 2, Fraction(1, 2)))),
    ],
)
def test_paf_survivor_value(scenario, expected):
    assert paf_survivor_value(scenario) == pytest.approx(expected, rel=1e-12)


def test_paf_frozen_examples():
    assert paf_survivor_value(S(10, 1)) == pytest.approx(10 / 9, rel=1e-15)
    assert paf_survivor_value(S(4, 2, 0.5)) == 1.0


@pytest.mark.parametrize(
    "scenario, expected",
    [
        (S(10, 0, 0.0), 1.0),
        (S(10, 1, 0.0), 10 / 9),
        (S(3, 2, 1 / 1.9), 3 * (0.9 / 1.9)),
    ],
)
def test_gsa_homog_survivor_value(scenario, expected):
    # oracle: total remaining fund L (1 - c0) split over L - N survivors
    assert gsa_homog_survivor_value(scenario) == pytest.approx(expected, rel=1e-12)
    assert gsa_homog_survivor_value(S(3, 2, 1 / 1.9)) == pytest.approx(1.421053, abs=1e-6)


@pytest.mark.parametrize("fn", [paf_survivor_value, gsa_homog_survivor_value, aof_survivor_value, aof_gsa_gap])
def test_all_dead_is_rejected(fn):
    with pytest.raises(DomainError):
        fn(S(5, 5, 0.0))


def test_scenario_validation():
    with pytest.raises(DomainError):
        S(5, 6)
    with pytest.raises(DomainError):
        S(5, 1, 1.0)


@pytest.mark.parametrize("L, p", [(2, 0.5), (100, 0.9), (10, 0.1)])
def test_gsa_paf_equivalence_examples(L, p):
    assert gsa_paf_equivalence_check(L, p) is True


def test_gsa_paf_equivalence_grid():
    for L in range(2, 201):
        for p in np.round(np.arange(0.05, 0.951, 0.05), 2):
            assert gsa_paf_equivalence_check(L, float(p))


def test_aof_worked_example():
    state = aof_redistribute_on_death(FundState.homogeneous(10, 500.0), 0)
    assert state.survivor_wealth() == [550.0] * 9
    assert state.estate_payments() == [50.0]
    assert state.total_wealth == 5000.0


def test_aof_two_members():
    state = aof_redistribute_on_death(FundState.homogeneous(2, 1.0), 1)
    assert state.wealth == (1.5, 0.5)
    assert state.alive == (True, False)


def test_aof_sole_member():
    state = aof_redistribute_on_death(FundState.homogeneous(1, 1.0), 0)
    assert state.estate_payments() == [1.0]
    assert state.survivor_wealth() == []


def test_aof_rejects_dead_member():
    state = aof_redistribute_on_death(FundState.homogeneous(3, 1.0), 0)
    with pytest.raises(DomainError):
        aof_redistribute_on_death(state, 0)


def test_aof_rejects_unequal_wealth():
    with pytest.raises(DomainError):
        aof_redistribute_on_death(FundState((1.0, 2.0), (True, True)), 0)


def test_aof_returns_new_state():
    before = FundState.homogeneous(4, 1.0)
    after = aof_redistribute_on_death(before, 2)
    assert before.wealth == (1.0,) * 4
    assert after is not before


@pytest.mark.parametrize(
    "scenario, expected",
    [(S(10, 1), 1.1), (S(10, 0), 1.0), (S(10, 3), 1.375)],
)
def test_aof_survivor_value(scenario, expected):
    assert aof_survivor_value(scenario) == pytest.approx(expected, rel=1e-15)
    seq = aof_sequential(scenario.members, scenario.deaths)
    assert seq.survivor_wealth()[0] == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize(
    "scenario, expected",
    [(S(10, 1), -1 / 90), (S(10, 0), 0.0), (S(1000, 1), -1 / (999 * 1000))],
)
def test_aof_gsa_gap(scenario, expected):
    gap = aof_gsa_gap(scenario)
    assert gap == pytest.approx(expected, rel=1e-12, abs=0)
    assert gap == pytest.approx(aof_survivor_value(scenario) - gsa_homog_survivor_value(scenario), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_aof_conservation_and_order_independence(data):
    L = data.draw(st.integers(1, 40))
    N = data.draw(st.integers(0, L - 1))
    c0 = data.draw(st.floats(0, 0.9))
    order = data.draw(st.permutations(range(L)))[:N]
    start = FundState.homogeneous(L, 1.0 - c0)
    state = start
    for idx in order:
        nxt = aof_redistribute_on_death(state, idx)
        deceased_w = state.wealth[idx]
        gains = sum(b - a for a, b, alive in zip(state.wealth, nxt.wealth, nxt.alive) if alive)
        assert gains + nxt.wealth[idx] == pytest.approx(deceased_w, rel=1e-12)
        state = nxt
    assert state.total_wealth == pytest.approx(start.total_wealth, rel=1e-12)
    closed = aof_survivor_value(S(L, N, c0))
    assert all(w == pytest.approx(closed, rel=1e-12) for w in state.survivor_wealth())


def test_telescoping_closed_forms():
    for L in range(1, 201):
        paf = Fraction(1)
        aof = Fraction(1)
        for N in range(L):
            if N:
                paf *= 1 + Fraction(1, L - N)
                aof *= 1 + Fraction(1, L + 1 - N)
            assert paf_survivor_value(S(L, N)) == pytest.approx(float(paf), rel=1e-12)
            assert aof_survivor_value(S(L, N)) == pytest.approx(float(aof), rel=1e-12)


def test_aof_sequential_matches_closed_form_small():
    for L in range(1, 40):
        state = FundState.homogeneous(L, 1.0)
        for N in range(1, L):
            state = aof_redistribute_on_death(state, N - 1)
            for w in state.survivor_wealth():
                assert w == pytest.approx(aof_survivor_value(S(L, N)), rel=1e-12)


@given(st.integers(1, 200).flatmap(lambda L: st.tuples(st.just(L), st.integers(0, L - 1))), st.floats(0, 0.99))
def test_aof_never_exceeds_gsa(LN, c0):
    L, N = LN
    s = S(L, N, c0)
    aof, gsa = aof_survivor_value(s), gsa_homog_survivor_value(s)
    if N == 0:
        assert aof == pytest.approx(gsa, rel=1e-12)
    else:
        assert aof < gsa


class TestImmortals:
    def test_flat_when_realised_equals_assumed(self):
        c = immortal_gsa_consumption(0.05, [0.05])
        assert c[0] == pytest.approx(0.05 / 1.05, rel=1e-15)
        assert c[1] == pytest.approx(c[0], rel=1e-15)
        assert c[0] == pytest.approx(0.047619, abs=1e-6)

    def test_zero_return_matches_rollforward(self):
        r = 0.05
        L = 7
        c0 = immortal_gsa_consumption(r, [0.0])[0]
        fund = L * (1 - c0) * (1 + 0.0)
        c1_oracle = fund / L / ((1 + r) / r)
        c = immortal_gsa_consumption(r, [0.0])
        assert c[1] == pytest.approx(c1_oracle, rel=1e-14)
        assert c[1] == pytest.approx(0.045351, abs=1e-6)

    def test_two_step_rollforward(self):
        r = 0.05
        returns = [0.05, 0.10]
        factor = (1 + r) / r
        fund = 1.0
        oracle = []
        for R in [None] + returns:
            if R is not None:
                fund *= 1 + R
            pay = fund / factor
            oracle.append(pay)
            fund -= pay
        assert immortal_gsa_consumption(r, returns) == pytest.approx(oracle, rel=1e-14)
        assert immortal_gsa_consumption(r, returns)[2] == pytest.approx(0.05 * 1.05 * 1.10 / 1.05**3, rel=1e-14)

    def test_rejects_total_loss(self):
        with pytest.raises(DomainError):
            immortal_gsa_consumption(0.05, [0.1, -1.0])

    def test_rejects_nonpositive_rate(self):
        with pytest.raises(DomainError):
            immortal_gsa_consumption(0.0, [0.1])

    @given(
        st.floats(1e-3, 0.5),
        st.lists(st.floats(-0.9, 1.0), min_size=1, max_size=50),
    )
    def test_bond_replication(self, r, returns):
        c = immortal_gsa_consumption(r, returns)
        growth = 1.0
        for n, cn in enumerate(c):
            if n:
                growth *= 1 + returns[n - 1]
            assert cn * (1 + r) ** (n + 1) / r == pytest.approx(growth, rel=1e-12)
