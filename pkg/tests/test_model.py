import pytest
from hypothesis import given
from hypothesis import strategies as st

from poolfair.model import (
    AnnuityBasis,
    DomainError,
    FundState,
    GroupProfile,
    ProfileError,
    annuity_factor_two_period,
    perpetuity_factor,
    validate_profile,
)


@pytest.mark.parametrize(
    "p, expected",
    [(0.9, (1.9, 1.0)), (0.5, (1.5, 1.0)), (1 - 1e-9, (2 - 1e-9, 1.0))],
)
def test_annuity_factor_two_period(p, expected):
    basis = annuity_factor_two_period(p)
    assert isinstance(basis, AnnuityBasis)
    assert basis.factor_t0 == pytest.approx(expected[0], rel=1e-15)
    assert basis.factor_t1 == 1.0


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_annuity_factor_rejects_boundary(p):
    with pytest.raises(DomainError):
        annuity_factor_two_period(p)


@given(st.floats(min_value=1e-9, max_value=1 - 1e-9))
def test_annuity_factor_t0_minus_one_is_p(p):
    basis = annuity_factor_two_period(p)
    # exact up to the rounding of 1 + p itself
    assert abs((basis.factor_t0 - 1.0) - p) <= 2.0**-52
    assert basis.factor_t1 == 1.0


@pytest.mark.parametrize("r, expected", [(0.05, 21.0), (1.0, 2.0), (0.01, 101.0)])
def test_perpetuity_factor(r, expected):
    assert perpetuity_factor(r) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("r", [0.0, -0.5])
def test_perpetuity_factor_rejects_nonpositive(r):
    with pytest.raises(DomainError):
        perpetuity_factor(r)


@given(st.floats(min_value=1e-4, max_value=10))
def test_perpetuity_factor_inverse(r):
    assert abs(perpetuity_factor(r) * r / (1 + r) - 1) < 1e-14


def test_validate_profile_ok():
    g = GroupProfile(10, 0.9, 1.0)
    assert validate_profile(g) is g


@pytest.mark.parametrize(
    "profile, field",
    [
        (GroupProfile(0, 0.9, 1.0), "size"),
        (GroupProfile(10, 1.0, 1.0), "survival_prob"),
        (GroupProfile(10, 0.0, 1.0), "survival_prob"),
        (GroupProfile(10, 0.5, 0.0), "initial_wealth"),
        (GroupProfile(10, 0.5, float("inf")), "initial_wealth"),
    ],
)
def test_validate_profile_names_field(profile, field):
    with pytest.raises(ProfileError) as exc:
        validate_profile(profile)
    assert exc.value.fields == [field]
    assert field in str(exc.value)


def test_validate_profile_reports_every_violation():
    with pytest.raises(ProfileError) as exc:
        validate_profile(GroupProfile(0, 2.0, -1.0))
    assert exc.value.fields == ["size", "survival_prob", "initial_wealth"]


def test_fund_state_checks_lengths():
    with pytest.raises(DomainError):
        FundState((1.0, 1.0), (True,))
    with pytest.raises(DomainError):
        FundState((-1.0,), (True,))


def test_fund_state_is_immutable():
    s = FundState.homogeneous(3, 2.0)
    with pytest.raises(AttributeError):
        s.wealth = (0.0,)
    assert s.total_wealth == 6.0
    assert s.n_alive == 3
