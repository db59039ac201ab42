from fractions import Fraction

import pytest

from app.chow.divisors import class_Dp, class_H, class_Hprime, class_per
from app.chow.picard import DivClass, GeneratorId, H
from app.chow.pullbacks import (
    pullback_compose,
    pullback_forget_all,
    pullback_forget_last,
    pullback_forgetful_M0n,
    pullback_selfcompose,
)
from app.core.exceptions import InvalidLabelError


def D(B, k):
    return GeneratorId.boundary(B, k)


def test_compose_pulls_h12_back():
    """Test H_{1,2} on Y_{2,1} pulls back to (2 H_{1,2}, D_p) along Y_{1,1} x Y_{2,0}."""
    # Test
    first, second = pullback_compose(1, 1, 2, class_H(2, 1, 1, 2))

    # Assert
    assert first == 2 * class_H(1, 1, 1, 2)
    assert second == class_Dp(2, 0)


def test_compose_checks_space():
    """Test that compose rejects a class on the wrong space."""
    with pytest.raises(InvalidLabelError):
        pullback_compose(1, 1, 2, DivClass.unit(1, 1, H))


@pytest.mark.parametrize("n", [0, 1])
def test_selfcompose_periodic_divisor(n):
    """Test that the 2-fold self-composition pulls Per_1 back to Per_2."""
    # Setup
    per1 = class_per(4, n, 1)

    # Test
    pulled = pullback_selfcompose(2, n, 2, per1)

    # Assert
    assert pulled == class_per(2, n, 2)


def test_selfcompose_identity_and_bad_power():
    """Test m = 1 is the identity and m = 0 is rejected."""
    cls = class_per(2, 1, 1)
    assert pullback_selfcompose(2, 1, 1, cls) == cls
    with pytest.raises(InvalidLabelError):
        pullback_selfcompose(2, 1, 0, cls)


def test_forget_last_on_boundary():
    """Test D_{0,1} on Y_{2,0} pulls back to D_{0,1} + D_{{1},1}."""
    pulled = pullback_forget_last(2, 0, DivClass.unit(2, 0, D((), 1)))
    assert pulled == DivClass.from_map(2, 1, {D((), 1): 1, D((1,), 1): 1})


def test_forget_last_on_h():
    """Test H on Y_{1,1} pulls back to H_{1,1} on Y_{1,2}."""
    assert pullback_forget_last(1, 1, DivClass.unit(1, 1, H)) == class_H(1, 2, 1, 1)


def test_forget_all_sums_over_subsets():
    """Test D_{0,1} on Y_{2,0} pulls back to the sum of all D_{B,1} on Y_{2,2}."""
    # Test
    pulled = pullback_forget_all(2, 2, DivClass.unit(2, 0, D((), 1)))

    # Assert
    assert pulled == DivClass.from_map(
        2, 2, {D((), 1): 1, D((1,), 1): 1, D((2,), 1): 1, D((1, 2), 1): 1}
    )


def test_forgetful_pullback_commutes_with_hprime():
    """Test that H'_1 and D_p commute with forgetting a marking."""
    assert pullback_forget_last(2, 1, class_Hprime(2, 1, 1)) == class_Hprime(2, 2, 1)
    assert pullback_forget_last(2, 1, class_Dp(2, 1)) == class_Dp(2, 2)


def test_m0n_boundary_pullback():
    """Test the pullback of D(12;34) from M_{0,4} to Y_{1,4}."""
    # Test
    raw = pullback_forgetful_M0n(1, 4, (1, 2), (3, 4))

    # Assert
    assert raw == {
        D((1, 2), 0): Fraction(1),
        D((1, 2), 1): Fraction(1),
        D((3, 4), 0): Fraction(1),
        D((3, 4), 1): Fraction(1),
    }
    with pytest.raises(InvalidLabelError):
        pullback_forgetful_M0n(1, 4, (1,), (2, 3, 4))


def test_compose_splits_top_boundary():
    """Test D_{0,2} on Y_{4,0} pulls back to (D_{0,1}, 2 D_{0,2}) along Y_{2,0} x Y_{2,0}."""
    # Test
    first, second = pullback_compose(2, 0, 2, DivClass.unit(4, 0, D((), 2)))

    # Assert
    assert first == DivClass.unit(2, 0, D((), 1))
    assert second == DivClass.from_map(2, 0, {D((), 2): 2})


def test_compose_drops_indivisible_degree():
    """Test D_{{1},3} on Y_{4,1} pulls back to zero on both factors."""
    # Test
    first, second = pullback_compose(2, 1, 2, DivClass.unit(4, 1, D((1,), 3)))

    # Assert
    assert first == DivClass.zero(2, 1)
    assert second == DivClass.zero(2, 0)


def test_selfcompose_top_boundary():
    """Test the 2-fold self-composition pulls D_{0,2} back to D_{0,1} + 2 D_{0,2}."""
    # Test
    pulled = pullback_selfcompose(2, 0, 2, DivClass.unit(4, 0, D((), 2)))

    # Assert
    assert pulled == DivClass.from_map(2, 0, {D((), 1): 1, D((), 2): 2})
