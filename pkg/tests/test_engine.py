from fractions import Fraction

import pytest

from app.chow import engine
from app.chow.divisors import class_H, class_psi
from app.chow.engine import IntersectionQuery, base_case, choose_pivot, intersect
from app.chow.picard import H, DivClass, GeneratorId
from app.chow.pullbacks import pullback_forget_last
from app.chow.selfcheck import projection_pair
from app.chow.weights import WeightTuple
from app.core.exceptions import DimensionMismatchError, InvalidInputError, InvalidLabelError


def D(B, k):
    return GeneratorId.boundary(B, k)


def test_plane_line_squared(m20, unit, fresh_memo):
    """Test the square of D_{0,1} on M(2,0) is 1."""
    # Setup
    line = unit(2, 0, "D", (), 1)

    # Test
    value = intersect(IntersectionQuery(m20, (line, line)))

    # Assert
    assert value == 1


@pytest.mark.parametrize("kind,B,k,expected", [("H", (), 0, Fraction(-1, 4)), ("D", (), 1, Fraction(1))])
def test_m11_degrees(m11, unit, fresh_memo, kind, B, k, expected):
    """Test the degrees of H and D_{0,1} on M(1|1)."""
    assert intersect(IntersectionQuery(m11, (unit(1, 1, kind, B, k),))) == expected


def test_point_space(fresh_memo):
    """Test that M(0|1,1) is a point."""
    assert intersect(IntersectionQuery(WeightTuple.of(0, [1, 1]), ())) == 1


@pytest.mark.parametrize(
    "weights,expected",
    [([2, 2, 2], Fraction(1)), ([Fraction(1, 2)] * 3, Fraction(-1, 2)), ([1, 1, 2], Fraction(1, 2))],
)
def test_g_on_three_weights(weights, expected, unit, fresh_memo):
    """Test the degree of G on M(0|c,m,e)."""
    wt = WeightTuple.of(0, weights)
    assert intersect(IntersectionQuery(wt, (unit(0, 3, "G"),))) == expected


def test_weight_zero_marking_products(m2_0, unit, fresh_memo):
    """Test triple products on M(2|0)."""
    # Setup
    D01 = unit(2, 1, "D", (), 1)
    D11 = unit(2, 1, "D", (1,), 1)
    Hc = unit(2, 1, "H")
    E = D01 + D11

    # Assert
    assert intersect(IntersectionQuery(m2_0, (D11, D01, D01))) == Fraction(5, 2)
    assert intersect(IntersectionQuery(m2_0, (D01, D01, D01))) == Fraction(-7, 2)
    assert intersect(IntersectionQuery(m2_0, (Hc, D01, D11))) == Fraction(-1, 4)
    assert intersect(IntersectionQuery(m2_0, (Hc, E, E))) == 1
    assert intersect(IntersectionQuery(m2_0, (class_psi(2, 1, 1), E, E))) == -2
    assert intersect(IntersectionQuery(m2_0, (E, D01, D01))) == -1


@pytest.mark.parametrize("pivot", [D((), 1), D((1,), 1)])
def test_pivot_choice_does_not_matter(m2_0, unit, fresh_memo, pivot):
    """Test D_{{1},1} D_{0,1}^2 on M(2|0) along either boundary."""
    D01 = unit(2, 1, "D", (), 1)
    D11 = unit(2, 1, "D", (1,), 1)
    assert intersect(IntersectionQuery(m2_0, (D11, D01, D01)), pivot=pivot) == Fraction(5, 2)


def test_h12_product(m2_0, unit, fresh_memo):
    """Test H_{1,2} D_{{1},1} D_{0,1} on M(2|0)."""
    factors = (class_H(2, 1, 1, 2), unit(2, 1, "D", (1,), 1), unit(2, 1, "D", (), 1))
    assert intersect(IntersectionQuery(m2_0, factors)) == Fraction(5, 4)


def test_pairing_table_on_m1_01(unit, fresh_memo):
    """Test the boundary pairings on M(1|0,1)."""
    # Setup
    wt = WeightTuple.of(1, [0, 1])
    D0 = unit(1, 2, "D", (), 1)
    D1 = unit(1, 2, "D", (1,), 1)

    # Assert
    assert intersect(IntersectionQuery(wt, (D0, D0))) == -1
    assert intersect(IntersectionQuery(wt, (D0, D1))) == 1
    assert intersect(IntersectionQuery(wt, (D1, D1))) == -1


def test_pulled_back_line_on_m1_10(unit, fresh_memo):
    """Test H_{2,1} and psi_2 against the pulled-back D_{0,1} on M(1|1,0)."""
    # Setup
    wt = WeightTuple.of(1, [1, 0])
    pulled = pullback_forget_last(1, 1, unit(1, 1, "D", (), 1))

    # Assert
    assert intersect(IntersectionQuery(wt, (class_H(1, 2, 2, 1), pulled))) == 1
    assert intersect(IntersectionQuery(wt, (class_psi(1, 2, 2), pulled))) == -1


@pytest.mark.parametrize(
    "wt,gens",
    [(WeightTuple.of(2), [D((), 1), D((), 1)]), (WeightTuple.of(1, [1]), [D((), 1)])],
)
def test_projection_and_dilaton(wt, gens, fresh_memo):
    """Test projection and dilaton against a weight-0 extra marking."""
    # Test
    base, projected, dilaton = projection_pair(wt, [DivClass.unit(wt.d, wt.n, g) for g in gens])

    # Assert
    assert projected == base
    assert dilaton == (wt.n - 2) * base


def test_dimension_mismatch(m20, unit):
    """Test that the number of factors must equal the dimension."""
    with pytest.raises(DimensionMismatchError):
        intersect(IntersectionQuery(m20, (unit(2, 0, "D", (), 1),)))


def test_factor_on_wrong_space(m20, unit):
    """Test that factors must live on Y_{d,n}."""
    with pytest.raises(InvalidLabelError):
        intersect(IntersectionQuery(m20, (unit(2, 1, "H"), unit(2, 1, "H"))))


def test_pivot_must_occur(m20, unit):
    """Test that a forced pivot has to appear among the factors."""
    line = unit(2, 0, "D", (), 1)
    with pytest.raises(InvalidInputError):
        intersect(IntersectionQuery(m20, (line, line)), pivot=D((), 2))


def test_no_base_case():
    """Test that a monomial outside the base spaces is rejected."""
    with pytest.raises(InvalidInputError):
        base_case(WeightTuple.of(2), [H, H])


def test_choose_pivot_prefers_high_degree():
    """Test the pivot is the boundary with the largest k."""
    factors = [DivClass.from_map(2, 1, {D((), 1): 1, D((1,), 2): 1, H: 1})]
    assert choose_pivot(factors) == D((1,), 2)
    assert choose_pivot([DivClass.unit(2, 1, H)]) is None


def test_memo_is_reused(m2_0, unit, fresh_memo):
    """Test the memo records misses and then hits."""
    # Setup
    D01 = unit(2, 1, "D", (), 1)
    query = IntersectionQuery(m2_0, (D01, D01, D01))

    # Test
    intersect(query)
    before = engine.memo_stats()
    intersect(query)
    after = engine.memo_stats()

    # Assert
    assert before["misses"] > 0
    assert before["size"] > 0
    assert after["hits"] > before["hits"]


def test_parallel_jobs_agree(m2_0, unit, fresh_memo):
    """Test that splitting the first factor across workers gives the same value."""
    D01 = unit(2, 1, "D", (), 1)
    E = D01 + unit(2, 1, "D", (1,), 1)
    assert intersect(IntersectionQuery(m2_0, (E, D01, D01)), jobs=2) == -1


def test_evaluation_routing_matches_basis_expansion(m2_0, unit, fresh_memo):
    """Test routing H_{1,2} to the stable-map side agrees with its basis expansion."""
    # Setup
    pivot = D((1,), 1)
    line = engine.restrict_class(m2_0, pivot, unit(2, 1, "D", (), 1))
    routed = engine.restrict_evaluation(m2_0, pivot, 1, 2)
    expanded = engine.restrict_class(m2_0, pivot, class_H(2, 1, 1, 2))

    # Test
    via_routing = engine.integrate_restricted(m2_0, pivot, [routed, line])
    via_basis = engine.integrate_restricted(m2_0, pivot, [expanded, line])

    # Assert
    assert via_routing == Fraction(5, 4)
    assert via_basis == via_routing


def test_restrict_evaluation_checks_axis(m2_0):
    with pytest.raises(InvalidLabelError):
        engine.restrict_evaluation(m2_0, D((1,), 1), 1, 3)


def test_intersect_is_linear_in_one_factor(m2_0, unit, fresh_memo):
    """Test that a combination in the first factor gives the combination of values."""
    # Setup
    D01 = unit(2, 1, "D", (), 1)
    D11 = unit(2, 1, "D", (1,), 1)
    Hc = unit(2, 1, "H")
    a, b = Fraction(3), Fraction(-1, 2)

    # Test
    combined = intersect(IntersectionQuery(m2_0, (a * D01 + b * Hc, D11, D01)))
    first = intersect(IntersectionQuery(m2_0, (D01, D11, D01)))
    second = intersect(IntersectionQuery(m2_0, (Hc, D11, D01)))

    # Assert
    assert combined == a * first + b * second
    assert combined == Fraction(61, 8)
