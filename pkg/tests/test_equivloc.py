from fractions import Fraction

import pytest

from app.chow.equivloc import (
    EquivPoly,
    bdry,
    canonical_bdry,
    enumerate_fixed_graphs,
    ev,
    integrate_ev_psi,
    integrate_expr,
    psi,
)
from app.core.exceptions import InvalidInputError, InvalidLabelError


@pytest.mark.parametrize(
    "n,k,count",
    [(0, 1, 1), (0, 2, 3), (1, 1, 2), (3, 0, 2), (2, 0, 0)],
)
def test_fixed_graph_counts(n, k, count):
    """Test the number of torus-fixed graphs on small spaces."""
    assert len(enumerate_fixed_graphs(n, k)) == count


def test_fixed_graph_automorphisms_degree_two():
    """Test automorphism orders of the unmarked degree-2 fixed graphs."""
    auts = sorted(aut for _, aut in enumerate_fixed_graphs(0, 2))
    assert auts == [1, 2, 2]


@pytest.mark.parametrize(
    "n,k,ev_exp,psi_exp,expected",
    [
        (2, 1, [1, 1], None, 1),
        (1, 1, [0], [1], -2),
        (2, 1, [0, 1], [0, 1], 1),
        (2, 1, [0, 0], [0, 2], -2),
        (0, 1, [], None, 1),
        (3, 1, [1, 1, 1], None, 1),
        (3, 0, [1, 0, 0], None, 1),
    ],
)
def test_ev_psi_integrals(n, k, ev_exp, psi_exp, expected):
    """Test known top integrals of evaluation and cotangent classes."""
    # Test
    poly = integrate_ev_psi(n, k, ev_exp, psi_exp)

    # Assert
    assert poly.coefficient(0) == Fraction(expected)
    assert poly.exponents == [0]


def test_ev_square_vanishes():
    """Test ev1^2 on M_0,1(P1,1) integrates to zero."""
    assert integrate_ev_psi(1, 1, [2]).is_zero


def test_under_dimension_is_zero():
    """Test that a product below the dimension integrates to zero."""
    assert integrate_ev_psi(2, 1, [1, 0]).is_zero


def test_only_even_powers_of_t():
    """Test that excess degree shows up as even powers of t only."""
    for ev_exp in ([2, 1], [1, 2], [2, 2], [3, 0]):
        poly = integrate_ev_psi(2, 1, ev_exp)
        assert all(e % 2 == 0 for e in poly.exponents)


def test_boundary_integrals():
    """Test products with the boundary D(0,1 | {1,2},0) on M_0,2(P1,1)."""
    D = bdry((), 1)
    assert integrate_expr(2, 1, [D, D]).coefficient(0) == 2
    assert integrate_expr(2, 1, [D, ev(1)]).coefficient(0) == 1


def test_pivot_order_independence():
    """Test that splitting along either boundary gives the same answer."""
    # Setup
    expr = [bdry((), 1), bdry((1,), 1), ev(1), ev(2)]

    # Test
    first = integrate_expr(2, 2, expr, pivot=bdry((), 1))
    second = integrate_expr(2, 2, expr, pivot=bdry((1,), 1))

    # Assert
    assert first == second
    assert first == integrate_expr(2, 2, expr)


def test_canonical_bdry_picks_side_without_last_marking():
    """Test boundaries are named by the side not containing marking n."""
    assert canonical_bdry(2, 2, (2,), 1) == bdry((1,), 1)
    assert canonical_bdry(0, 3, (), 2) == bdry((), 1)


def test_canonical_bdry_rejects_unstable():
    """Test a degree-0 side with one marking is rejected."""
    with pytest.raises(InvalidLabelError):
        canonical_bdry(2, 1, (1,), 0)


def test_invalid_inputs():
    """Test errors for bad exponents, unstable spaces and missing pivots."""
    with pytest.raises(InvalidInputError):
        integrate_ev_psi(2, 1, [1])
    with pytest.raises(InvalidLabelError):
        integrate_ev_psi(2, 0, [0, 0])
    with pytest.raises(InvalidInputError):
        integrate_expr(2, 1, [psi(1), ev(2)], pivot=bdry((), 1))


def test_equiv_poly_arithmetic():
    """Test sums and products of polynomials in t."""
    a = EquivPoly.from_map({0: Fraction(1), 2: Fraction(3)})
    b = EquivPoly.constant(Fraction(2))
    assert (a * b).coefficient(2) == 6
    assert (a + b).coefficient(0) == 3
    assert (a * Fraction(1, 3)).coefficient(2) == 1
    assert EquivPoly.from_map({1: Fraction(0)}).is_zero
