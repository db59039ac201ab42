from fractions import Fraction

import pytest

from app.chow.divisors import class_psi
from app.chow.keys import (
    QueryDocument,
    class_from_map,
    class_to_map,
    format_rational,
    parse_class_expression,
    parse_key,
    parse_rational,
    parse_weights,
)
from app.chow.picard import G, H, DivClass, GeneratorId
from app.core.exceptions import InvalidInputError, InvalidLabelError


@pytest.mark.parametrize(
    "key,expected",
    [
        ("H", H),
        ("G", G),
        ("D|B=|k=1", GeneratorId("D", (), 1)),
        ("D|B=1,3|k=0", GeneratorId("D", (1, 3), 0)),
    ],
)
def test_parse_key(key, expected):
    """Test generator keys parse to their generators."""
    assert parse_key(key) == expected
    assert expected.key == key


@pytest.mark.parametrize("key", ["D|B=3,1|k=0", "D|B=1,1|k=1", "D|k=1", "X"])
def test_parse_key_rejects_malformed(key):
    """Test malformed or unsorted keys are rejected."""
    with pytest.raises(InvalidLabelError):
        parse_key(key)


def test_rationals():
    """Test the p/q exchange form."""
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(Fraction(2)) == "2/1"
    assert parse_rational("-1/4") == Fraction(-1, 4)
    assert parse_rational(3) == 3
    for bad in ("0.5", "1/0", True, None):
        with pytest.raises(InvalidInputError):
            parse_rational(bad)


def test_parse_weights_accepts_commas_and_tokens():
    """Test weights given as a comma list or as tokens."""
    assert parse_weights(["1/2,1"]) == [Fraction(1, 2), Fraction(1)]
    assert parse_weights(["1/2", "1"]) == [Fraction(1, 2), Fraction(1)]


def test_class_map_roundtrip():
    """Test a class survives its generator-keyed map."""
    # Setup
    cls = DivClass.from_map(2, 1, {GeneratorId("D", (), 1): Fraction(1, 4), H: -2})

    # Test
    mapping = class_to_map(cls)

    # Assert
    assert mapping == {"D|B=|k=1": "1/4", "H": "-2/1"}
    assert class_from_map(2, 1, mapping) == cls


def test_class_from_map_rejects_foreign_generator():
    """Test G is not a generator when d > 0."""
    with pytest.raises(InvalidLabelError):
        class_from_map(2, 1, {"G": 1})


def test_expression_parsing():
    """Test signed sums of named classes."""
    # Test
    cls = parse_class_expression(2, 1, "-1/4*H + psi(1) + 2*D|B=|k=1")

    # Assert
    expected = DivClass.unit(2, 1, H) * Fraction(-1, 4) + class_psi(2, 1, 1)
    expected = expected + DivClass.unit(2, 1, GeneratorId("D", (), 1)) * 2
    assert cls == expected


@pytest.mark.parametrize("text", ["", "H psi(1)", "foo(1)"])
def test_expression_errors(text):
    """Test unparsable expressions."""
    with pytest.raises(InvalidInputError):
        parse_class_expression(2, 1, text)


def test_query_document_canonical_form_is_order_free():
    """Test that factor order does not change the canonical form."""
    # Setup
    a = {"d": 2, "weights": ["0"], "factors": [{"D|B=|k=1": "1"}, {"H": "1"}, {"H": 1}]}
    b = {"d": 2, "weights": ["0/1"], "factors": [{"H": "1"}, {"D|B=|k=1": 1}, "H"]}

    # Test
    first = QueryDocument.from_json(a)
    second = QueryDocument.from_json(b)

    # Assert
    assert first.canonical() == second.canonical()
    assert first.digest() == second.digest()
    assert first.to_json()["weights"] == ["0/1"]


def test_query_document_errors():
    """Test malformed query documents."""
    with pytest.raises(InvalidInputError):
        QueryDocument.from_json({"weights": []})
    with pytest.raises(InvalidInputError):
        QueryDocument.from_json({"d": 2, "factors": "H"})
    with pytest.raises(InvalidInputError):
        QueryDocument.from_json({"d": 2, "factors": [3]})
