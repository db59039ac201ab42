from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence

from app.chow.keys import class_to_map, parse_class_expression, parse_rational
from app.chow.picard import DivClass, Profile, basis, identify, profile_keys, quotient_data
from app.chow.weights import WeightTuple, canonical_subset
from app.core.exceptions import InvalidInputError, InvalidLabelError


def parse_profile_key(key: str) -> tuple:
    """``"1,2|0"`` -> ((1, 2), 0); ``"|1"`` -> ((), 1)."""
    try:
        left, right = key.split("|")
        B = tuple(int(i) for i in left.split(",")) if left.strip() else ()
        return canonical_subset(B), int(right)
    except ValueError:
        raise InvalidLabelError(f"Malformed profile key {key!r}; expected 'i,j|k'")


class PicardService:
    """Service for handling Picard group operations."""

    def basis(self, d: int, n: int, weights: Optional[Sequence[Fraction]] = None) -> Dict[str, Any]:
        """
        List the basis of Pic(Y_{d,n}), and with weights the generators dying in the quotient.

        Args:
            d: Degree of the self-maps
            n: Number of markings
            weights: Optional marking weights; must have length n

        Returns:
            Generators, rank and, when weights are given, the unstable subset
        """
        if d < 0 or n < 0:
            raise InvalidInputError(f"d and n must be nonnegative, got d={d}, n={n}")
        if weights is None and n == 0:
            weights = []
        gens = basis(d, n)
        listing: Dict[str, Any] = {"d": d, "n": n, "generators": [g.key for g in gens], "rank": len(gens)}
        if weights is not None:
            if len(weights) != n:
                raise InvalidInputError(f"Expected {n} weights, got {len(weights)}")
            data = quotient_data(WeightTuple(d, tuple(weights)))
            listing["weights"] = [str(w) for w in weights]
            listing["unstable"] = [g.key for g in data.unstable_boundary]
            listing["unstable_fix"] = list(data.unstable_fix)
            listing["surviving"] = [g.key for g in data.surviving]
            listing["quotient_rank"] = data.rank
        return listing

    def build_class(self, d: int, n: int, expression: str) -> DivClass:
        """
        Build a class from an inline expression such as ``psi(1) - 1/4*H``.
        """
        return parse_class_expression(d, n, expression)

    def identify(
        self, d: int, n: int, values: Mapping[str, Any], g_value: Optional[Any] = None
    ) -> DivClass:
        """
        Identify the class with the given test-curve intersection numbers.

        Args:
            d: Degree of the self-maps
            n: Number of markings
            values: Map from "B|k" to the intersection number with C_{B,k}; missing keys are 0
            g_value: Intersection number with C_G, only meaningful for d = 0

        Returns:
            The unique basis class with this profile
        """
        known = set(profile_keys(d, n))
        profile = Profile(d, n, g_value=parse_rational(g_value) if g_value is not None else None)
        for key, value in values.items():
            label = parse_profile_key(key)
            if label not in known:
                raise InvalidLabelError(f"{key} is not a test curve of Y_{{{d},{n}}}")
            profile.values[label] = parse_rational(value)
        return identify(profile)

    @staticmethod
    def describe(cls: DivClass) -> Dict[str, Any]:
        return {"d": cls.d, "n": cls.n, "coefficients": class_to_map(cls)}


def format_generators(keys: List[str]) -> str:
    return ", ".join(keys) if keys else "(none)"
