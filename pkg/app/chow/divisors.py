"""Named geometric divisor classes on Y_{d,n}, written on the canonical basis."""
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Optional, Tuple

from app.chow.picard import (
    G,
    DivClass,
    GeneratorId,
    Profile,
    RawVector,
    identify,
    profile_keys,
    reduce_to_basis,
)
from app.chow.weights import MarkingSet, check_marking, is_valid_label
from app.core.exceptions import InvalidLabelError


def _positive_labels(d: int, n: int) -> Iterator[Tuple[MarkingSet, int]]:
    for k in range(1, d + 1):
        for size in range(n + 1):
            for B in combinations(range(1, n + 1), size):
                yield B, k


@lru_cache(maxsize=None)
def class_H(d: int, n: int, i: int, axis: int) -> DivClass:
    """Evaluation class H_{i,axis}: pullback of O(1) along the axis-th coordinate of ev_i."""
    check_marking(n, i)
    if axis == 1:
        profile = Profile(d, n, g_value=Fraction(0) if d == 0 else None)
        for B, k in profile_keys(d, n):
            profile.values[(B, k)] = Fraction(1 if i in B else 0)
        return identify(profile)
    if axis == 2:
        return d * class_H(d, n, i, 1) + class_Hprime(d, n, i)
    raise InvalidLabelError(f"Evaluation axis must be 1 or 2, got {axis}")


@lru_cache(maxsize=None)
def class_Hprime(d: int, n: int, i: int) -> DivClass:
    check_marking(n, i)
    if d == 0:
        return DivClass.unit(d, n, G)
    raw: RawVector = {}
    for B, k in _positive_labels(d, n):
        raw[GeneratorId("D", B, k)] = Fraction(k * k, 2 * d) - (k if i in B else 0)
    return reduce_to_basis(d, n, raw)


@lru_cache(maxsize=None)
def class_Dp(d: int, n: int) -> DivClass:
    """Maps sending a fixed base point of the source to a fixed point of the target."""
    if d == 0:
        return DivClass.unit(d, n, G)
    raw = {GeneratorId("D", B, k): Fraction(k * k, 2 * d) for B, k in _positive_labels(d, n)}
    return reduce_to_basis(d, n, raw)


@lru_cache(maxsize=None)
def class_fix(d: int, n: int, i: int) -> DivClass:
    return class_H(d, n, i, 1) + class_H(d, n, i, 2)


@lru_cache(maxsize=None)
def class_psi(d: int, n: int, i: int, pair: Optional[Tuple[int, int]] = None) -> DivClass:
    """Cotangent line class at marking i.

    For n >= 3 it is the sum of D_{B,k} separating i from the auxiliary pair
    (a, b); for n in {1, 2} it is -2 H_{i,1} plus the D_{B,k} with i in B.
    """
    check_marking(n, i)
    if n >= 3:
        if pair is None:
            pair = tuple(j for j in range(1, n + 1) if j != i)[:2]
        a, b = pair
        if len({i, a, b}) != 3 or not (1 <= a <= n and 1 <= b <= n):
            raise InvalidLabelError(f"Auxiliary pair {pair} invalid for marking {i}")
        raw: RawVector = {}
        for k in range(d + 1):
            for size in range(n + 1):
                for B in combinations(range(1, n + 1), size):
                    if not is_valid_label(d, n, B, k):
                        continue
                    inside = i in B and a not in B and b not in B
                    outside = i not in B and a in B and b in B
                    if inside or outside:
                        raw[GeneratorId("D", B, k)] = Fraction(1)
        return reduce_to_basis(d, n, raw)
    raw = {
        GeneratorId("D", B, k): Fraction(1)
        for k in range(d + 1)
        for size in range(1, n + 1)
        for B in combinations(range(1, n + 1), size)
        if i in B and is_valid_label(d, n, B, k)
    }
    return reduce_to_basis(d, n, raw) - 2 * class_H(d, n, i, 1)


@lru_cache(maxsize=None)
def class_per(d: int, n: int, m: int) -> DivClass:
    """Maps with an m-periodic point of fixed nonzero multiplier; independent of the multiplier."""
    if d < 1:
        raise InvalidLabelError(f"Periodic-point divisors need d >= 1, got {d}")
    if m < 1:
        raise InvalidLabelError(f"Period must be positive, got {m}")
    scale = m * d ** (m - 1)
    raw = {GeneratorId("D", B, k): Fraction(scale * k) for B, k in _positive_labels(d, n)}
    return reduce_to_basis(d, n, raw)


@lru_cache(maxsize=None)
def class_resultant(d: int, n: int) -> DivClass:
    raw = {GeneratorId("D", B, k): Fraction(k * k) for B, k in _positive_labels(d, n)}
    return reduce_to_basis(d, n, raw)
