"""Pullbacks of divisor classes along composition, self-composition and forgetful maps."""
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Tuple

from app.chow.divisors import class_Dp, class_H
from app.chow.picard import (
    G,
    DivClass,
    GeneratorId,
    RawVector,
    m0n_boundary_pullback,
    reduce_to_basis,
)
from app.core.exceptions import InvalidLabelError


def _accumulate(target: RawVector, raw: Dict[GeneratorId, Fraction], scale: Fraction) -> None:
    for g, c in raw.items():
        target[g] = target.get(g, Fraction(0)) + scale * c


def _check_space(cls: DivClass, d: int, n: int) -> None:
    if (cls.d, cls.n) != (d, n):
        raise InvalidLabelError(
            f"Expected a class on Y_{{{d},{n}}}, got one on Y_{{{cls.d},{cls.n}}}"
        )


def pullback_compose(d1: int, n1: int, d2: int, cls: DivClass) -> Tuple[DivClass, DivClass]:
    """Pull back along Y_{d1,n1} x Y_{d2,0} -> Y_{d1*d2,n1}, (f, g) -> g o f."""
    _check_space(cls, d1 * d2, n1)
    first: RawVector = {}
    second: RawVector = {}
    for g, c in cls.terms:
        if g.kind == "H":
            _accumulate(first, class_H(d1, n1, 1, 1).as_dict(), c)
        elif g.kind == "G":
            if d2 == 0:
                _accumulate(second, {G: Fraction(1)}, c)
            else:
                # d1 == 0: H_{i,2} pulls back to (d2 H_{i,2}, D_p) and G = H_{1,2}
                _accumulate(first, {G: Fraction(d2)}, c)
                _accumulate(second, class_Dp(d2, 0).as_dict(), c)
        else:
            for l in range(d1 + 1):
                if d2 * l == g.k and (l >= 1 or len(g.B) >= 2):
                    _accumulate(first, {GeneratorId("D", g.B, l): Fraction(1)}, c)
            if not g.B and 0 < g.k <= d2:
                _accumulate(second, {GeneratorId("D", (), g.k): Fraction(d1)}, c)
    return reduce_to_basis(d1, n1, first), reduce_to_basis(d2, 0, second)


def _selfcompose_boundary(d: int, n: int, m: int, B: Tuple[int, ...], k: int) -> RawVector:
    if m == 1:
        return {GeneratorId("D", B, k): Fraction(1)}
    raw: RawVector = {}
    if B:
        step = d ** (m - 1)
        if step == 0:
            if k == 0:
                raw[GeneratorId("D", B, 0)] = Fraction(1)
        elif k % step == 0 and k // step <= d:
            raw[GeneratorId("D", B, k // step)] = Fraction(1)
        return raw
    if 1 <= k <= d:
        for size in range(n + 1):
            for S in combinations(range(1, n + 1), size):
                raw[GeneratorId("D", S, k)] = Fraction(d ** (m - 1))
    if d and k % d == 0:
        _accumulate(raw, _selfcompose_boundary(d, n, m - 1, (), k // d), Fraction(1))
    return raw


def pullback_selfcompose(d: int, n: int, m: int, cls: DivClass) -> DivClass:
    """Pull back along f -> f^m from Y_{d^m,n} to Y_{d,n}."""
    if m < 1:
        raise InvalidLabelError(f"Composition power must be positive, got {m}")
    _check_space(cls, d**m, n)
    if m == 1:
        return cls
    raw: RawVector = {}
    for g, c in cls.terms:
        if g.kind == "D":
            _accumulate(raw, _selfcompose_boundary(d, n, m, g.B, g.k), c)
        else:
            _accumulate(raw, {g: Fraction(1)}, c)
    return reduce_to_basis(d, n, raw)


def pullback_forgetful_M0n(d: int, n: int, A: Iterable[int], B: Iterable[int]) -> RawVector:
    """Pullback of D(A;B) along Y_{d,n} -> M_{0,n}; raw, not basis-reduced."""
    return m0n_boundary_pullback(d, n, A, B)


def pullback_forget_last(d: int, n: int, cls: DivClass) -> DivClass:
    """Pull back along Y_{d,n+1} -> Y_{d,n}, forgetting the last marking."""
    _check_space(cls, d, n)
    raw: RawVector = {}
    for g, c in cls.terms:
        if g.kind == "D":
            _accumulate(raw, {g: Fraction(1), GeneratorId("D", g.B + (n + 1,), g.k): Fraction(1)}, c)
        elif g.kind == "H":
            _accumulate(raw, class_H(d, n + 1, 1, 1).as_dict(), c)
        else:
            _accumulate(raw, {G: Fraction(1)}, c)
    return reduce_to_basis(d, n + 1, raw)


def pullback_forget_all(d: int, n: int, cls: DivClass) -> DivClass:
    """Pull back along Y_{d,n} -> Y_{d,0}, forgetting every marking."""
    _check_space(cls, d, 0)
    for m in range(n):
        cls = pullback_forget_last(d, m, cls)
    return cls
