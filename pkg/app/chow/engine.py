"""Recursive top-intersection numbers on M(d|w).

Each factor is reduced modulo the unstable span, then one boundary generator
D_{B,k} is split off at a time. On D_{B,k} the space is a product of a
smaller quotient M(d-k|w_A, k + w(B)) (the A-side) and a stable-maps space
M_{0,|B|+1}(P^1,k) (the B-side); the B-side is integrated equivariantly and
every t^2 it leaves behind becomes a square of H_{p,1} on the A-side. When no
boundary generator is left, powers of H and G are rewritten until a base case
is reached.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from app.chow.divisors import class_H, class_Hprime, class_psi
from app.chow.equivloc import BAtom, EquivPoly, canonical_bdry, ev, integrate_expr
from app.chow.equivloc import psi as psi_atom
from app.chow.picard import (
    G,
    H,
    DivClass,
    GeneratorId,
    RawVector,
    check_admissible,
    reduce_to_basis,
    to_quotient,
)
from app.chow.weights import WeightTuple, restrict_weights
from app.core.exceptions import (
    DimensionMismatchError,
    EmptySpaceError,
    InvalidInputError,
    InvalidLabelError,
    ensure,
)
from app.core.logging_config import get_logger

logger = get_logger("engine")


@dataclass(frozen=True)
class IntersectionQuery:
    """Factors on Y_{d,n} whose product is integrated over M(d|w)."""

    wt: WeightTuple
    factors: Tuple[DivClass, ...] = ()


def validate_query(query: IntersectionQuery) -> None:
    wt = query.wt
    check_admissible(wt)
    for factor in query.factors:
        if (factor.d, factor.n) != (wt.d, wt.n):
            raise InvalidLabelError(
                f"Factor on Y_{{{factor.d},{factor.n}}} does not live on {wt}"
            )
    if len(query.factors) != wt.dimension:
        raise DimensionMismatchError(
            f"{wt} has dimension {wt.dimension} but {len(query.factors)} factors were given"
        )
    if wt.d == 0 and sum(wt.weights, Fraction(0)) < 1:
        raise EmptySpaceError(f"{wt} is empty: the weights sum to less than 1")


@dataclass
class MemoStats:
    hits: int = 0
    misses: int = 0


_memo: Dict[Tuple, Fraction] = {}
_stats = MemoStats()


def memo_stats() -> Dict[str, int]:
    return {"hits": _stats.hits, "misses": _stats.misses, "size": len(_memo)}


def clear_memo() -> None:
    _memo.clear()
    _stats.hits = _stats.misses = 0


class Restriction(NamedTuple):
    """A factor restricted to D_{B,k}: one class on the A-side plus B-side atoms."""

    a_side: DivClass
    b_side: Tuple[Tuple[Fraction, BAtom], ...]


class RestrictedTerm(NamedTuple):
    coefficient: Fraction
    side_query: IntersectionQuery
    side_expr: Tuple[BAtom, ...]


@dataclass(frozen=True)
class BoundarySplit:
    """Bookkeeping for the two sides of D_{B,k}.

    A-side markings are the complement of B in order, then the node p;
    B-side markings are B in order, then the node p'.
    """

    wt: WeightTuple
    B: Tuple[int, ...]
    k: int
    a_wt: WeightTuple
    a_index: Dict[int, int]
    b_index: Dict[int, int]

    @property
    def p(self) -> int:
        return self.a_wt.n

    @property
    def n_b(self) -> int:
        return len(self.B) + 1

    @property
    def b_dimension(self) -> int:
        return 2 * self.k - 2 + self.n_b

    def a_class(self, raw: RawVector) -> DivClass:
        return reduce_to_basis(self.a_wt.d, self.a_wt.n, raw)


def split_boundary(wt: WeightTuple, pivot: GeneratorId) -> BoundarySplit:
    ensure(pivot.is_boundary, f"Cannot split along {pivot}")
    a_wt = restrict_weights(wt, pivot.B, pivot.k)
    A = [i for i in range(1, wt.n + 1) if i not in pivot.B]
    return BoundarySplit(
        wt,
        pivot.B,
        pivot.k,
        a_wt,
        {a: j + 1 for j, a in enumerate(A)},
        {b: j + 1 for j, b in enumerate(pivot.B)},
    )


def _restrict_generator(split: BoundarySplit, pivot: GeneratorId, g: GeneratorId) -> Tuple[DivClass, List[Tuple[Fraction, BAtom]]]:
    d_a, n_a, p = split.a_wt.d, split.a_wt.n, split.p
    B, k, d = split.B, split.k, split.wt.d
    if g.kind == "H":
        return class_H(d_a, n_a, split.a_index.get(1, p), 1), []
    if g.kind == "G":
        return DivClass.unit(d_a, n_a, G), []
    if g == pivot:
        a_side = -class_psi(d_a, n_a, p)
        if not B and 2 * k <= d:
            a_side = a_side + DivClass.unit(d_a, n_a, GeneratorId("D", (), k))
        return a_side, [(Fraction(-1), psi_atom(split.n_b))]
    raw: RawVector = {}
    b_side: List[Tuple[Fraction, BAtom]] = []
    Bp, kp = set(g.B), g.k
    if Bp <= set(split.a_index) and kp <= d - k:
        label = GeneratorId.boundary((split.a_index[i] for i in g.B), kp)
        raw[label] = raw.get(label, Fraction(0)) + 1
    if set(B) <= Bp and k <= kp:
        label = GeneratorId.boundary(
            [split.a_index[i] for i in g.B if i not in B] + [p], kp - k
        )
        raw[label] = raw.get(label, Fraction(0)) + 1
    if Bp <= set(B) and kp <= k and (kp < k or Bp != set(B)):
        atom = canonical_bdry(split.n_b, k, [split.b_index[i] for i in g.B], kp)
        b_side.append((Fraction(1), atom))
    return split.a_class(raw), b_side


def restrict_class(wt: WeightTuple, pivot: GeneratorId, cls: DivClass) -> Restriction:
    """Restriction of a class on Y_{d,n} to the boundary divisor ``pivot``."""
    split = split_boundary(wt, pivot)
    a_side = DivClass.zero(split.a_wt.d, split.a_wt.n)
    b_side: Dict[BAtom, Fraction] = {}
    for g, c in cls.terms:
        a_part, b_part = _restrict_generator(split, pivot, g)
        a_side = a_side + a_part * c
        for coef, atom in b_part:
            b_side[atom] = b_side.get(atom, Fraction(0)) + coef * c
    terms = tuple(sorted(((c, a) for a, c in b_side.items() if c != 0), key=lambda t: t[1].sort_key()))
    return Restriction(a_side, terms)


def restrict_evaluation(wt: WeightTuple, pivot: GeneratorId, i: int, axis: int) -> Restriction:
    """Restriction of H_{i,axis} to ``pivot`` without expanding it in the basis.

    The source coordinate lives on the A-side; for i in B the target
    coordinate is the B-side evaluation at i.
    """
    split = split_boundary(wt, pivot)
    d_a, n_a = split.a_wt.d, split.a_wt.n
    if axis not in (1, 2):
        raise InvalidLabelError(f"Evaluation axis must be 1 or 2, got {axis}")
    if not 1 <= i <= wt.n:
        raise InvalidLabelError(f"Marking index {i} out of range 1..{wt.n}")
    if i in split.b_index:
        if axis == 1:
            return Restriction(class_H(d_a, n_a, split.p, 1), ())
        return Restriction(DivClass.zero(d_a, n_a), ((Fraction(1), ev(split.b_index[i])),))
    return Restriction(class_H(d_a, n_a, split.a_index[i], axis), ())


def _diagonal(split: BoundarySplit) -> Restriction:
    a_wt = split.a_wt
    return Restriction(
        class_H(a_wt.d, a_wt.n, split.p, 2), ((Fraction(1), ev(split.n_b)),)
    )


def restrict_monomial(
    wt: WeightTuple, pivot: GeneratorId, others: Sequence[Restriction]
) -> List[RestrictedTerm]:
    """Expand a product of restricted factors, with the diagonal appended, into side terms."""
    split = split_boundary(wt, pivot)
    choices = []
    for restriction in list(others) + [_diagonal(split)]:
        options: List[Tuple[Fraction, Optional[DivClass], Optional[BAtom]]] = []
        if not restriction.a_side.is_zero:
            options.append((Fraction(1), restriction.a_side, None))
        options.extend((c, None, atom) for c, atom in restriction.b_side)
        if not options:
            return []
        choices.append(options)
    terms = []
    for picks in product(*choices):
        coef = Fraction(1)
        a_factors: List[DivClass] = []
        atoms: List[BAtom] = []
        for c, cls, atom in picks:
            coef *= c
            if cls is not None:
                a_factors.append(cls)
            else:
                atoms.append(atom)
        if len(atoms) < split.b_dimension:
            continue
        terms.append(RestrictedTerm(coef, IntersectionQuery(split.a_wt, tuple(a_factors)), tuple(atoms)))
    return terms


def combine_sides(side_query: IntersectionQuery, b_poly: EquivPoly) -> Fraction:
    """Pair a B-side equivariant integral with the A-side via t^2 = H_{p,1}^2."""
    wt = side_query.wt
    total = Fraction(0)
    for exponent, coef in b_poly.coeffs:
        ensure(exponent % 2 == 0, f"Odd power t^{exponent} survived on the B-side")
        factors = side_query.factors + (class_H(wt.d, wt.n, wt.n, 1),) * exponent
        if len(factors) != wt.dimension:
            continue
        total += coef * _evaluate(wt, factors)
    return total


def integrate_restricted(wt: WeightTuple, pivot: GeneratorId, others: Sequence[Restriction]) -> Fraction:
    """Integral over D_pivot of the product of restricted factors."""
    split = split_boundary(wt, pivot)
    if split.a_wt.dimension < 0:
        return Fraction(0)
    ensure(
        len(others) + 1 == wt.dimension,
        f"Restriction to {pivot} needs {wt.dimension - 1} factors, got {len(others)}",
    )
    total = Fraction(0)
    for term in restrict_monomial(wt, pivot, others):
        b_poly = integrate_expr(split.n_b, split.k, term.side_expr)
        if not b_poly.is_zero:
            total += term.coefficient * combine_sides(term.side_query, b_poly)
    return total


def _restricted_integral(wt: WeightTuple, pivot: GeneratorId, others: Sequence[DivClass]) -> Fraction:
    if restrict_weights(wt, pivot.B, pivot.k).dimension < 0:
        return Fraction(0)
    return integrate_restricted(wt, pivot, [restrict_class(wt, pivot, f) for f in others])


_BASE_SPACES = {(0, 2), (0, 3), (1, 1)}


def base_case(wt: WeightTuple, monomial: Sequence[GeneratorId]) -> Fraction:
    """Intersection numbers of the spaces where the recursion bottoms out.

    M(0|a,b) is a point; on M(1|w) the class H has degree -1/4 and D_{0,1}
    degree 1; on M(0|c,d,e) the degree of G depends on how the sorted
    weights compare.
    """
    d, n = wt.d, wt.n
    monomial = tuple(monomial)
    if (d, n) == (0, 2) and not monomial:
        return Fraction(1)
    if (d, n) == (1, 1) and monomial == (H,):
        return Fraction(-1, 4)
    if (d, n) == (1, 1) and monomial == (GeneratorId("D", (), 1),):
        return Fraction(1)
    if (d, n) == (0, 3) and monomial == (G,):
        c, m, e = sorted(wt.weights)
        if c + m > e + 1:
            return Fraction(1)
        flags = int(c + e < 1 + m) + int(m + e < 1 + c)
        return Fraction(1 - flags, 2)
    raise InvalidInputError(f"No base case for {wt} with {[str(g) for g in monomial]}")


def _pure_monomials(factors: Sequence[DivClass]) -> Iterator[Tuple[Fraction, int, int]]:
    for picks in product(*(f.terms for f in factors)):
        coef = Fraction(1)
        a = b = 0
        for g, c in picks:
            ensure(not g.is_boundary, f"Boundary generator {g} reached the H/G reduction")
            coef *= c
            if g.kind == "H":
                a += 1
            else:
                b += 1
        yield coef, a, b


def reduce_H_powers(wt: WeightTuple, a: int, b: int) -> Fraction:
    """Integral of H^a G^b on M(d|w), rewriting powers until a base case remains.

    For d != 1, (1 - d^2) H^2 = R (2d H + R) with R = H'_1; for d = 0,
    G^2 = H_{1,1}^2, which is pure boundary once n >= 3.
    """
    d, n = wt.d, wt.n
    ensure(a + b == wt.dimension, f"H^{a} G^{b} is not top-degree on {wt}")
    unit_H = DivClass.unit(d, n, H)
    unit_G = DivClass.unit(d, n, G)
    rest = (unit_G,) * b
    if a >= 2 and d != 1:
        R = class_Hprime(d, n, 1)
        scale = Fraction(1, 1 - d * d)
        head = (unit_H,) * (a - 2)
        return scale * (
            2 * d * _evaluate(wt, head + (unit_H, R) + rest)
            + _evaluate(wt, head + (R, R) + rest)
        )
    if b >= 2:
        h11 = class_H(d, n, 1, 1)
        return _evaluate(wt, (unit_H,) * a + (h11, h11) + (unit_G,) * (b - 2))
    ensure(
        (d, n) in _BASE_SPACES,
        f"H^{a} G^{b} on {wt} survived the power reduction without reaching a base case",
    )
    return base_case(wt, (H,) * a + (G,) * b)


def choose_pivot(factors: Sequence[DivClass]) -> Optional[GeneratorId]:
    """Boundary generator with the largest k, ties going to the smallest B."""
    candidates = {g for f in factors for g in f.support if g.is_boundary}
    if not candidates:
        return None
    return min(candidates, key=lambda g: (-g.k, len(g.B), g.B))


def _reduce_factors(wt: WeightTuple, factors: Sequence[DivClass]) -> Tuple[DivClass, ...]:
    return tuple(to_quotient(f, wt) for f in factors)


def _evaluate(wt: WeightTuple, factors: Sequence[DivClass], pivot: Optional[GeneratorId] = None) -> Fraction:
    try:
        reduced = _reduce_factors(wt, factors)
    except EmptySpaceError:
        logger.warning(f"Empty quotient {wt} met during recursion; contributing 0")
        return Fraction(0)
    if any(f.is_zero for f in reduced):
        return Fraction(0)
    key = (wt, tuple(sorted(f.terms for f in reduced)))
    if pivot is None and key in _memo:
        _stats.hits += 1
        logger.debug(f"Memo hit on {wt}")
        return _memo[key]
    _stats.misses += 1
    logger.debug(f"Evaluating {len(reduced)} factors on {wt}")
    value = _evaluate_reduced(wt, reduced, pivot)
    if pivot is None:
        _memo[key] = value
    return value


def _evaluate_reduced(wt: WeightTuple, reduced: Tuple[DivClass, ...], pivot: Optional[GeneratorId]) -> Fraction:
    if pivot is None:
        pivot = choose_pivot(reduced)
    if pivot is None:
        return sum(
            (c * reduce_H_powers(wt, a, b) for c, a, b in _pure_monomials(reduced)),
            Fraction(0),
        )
    position = next(j for j, f in enumerate(reduced) if pivot in f.support)
    factor = reduced[position]
    others = reduced[:position] + reduced[position + 1 :]
    c = factor.coeff(pivot)
    remainder = factor - DivClass.unit(wt.d, wt.n, pivot) * c
    total = c * _restricted_integral(wt, pivot, others)
    if not remainder.is_zero:
        total += _evaluate(wt, reduced[:position] + (remainder,) + reduced[position + 1 :])
    return total


def _intersect_term(args: Tuple[WeightTuple, Tuple[DivClass, ...]]) -> Fraction:
    wt, factors = args
    return _evaluate(wt, factors)


def intersect(query: IntersectionQuery, pivot: Optional[GeneratorId] = None, jobs: int = 1) -> Fraction:
    """Top-intersection number of ``query.factors`` on M(d|w).

    ``pivot`` forces the first boundary generator split off; ``jobs > 1``
    evaluates the terms of the first factor in worker processes.
    """
    validate_query(query)
    wt = query.wt
    reduced = _reduce_factors(wt, query.factors)
    if pivot is not None:
        if not any(pivot in f.support for f in reduced):
            raise InvalidInputError(f"Pivot {pivot} does not occur in the reduced factors")
        return _evaluate(wt, reduced, pivot)
    if jobs > 1 and reduced and len(reduced[0].terms) > 1:
        head, tail = reduced[0], reduced[1:]
        work = [(wt, (DivClass.unit(wt.d, wt.n, g),) + tail) for g, _ in head.terms]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_intersect_term, work))
        return sum((c * v for (_, c), v in zip(head.terms, values)), Fraction(0))
    return _evaluate(wt, reduced)
