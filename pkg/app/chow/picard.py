"""Rational Picard groups of Y_{d,n} and of the quotients M(d|w).

Generators are the boundary divisors D_{B,k}, the evaluation class H (only
for n in {1, 2}) and the constant-map class G (only for d = 0). Relations
among the boundary divisors are the pulled back Keel relations of M_{0,n}.
Classes are stored on a fixed basis, so equality of classes is equality of
coefficients.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from sympy import Matrix, Rational

from app.chow.weights import (
    MarkingSet,
    WeightTuple,
    boundary_stable,
    canonical_subset,
    fix_stable,
    is_admissible,
    total_weight,
)
from app.core.exceptions import (
    EmptySpaceError,
    InadmissibleWeightsError,
    InvalidLabelError,
    ensure,
)

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class GeneratorId:
    """A generator of Pic(Y_{d,n}): boundary ``D``, evaluation ``H`` or constant ``G``."""

    kind: str
    B: MarkingSet = ()
    k: int = 0

    @classmethod
    def boundary(cls, B: Iterable[int], k: int) -> "GeneratorId":
        return cls("D", canonical_subset(B), k)

    @property
    def is_boundary(self) -> bool:
        return self.kind == "D"

    def sort_key(self) -> Tuple:
        if self.kind == "D":
            return (0, self.k, len(self.B), self.B)
        return (1,) if self.kind == "H" else (2,)

    @property
    def key(self) -> str:
        if self.kind == "D":
            return f"D|B={','.join(str(i) for i in self.B)}|k={self.k}"
        return self.kind

    def __str__(self) -> str:
        return self.key

    def __lt__(self, other: "GeneratorId") -> bool:
        return self.sort_key() < other.sort_key()


H = GeneratorId("H")
G = GeneratorId("G")

RawVector = Dict[GeneratorId, Fraction]


@dataclass(frozen=True)
class DivClass:
    """A divisor class on Y_{d,n} written on the canonical basis."""

    d: int
    n: int
    terms: Tuple[Tuple[GeneratorId, Fraction], ...] = ()

    @classmethod
    def from_map(cls, d: int, n: int, coeffs: Mapping[GeneratorId, Scalar]) -> "DivClass":
        items = [(g, Fraction(c)) for g, c in coeffs.items() if c != 0]
        return cls(d, n, tuple(sorted(items, key=lambda item: item[0].sort_key())))

    @classmethod
    def zero(cls, d: int, n: int) -> "DivClass":
        return cls(d, n, ())

    @classmethod
    def unit(cls, d: int, n: int, g: GeneratorId) -> "DivClass":
        return cls(d, n, ((g, Fraction(1)),))

    def as_dict(self) -> RawVector:
        return dict(self.terms)

    def coeff(self, g: GeneratorId) -> Fraction:
        return self.as_dict().get(g, Fraction(0))

    @property
    def support(self) -> List[GeneratorId]:
        return [g for g, _ in self.terms]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _check_space(self, other: "DivClass") -> None:
        if (self.d, self.n) != (other.d, other.n):
            raise InvalidLabelError(
                f"Cannot combine classes on Y_{{{self.d},{self.n}}} and Y_{{{other.d},{other.n}}}"
            )

    def __add__(self, other: "DivClass") -> "DivClass":
        self._check_space(other)
        total = self.as_dict()
        for g, c in other.terms:
            total[g] = total.get(g, Fraction(0)) + c
        return DivClass.from_map(self.d, self.n, total)

    def __neg__(self) -> "DivClass":
        return DivClass(self.d, self.n, tuple((g, -c) for g, c in self.terms))

    def __sub__(self, other: "DivClass") -> "DivClass":
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> "DivClass":
        return DivClass.from_map(self.d, self.n, {g: c * scalar for g, c in self.terms})

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{g}" for g, c in self.terms)


def _boundary_labels(d: int, n: int) -> List[Tuple[MarkingSet, int]]:
    labels = []
    for k in range(d + 1):
        for size in range(n + 1):
            if k == 0 and size < 2:
                continue
            for B in combinations(range(1, n + 1), size):
                labels.append((B, k))
    return labels


@lru_cache(maxsize=None)
def generators(d: int, n: int) -> Tuple[GeneratorId, ...]:
    """Boundary labels sorted by (k, |B|, B), then H (n in {1,2}), then G (d = 0)."""
    if d < 0 or n < 0:
        raise InvalidLabelError(f"Invalid space Y_{{{d},{n}}}")
    gens = [GeneratorId("D", B, k) for B, k in _boundary_labels(d, n)]
    if n in (1, 2):
        gens.append(H)
    if d == 0:
        gens.append(G)
    return tuple(gens)


@lru_cache(maxsize=None)
def removed_generators(d: int, n: int) -> Tuple[GeneratorId, ...]:
    """D_{B,0} with B in {2..n}, |B| = 2 and B != {n-1, n}."""
    last_pair = (n - 1, n)
    return tuple(
        GeneratorId("D", B, 0) for B in combinations(range(2, n + 1), 2) if B != last_pair
    )


@lru_cache(maxsize=None)
def basis(d: int, n: int) -> Tuple[GeneratorId, ...]:
    removed = set(removed_generators(d, n))
    return tuple(g for g in generators(d, n) if g not in removed)


def rank_formula(d: int, n: int) -> int:
    """Closed rank formula; it only agrees with len(basis) for n >= 3."""
    return (
        2**n * (d + 1)
        - n * (n - 1) // 2
        - 1
        + (1 if n == 1 else 0)
        + (1 if n == 2 else 0)
        + (1 if d == 0 else 0)
    )


def m0n_boundary_pullback(d: int, n: int, A: Iterable[int], B: Iterable[int]) -> RawVector:
    """Pullback of the M_{0,n} boundary divisor D(A;B): sum_m D_{A,m} + sum_m D_{B,m}."""
    A, B = canonical_subset(A), canonical_subset(B)
    if set(A) & set(B) or set(A) | set(B) != set(range(1, n + 1)) or min(len(A), len(B)) < 2:
        raise InvalidLabelError(f"Invalid partition A={list(A)}, B={list(B)} of 1..{n}")
    raw: RawVector = {}
    for side in (A, B):
        for m in range(d + 1):
            raw[GeneratorId("D", side, m)] = Fraction(1)
    return raw


def _cross_ratio_divisor(d: int, n: int, a: int, b: int, c: int, e: int) -> RawVector:
    """Sum of pulled back D(A;B) over partitions with a, b in A and c, e in B."""
    rest = [i for i in range(1, n + 1) if i not in (a, b, c, e)]
    raw: RawVector = {}
    for size in range(len(rest) + 1):
        for extra in combinations(rest, size):
            A = (a, b) + extra
            B = tuple(i for i in range(1, n + 1) if i not in A)
            for g, coef in m0n_boundary_pullback(d, n, A, B).items():
                raw[g] = raw.get(g, Fraction(0)) + coef
    return raw


def _difference(left: RawVector, right: RawVector) -> RawVector:
    out = dict(left)
    for g, c in right.items():
        out[g] = out.get(g, Fraction(0)) - c
    return {g: c for g, c in out.items() if c != 0}


@lru_cache(maxsize=None)
def _keel_relations(d: int, n: int) -> Tuple[Tuple[Tuple[GeneratorId, Fraction], ...], ...]:
    relations = []
    for i, j, k, l in combinations(range(1, n + 1), 4):
        base = _cross_ratio_divisor(d, n, i, j, k, l)
        for other in (_cross_ratio_divisor(d, n, i, k, j, l), _cross_ratio_divisor(d, n, i, l, j, k)):
            relations.append(tuple(sorted(_difference(base, other).items(), key=lambda t: t[0].sort_key())))
    return tuple(relations)


def keel_relations(d: int, n: int) -> List[RawVector]:
    """Raw relation vectors over generators(d, n); empty for n < 4."""
    return [dict(rel) for rel in _keel_relations(d, n)]


def to_sympy(value: Fraction) -> Rational:
    return Rational(value.numerator, value.denominator)


def from_sympy(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def row_reduce(
    rows: List[Mapping[GeneratorId, Fraction]], columns: List[GeneratorId]
) -> List[Tuple[GeneratorId, RawVector]]:
    """Reduced row echelon form of ``rows`` with the given column order.

    Returns (pivot generator, row) pairs; each row has coefficient 1 at its
    pivot and 0 at every other pivot.
    """
    if not rows:
        return []
    index = {g: c for c, g in enumerate(columns)}
    matrix = Matrix(
        [[to_sympy(Fraction(row.get(g, 0))) for g in columns] for row in rows]
    )
    for row in rows:
        ensure(all(g in index for g in row), "Relation outside the column set")
    reduced, pivots = matrix.rref()
    result = []
    for r, col in enumerate(pivots):
        vector = {
            columns[c]: from_sympy(reduced[r, c])
            for c in range(len(columns))
            if reduced[r, c] != 0
        }
        result.append((columns[col], vector))
    return result


@lru_cache(maxsize=None)
def _elimination(d: int, n: int) -> Dict[GeneratorId, Tuple[Tuple[GeneratorId, Fraction], ...]]:
    """Expansion of every removed generator in the basis."""
    removed = list(removed_generators(d, n))
    if not removed:
        return {}
    columns = removed + list(basis(d, n))
    echelon = row_reduce(keel_relations(d, n), columns)
    ensure(
        [pivot for pivot, _ in echelon] == removed,
        f"Keel relations on Y_{{{d},{n}}} do not eliminate the removed generators",
    )
    substitution = {}
    for pivot, row in echelon:
        substitution[pivot] = tuple((g, -c) for g, c in row.items() if g != pivot)
    return substitution


def reduce_to_basis(d: int, n: int, raw: Mapping[GeneratorId, Scalar]) -> DivClass:
    """Unique basis representative of a raw vector over generators(d, n)."""
    known = set(generators(d, n))
    substitution = _elimination(d, n)
    out: RawVector = {}
    for g, c in raw.items():
        if c == 0:
            continue
        if g not in known:
            raise InvalidLabelError(f"{g} is not a generator of Pic(Y_{{{d},{n}}})")
        if g in substitution:
            for h, e in substitution[g]:
                out[h] = out.get(h, Fraction(0)) + Fraction(c) * e
        else:
            out[g] = out.get(g, Fraction(0)) + Fraction(c)
    return DivClass.from_map(d, n, out)


ProfileKey = Tuple[MarkingSet, int]


@dataclass
class Profile:
    """Intersection numbers of a class with the test curves C_{B,k} and C_G."""

    d: int
    n: int
    values: Dict[ProfileKey, Fraction] = field(default_factory=dict)
    g_value: Optional[Fraction] = None

    def __getitem__(self, key: Tuple[Iterable[int], int]) -> Fraction:
        B, k = key
        return self.values.get((canonical_subset(B), k), Fraction(0))


@lru_cache(maxsize=None)
def profile_keys(d: int, n: int) -> Tuple[ProfileKey, ...]:
    keys = []
    for k in range(d + 1):
        for size in range(n + 1):
            if k == 0 and size == 0:
                continue
            for B in combinations(range(1, n + 1), size):
                keys.append((B, k))
    return tuple(keys)


def pairing(g: GeneratorId, B: MarkingSet, k: int, d: int) -> Fraction:
    """Intersection number of the test curve C_{B,k} with a generator."""
    if g.kind == "H":
        return Fraction(1 if 1 in B else 0)
    if g.kind == "G":
        return Fraction(0)
    value = Fraction(0)
    if g.B == B and g.k == k:
        value += 2
    if g.k == 0 and len(g.B) == 2 and len(set(g.B) & set(B)) == 1:
        value += 1
    if not g.B and g.k == 1:
        value += 2 * k * (d - k)
    return value


def profile_of(cls: DivClass) -> Profile:
    profile = Profile(cls.d, cls.n)
    for B, k in profile_keys(cls.d, cls.n):
        profile.values[(B, k)] = sum(
            (c * pairing(g, B, k, cls.d) for g, c in cls.terms), Fraction(0)
        )
    if cls.d == 0:
        profile.g_value = cls.coeff(G)
    return profile


def identify(p: Profile) -> DivClass:
    """The unique basis class with profile ``p``.

    Coefficients are computed in order: c_G, c_H, the c_{ab,0} family, then
    every other boundary coefficient from
    c_{B,k} = (N_{B,k} - k(d-k)/d N_{0,1} - chi_B(1) c_H - sum_{a not in B, b in B} c_{ab,0}) / 2.
    """
    d, n = p.d, p.n
    N = p.__getitem__
    coeffs: RawVector = {}
    if d == 0:
        coeffs[G] = Fraction(p.g_value or 0)

    c_H = Fraction(0)
    if n == 1:
        c_H = N(((1,), 0))
    elif n == 2:
        c_H = N(((1,), 0)) - N(((2,), 0))
    if n in (1, 2):
        coeffs[H] = c_H

    pairs: Dict[Tuple[int, int], Fraction] = {}
    if n == 2:
        pairs[(1, 2)] = N(((2,), 0))
    elif n >= 3:
        middle = range(2, n - 1)
        for j in middle:
            pairs[(1, j)] = N(((j,), 0))
        alt = sum((N(((j,), 0)) for j in middle), Fraction(0))
        first, penult, last = N(((1,), 0)), N(((n - 1,), 0)), N(((n,), 0))
        pairs[(1, n - 1)] = (first - alt + penult - last) / 2
        pairs[(1, n)] = (first - alt - penult + last) / 2
        pairs[(n - 1, n)] = (-first + alt + penult + last) / 2

    def c_pair(a: int, b: int) -> Fraction:
        return pairs.get((min(a, b), max(a, b)), Fraction(0))

    for g in basis(d, n):
        if not g.is_boundary:
            continue
        if g.k == 0 and len(g.B) == 2:
            coeffs[g] = c_pair(*g.B)
            continue
        value = N((g.B, g.k))
        if d > 0:
            value -= Fraction(g.k * (d - g.k), d) * N(((), 1))
        if 1 in g.B:
            value -= c_H
        outside = [a for a in range(1, n + 1) if a not in g.B]
        value -= sum((c_pair(a, b) for a in outside for b in g.B), Fraction(0))
        coeffs[g] = value / 2
    return DivClass.from_map(d, n, coeffs)


@dataclass(frozen=True)
class QuotientData:
    """Relations cutting Pic(M(d|w)) out of Pic(Y_{d,n})."""

    wt: WeightTuple
    unstable_boundary: Tuple[GeneratorId, ...]
    unstable_fix: Tuple[int, ...]
    echelon: Tuple[Tuple[GeneratorId, Tuple[Tuple[GeneratorId, Fraction], ...]], ...]
    surviving: Tuple[GeneratorId, ...]

    @property
    def rank(self) -> int:
        return len(self.surviving)


def check_admissible(wt: WeightTuple) -> None:
    if not is_admissible(wt):
        scaled = wt.denominator_lcm * total_weight(wt)
        raise InadmissibleWeightsError(
            f"{wt} is inadmissible: L*d_T = {wt.denominator_lcm}*{total_weight(wt)} = {scaled} is not odd"
        )


@lru_cache(maxsize=None)
def quotient_data(wt: WeightTuple) -> QuotientData:
    from app.chow.divisors import class_fix

    check_admissible(wt)
    d, n = wt.d, wt.n
    gens = basis(d, n)
    unstable = tuple(g for g in gens if g.is_boundary and not boundary_stable(wt, g.B, g.k))
    unstable_fix = tuple(i for i in range(1, n + 1) if not fix_stable(wt, i))
    rows: List[RawVector] = [{g: Fraction(1)} for g in unstable]
    rows += [class_fix(d, n, i).as_dict() for i in unstable_fix]
    special = [g for g in gens if not g.is_boundary]
    stable = [g for g in gens if g.is_boundary and g not in unstable]
    echelon = row_reduce(rows, special + list(unstable) + stable)
    pivots = {pivot for pivot, _ in echelon}
    ensure(set(unstable) <= pivots, f"Unstable boundary generators not eliminated on {wt}")
    surviving = tuple(g for g in gens if g not in pivots)
    return QuotientData(
        wt,
        unstable,
        unstable_fix,
        tuple((pivot, tuple(row.items())) for pivot, row in echelon),
        surviving,
    )


def to_quotient(cls: DivClass, wt: WeightTuple) -> DivClass:
    """Normal form of ``cls`` modulo unstable boundaries and unstable fixed-point divisors.

    Pivots are chosen with H and G first, so those generators are solved for
    whenever a fixed-point relation contains them.
    """
    if (cls.d, cls.n) != (wt.d, wt.n):
        raise InvalidLabelError(f"Class on Y_{{{cls.d},{cls.n}}} does not live on {wt}")
    data = quotient_data(wt)
    if data.rank == 0 and wt.dimension > 0:
        raise EmptySpaceError(f"Every basis generator of Pic({wt}) vanishes in the quotient")
    vector = cls.as_dict()
    for pivot, row in data.echelon:
        c = vector.get(pivot, Fraction(0))
        if c == 0:
            continue
        for g, e in row:
            vector[g] = vector.get(g, Fraction(0)) - c * e
    ensure(
        all(vector.get(pivot, 0) == 0 for pivot, _ in data.echelon),
        f"Quotient reduction left a pivot on {wt}",
    )
    return DivClass.from_map(wt.d, wt.n, vector)
