"""Weight tuples, admissibility and the GIT stability predicates."""
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Tuple

from app.core.exceptions import InvalidLabelError, ensure

Marking = int
MarkingSet = Tuple[Marking, ...]


def canonical_subset(B: Iterable[Marking]) -> MarkingSet:
    """Sorted, duplicate-free tuple of marking indices."""
    return tuple(sorted(set(B)))


@dataclass(frozen=True)
class WeightTuple:
    """Degree ``d`` of the self-map together with the marking weights."""

    d: int
    weights: Tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        if self.d < 0:
            raise InvalidLabelError(f"Degree must be nonnegative, got {self.d}")
        weights = tuple(Fraction(w) for w in self.weights)
        if any(w < 0 for w in weights):
            raise InvalidLabelError(f"Weights must be nonnegative, got {weights}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def of(cls, d: int, weights: Sequence = ()) -> "WeightTuple":
        return cls(d, tuple(Fraction(w) for w in weights))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def dimension(self) -> int:
        """Dimension 2d - 2 + n of the quotient."""
        return 2 * self.d - 2 + self.n

    @property
    def denominator_lcm(self) -> int:
        return lcm(1, *(w.denominator for w in self.weights))

    def weight_of(self, B: Iterable[Marking]) -> Fraction:
        return sum((self.weights[i - 1] for i in B), Fraction(0))

    def __str__(self) -> str:
        if not self.weights:
            return f"M({self.d},0)"
        return f"M({self.d}|{','.join(str(w) for w in self.weights)})"


def total_weight(wt: WeightTuple) -> Fraction:
    """d_T = d + 1 + sum of the weights."""
    return wt.d + 1 + sum(wt.weights, Fraction(0))


def is_admissible(wt: WeightTuple) -> bool:
    """Some integer multiple k makes k*d_T odd, i.e. L*d_T is an odd integer.

    Every admissible k is a multiple of L, the lcm of the weight denominators,
    and m*(L*d_T) is odd for some m exactly when L*d_T is.
    """
    scaled = wt.denominator_lcm * total_weight(wt)
    return scaled.denominator == 1 and scaled.numerator % 2 == 1


def is_admissible_bruteforce(wt: WeightTuple) -> bool:
    """Search k = 1..2L directly; the closed test above must agree."""
    bound = 2 * wt.denominator_lcm
    for k in range(1, bound + 1):
        if all((k * w).denominator == 1 for w in wt.weights):
            value = k * (wt.d + 1) + sum(k * w for w in wt.weights)
            if value.denominator == 1 and value.numerator % 2 == 1:
                return True
    return False


def is_valid_label(d: int, n: int, B: Iterable[Marking], k: int) -> bool:
    B = tuple(B)
    if any(i < 1 or i > n for i in B) or len(set(B)) != len(B):
        return False
    return 0 <= k <= d and (k >= 1 or len(B) >= 2)


def check_label(d: int, n: int, B: Iterable[Marking], k: int) -> MarkingSet:
    B = canonical_subset(B)
    if not is_valid_label(d, n, B, k):
        raise InvalidLabelError(f"Invalid boundary label B={list(B)}, k={k} on Y_{{{d},{n}}}")
    return B


def check_marking(n: int, i: Marking) -> None:
    if not 1 <= i <= n:
        raise InvalidLabelError(f"Marking index {i} out of range 1..{n}")


def boundary_stable(wt: WeightTuple, B: Iterable[Marking], k: int) -> bool:
    """D_{B,k} survives the quotient iff k + sum_B w < d_T / 2."""
    B = check_label(wt.d, wt.n, B, k)
    lhs = k + wt.weight_of(B)
    half = total_weight(wt) / 2
    ensure(lhs != half, f"Stability equality k + w(B) = d_T/2 for B={list(B)}, k={k} on {wt}")
    return lhs < half


def fix_stable(wt: WeightTuple, i: Marking) -> bool:
    """D_{i=fix} survives the quotient iff w_i < d_T / 2 - 1."""
    check_marking(wt.n, i)
    w = wt.weights[i - 1]
    bound = total_weight(wt) / 2 - 1
    ensure(w != bound, f"Stability equality for fixed-point divisor {i} on {wt}")
    return w < bound


def restrict_weights(wt: WeightTuple, B: Iterable[Marking], k: int) -> WeightTuple:
    """Weights of the horizontal side of D_{B,k}.

    The markings outside B keep their order and weights; the gluing marking is
    appended last with weight k + sum_B w.
    """
    B = check_label(wt.d, wt.n, B, k)
    if not boundary_stable(wt, B, k):
        raise InvalidLabelError(f"D_{{{list(B)},{k}}} is unstable on {wt}")
    rest = tuple(wt.weights[i - 1] for i in range(1, wt.n + 1) if i not in B)
    return WeightTuple(wt.d - k, rest + (k + wt.weight_of(B),))
