"""Invariant suites run by ``selfcheck``.

The quick level keeps to d <= 2; the full level widens the ranges and adds
randomized d = 3 queries.
"""
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.chow import divisors, engine, equivloc, picard, pullbacks
from app.chow.picard import DivClass, GeneratorId
from app.chow.weights import WeightTuple, is_admissible, is_admissible_bruteforce
from app.core.config import settings
from app.core.exceptions import SelfmapChowError
from app.core.logging_config import get_logger

logger = get_logger("selfcheck")

LEVELS = ("quick", "full")


@dataclass
class SuiteResult:
    name: str
    passed: bool = True
    checks: int = 0
    failures: List[str] = field(default_factory=list)
    seconds: float = 0.0

    def expect(self, condition: bool, message: str) -> None:
        self.checks += 1
        if not condition:
            self.passed = False
            self.failures.append(message)


def _unit(d: int, n: int, g: GeneratorId) -> DivClass:
    return DivClass.unit(d, n, g)


def suite_picard_rank(result: SuiteResult, full: bool) -> None:
    for d in range(4 if full else 3):
        for n in range(3, 6 if full else 5):
            rank = len(picard.basis(d, n))
            result.expect(rank == picard.rank_formula(d, n), f"rank of Y_{d},{n} is {rank}")


def suite_identify_roundtrip(result: SuiteResult, full: bool) -> None:
    for d in range(4 if full else 3):
        for n in range(5 if full else 4):
            for g in picard.basis(d, n):
                back = picard.identify(picard.profile_of(_unit(d, n, g)))
                result.expect(back == _unit(d, n, g), f"identify(profile({g})) on Y_{d},{n} gave {back}")


def suite_admissibility(result: SuiteResult, full: bool, rng: random.Random) -> None:
    for _ in range(200 if full else 60):
        n = rng.randint(0, 3)
        weights = [Fraction(rng.randint(0, 6), rng.randint(1, 4)) for _ in range(n)]
        wt = WeightTuple(rng.randint(0, 3), tuple(weights))
        result.expect(is_admissible(wt) == is_admissible_bruteforce(wt), f"admissibility disagrees on {wt}")


def suite_psi_pairs(result: SuiteResult, full: bool) -> None:
    for d in range(3):
        for n in (3, 4):
            for i in range(1, n + 1):
                others = [j for j in range(1, n + 1) if j != i]
                classes = {divisors.class_psi(d, n, i, pair) for pair in combinations(others, 2)}
                result.expect(len(classes) == 1, f"psi_{i} on Y_{d},{n} depends on the auxiliary pair")


def suite_keel_relations(result: SuiteResult, full: bool) -> None:
    for d in range(3):
        n = 4
        for relation in picard.keel_relations(d, n):
            profile = picard.profile_of(DivClass.from_map(d, n, relation))
            result.expect(
                all(v == 0 for v in profile.values.values()),
                f"Keel relation on Y_{d},{n} has nonzero profile",
            )
            result.expect(
                picard.reduce_to_basis(d, n, relation).is_zero,
                f"Keel relation on Y_{d},{n} does not reduce to zero",
            )


def suite_localization(result: SuiteResult, full: bool, rng: random.Random) -> None:
    result.expect(equivloc.integrate_ev_psi(2, 1, [1, 1]).coefficient(0) == 1, "ev1 ev2 on M_0,2(P1,1)")
    result.expect(equivloc.integrate_ev_psi(1, 1, [0], [1]).coefficient(0) == -2, "psi1 on M_0,1(P1,1)")
    result.expect(equivloc.integrate_ev_psi(1, 1, [2]).is_zero, "ev1^2 on M_0,1(P1,1)")
    result.expect(equivloc.integrate_ev_psi(0, 1, []).coefficient(0) == 1, "degree-1 count on M_0,0(P1,1)")
    for _ in range(60 if full else 20):
        k = rng.randint(1, 3 if full else 2)
        n = rng.randint(0, 4 if full else 3)
        ev_exp = [rng.randint(0, 2) for _ in range(n)]
        psi_exp = [rng.randint(0, 2) for _ in range(n)]
        poly = equivloc.integrate_ev_psi(n, k, ev_exp, psi_exp)
        result.expect(all(e % 2 == 0 for e in poly.exponents), f"odd t-power for n={n}, k={k}")


def suite_base_intersections(result: SuiteResult, full: bool) -> None:
    D01 = GeneratorId("D", (), 1)
    cases: Sequence[Tuple[WeightTuple, List[GeneratorId], Fraction]] = [
        (WeightTuple.of(2), [D01, D01], Fraction(1)),
        (WeightTuple.of(1, [1]), [picard.H], Fraction(-1, 4)),
        (WeightTuple.of(1, [1]), [D01], Fraction(1)),
        (WeightTuple.of(0, [1, 1]), [], Fraction(1)),
        (WeightTuple.of(0, [2, 2, 2]), [picard.G], Fraction(1)),
        (WeightTuple.of(0, [Fraction(1, 2)] * 3), [picard.G], Fraction(-1, 2)),
        (WeightTuple.of(0, [1, 1, 2]), [picard.G], Fraction(1, 2)),
    ]
    for wt, gens, expected in cases:
        query = engine.IntersectionQuery(wt, tuple(_unit(wt.d, wt.n, g) for g in gens))
        value = engine.intersect(query)
        result.expect(value == expected, f"{wt} {[str(g) for g in gens]} gave {value}, expected {expected}")


def _random_class(wt: WeightTuple, rng: random.Random, gens: Sequence[GeneratorId]) -> DivClass:
    chosen = rng.sample(list(gens), k=min(len(gens), rng.randint(1, 2)))
    return DivClass.from_map(wt.d, wt.n, {g: Fraction(rng.randint(1, 3)) for g in chosen})


def suite_order_independence(result: SuiteResult, full: bool, rng: random.Random) -> None:
    spaces = [WeightTuple.of(2), WeightTuple.of(2, [0]), WeightTuple.of(1, [1, 0])]
    if full:
        spaces += [WeightTuple.of(2, [0, 0]), WeightTuple.of(3, [Fraction(1, 2)])]
    attempts = 0
    found = 0
    target = 24 if full else 20
    while found < target and attempts < 40 * target:
        attempts += 1
        wt = rng.choice(spaces)
        surviving = picard.quotient_data(wt).surviving
        factors = tuple(_random_class(wt, rng, surviving) for _ in range(wt.dimension))
        reduced = [picard.to_quotient(f, wt) for f in factors]
        boundaries = sorted({g for f in reduced for g in f.support if g.is_boundary}, key=GeneratorId.sort_key)
        if len(boundaries) < 2:
            continue
        found += 1
        query = engine.IntersectionQuery(wt, factors)
        first, second = rng.sample(boundaries, 2)
        a = engine.intersect(query, pivot=first)
        b = engine.intersect(query, pivot=second)
        result.expect(a == b, f"{wt}: pivot {first} gave {a}, pivot {second} gave {b}")
    result.expect(found >= min(target, 20), f"only {found} two-boundary queries generated")


def projection_pair(wt: WeightTuple, factors: Sequence[DivClass]) -> Tuple[Fraction, Fraction, Fraction]:
    """(base integral, H_{n+1,1} projection integral, psi_{n+1} dilaton integral) for a weight-0 extra marking."""
    d, n = wt.d, wt.n
    up = WeightTuple(d, wt.weights + (Fraction(0),))
    pulled = tuple(pullbacks.pullback_forget_last(d, n, f) for f in factors)
    base = engine.intersect(engine.IntersectionQuery(wt, tuple(factors)))
    projected = engine.intersect(engine.IntersectionQuery(up, (divisors.class_H(d, n + 1, n + 1, 1),) + pulled))
    dilaton = engine.intersect(engine.IntersectionQuery(up, (divisors.class_psi(d, n + 1, n + 1),) + pulled))
    return base, projected, dilaton


def suite_projection_dilaton(result: SuiteResult, full: bool) -> None:
    D01 = GeneratorId("D", (), 1)
    cases = [(WeightTuple.of(2), [D01, D01]), (WeightTuple.of(1, [1]), [D01])]
    if full:
        cases.append((WeightTuple.of(2, [0]), [D01, D01, GeneratorId("D", (1,), 1)]))
    for wt, gens in cases:
        base, projected, dilaton = projection_pair(wt, [_unit(wt.d, wt.n, g) for g in gens])
        result.expect(projected == base, f"{wt}: projection gave {projected}, expected {base}")
        result.expect(dilaton == (wt.n - 2) * base, f"{wt}: dilaton gave {dilaton}, expected {(wt.n - 2) * base}")


def suite_selfcompose(result: SuiteResult, full: bool) -> None:
    for d in ((2, 3) if full else (2,)):
        for m in range(1, 4 if full else 3):
            for n in range(2):
                per1 = divisors.class_per(d**m, n, 1)
                pulled = pullbacks.pullback_selfcompose(d, n, m, per1)
                expected = divisors.class_per(d, n, m)
                result.expect(pulled == expected, f"sc_{m}* Per_1 on Y_{d},{n} gave {pulled}")


Suite = Callable[..., None]

_SUITES: List[Tuple[str, Suite, bool]] = [
    ("picard-rank", suite_picard_rank, False),
    ("identify-roundtrip", suite_identify_roundtrip, False),
    ("admissibility", suite_admissibility, True),
    ("psi-auxiliary-pair", suite_psi_pairs, False),
    ("keel-relations", suite_keel_relations, False),
    ("localization", suite_localization, True),
    ("base-intersections", suite_base_intersections, False),
    ("order-independence", suite_order_independence, True),
    ("projection-dilaton", suite_projection_dilaton, False),
    ("selfcompose-periodic", suite_selfcompose, False),
]


def run_selfcheck(level: str = "quick", seed: Optional[int] = None) -> List[SuiteResult]:
    """Run every suite at ``level`` and return one result per suite."""
    if level not in LEVELS:
        raise ValueError(f"Unknown selfcheck level {level!r}; use one of {LEVELS}")
    full = level == "full"
    rng = random.Random(settings.SELFCHECK_SEED if seed is None else seed)
    results = []
    for name, suite, randomized in _SUITES:
        result = SuiteResult(name)
        started = time.perf_counter()
        try:
            if randomized:
                suite(result, full, rng)
            else:
                suite(result, full)
        except SelfmapChowError as exc:
            result.passed = False
            result.failures.append(f"{type(exc).__name__}: {exc}")
        result.seconds = time.perf_counter() - started
        logger.info(f"selfcheck {name}: {'ok' if result.passed else 'FAILED'} ({result.checks} checks)")
        results.append(result)
    return results


def summarize(results: Sequence[SuiteResult]) -> Dict[str, object]:
    return {
        "passed": all(r.passed for r in results),
        "suites": [
            {"name": r.name, "passed": r.passed, "checks": r.checks, "failures": r.failures, "seconds": round(r.seconds, 3)}
            for r in results
        ],
    }
