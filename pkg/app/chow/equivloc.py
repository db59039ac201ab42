"""Torus-equivariant integrals on genus-0 stable maps to P^1.

The torus acts on P^1 with weight +t at the fixed point 0 and -t at infinity;
the hyperplane class h restricts to +t and -t there, so h^2 = t^2. Integrals
of evaluation and cotangent classes are fixed-graph sums. Boundary divisors
are removed one at a time by splitting the space into its two glued halves.
Every quantity is homogeneous in t, so graph sums are evaluated at t = 1 and
the power of t is restored from the degree count.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from app.core.exceptions import InvalidInputError, InvalidLabelError, ensure
from app.core.logging_config import get_logger

logger = get_logger("equivloc")


@dataclass(frozen=True)
class EquivPoly:
    """Polynomial in the equivariant parameter t with exact coefficients."""

    coeffs: Tuple[Tuple[int, Fraction], ...] = ()

    @classmethod
    def from_map(cls, mapping: Mapping[int, Fraction]) -> "EquivPoly":
        return cls(tuple(sorted((e, Fraction(c)) for e, c in mapping.items() if c != 0)))

    @classmethod
    def constant(cls, value: Fraction) -> "EquivPoly":
        return cls.from_map({0: Fraction(value)})

    def coefficient(self, exponent: int) -> Fraction:
        return dict(self.coeffs).get(exponent, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def exponents(self) -> List[int]:
        return [e for e, _ in self.coeffs]

    def __add__(self, other: "EquivPoly") -> "EquivPoly":
        total = dict(self.coeffs)
        for e, c in other.coeffs:
            total[e] = total.get(e, Fraction(0)) + c
        return EquivPoly.from_map(total)

    def __mul__(self, other) -> "EquivPoly":
        if isinstance(other, EquivPoly):
            total: Dict[int, Fraction] = {}
            for e1, c1 in self.coeffs:
                for e2, c2 in other.coeffs:
                    total[e1 + e2] = total.get(e1 + e2, Fraction(0)) + c1 * c2
            return EquivPoly.from_map(total)
        return EquivPoly.from_map({e: c * other for e, c in self.coeffs})

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*t^{e}" if e else f"{c}" for e, c in self.coeffs)


_KIND_ORDER = {"bdry": 0, "psi": 1, "ev": 2}


@dataclass(frozen=True)
class BAtom:
    """One factor of a product on M_{0,n}(P^1,k): ``ev(i)``, ``psi(i)`` or ``bdry(S,kS)``."""

    kind: str
    marking: int = 0
    S: Tuple[int, ...] = ()
    kS: int = 0

    def sort_key(self) -> Tuple:
        return (_KIND_ORDER[self.kind], self.marking, len(self.S), self.S, self.kS)

    def __str__(self) -> str:
        if self.kind == "bdry":
            return f"bdry({list(self.S)},{self.kS})"
        return f"{self.kind}({self.marking})"


def ev(i: int) -> BAtom:
    return BAtom("ev", marking=i)


def psi(i: int) -> BAtom:
    return BAtom("psi", marking=i)


def bdry(S: Iterable[int], kS: int) -> BAtom:
    return BAtom("bdry", S=tuple(sorted(set(S))), kS=kS)


BClassExpr = Tuple[BAtom, ...]


def canonical_bdry(n: int, k: int, S: Iterable[int], kS: int) -> BAtom:
    """Validate D(S,kS | complement, k-kS) and name it by the side without marking n."""
    S = tuple(sorted(set(S)))
    T = tuple(i for i in range(1, n + 1) if i not in S)
    if any(i < 1 or i > n for i in S) or not 0 <= kS <= k:
        raise InvalidLabelError(f"Boundary ({list(S)},{kS}) invalid on M_0,{n}(P1,{k})")
    for side, degree in ((S, kS), (T, k - kS)):
        if degree == 0 and len(side) < 2:
            raise InvalidLabelError(f"Boundary ({list(S)},{kS}) is unstable on M_0,{n}(P1,{k})")
    if n >= 1 and n in S:
        S, kS = T, k - kS
    elif n == 0:
        kS = min(kS, k - kS)
    return bdry(S, kS)


def canonical_expr(n: int, k: int, expr: Iterable[BAtom]) -> BClassExpr:
    atoms = []
    for atom in expr:
        if atom.kind == "bdry":
            atoms.append(canonical_bdry(n, k, atom.S, atom.kS))
        elif atom.kind in ("ev", "psi"):
            if not 1 <= atom.marking <= n:
                raise InvalidLabelError(f"Marking {atom.marking} out of range 1..{n}")
            atoms.append(atom)
        else:
            raise InvalidLabelError(f"Unknown factor kind {atom.kind!r}")
    return tuple(sorted(atoms, key=BAtom.sort_key))


@dataclass(frozen=True)
class FixedGraph:
    """Torus-fixed locus: vertex labels (0 or infinity), edges (u, v, degree), marking vertices."""

    labels: Tuple[int, ...]
    edges: Tuple[Tuple[int, int, int], ...]
    markings: Tuple[int, ...]


def _pruefer_trees(V: int) -> Iterable[List[Tuple[int, int]]]:
    if V == 2:
        yield [(0, 1)]
        return
    for code in product(range(V), repeat=V - 2):
        degree = [1] * V
        for v in code:
            degree[v] += 1
        edges = []
        for v in code:
            leaf = min(u for u in range(V) if degree[u] == 1)
            edges.append((leaf, v))
            degree[leaf] -= 1
            degree[v] -= 1
        u, w = [x for x in range(V) if degree[x] == 1]
        edges.append((u, w))
        yield edges


def _two_coloring(V: int, edges: Sequence[Tuple[int, int]], root_label: int) -> Tuple[int, ...]:
    labels = [-1] * V
    labels[0] = root_label
    frontier = [0]
    while frontier:
        u = frontier.pop()
        for a, b in edges:
            for x, y in ((a, b), (b, a)):
                if x == u and labels[y] < 0:
                    labels[y] = 1 - labels[u]
                    frontier.append(y)
    return tuple(labels)


def _compositions(total: int, parts: int) -> Iterable[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


Shape = Tuple[Tuple[int, ...], Tuple[Tuple[int, int, int], ...]]


def _relabel(shape: Shape, perm: Sequence[int]) -> Shape:
    labels, edges = shape
    new_labels = [0] * len(labels)
    for v, label in enumerate(labels):
        new_labels[perm[v]] = label
    new_edges = tuple(
        sorted((min(perm[u], perm[v]), max(perm[u], perm[v]), de) for u, v, de in edges)
    )
    return tuple(new_labels), new_edges


@lru_cache(maxsize=None)
def _shapes(k: int) -> Tuple[Tuple[Shape, Tuple[Tuple[int, ...], ...]], ...]:
    """Isomorphism classes of decorated trees of total degree k with their automorphisms."""
    found = set()
    for E in range(1, k + 1):
        V = E + 1
        perms = list(permutations(range(V)))
        for tree in _pruefer_trees(V):
            for root_label in (0, 1):
                labels = _two_coloring(V, tree, root_label)
                for degrees in _compositions(k, E):
                    shape = (labels, tuple(sorted((min(u, v), max(u, v), de) for (u, v), de in zip(tree, degrees))))
                    found.add(min(_relabel(shape, p) for p in perms))
    result = []
    for shape in sorted(found):
        V = len(shape[0])
        auts = tuple(p for p in permutations(range(V)) if _relabel(shape, p) == shape)
        result.append((shape, auts))
    return tuple(result)


@lru_cache(maxsize=None)
def enumerate_fixed_graphs(n: int, k: int) -> Tuple[Tuple[FixedGraph, int], ...]:
    """Fixed graphs of M_{0,n}(P^1,k) up to isomorphism, with automorphism orders."""
    if k < 0 or n < 0:
        raise InvalidLabelError(f"Invalid space M_0,{n}(P1,{k})")
    if k == 0:
        if n < 3:
            return ()
        return tuple((FixedGraph((label,), (), (0,) * n), 1) for label in (0, 1))
    graphs = []
    for (labels, edges), auts in _shapes(k):
        V = len(labels)
        for assignment in product(range(V), repeat=n):
            images = [tuple(p[v] for v in assignment) for p in auts]
            if min(images) != assignment:
                continue
            stabilizer = sum(1 for image in images if image == assignment)
            graphs.append((FixedGraph(labels, edges, assignment), stabilizer))
    return tuple(graphs)


def _edge_factor(de: int) -> Fraction:
    # (-1)^d d^{2d} / ((d!)^2 (2t)^{2d}) at t = 1
    return Fraction((-1) ** de * de ** (2 * de), factorial(de) ** 2 * 4**de)


def _graph_contribution(
    graph: FixedGraph, aut: int, ev_exp: Tuple[int, ...], psi_exp: Tuple[int, ...]
) -> Fraction:
    alpha = [1 if label == 0 else -1 for label in graph.labels]
    tangent = [2 * a for a in alpha]
    flags: List[List[Fraction]] = [[] for _ in graph.labels]
    value = Fraction(1)
    for u, v, de in graph.edges:
        value *= _edge_factor(de) / de
        flags[u].append(Fraction(tangent[u], de))
        flags[v].append(Fraction(tangent[v], de))
    marks_at: List[List[int]] = [[] for _ in graph.labels]
    for i, v in enumerate(graph.markings):
        marks_at[v].append(i)
        value *= alpha[v] ** ev_exp[i]
    for v, omegas in enumerate(flags):
        val, marks = len(omegas), marks_at[v]
        if val == 1 and not marks:
            value *= omegas[0]
        elif val == 1 and len(marks) == 1:
            value *= (-omegas[0]) ** psi_exp[marks[0]]
        elif val == 2 and not marks:
            value *= Fraction(tangent[v]) / (omegas[0] + omegas[1])
        else:
            m = val + len(marks)
            s = m - 3 - sum(psi_exp[i] for i in marks)
            if s < 0 or (val == 0 and s != 0):
                return Fraction(0)
            vertex = Fraction(tangent[v]) ** (val - 1) * factorial(m - 3)
            for i in marks:
                vertex /= factorial(psi_exp[i])
            inverse_sum = sum((1 / w for w in omegas), Fraction(0))
            vertex *= inverse_sum**s / factorial(s)
            for w in omegas:
                vertex /= w
            value *= vertex
    return value / aut


@lru_cache(maxsize=None)
def _integrate_monomial(n: int, k: int, ev_exp: Tuple[int, ...], psi_exp: Tuple[int, ...]) -> EquivPoly:
    dimension = 2 * k - 2 + n
    excess = sum(ev_exp) + sum(psi_exp) - dimension
    total = sum(
        (_graph_contribution(g, aut, ev_exp, psi_exp) for g, aut in enumerate_fixed_graphs(n, k)),
        Fraction(0),
    )
    if excess < 0 or excess % 2:
        ensure(total == 0, f"Nonzero t^{excess} term {total} on M_0,{n}(P1,{k})")
        return EquivPoly()
    return EquivPoly.from_map({excess: total})


def integrate_ev_psi(n: int, k: int, ev_exp: Sequence[int], psi_exp: Optional[Sequence[int]] = None) -> EquivPoly:
    """Integral of prod ev(i)^a_i psi(i)^b_i over M_{0,n}(P^1,k)."""
    psi_exp = tuple(psi_exp) if psi_exp is not None else (0,) * n
    ev_exp = tuple(ev_exp)
    if len(ev_exp) != n or len(psi_exp) != n or min(ev_exp + psi_exp, default=0) < 0:
        raise InvalidInputError(f"Exponent vectors must have length {n} and be nonnegative")
    if 2 * k - 2 + n < 0 or (k == 0 and n < 3):
        raise InvalidLabelError(f"M_0,{n}(P1,{k}) is not a stable space")
    return _integrate_monomial(n, k, ev_exp, psi_exp)


Option = Tuple[Fraction, int, BAtom]


def _restrict_atom(
    atom: BAtom, n: int, k: int, pivot: BAtom, side_index: Tuple[Dict[int, int], Dict[int, int]]
) -> List[Option]:
    S, kS = pivot.S, pivot.kS
    T = tuple(i for i in range(1, n + 1) if i not in S)
    kT = k - kS
    idx1, idx2 = side_index
    n1, n2 = len(S) + 1, len(T) + 1
    if atom.kind in ("ev", "psi"):
        if atom.marking in idx1:
            return [(Fraction(1), 1, BAtom(atom.kind, marking=idx1[atom.marking]))]
        return [(Fraction(1), 2, BAtom(atom.kind, marking=idx2[atom.marking]))]
    if atom == pivot:
        options: List[Option] = [(Fraction(-1), 1, psi(n1)), (Fraction(-1), 2, psi(n2))]
        if not S and kS <= kT and (kT > kS or T):
            options.append((Fraction(1), 2, canonical_bdry(n2, kT, (), kS)))
        if not T and kT <= kS and (kS > kT or S):
            options.append((Fraction(1), 1, canonical_bdry(n1, kS, (), kT)))
        return options
    options = []
    complement = tuple(i for i in range(1, n + 1) if i not in atom.S)
    for U, kU in {(atom.S, atom.kS), (complement, k - atom.kS)}:
        for side, (W, kW, index, n_side) in enumerate(((S, kS, idx1, n1), (T, kT, idx2, n2)), start=1):
            if not set(U) <= set(W) or kU > kW or (U, kU) == (W, kW):
                continue
            if kW - kU == 0 and len(W) == len(U):
                continue
            mapped = tuple(index[i] for i in U)
            options.append((Fraction(1), side, canonical_bdry(n_side, kW, mapped, kU)))
    return options


def _split(n: int, k: int, atoms: BClassExpr, pivot_position: int) -> EquivPoly:
    pivot = atoms[pivot_position]
    rest = atoms[:pivot_position] + atoms[pivot_position + 1 :]
    S, kS = pivot.S, pivot.kS
    T = tuple(i for i in range(1, n + 1) if i not in S)
    kT = k - kS
    idx1 = {m: j + 1 for j, m in enumerate(S)}
    idx2 = {m: j + 1 for j, m in enumerate(T)}
    n1, n2 = len(S) + 1, len(T) + 1
    choices = [_restrict_atom(a, n, k, pivot, (idx1, idx2)) for a in rest]
    choices.append([(Fraction(1), 1, ev(n1)), (Fraction(1), 2, ev(n2))])
    total = EquivPoly()
    for picks in product(*choices):
        coef = Fraction(1)
        side1: List[BAtom] = []
        side2: List[BAtom] = []
        for c, side, atom in picks:
            coef *= c
            (side1 if side == 1 else side2).append(atom)
        left = _integrate(n1, kS, tuple(sorted(side1, key=BAtom.sort_key)))
        if left.is_zero:
            continue
        right = _integrate(n2, kT, tuple(sorted(side2, key=BAtom.sort_key)))
        total = total + left * right * coef
    if n == 0 and kS == kT:
        total = total * Fraction(1, 2)
    return total


@lru_cache(maxsize=None)
def _integrate(n: int, k: int, atoms: BClassExpr) -> EquivPoly:
    for position, atom in enumerate(atoms):
        if atom.kind == "bdry":
            return _split(n, k, atoms, position)
    ev_exp = [0] * n
    psi_exp = [0] * n
    for atom in atoms:
        (ev_exp if atom.kind == "ev" else psi_exp)[atom.marking - 1] += 1
    return _integrate_monomial(n, k, tuple(ev_exp), tuple(psi_exp))


def integrate_expr(n: int, k: int, expr: Iterable[BAtom], pivot: Optional[BAtom] = None) -> EquivPoly:
    """Integral of a product of ev, psi and boundary classes over M_{0,n}(P^1,k).

    ``pivot`` chooses the boundary factor removed first; by default the first
    boundary factor in canonical order is used.
    """
    if k < 0 or 2 * k - 2 + n < 0 or (k == 0 and n < 3):
        raise InvalidLabelError(f"M_0,{n}(P1,{k}) is not a stable space")
    atoms = canonical_expr(n, k, expr)
    if pivot is None:
        return _integrate(n, k, atoms)
    pivot = canonical_bdry(n, k, pivot.S, pivot.kS)
    if pivot not in atoms:
        raise InvalidInputError(f"Pivot {pivot} does not occur in the product")
    logger.debug(f"Splitting M_0,{n}(P1,{k}) along {pivot}")
    return _split(n, k, atoms, atoms.index(pivot))
