"""Text forms: generator keys, rationals, class maps, inline class expressions and query documents."""
import hashlib
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from app.chow import divisors
from app.chow.picard import G, H, DivClass, GeneratorId, generators, reduce_to_basis
from app.chow.weights import WeightTuple
from app.core.exceptions import InvalidInputError, InvalidLabelError

_KEY_RE = re.compile(r"^D\|B=((?:\d+(?:,\d+)*)?)\|k=(\d+)$")
_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def format_rational(value: Fraction) -> str:
    """Canonical ``p/q`` form with q > 0 and the sign on p."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_human(value: Fraction) -> str:
    return str(Fraction(value))


def parse_rational(text: Any) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise InvalidInputError(f"Not an exact rational: {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise InvalidInputError(f"Zero denominator in {text!r}")


def parse_key(key: str) -> GeneratorId:
    key = key.strip()
    if key in ("H", "G"):
        return H if key == "H" else G
    match = _KEY_RE.match(key)
    if not match:
        raise InvalidLabelError(f"Malformed generator key {key!r}")
    B = tuple(int(i) for i in match.group(1).split(",")) if match.group(1) else ()
    if list(B) != sorted(set(B)):
        raise InvalidLabelError(f"Generator key {key!r} must list B ascending without repeats")
    return GeneratorId("D", B, int(match.group(2)))


def class_to_map(cls: DivClass) -> Dict[str, str]:
    return {g.key: format_rational(c) for g, c in cls.terms}


def class_from_map(d: int, n: int, mapping: Mapping[str, Any]) -> DivClass:
    """Parse a generator-keyed map; non-basis generators are reduced to the basis."""
    known = set(generators(d, n))
    raw = {}
    for key, value in mapping.items():
        g = parse_key(key)
        if g not in known:
            raise InvalidLabelError(f"{key} is not a generator of Pic(Y_{{{d},{n}}})")
        raw[g] = raw.get(g, Fraction(0)) + parse_rational(value)
    return reduce_to_basis(d, n, raw)


_TERM_RE = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?"
    r"(D\|B=[\d,]*\|k=\d+|H\(\s*\d+\s*,\s*\d+\s*\)|Hp\(\s*\d+\s*\)|fix\(\s*\d+\s*\)"
    r"|psi\(\s*\d+\s*\)|Per\(\s*\d+\s*\)|Dp|Res|H|G)\s*"
)


def _named_class(d: int, n: int, atom: str) -> DivClass:
    args = [int(a) for a in re.findall(r"\d+", atom[atom.find("(") :])] if "(" in atom else []
    if atom.startswith("D|") or atom in ("H", "G"):
        return class_from_map(d, n, {atom: 1})
    if atom.startswith("H("):
        return divisors.class_H(d, n, args[0], args[1])
    if atom.startswith("Hp("):
        return divisors.class_Hprime(d, n, args[0])
    if atom.startswith("fix("):
        return divisors.class_fix(d, n, args[0])
    if atom.startswith("psi("):
        return divisors.class_psi(d, n, args[0])
    if atom.startswith("Per("):
        return divisors.class_per(d, n, args[0])
    if atom == "Dp":
        return divisors.class_Dp(d, n)
    return divisors.class_resultant(d, n)


def parse_class_expression(d: int, n: int, text: str) -> DivClass:
    """Parse ``[+-][coef*]atom`` sums such as ``-1/4*H + psi(1)``."""
    total = DivClass.zero(d, n)
    position = 0
    text = text.strip()
    if not text:
        raise InvalidInputError("Empty class expression")
    while position < len(text):
        match = _TERM_RE.match(text, position)
        if not match or match.end() == position:
            raise InvalidInputError(f"Cannot parse class expression at {text[position:]!r}")
        if position > 0 and match.group(1) is None:
            raise InvalidInputError(f"Missing sign before {text[match.start():]!r}")
        sign = -1 if match.group(1) == "-" else 1
        coef = Fraction(match.group(2)) if match.group(2) else Fraction(1)
        total = total + _named_class(d, n, match.group(3)) * (sign * coef)
        position = match.end()
    return total


@dataclass(frozen=True)
class QueryDocument:
    """An intersection query in its exchange form."""

    wt: WeightTuple
    factors: Tuple[DivClass, ...]

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "QueryDocument":
        try:
            d = int(payload["d"])
            weights = [parse_rational(w) for w in payload.get("weights", [])]
            raw_factors = payload.get("factors", [])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInputError):
                raise
            raise InvalidInputError(f"Malformed query document: {exc}")
        if not isinstance(raw_factors, list):
            raise InvalidInputError("Query factors must be a list of generator-keyed maps")
        wt = WeightTuple(d, tuple(weights))
        factors = []
        for factor in raw_factors:
            if isinstance(factor, str):
                factors.append(parse_class_expression(wt.d, wt.n, factor))
            elif isinstance(factor, Mapping):
                factors.append(class_from_map(wt.d, wt.n, factor))
            else:
                raise InvalidInputError(f"Unsupported factor {factor!r}")
        return cls(wt, tuple(factors))

    def to_json(self) -> Dict[str, Any]:
        return {
            "d": self.wt.d,
            "weights": [format_rational(w) for w in self.wt.weights],
            "factors": sorted(
                (class_to_map(f) for f in self.factors),
                key=lambda m: json.dumps(m, sort_keys=True),
            ),
        }

    def canonical(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()


def parse_weights(values: Sequence[str]) -> List[Fraction]:
    """Weights given as separate tokens or one comma-separated string."""
    tokens: List[str] = []
    for value in values:
        tokens.extend(t for t in str(value).replace(",", " ").split() if t)
    return [parse_rational(t) for t in tokens]
