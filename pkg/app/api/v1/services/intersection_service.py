from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional

from app.chow import engine
from app.chow.keys import QueryDocument, parse_key
from app.core.cache import ResultCache
from app.core.logging_config import get_logger

logger = get_logger("intersections")


@dataclass
class IntersectionOutcome:
    value: Fraction
    query: QueryDocument
    cache_hit: bool = False
    memo: Dict[str, int] = field(default_factory=dict)


class IntersectionService:
    """Service for handling intersection-number queries."""

    def __init__(self, cache: Optional[ResultCache] = None):
        self.cache = cache

    def intersect(
        self, document: QueryDocument, jobs: int = 1, pivot: Optional[str] = None
    ) -> IntersectionOutcome:
        """
        Compute the top intersection of the document's factors.

        Args:
            document: Parsed query document
            jobs: Worker processes for the first factor's terms
            pivot: Optional generator key of the first boundary to split along

        Returns:
            The value together with cache and memo statistics
        """
        canonical = document.canonical()
        if self.cache is not None and pivot is None:
            cached = self.cache.get(canonical)
            if cached is not None:
                logger.debug(f"Cache hit for {document.digest()[:12]}")
                return IntersectionOutcome(cached, document, True, engine.memo_stats())
        query = engine.IntersectionQuery(document.wt, document.factors)
        value = engine.intersect(query, pivot=parse_key(pivot) if pivot else None, jobs=jobs)
        if self.cache is not None:
            self.cache.put(canonical, value)
        return IntersectionOutcome(value, document, False, engine.memo_stats())

    @staticmethod
    def record(outcome: IntersectionOutcome) -> Dict[str, Any]:
        value = outcome.value
        return {
            "query": outcome.query.to_json(),
            "digest": outcome.query.digest(),
            "value": f"{value.numerator}/{value.denominator}",
            "cache_hit": outcome.cache_hit,
            "memo": outcome.memo,
        }
