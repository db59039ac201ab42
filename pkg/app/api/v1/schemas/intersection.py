from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field


class IntersectionRequest(BaseModel):
    d: int = Field(..., ge=0, description="Degree of the self-maps")
    weights: List[Union[str, int]] = Field(default_factory=list, description="Marking weights as exact rationals 'p/q'")
    factors: List[Union[Dict[str, Union[str, int]], str]] = Field(
        default_factory=list,
        description="Factors as generator-keyed maps or inline class expressions",
    )
    pivot: Optional[str] = Field(None, description="Generator key of the first boundary to split along")


class IntersectionResponse(BaseModel):
    value: str = Field(..., description="Intersection number as 'p/q'")
    query: Dict = Field(..., description="Canonical query document")
    digest: str = Field(..., description="sha256 of the canonical query")
    cache_hit: bool = Field(..., description="Whether the persistent cache answered the query")
    memo: Dict[str, int] = Field(..., description="Engine memo statistics")
