from typing import Any

from fastapi import APIRouter, Depends

from app.api.v1.routes.picard import check_degree
from app.api.v1.schemas.intersection import IntersectionRequest, IntersectionResponse
from app.api.v1.services.intersection_service import IntersectionService
from app.chow.keys import QueryDocument
from app.core.cache import ResultCache
from app.core.config import settings

router = APIRouter()


def get_cache() -> ResultCache:
    return ResultCache(settings.SELFMAP_CHOW_CACHE)


@router.post("", response_model=IntersectionResponse)
def compute_intersection(request: IntersectionRequest, cache: ResultCache = Depends(get_cache)) -> Any:
    """
    Compute a top-intersection number on M(d|w)
    """
    check_degree(request.d)
    document = QueryDocument.from_json(request.model_dump(exclude={"pivot"}))
    outcome = IntersectionService(cache).intersect(document, jobs=1, pivot=request.pivot)
    return IntersectionService.record(outcome)
