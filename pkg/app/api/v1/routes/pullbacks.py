from typing import Any

from fastapi import APIRouter

from app.api.v1.routes.picard import check_degree
from app.api.v1.schemas.picard import ClassResponse
from app.api.v1.schemas.pullback import ComposeRequest, ComposeResponse, SelfComposeRequest
from app.api.v1.services.picard_service import PicardService
from app.api.v1.services.pullback_service import PullbackService
from app.chow.keys import class_from_map

router = APIRouter()


@router.post("/compose", response_model=ComposeResponse)
def compose(request: ComposeRequest) -> Any:
    """
    Pull a class back along the composition morphism
    """
    check_degree(request.d1 * request.d2)
    cls = class_from_map(request.d1 * request.d2, request.n1, request.coefficients)
    first, second = PullbackService().compose(request.d1, request.n1, request.d2, cls)
    return {"first": PicardService.describe(first), "second": PicardService.describe(second)}


@router.post("/selfcompose", response_model=ClassResponse)
def selfcompose(request: SelfComposeRequest) -> Any:
    """
    Pull a class back along the m-fold self-composition
    """
    cls = class_from_map(request.d**request.m, request.n, request.coefficients)
    return PicardService.describe(PullbackService().selfcompose(request.d, request.n, request.m, cls))
