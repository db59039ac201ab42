from typing import Any, Optional

from fastapi import APIRouter, HTTPException, Query, status

from app.api.v1.schemas.picard import BasisResponse, ClassRequest, ClassResponse, IdentifyRequest
from app.api.v1.services.picard_service import PicardService
from app.chow.keys import parse_weights
from app.core.config import settings

router = APIRouter()


def check_degree(d: int) -> None:
    if d > settings.MAX_QUERY_DEGREE:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=f"Degree {d} exceeds the server limit of {settings.MAX_QUERY_DEGREE}",
        )


@router.get("/basis", response_model=BasisResponse)
def get_basis(
    d: int = Query(..., ge=0, description="Degree of the self-maps"),
    n: int = Query(..., ge=0, description="Number of markings"),
    weights: Optional[str] = Query(None, description="Comma-separated weights 'p/q'"),
) -> Any:
    """
    List the basis of Pic(Y_{d,n}) and, with weights, its unstable part
    """
    check_degree(d)
    parsed = parse_weights([weights]) if weights is not None else None
    return PicardService().basis(d, n, parsed)


@router.post("/classes", response_model=ClassResponse)
def build_class(request: ClassRequest) -> Any:
    """
    Build a named geometric class from an inline expression
    """
    check_degree(request.d)
    service = PicardService()
    return service.describe(service.build_class(request.d, request.n, request.expression))


@router.post("/identify", response_model=ClassResponse)
def identify_class(request: IdentifyRequest) -> Any:
    """
    Identify the class with the given test-curve profile
    """
    check_degree(request.d)
    service = PicardService()
    return service.describe(service.identify(request.d, request.n, request.profile, request.g_value))
