from fastapi import APIRouter

from app.api.v1.routes import intersections, picard, pullbacks
from app.core.config import settings

api_router = APIRouter()

api_router.include_router(picard.router, prefix="/picard", tags=["picard"])
api_router.include_router(intersections.router, prefix="/intersections", tags=["intersections"])
api_router.include_router(pullbacks.router, prefix="/pullbacks", tags=["pullbacks"])


# Add root endpoint
@api_router.get("/")
def root():
    """
    Root endpoint that returns API information
    """
    return {
        "name": settings.PROJECT_NAME,
        "version": settings.API_VERSION,
        "documentation": {"swagger": "/docs", "redoc": "/redoc"},
    }
