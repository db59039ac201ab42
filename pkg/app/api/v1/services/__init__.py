from app.api.v1.services.intersection_service import IntersectionService
from app.api.v1.services.picard_service import PicardService
from app.api.v1.services.pullback_service import PullbackService

__all__ = ["IntersectionService", "PicardService", "PullbackService"]
