from typing import Dict, Union

from pydantic import BaseModel, Field

from app.api.v1.schemas.picard import ClassResponse


class ComposeRequest(BaseModel):
    d1: int = Field(..., ge=0, description="Degree of the inner map")
    n1: int = Field(..., ge=0, description="Number of markings")
    d2: int = Field(..., ge=0, description="Degree of the outer map")
    coefficients: Dict[str, Union[str, int]] = Field(..., description="Class on Y_{d1*d2,n1} as a generator-keyed map")


class ComposeResponse(BaseModel):
    first: ClassResponse = Field(..., description="Component on Y_{d1,n1}")
    second: ClassResponse = Field(..., description="Component on Y_{d2,0}")


class SelfComposeRequest(BaseModel):
    d: int = Field(..., ge=0, description="Degree of the map being iterated")
    n: int = Field(..., ge=0, description="Number of markings")
    m: int = Field(..., ge=1, description="Number of iterations")
    coefficients: Dict[str, Union[str, int]] = Field(..., description="Class on Y_{d^m,n} as a generator-keyed map")
