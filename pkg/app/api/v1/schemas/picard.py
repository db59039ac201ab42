from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator


class BasisResponse(BaseModel):
    d: int = Field(..., description="Degree of the self-maps")
    n: int = Field(..., description="Number of markings")
    generators: List[str] = Field(..., description="Basis generator keys in canonical order")
    rank: int = Field(..., description="Number of basis generators")
    weights: Optional[List[str]] = Field(None, description="Marking weights, when given")
    unstable: Optional[List[str]] = Field(None, description="Boundary generators that vanish in the quotient")
    unstable_fix: Optional[List[int]] = Field(None, description="Markings whose fixed-point divisor vanishes")
    surviving: Optional[List[str]] = Field(None, description="Generators spanning the quotient Picard group")
    quotient_rank: Optional[int] = Field(None, description="Rank of the quotient Picard group")


class ClassRequest(BaseModel):
    d: int = Field(..., ge=0, description="Degree of the self-maps")
    n: int = Field(..., ge=0, description="Number of markings")
    expression: str = Field(..., description="Inline class expression, e.g. 'psi(1) - 1/4*H'")

    @field_validator("expression")
    @classmethod
    def not_blank(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("expression must not be empty")
        return v


class IdentifyRequest(BaseModel):
    d: int = Field(..., ge=0, description="Degree of the self-maps")
    n: int = Field(..., ge=0, description="Number of markings")
    profile: Dict[str, str] = Field(..., description="Map 'B|k' -> intersection number with C_{B,k}")
    g_value: Optional[str] = Field(None, description="Intersection number with C_G (d = 0 only)")


class ClassResponse(BaseModel):
    d: int = Field(..., description="Degree of the self-maps")
    n: int = Field(..., description="Number of markings")
    coefficients: Dict[str, str] = Field(..., description="Generator key -> exact rational coefficient")
