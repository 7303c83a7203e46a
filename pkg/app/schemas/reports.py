"""Reports printed by the CLI and returned by the HTTP API.

``outcome`` is "positive" when the question has an affirmative answer and
"negative" for a well-posed no (non-zero obstruction, no extensions).
"""
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class CochainModel(BaseModel):
    degree: int = Field(..., description="Cochain degree")
    entries: Dict[str, List[int]] = Field(default_factory=dict, description="Non-zero values keyed by 'x,y,..'")


class GroupModel(BaseModel):
    name: str
    elements: List[str]
    table: List[List[int]]


class GroupCheckReport(BaseModel):
    outcome: str = "positive"
    name: str
    order: int
    abelian: bool
    profile: str = Field(..., description="Identification by order profile", example="cyclic of order 4")
    element_orders: List[int]

    class Config:
        json_schema_extra = {
            "example": {
                "outcome": "positive",
                "name": "Z4",
                "order": 4,
                "abelian": True,
                "profile": "cyclic of order 4",
                "element_orders": [1, 4, 2, 4]
            }
        }


class AutReport(BaseModel):
    outcome: str = "positive"
    name: str
    aut_order: int
    inner_order: int
    out_order: int
    center: List[int] = Field(..., description="Indices of central elements")
    automorphisms: List[List[int]] = Field(..., description="Automorphisms as image lists, identity first")
    out_representatives: List[int] = Field(..., description="Smallest automorphism index in each outer class")
    aut_table: List[List[int]]
    out_table: List[List[int]]


class CohomologyReport(BaseModel):
    outcome: str = "positive"
    group: str
    coefficients: str
    degree: int
    invariant_factors: List[int]
    order: int
    representatives: List[CochainModel]

    class Config:
        json_schema_extra = {
            "example": {
                "outcome": "positive",
                "group": "Z2",
                "coefficients": "Z2",
                "degree": 2,
                "invariant_factors": [2],
                "order": 2,
                "representatives": [{"degree": 2, "entries": {"1,1": [1]}}]
            }
        }


class ObstructionReport(BaseModel):
    outcome: str = "positive"
    k: CochainModel
    cohomology: List[int] = Field(..., description="Invariant factors of the H³ containing the class")
    coordinates: List[int]
    vanishes: bool
    message: Optional[str] = None


class ClassifyReport(BaseModel):
    outcome: str = "positive"
    h2: List[int] = Field(..., description="Invariant factors of H²(Π, A'_φ)")
    count: int
    representatives: List[CochainModel] = Field(..., description="One g per homotopy class")
    automorphisms: int = Field(..., description="|Z¹(Π, A'_φ)|, the automorphisms of each functor")
    message: Optional[str] = None
    coordinates: List[int] = Field(default_factory=list)


class KernelObstructionReport(BaseModel):
    outcome: str = "positive"
    lifts: List[List[int]] = Field(..., description="Chosen automorphism φ(x) per element of Π")
    f: List[List[int]] = Field(..., description="f(x, y) solving φ(x)φ(y) = μ_f(x,y) φ(xy)")
    centre: str
    k: CochainModel
    cohomology: List[int]
    coordinates: List[int]
    has_extensions: bool
    same_class: Optional[bool] = Field(None, description="[k] = [ψ*h] with h from the reduction of Aut_G")
    opposite_class: Optional[bool] = Field(None, description="[k] = -[ψ*h]")


class ExtensionModel(BaseModel):
    group: GroupModel
    profile: str
    psi_induced: List[int]
    phi: List[List[int]]
    f: List[List[int]]


class ExtensionsReport(BaseModel):
    outcome: str = "positive"
    h2: List[int]
    count: int
    extensions: List[ExtensionModel]
    message: Optional[str] = None


class EMCheckReport(BaseModel):
    outcome: str = "positive"
    m: str
    n: str
    h3_ab: List[int]
    h3_ab_order: int
    quad_order: int
    quad_order_without_evenness: int
    bijective: bool
    traces: Dict[str, List[List[int]]] = Field(..., description="Class coordinates to the values of its trace")


class StrictifyReport(BaseModel):
    outcome: str = "positive"
    objects: int = Field(..., description="Number of objects of the strict model")
    stick: List[int]
    pi1: str
    h_reduced: CochainModel
    f: List[List[int]] = Field(..., description="Coefficient isomorphism, images of coordinate generators")
    g: CochainModel
    message: Optional[str] = None
