"""Input file formats.

Every file is a JSON object with exactly the fields below. Groups and
Gr-types may be given inline or as a path relative to the referencing file.
Sparse cochain entries are keyed by comma-separated element indices.
"""
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field, validator


def _check_keys(entries: Optional[Dict[str, List[int]]], degree: int) -> Optional[Dict[str, List[int]]]:
    if entries is None:
        return entries
    for key in entries:
        parts = key.split(",")
        if len(parts) != degree or not all(p.strip().isdigit() for p in parts):
            raise ValueError(f"key {key!r} is not {degree} comma-separated element indices")
    return entries


def parse_key(key: str) -> tuple:
    if not key.strip():
        return ()
    return tuple(int(p) for p in key.split(","))


class GroupFile(BaseModel):
    name: str = Field(..., min_length=1, description="Label of the group", example="Z2")
    elements: List[str] = Field(..., min_length=1, description="Element labels; index 0 is the identity",
                                example=["e", "a"])
    table: List[List[int]] = Field(..., description="Row-major multiplication table of element indices",
                                   example=[[0, 1], [1, 0]])

    @validator("table")
    def validate_shape(cls, v, values):
        if "elements" in values and len(v) != len(values["elements"]):
            raise ValueError("table must have one row per element")
        return v

    class Config:
        extra = "forbid"
        json_schema_extra = {
            "example": {
                "name": "Z2",
                "elements": ["e", "a"],
                "table": [[0, 1], [1, 0]]
            }
        }


GroupRef = Union[GroupFile, str]


class ModuleFile(BaseModel):
    group: GroupRef = Field(..., description="The acting group Π, inline or a path")
    invariant_factors: List[int] = Field(..., description="Invariant factors of A, each dividing the next",
                                         example=[2])
    action: Optional[List[List[List[int]]]] = Field(
        None,
        description="Per element of Π, the matrix of its action on A (rows = coordinates of A); "
                    "omitted means trivial",
    )

    class Config:
        extra = "forbid"
        json_schema_extra = {
            "example": {
                "group": {"name": "Z2", "elements": ["e", "a"], "table": [[0, 1], [1, 0]]},
                "invariant_factors": [2]
            }
        }


class GrTypeFile(ModuleFile):
    h: Dict[str, List[int]] = Field(default_factory=dict, description="Non-zero values of h, keyed 'x,y,z'",
                                    example={"1,1,1": [1]})
    eta: Optional[Dict[str, List[int]]] = Field(None, description="Non-zero values of a braiding η, keyed 'x,y'")

    @validator("h")
    def validate_h_keys(cls, v):
        return _check_keys(v, 3)

    @validator("eta")
    def validate_eta_keys(cls, v):
        return _check_keys(v, 2)

    class Config:
        extra = "forbid"
        json_schema_extra = {
            "example": {
                "group": {"name": "Z2", "elements": ["e", "a"], "table": [[0, 1], [1, 0]]},
                "invariant_factors": [2],
                "h": {"1,1,1": [1]}
            }
        }


class KernelFile(BaseModel):
    pi: GroupRef = Field(..., description="The quotient group Π")
    g: GroupRef = Field(..., description="The kernel group G")
    psi: List[int] = Field(..., description="Per element of Π, the index of ψ(x) in Out(G)", example=[0, 0])

    class Config:
        extra = "forbid"
        json_schema_extra = {
            "example": {
                "pi": {"name": "Z2", "elements": ["e", "a"], "table": [[0, 1], [1, 0]]},
                "g": {"name": "Z2", "elements": ["e", "b"], "table": [[0, 1], [1, 0]]},
                "psi": [0, 0]
            }
        }


class FunctorFile(BaseModel):
    source: Union[GrTypeFile, str] = Field(..., description="Source Gr-type, inline or a path")
    target: Union[GrTypeFile, str] = Field(..., description="Target Gr-type, inline or a path")
    phi: List[int] = Field(..., description="Image in π₀ of the target of every element of π₀ of the source")
    f: List[List[int]] = Field(..., description="Image in A' of each coordinate generator of A")
    g: Optional[Dict[str, List[int]]] = Field(None, description="Non-zero values of g, keyed 'x,y'")

    @validator("g")
    def validate_g_keys(cls, v):
        return _check_keys(v, 2)

    class Config:
        extra = "forbid"


class CochainFile(BaseModel):
    module: Union[ModuleFile, str] = Field(..., description="Coefficient module, inline or a path")
    degree: int = Field(..., ge=0, le=3, description="Cochain degree")
    entries: Dict[str, List[int]] = Field(default_factory=dict, description="Non-zero values")

    @validator("entries")
    def validate_entry_keys(cls, v, values):
        if "degree" in values and values["degree"] > 0:
            return _check_keys(v, values["degree"])
        return v

    class Config:
        extra = "forbid"


class StrictifyRequest(BaseModel):
    gr_type: GrTypeFile = Field(..., description="The Gr-type to strictify")
    realization: KernelFile = Field(..., description="A kernel (Π, G, ψ) whose centre realizes the coefficients")

    class Config:
        extra = "forbid"
