"""Wire formats for the HTTP service and CLI client.

Bodies travel either as generator specs (name + dim + seed) or as
explicit vertex clouds ({"dim": n, "vertices": [[...], ...]}); tensors
as {"rank", "dim", "coeffs": [[1-based sorted indices, value], ...]}.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

GeneratorName = Literal["cube", "simplex", "cross_polytope", "random"]
IdentityName = Literal["cauchy", "theorem21", "corollary22",
                       "lemma31", "eq41", "tv17", "all"]
MethodName = Literal["mc", "grid"]
ComputeName = Literal["volume", "z", "q1", "upsilon", "xi",
                      "cone_volume", "psi2"]
MixedName = Literal["q1", "upsilon1", "moment_z", "shadow_area",
                    "moment_with_ball"]
FieldName = Literal["1", "x", "x2"]


class BodySpec(BaseModel):
    """One body: either a named generator or explicit vertices."""

    name: Optional[GeneratorName] = None
    dim: Optional[int] = None
    seed: int = 0
    count: int = 12
    vertices: Optional[list[list[float]]] = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.name is None) == (self.vertices is None):
            raise ValueError("provide exactly one of 'name' or 'vertices'")
        if self.name is not None and self.dim is None:
            raise ValueError("generator bodies need 'dim'")
        if self.vertices is not None and self.dim is None:
            self.dim = len(self.vertices[0]) if self.vertices else None
        return self

    def spec_string(self) -> str:
        if self.vertices is not None:
            return f"vertices({len(self.vertices)} pts, dim={self.dim})"
        if self.name == "random":
            return f"random(dim={self.dim}, seed={self.seed})"
        return f"{self.name}(dim={self.dim})"


class SamplerSpec(BaseModel):
    """Quadrature settings; method and count default per dimension
    (grid with 2e5 nodes for n = 2, antithetic MC otherwise)."""

    method: Optional[MethodName] = None
    samples: Optional[int] = Field(default=None, ge=2)
    seed: int = 42


class VerifyRequest(BaseModel):
    identity: IdentityName
    dim: int = Field(default=3, ge=2, le=5)
    body: Optional[BodySpec] = None
    bodies: Optional[list[BodySpec]] = None   # corollary22 takes n bodies
    sampler: SamplerSpec = SamplerSpec()
    tol: Optional[float] = Field(default=None, gt=0)
    tv17_directions: int = Field(default=20, ge=1)
    fields: list[FieldName] = ["1", "x", "x2"]  # eq41 selection


class VerifyResponse(BaseModel):
    reports: list[dict]
    all_passed: bool


class ComputeRequest(BaseModel):
    functional: ComputeName
    body: BodySpec
    rank: int = Field(default=1, ge=0, le=4)


class ComputeResponse(BaseModel):
    functional: str
    body_spec: str
    kind: Literal["tensor", "cone_volume"]
    result: dict


class MixedRequest(BaseModel):
    functional: MixedName
    bodies: list[BodySpec]
    direction: Optional[list[float]] = None   # shadow_area only

    @model_validator(mode="after")
    def _nonempty(self):
        if not self.bodies:
            raise ValueError("need at least one body")
        return self


class MixedResponse(BaseModel):
    functional: str
    body_specs: list[str]
    result: dict


class SuiteRequest(BaseModel):
    dims: list[int] = [2, 3]
    identities: Optional[list[IdentityName]] = None
    sampler: SamplerSpec = SamplerSpec()
    tol: Optional[float] = Field(default=None, gt=0)
    tv17_directions: int = Field(default=6, ge=1)
    bodies: Optional[list[BodySpec]] = None
