"""HTTP service around the library: body construction, functional
evaluation, and identity verification as stateless request/response
endpoints.  The CLI is a thin client of this app (in-process by
default); anything the CLI can do, a remote caller can do with the
same JSON.
"""

from __future__ import annotations

from contextlib import contextmanager

import numpy as np
from fastapi import FastAPI, HTTPException

from . import checks
from . import mixed as mx
from . import polytope as pt
from . import valuations as vl
from .quadrature import DEFAULT_GRID_COUNT, GRID, SphereSampler
from .reporting import report_to_json_dict
from .schemas import (BodySpec, ComputeRequest, ComputeResponse,
                      MixedRequest, MixedResponse, SamplerSpec, SuiteRequest,
                      VerifyRequest, VerifyResponse)
from .tensors import SymTensor

VERSION = "0.1.0"

app = FastAPI(
    title="valuation-lab",
    version=VERSION,
    description="Exact tensor valuations on convex polytopes, verified "
                "against seeded spherical quadrature.",
)


@contextmanager
def _domain_errors():
    # geometry/validation failures are client errors, not crashes
    try:
        yield
    except (ValueError, ArithmeticError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def build_body(spec: BodySpec) -> pt.PolytopeBody:
    if spec.vertices is not None:
        return pt.body_from_json_dict(
            {"dim": spec.dim, "vertices": spec.vertices})
    return pt.make_body(spec.name, spec.dim, seed=spec.seed, count=spec.count)


def build_sampler(dim: int, spec: SamplerSpec) -> SphereSampler:
    method = spec.method or ("grid" if dim == 2 else "mc")
    samples = spec.samples or \
        (DEFAULT_GRID_COUNT if method == "grid" else 200_000)
    return SphereSampler(dim=dim, count=samples, seed=spec.seed,
                         method=method)


def _default_corollary_specs(dim: int) -> list[BodySpec]:
    if dim == 2:
        return [BodySpec(name="cube", dim=2), BodySpec(name="simplex", dim=2)]
    return [BodySpec(name="cube", dim=dim)] + [
        BodySpec(name="random", dim=dim, seed=101 + i)
        for i in range(dim - 1)]


def _run_verify(req: VerifyRequest) -> list:
    dim = req.dim
    if req.identity == "all":
        roster = None
        if req.body is not None:
            roster = [(req.body.spec_string(), build_body(req.body))]
        return checks.run_suite(
            dims=[dim], samples=req.sampler.samples, seed=req.sampler.seed,
            method=req.sampler.method, tol=req.tol,
            tv17_directions=req.tv17_directions, bodies=roster)

    if req.identity == "lemma31":
        sampler = build_sampler(dim, req.sampler)
        v = np.zeros(dim)
        v[0] = 1.0
        return [checks.check_absmoment_tensor(dim, v, sampler, tol=req.tol)]

    if req.identity == "corollary22":
        specs = req.bodies or _default_corollary_specs(dim)
        bodies = [build_body(s) for s in specs]
        sampler = build_sampler(dim, req.sampler)
        label = " + ".join(s.spec_string() for s in specs)
        return [checks.check_corollary(bodies, sampler, body_spec=label,
                                       tol=req.tol)]

    body_spec = req.body or BodySpec(name="cube", dim=dim)
    body = build_body(body_spec)
    label = body_spec.spec_string()
    if req.identity == "tv17":
        return [checks.check_tv17(body, req.tv17_directions,
                                  seed=req.sampler.seed, body_spec=label,
                                  tol=req.tol or checks.TV17_TOL)]
    sampler = build_sampler(body.dim, req.sampler)
    if req.identity == "cauchy":
        return [checks.check_cauchy(body, sampler, label, tol=req.tol)]
    if req.identity == "theorem21":
        return [checks.check_theorem(body, sampler, label, tol=req.tol)]
    # eq41: one report per requested field
    return [checks.check_eq41(body, field, sampler, label, tol=req.tol)
            for field in req.fields]


@app.get("/health")
def health():
    return {"status": "ok", "version": VERSION}


@app.post("/body/summary")
def body_summary(spec: BodySpec):
    with _domain_errors():
        body = build_body(spec)
        return {
            "body_spec": spec.spec_string(),
            "dim": body.dim,
            "vertex_count": body.vertex_count,
            "facet_count": len(body.facets),
            "volume": body.volume,
            "surface_area": vl.surface_area(body),
            "centroid": body.centroid.tolist(),
        }


@app.post("/compute", response_model=ComputeResponse)
def compute(req: ComputeRequest):
    with _domain_errors():
        body = build_body(req.body)
        if req.functional == "cone_volume":
            atoms = vl.cone_volume_atoms(body)
            return ComputeResponse(
                functional=req.functional,
                body_spec=req.body.spec_string(),
                kind="cone_volume",
                result={
                    "normals": atoms.normals.tolist(),
                    "masses": atoms.masses.tolist(),
                    "total": atoms.total,
                    "origin_interior": atoms.origin_interior,
                })
        if req.functional == "volume":
            tensor = SymTensor.from_scalar(body.volume, body.dim)
        elif req.functional == "z":
            tensor = SymTensor.from_vector(body.moment_vector)
        elif req.functional == "q1":
            tensor = SymTensor.from_vector(vl.q1(body))
        elif req.functional == "upsilon":
            tensor = vl.upsilon(body, req.rank)
        elif req.functional == "xi":
            tensor = vl.xi(body, req.rank)
        else:  # psi2
            tensor = vl.psi(body, 2)
        return ComputeResponse(
            functional=req.functional, body_spec=req.body.spec_string(),
            kind="tensor", result=tensor.to_json_dict())


@app.post("/mixed", response_model=MixedResponse)
def compute_mixed(req: MixedRequest):
    with _domain_errors():
        bodies = [build_body(s) for s in req.bodies]
        n = bodies[0].dim
        if req.functional == "moment_with_ball":
            value = SymTensor.from_vector(mx.mixed_moment_with_ball(bodies))
        elif req.functional == "shadow_area":
            out = mx.polarize_request(mx.PolarizationRequest(
                bodies=tuple(bodies), base_functional="shadow_area",
                degree=n - 1,
                direction=None if req.direction is None
                else np.asarray(req.direction, dtype=float)))
            value = SymTensor.from_scalar(out, n)
        else:
            degree = {"q1": n, "upsilon1": n, "moment_z": n + 1}[req.functional]
            out = mx.polarize_request(mx.PolarizationRequest(
                bodies=tuple(bodies), base_functional=req.functional,
                degree=degree))
            value = SymTensor.from_vector(out)
        return MixedResponse(
            functional=req.functional,
            body_specs=[s.spec_string() for s in req.bodies],
            result=value.to_json_dict())


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest):
    with _domain_errors():
        reports = _run_verify(req)
    return VerifyResponse(
        reports=[report_to_json_dict(r) for r in reports],
        all_passed=all(r.passed for r in reports))


@app.post("/suite", response_model=VerifyResponse)
def suite(req: SuiteRequest):
    with _domain_errors():
        identities = req.identities
        if identities is not None:
            identities = [i for i in identities if i != "all"] or None
        roster = None
        if req.bodies is not None:
            roster = [(s.spec_string(), build_body(s)) for s in req.bodies]
        reports = checks.run_suite(
            identities=identities, dims=req.dims,
            samples=req.sampler.samples, seed=req.sampler.seed,
            method=req.sampler.method, tol=req.tol,
            tv17_directions=req.tv17_directions, bodies=roster)
    return VerifyResponse(
        reports=[report_to_json_dict(r) for r in reports],
        all_passed=all(r.passed for r in reports))
