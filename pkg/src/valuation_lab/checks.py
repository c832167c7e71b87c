"""Identity checks: quadrature LHS against exact facet-sum RHS.

Each check pairs one spherical-integral identity with its closed-form
right side and returns a :class:`VerifyReport`.  The two sides never
share code: left sides go through projected-hull or illuminated-facet
quadrature, right sides through exact interior/boundary moments, so a
bug in either pipeline breaks the agreement.

Identity names used throughout (CLI, service, reports):

* ``cauchy``      mean shadow area recovers the surface area
* ``theorem21``   mean shadow moment recovers n*q1 - upsilon_1
* ``corollary22`` the fully mixed (polarized) version of theorem21
* ``lemma31``     |<v,u>| u^2 spherical moment, closed form
* ``eq41``        illuminated-boundary functionals of f in {1, x, x2}
* ``tv17``        shadow moment functional == eps-derivative route
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import mixed as mx
from . import polytope as pt
from . import valuations as vl
from .quadrature import GRID, MC, SphereSampler, directions, integrate
from .reporting import VerifyReport, make_report
from .shadows import shadow_area_batch, shadow_area_moment_batch
from .tensors import kappa

DEFAULT_MC_TOL = 1e-3
DEFAULT_GRID_TOL = 1e-5
TV17_TOL = 1e-8

IDENTITIES = ("cauchy", "theorem21", "corollary22", "lemma31", "eq41", "tv17")


def default_sampler(dim: int, samples: int = None, seed: int = 42,
                    method: str = None) -> SphereSampler:
    """Harness defaults: n = 2 prefers the deterministic grid with
    2e5 nodes, higher dimensions use antithetic MC."""
    if method is None:
        method = GRID if dim == 2 else MC
    sampler = SphereSampler(dim=dim, count=samples or 200_000,
                            seed=seed, method=method)
    return sampler


def _default_tol(sampler: SphereSampler, tol: float = None) -> float:
    if tol is not None:
        return tol
    return DEFAULT_GRID_TOL if sampler.method == GRID else DEFAULT_MC_TOL


def check_cauchy(body: pt.PolytopeBody, sampler: SphereSampler,
                 body_spec: str = "body", tol: float = None) -> VerifyReport:
    """Mean shadow area over the sphere, divided by kappa(n-1), against
    the exact surface area."""
    t0 = time.perf_counter()
    est = integrate(sampler, lambda dirs: shadow_area_batch(body, dirs))
    est = est.scaled(1.0 / kappa(body.dim - 1))
    rhs = vl.surface_area(body)
    return make_report(
        "cauchy", body_spec, body.dim, est.method, est.samples, sampler.seed,
        est.value, rhs, est.std_error, _default_tol(sampler, tol),
        (time.perf_counter() - t0) * 1e3)


def theorem_rhs(body: pt.PolytopeBody) -> np.ndarray:
    n = body.dim
    coeff = n * kappa(n - 1) / (n + 1.0)
    return coeff * (n * vl.q1(body) - vl.upsilon(body, 1).vector())


def check_theorem(body: pt.PolytopeBody, sampler: SphereSampler,
                  body_spec: str = "body", tol: float = None) -> VerifyReport:
    """Spherical mean of the shadow moment vector against the exact
    combination of boundary moment and cone-volume barycenter."""
    t0 = time.perf_counter()
    est = integrate(sampler,
                    lambda dirs: shadow_area_moment_batch(body, dirs)[1])
    return make_report(
        "theorem21", body_spec, body.dim, est.method, est.samples,
        sampler.seed, est.value, theorem_rhs(body), est.std_error,
        _default_tol(sampler, tol), (time.perf_counter() - t0) * 1e3)


def check_corollary(bodies, sampler: SphereSampler,
                    body_spec: str = None, tol: float = None) -> VerifyReport:
    """Fully mixed shadow-moment identity over n bodies.

    The LHS polarizes per direction by inclusion-exclusion over the
    2^n - 1 precomputed Minkowski subset sums (projection commutes with
    Minkowski addition, so each subset sum's shadow moment comes from
    the batched kernel); the RHS polarizes the exact facet sums.
    """
    bodies = list(bodies)
    n = bodies[0].dim
    if len(bodies) != n:
        raise ValueError(f"need exactly {n} bodies in dim {n}, got {len(bodies)}")
    t0 = time.perf_counter()
    sums = mx.subset_sums(bodies)
    signed = [((-1) ** (n - len(key)), body) for key, body in sums.items()]
    norm = 1.0 / math.factorial(n)

    def integrand(dirs):
        acc = None
        for sign, body in signed:
            term = sign * shadow_area_moment_batch(body, dirs)[1]
            acc = term if acc is None else acc + term
        return acc * norm

    est = integrate(sampler, integrand)
    rhs = n * kappa(n - 1) * (
        mx.mixed_moment_with_ball(bodies)
        - mx.upsilon_mixed(bodies) / (n + 1.0))
    return make_report(
        "corollary22", body_spec or f"{len(bodies)} bodies", n, est.method,
        est.samples, sampler.seed, est.value, rhs, est.std_error,
        _default_tol(sampler, tol), (time.perf_counter() - t0) * 1e3)


def absmoment_rhs(v: np.ndarray) -> np.ndarray:
    n = v.shape[0]
    return (2.0 * kappa(n - 1) / (n + 1.0)) * (np.outer(v, v) + np.eye(n))


def check_absmoment_tensor(dim: int, v, sampler: SphereSampler,
                           tol: float = None) -> VerifyReport:
    """Rank-2 absolute moment of <v, u> against its closed form
    (2 kappa(n-1) / (n+1)) (v v^T + Q)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (dim,) or abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError("v must be a unit vector of the stated dimension")
    t0 = time.perf_counter()

    def integrand(dirs):
        return np.abs(dirs @ v)[:, None, None] * \
            dirs[:, :, None] * dirs[:, None, :]

    est = integrate(sampler, integrand)
    return make_report(
        "lemma31", f"v={np.round(v, 6).tolist()}", dim, est.method,
        est.samples, sampler.seed, est.value, absmoment_rhs(v),
        est.std_error, _default_tol(sampler, tol),
        (time.perf_counter() - t0) * 1e3)


def check_eq41(body: pt.PolytopeBody, field: str, sampler: SphereSampler,
               body_spec: str = "body", tol: float = None) -> VerifyReport:
    """Spherical mean of the illuminated-boundary functional against
    kappa(n-1) times the whole-boundary integral, f in {1, x, x2}."""
    if field not in vl.FIELDS:
        raise ValueError(f"field must be one of {vl.FIELDS}, got {field!r}")
    t0 = time.perf_counter()
    n = body.dim
    normals = np.array([f.normal for f in body.facets])        # (F, n)
    if field == "1":
        weights = np.array([[f.measure] for f in body.facets])
    elif field == "x":
        weights = np.array([f.moment1 for f in body.facets])
    else:
        weights = np.array([f.moment2.reshape(-1) for f in body.facets])

    def integrand(dirs):
        cos = np.maximum(dirs @ normals.T, 0.0)                # (N, F)
        vals = cos @ weights                                   # (N, C)
        if field == "1":
            return vals[:, 0]
        if field == "x2":
            return vals.reshape(-1, n, n)
        return vals

    est = integrate(sampler, integrand)
    rhs_tensor = vl.boundary_field_integral(body, field)
    if field == "1":
        rhs = kappa(n - 1) * rhs_tensor.scalar()
    elif field == "x":
        rhs = kappa(n - 1) * rhs_tensor.vector()
    else:
        rhs = kappa(n - 1) * rhs_tensor.matrix()
    return make_report(
        "eq41", body_spec, n, est.method, est.samples, sampler.seed,
        est.value, rhs, est.std_error, _default_tol(sampler, tol),
        (time.perf_counter() - t0) * 1e3, detail=f"f={field}")


def check_tv17(body: pt.PolytopeBody, n_directions: int = 20,
               seed: int = 7, body_spec: str = "body",
               tol: float = TV17_TOL) -> VerifyReport:
    """Illuminated-boundary moment against the eps-derivative of the
    interior moment of K + eps [0, u], over seeded directions.

    Both routes are exact up to floating point; this is a dual-pipeline
    regression, not a quadrature estimate, hence zero std_error.
    """
    t0 = time.perf_counter()
    dirs = directions(body.dim, seed, n_directions)
    lhs = np.array([vl.shadow_functional(body, u, "x").vector()
                    for u in dirs])
    rhs = np.array([mx.directional_derivative_moment(body, u)
                    for u in dirs])
    return make_report(
        "tv17", body_spec, body.dim, "exact", n_directions, seed,
        lhs, rhs, np.zeros_like(lhs), tol,
        (time.perf_counter() - t0) * 1e3,
        detail=f"{n_directions} directions")


# -- suite ------------------------------------------------------------


def _suite_bodies(dim: int, seeds=(101, 102, 103)):
    roster = [
        (f"cube(dim={dim})", pt.cube(dim)),
        (f"simplex(dim={dim})", pt.simplex(dim)),
        (f"cross_polytope(dim={dim})", pt.cross_polytope(dim)),
    ]
    for s in seeds:
        roster.append((f"random(dim={dim}, seed={s})",
                       pt.random_translated_hull(dim, seed=s)))
    return roster


def run_suite(identities=None, dims=(2, 3), samples: int = None,
              seed: int = 42, method: str = None, tol: float = None,
              tv17_directions: int = 6, bodies=None) -> list:
    """Default verification sweep: the six identity families over the
    generator roster (cube, simplex, cross-polytope, three seeded
    random bodies) in each requested dimension.

    ``bodies`` overrides the roster with [(spec_string, body), ...]
    applying to every requested dimension that matches.
    """
    if identities is None:
        identities = IDENTITIES
    unknown = set(identities) - set(IDENTITIES)
    if unknown:
        raise ValueError(f"unknown identities: {sorted(unknown)}")
    reports = []
    for dim in dims:
        roster = bodies if bodies is not None else _suite_bodies(dim)
        roster = [(s, b) for s, b in roster if b.dim == dim]
        sampler = default_sampler(dim, samples, seed, method)
        if "lemma31" in identities:
            e1 = np.zeros(dim)
            e1[0] = 1.0
            reports.append(check_absmoment_tensor(dim, e1, sampler, tol=tol))
        for spec, body in roster:
            if "cauchy" in identities:
                reports.append(check_cauchy(body, sampler, spec, tol=tol))
            if "theorem21" in identities:
                reports.append(check_theorem(body, sampler, spec, tol=tol))
            if "eq41" in identities:
                for field in vl.FIELDS:
                    reports.append(check_eq41(body, field, sampler, spec,
                                              tol=tol))
            if "tv17" in identities:
                reports.append(check_tv17(body, tv17_directions,
                                          seed=seed, body_spec=spec))
        if "corollary22" in identities and len(roster) >= dim:
            if bodies is None and dim == 2:
                picks = roster[:2]                       # square + triangle
            elif bodies is None and 2 + dim <= len(roster):
                picks = [roster[0]] + roster[3:2 + dim]  # cube + seeded randoms
            else:
                picks = roster[:dim]
            spec = " + ".join(s for s, _ in picks)
            reports.append(check_corollary([b for _, b in picks], sampler,
                                           body_spec=spec, tol=tol))
    return reports
