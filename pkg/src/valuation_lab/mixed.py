"""Polarization of homogeneous valuations and Minkowski-sum calculus.

``polarize`` turns a degree-m homogeneous valuation into its fully
multilinear form by inclusion-exclusion over Minkowski subset sums:

    F(K_1, ..., K_m) = (1/m!) sum over nonempty S of
                       (-1)^(m - |S|) Phi(sum of K_i, i in S)

All inputs are full-dimensional bodies by construction (the polytope
type cannot represent lower-dimensional sets); polarization of
degenerate summands is deliberately out of scope.

The epsilon-derivative routines grow a body by a segment, K + eps [0, u],
evaluate an interior integral on a fixed ladder of widths, and fit the
exact polynomial in eps; interior integrals of 1, x, x x^T over the
grown body are polynomials of degree n, n+1, n+2, so the least-squares
fit has nonnegative slack and its residual is a correctness check, not
an approximation knob.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .polytope import PolytopeBody, build_hull, minkowski_sum, project
from .tensors import SymTensor
from .valuations import q1, upsilon

EPS_RESIDUAL_RTOL = 1e-8

BASE_FUNCTIONALS = ("q1", "upsilon1", "moment_z", "shadow_area")


def subset_sums(bodies) -> dict:
    """Minkowski sums of every nonempty subset, keyed by frozenset of
    indices; built incrementally so each pairwise sum happens once."""
    bodies = list(bodies)
    m = len(bodies)
    if m == 0:
        raise ValueError("need at least one body")
    dim = bodies[0].dim
    if any(b.dim != dim for b in bodies):
        raise ValueError("all bodies must share one dimension")
    sums = {frozenset([i]): bodies[i] for i in range(m)}
    for size in range(2, m + 1):
        for subset in combinations(range(m), size):
            key = frozenset(subset)
            prev = key - {subset[-1]}
            sums[key] = minkowski_sum(sums[prev], bodies[subset[-1]])
    return sums


def polarize(fn, bodies, degree: int):
    """Multilinear polarization of a degree-homogeneous valuation.

    ``fn`` maps a body to a float, ndarray, or SymTensor; the number of
    bodies must equal the homogeneity degree.
    """
    bodies = list(bodies)
    m = len(bodies)
    if m != degree:
        raise ValueError(
            f"polarization of a degree-{degree} valuation needs exactly "
            f"{degree} bodies, got {m}")
    sums = subset_sums(bodies)
    total = None
    for key, body in sums.items():
        term = fn(body) * float((-1) ** (m - len(key)))
        total = term if total is None else total + term
    return total * (1.0 / math.factorial(m))


@dataclass(frozen=True)
class PolarizationRequest:
    """Named polarization job: which valuation, over which bodies.

    ``degree`` must equal both the body count and the functional's
    homogeneity degree in the bodies' dimension (n for q1/upsilon1,
    n+1 for moment_z, n-1 for shadow_area).  ``direction`` is required
    by shadow_area only.
    """

    bodies: tuple
    base_functional: str
    degree: int
    direction: np.ndarray | None = None


def polarize_request(req: PolarizationRequest):
    """Run a named polarization; returns a vector for q1/upsilon1/
    moment_z and a float for shadow_area."""
    if req.base_functional not in BASE_FUNCTIONALS:
        raise ValueError(
            f"base_functional must be one of {BASE_FUNCTIONALS}, "
            f"got {req.base_functional!r}")
    bodies = list(req.bodies)
    if not bodies:
        raise ValueError("need at least one body")
    n = bodies[0].dim
    expected = {"q1": n, "upsilon1": n, "moment_z": n + 1,
                "shadow_area": n - 1}[req.base_functional]
    if req.degree != expected:
        raise ValueError(
            f"{req.base_functional} has homogeneity degree {expected} in "
            f"dim {n}, got degree={req.degree}")
    if req.base_functional == "q1":
        fn = q1
    elif req.base_functional == "upsilon1":
        fn = lambda k: upsilon(k, 1).vector()
    elif req.base_functional == "moment_z":
        fn = lambda k: k.moment_vector.copy()
    else:
        if req.direction is None:
            raise ValueError("shadow_area polarization needs a direction")
        u = np.asarray(req.direction, dtype=float)
        fn = lambda k: project(k, u).shadow.volume
    return polarize(fn, bodies, req.degree)


def mixed_moment_with_ball(bodies) -> np.ndarray:
    """Mixed interior moment with one ball slot,
    z(K_1, ..., K_n, B) = (n/(n+1)) * polarized q1."""
    n = bodies[0].dim
    out = polarize(q1, bodies, degree=n)
    return out * (n / (n + 1.0))


def upsilon_mixed(bodies) -> np.ndarray:
    """Polarization of the rank-1 support-weighted normal moment."""
    n = bodies[0].dim
    return polarize(lambda k: upsilon(k, 1).vector(), bodies, degree=n)


def mixed_projected_moment(projections) -> np.ndarray:
    """Polarized shadow moment z(K_1|u-perp, ..., K_n|u-perp) embedded
    back into ambient coordinates.

    Takes n projections that must share one direction; the shadows are
    (n-1)-dimensional, their interior moment has degree n, so n bodies
    polarize it.
    """
    projections = list(projections)
    if not projections:
        raise ValueError("need at least one projection")
    u0 = projections[0].direction
    for p in projections[1:]:
        if not np.allclose(p.direction, u0, atol=1e-12):
            raise ValueError("projections must share a single direction")
    n = u0.shape[0]
    if len(projections) != n:
        raise ValueError(f"need exactly {n} projections, got {len(projections)}")
    local = polarize(lambda k: k.moment_vector.copy(),
                     [p.shadow for p in projections], degree=n)
    return projections[0].basis @ local


def _segment_grown_hull(body: PolytopeBody, u: np.ndarray,
                        eps: float) -> PolytopeBody:
    # K + eps [0, u] built directly from shifted vertex copies; the
    # segment itself is lower-dimensional so the LP/Minkowski route
    # does not apply
    verts = body.vertices
    return build_hull(np.vstack([verts, verts + eps * u]))


def _field_values(body: PolytopeBody, field: str) -> np.ndarray:
    if field == "1":
        return np.array([body.volume])
    if field == "x":
        return body.moment_vector.copy()
    if field == "x2":
        return body.second_moment.reshape(-1).copy()
    raise ValueError(f"field must be '1', 'x' or 'x2', got {field!r}")


def directional_derivative_field(body: PolytopeBody, u, field: str) -> SymTensor:
    """One-sided derivative at eps = 0 of int over K + eps [0, u] of
    f(x) dx, f in {1, x, x x^T}, via an exact polynomial fit in eps.

    Node ladder: eps_k = R * k / 8 for k = 0..(degree + 2) with R the
    circumradius, the k = 0 value taken from the body itself.  The fit
    always keeps at least one degree of slack; a residual above
    EPS_RESIDUAL_RTOL * scale raises instead of returning garbage.
    """
    if field not in ("1", "x", "x2"):
        raise ValueError(f"field must be '1', 'x' or 'x2', got {field!r}")
    u = np.asarray(u, dtype=float)
    if u.shape != (body.dim,):
        raise ValueError(f"direction shape {u.shape} != ({body.dim},)")
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector")
    n = body.dim
    degree = n + {"1": 0, "x": 1, "x2": 2}[field]
    radius = body.circumradius
    taus = np.arange(degree + 3) / 8.0          # first node is tau = 0
    rows = [_field_values(body, field)]
    for tau in taus[1:]:
        rows.append(_field_values(_segment_grown_hull(body, u, tau * radius), field))
    table = np.array(rows)                      # (nodes, components)
    vander = np.polynomial.polynomial.polyvander(taus, degree)
    coef, *_ = np.linalg.lstsq(vander, table, rcond=None)
    resid = np.abs(vander @ coef - table).max()
    scale = max(1.0, np.abs(table).max())
    if resid > EPS_RESIDUAL_RTOL * scale:
        raise ArithmeticError(
            f"eps-polynomial fit residual {resid:.3g} exceeds "
            f"{EPS_RESIDUAL_RTOL:.0e} * {scale:.3g}")
    deriv = coef[1] / radius                    # d/d eps = (1/R) d/d tau
    if field == "1":
        return SymTensor.from_scalar(deriv[0], n)
    if field == "x":
        return SymTensor.from_vector(deriv)
    return SymTensor.from_matrix(deriv.reshape(n, n))


def directional_derivative_moment(body: PolytopeBody, u) -> np.ndarray:
    """Derivative at eps = 0 of the interior moment of K + eps [0, u]."""
    return directional_derivative_field(body, u, "x").vector()
