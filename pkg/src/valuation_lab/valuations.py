"""Tensor valuations of polytopes: boundary moments, cone-volume data,
shadow functionals.

Everything here is exact (closed-form facet sums), so these values
serve as the reference side of every quadrature check.  Conventions:

* ``q1(K)`` is the normalized boundary moment (1/n) * int_{bd K} x dH.
* ``upsilon(K, r)`` is (1/n) * sum over facets of h(normal) * normal^r
  * area, i.e. the r-th normal moment weighted by support values;
  rank 0 recovers the volume.
* ``xi(K, r)`` drops the support weight; rank 1 is the zero vector for
  every body (the surface-normal balancing identity).
* ``cone_volume_atoms`` gives the discrete cone-volume measure, one
  atom (1/n) h(normal) * area per facet.
* ``shadow_functional(K, u, field)`` integrates 1, x, or x x^T over
  the boundary patch visible from direction u (facets with
  <normal, u> > 0), weighting each facet by <normal, u>.  This is the
  surface integral that differentiating the volume/moment of
  K + eps [0, u] at eps = 0 produces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .polytope import PolytopeBody
from .tensors import SymTensor, sym_power

GRAZING_TOL = 1e-12  # |<normal, u>| below this counts as edge-on

FIELDS = ("1", "x", "x2")


def q1(body: PolytopeBody) -> np.ndarray:
    """Normalized boundary moment vector (1/n) int_{bd K} x dH."""
    total = np.zeros(body.dim)
    for f in body.facets:
        total += f.moment1
    return total / body.dim


def upsilon(body: PolytopeBody, rank: int) -> SymTensor:
    """Support-weighted normal moment tensor of the given rank.

    Rank 0 gives the volume (cone-volume total), rank 1 the cone-volume
    barycenter times total mass, rank 2 the support-weighted normal
    covariance.
    """
    if rank < 0:
        raise ValueError("rank must be >= 0")
    out = SymTensor.zeros(rank, body.dim)
    for f in body.facets:
        weight = f.offset * f.measure / body.dim   # h(normal) = offset
        out = out + sym_power(f.normal, rank) * weight
    return out


def xi(body: PolytopeBody, rank: int) -> SymTensor:
    """Unweighted normal moment tensor (1/n) sum area * normal^rank."""
    if rank < 0:
        raise ValueError("rank must be >= 0")
    out = SymTensor.zeros(rank, body.dim)
    for f in body.facets:
        out = out + sym_power(f.normal, rank) * (f.measure / body.dim)
    return out


def psi(body: PolytopeBody, rank: int) -> SymTensor:
    """Interior moment tensor (1/rank!) int_K x^rank dx, rank <= 2."""
    if rank == 0:
        return SymTensor.from_scalar(body.volume, body.dim)
    if rank == 1:
        return SymTensor.from_vector(body.moment_vector)
    if rank == 2:
        return SymTensor.from_matrix(body.second_moment / 2.0)
    raise ValueError(f"interior moments implemented for rank <= 2, got {rank}")


@dataclass(frozen=True)
class ConeVolumeAtoms:
    """Discrete cone-volume measure: (unit normal, mass) per facet."""

    normals: np.ndarray   # (F, n)
    masses: np.ndarray    # (F,)
    origin_interior: bool

    @property
    def total(self) -> float:
        return float(self.masses.sum())


def cone_volume_atoms(body: PolytopeBody) -> ConeVolumeAtoms:
    """Cone-volume measure of the body; masses are signed when the
    origin lies outside (the measure is then a signed decomposition,
    flagged by ``origin_interior``)."""
    normals = np.array([f.normal for f in body.facets])
    masses = np.array([f.offset * f.measure / body.dim for f in body.facets])
    return ConeVolumeAtoms(
        normals=normals,
        masses=masses,
        origin_interior=bool(masses.min() > 0.0),
    )


def projected_moment(body: PolytopeBody, u) -> np.ndarray:
    """Ambient moment vector of the shadow of K on u-perp.

    This is the hull-engine route: project, rebuild the shadow hull,
    integrate x over it, embed back.  The batched kernels in
    :mod:`valuation_lab.shadows` compute the same value; tests pin the
    two routes together.
    """
    from .polytope import project

    return project(body, u).moment_ambient


def shadow_functional(body: PolytopeBody, u, field: str) -> SymTensor:
    """Illuminated-boundary integral sum_F max(<normal_F, u>, 0) * int_F f dH.

    ``field`` selects f in {1, x, x x^T}.  Facets grazed by u
    (|<normal, u>| <= GRAZING_TOL) contribute zero: the grazing set is
    null for the surface integral this represents, and the hard
    threshold keeps sign noise out.
    """
    if field not in FIELDS:
        raise ValueError(f"field must be one of {FIELDS}, got {field!r}")
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector")
    if field == "1":
        out = SymTensor.zeros(0, body.dim)
    elif field == "x":
        out = SymTensor.zeros(1, body.dim)
    else:
        out = SymTensor.zeros(2, body.dim)
    for f in body.facets:
        cosine = float(f.normal @ u)
        if cosine <= GRAZING_TOL:
            continue
        if field == "1":
            piece = SymTensor.from_scalar(f.measure, body.dim)
        elif field == "x":
            piece = SymTensor.from_vector(f.moment1)
        else:
            piece = SymTensor.from_matrix(f.moment2)
        out = out + piece * cosine
    return out


def boundary_field_integral(body: PolytopeBody, field: str) -> SymTensor:
    """Whole-boundary integral of f in {1, x, x x^T} over bd K."""
    if field not in FIELDS:
        raise ValueError(f"field must be one of {FIELDS}, got {field!r}")
    if field == "1":
        return SymTensor.from_scalar(
            sum(f.measure for f in body.facets), body.dim)
    if field == "x":
        return SymTensor.from_vector(
            sum(f.moment1 for f in body.facets))
    return SymTensor.from_matrix(sum(f.moment2 for f in body.facets))


def moment_z(body: PolytopeBody) -> np.ndarray:
    """Interior moment vector int_K x dx (degree n+1 in scaling)."""
    return body.moment_vector.copy()


def surface_area(body: PolytopeBody) -> float:
    return float(sum(f.measure for f in body.facets))
