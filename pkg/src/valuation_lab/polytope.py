"""Convex polytopes from vertex data, with exact facet geometry.

Bodies are built by supporting-hyperplane enumeration: every affinely
independent n-subset of the input spans a candidate hyperplane, kept
when all points lie weakly on one side.  Coincident candidates merge,
each surviving facet is refit against all of its incident points, and
facet geometry (surface measure, boundary moments) is computed
recursively in orthonormal local coordinates one dimension down.
Volumes and interior moments come from a simplicial cone decomposition
fanned from the vertex centroid, so every quantity downstream is exact
up to floating point, never quadrature.

Tolerances are relative to the body's circumradius (plus its distance
from the origin where plane offsets are compared).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .tensors import MAX_DIM, SymTensor

HULL_RTOL = 1e-9          # dedup / coplanarity, relative to body scale
NORMAL_MERGE_TOL = 1e-9   # facets merge when normal dot > 1 - this
LP_PRUNE_THRESHOLD = 48   # Minkowski sums above this get LP vertex pruning
_SVD_CHUNK = 100_000


class DegenerateGeometryError(ValueError):
    """Input points do not span a full-dimensional body."""


def householder_basis(u: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane u-perp, shape (n, n-1).

    Columns are the first n-1 columns of the Householder reflection
    sending u to -sign(u_n) e_n.  Deterministic and stable for every
    unit u (the reflector norm is bounded below by sqrt(2)).
    """
    u = np.asarray(u, dtype=float)
    n = u.shape[0]
    sign = 1.0 if u[-1] >= 0.0 else -1.0
    w = u.copy()
    w[-1] += sign
    w /= np.linalg.norm(w)
    basis = -2.0 * np.outer(w, w[: n - 1])
    basis[np.arange(n - 1), np.arange(n - 1)] += 1.0
    return basis


def householder_basis_batch(dirs: np.ndarray) -> np.ndarray:
    """Vectorized :func:`householder_basis`: (N, n) -> (N, n, n-1)."""
    dirs = np.asarray(dirs, dtype=float)
    n = dirs.shape[1]
    w = dirs.copy()
    w[:, -1] += np.where(dirs[:, -1] >= 0.0, 1.0, -1.0)
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    basis = -2.0 * w[:, :, None] * w[:, None, : n - 1]
    idx = np.arange(n - 1)
    basis[:, idx, idx] += 1.0
    return basis


@dataclass(frozen=True)
class FacetData:
    """One facet: outward unit normal, plane offset, and exact moments.

    ``moment1`` and ``moment2`` are the surface integrals of x and
    x x^T over the facet; ``simplices`` triangulates it with ambient
    coordinates, shape (s, n, n).
    """

    normal: np.ndarray
    offset: float
    measure: float
    moment1: np.ndarray
    moment2: np.ndarray
    simplices: np.ndarray
    vertex_ids: tuple

    @property
    def centroid(self) -> np.ndarray:
        return self.moment1 / self.measure


@dataclass(frozen=True)
class PolytopeBody:
    """Full-dimensional polytope with precomputed exact moment data.

    ``moment_vector`` is the interior integral of x, ``second_moment``
    the interior integral of x x^T, ``simplices`` a full triangulation
    of the body, shape (s, n+1, n).
    """

    dim: int
    vertices: np.ndarray
    facets: tuple
    volume: float
    moment_vector: np.ndarray
    second_moment: np.ndarray
    simplices: np.ndarray
    circumradius: float

    @property
    def centroid(self) -> np.ndarray:
        return self.moment_vector / self.volume

    @property
    def vertex_count(self) -> int:
        return self.vertices.shape[0]

    def describe(self) -> str:
        return (
            f"dim={self.dim} vertices={self.vertex_count} "
            f"facets={len(self.facets)} volume={self.volume:.6g}"
        )


def _dedupe(pts: np.ndarray, tol: float) -> np.ndarray:
    keep = []
    for i, p in enumerate(pts):
        if keep and np.min(np.linalg.norm(pts[keep] - p, axis=1)) <= tol:
            continue
        keep.append(i)
    return pts[keep]


def _interval_body(pts: np.ndarray) -> PolytopeBody:
    lo, hi = float(pts.min()), float(pts.max())
    if hi - lo <= 1e-12 + HULL_RTOL * max(abs(lo), abs(hi)):
        raise DegenerateGeometryError("1-d input collapses to a point")
    facets = []
    for normal, end, other in (((1.0,), hi, lo), ((-1.0,), -lo, hi)):
        facets.append(FacetData(
            normal=np.array(normal),
            offset=end,
            measure=1.0,
            moment1=np.array([end * normal[0]]),
            moment2=np.array([[(end * normal[0]) ** 2]]),
            simplices=np.array([[[end * normal[0]]]]),
            vertex_ids=(1,) if normal[0] > 0 else (0,),
        ))
    return PolytopeBody(
        dim=1,
        vertices=np.array([[lo], [hi]]),
        facets=tuple(facets),
        volume=hi - lo,
        moment_vector=np.array([(hi * hi - lo * lo) / 2.0]),
        second_moment=np.array([[(hi ** 3 - lo ** 3) / 3.0]]),
        simplices=np.array([[[lo], [hi]]]),
        circumradius=(hi - lo) / 2.0,
    )


def _candidate_planes(pts: np.ndarray, rank_tol: float, side_tol: float):
    """Supporting hyperplanes through n-subsets, outward-oriented."""
    m, d = pts.shape
    combos = np.array(list(combinations(range(m), d)), dtype=np.intp)
    normals, offsets = [], []
    for s in range(0, len(combos), _SVD_CHUNK):
        sub = pts[combos[s:s + _SVD_CHUNK]]              # (c, d, d)
        edges = sub[:, 1:, :] - sub[:, :1, :]            # (c, d-1, d)
        _, sing, vt = np.linalg.svd(edges, full_matrices=True)
        ok = sing[:, -1] > rank_tol                      # affinely independent
        normal = vt[:, -1, :]
        off = np.einsum("ckd,cd->ck", sub, normal).mean(axis=1)
        dist = pts @ normal.T - off[None, :]             # (m, c)
        upper = dist.max(axis=0) <= side_tol
        lower = dist.min(axis=0) >= -side_tol
        flip = lower & ~upper
        keep = ok & (upper | lower)
        normal[flip] *= -1.0
        off[flip] *= -1.0
        normals.append(normal[keep])
        offsets.append(off[keep])
    return np.concatenate(normals), np.concatenate(offsets)


def _merge_planes(normals, offsets, off_tol):
    uniq_n, uniq_c = [], []
    for nv, cv in zip(normals, offsets):
        if uniq_n:
            dots = np.array(uniq_n) @ nv
            hits = (dots > 1.0 - NORMAL_MERGE_TOL) & \
                   (np.abs(np.array(uniq_c) - cv) <= off_tol)
            if hits.any():
                continue
        uniq_n.append(nv)
        uniq_c.append(cv)
    return np.array(uniq_n), np.array(uniq_c)


def build_hull(points) -> PolytopeBody:
    """Convex hull of a point cloud as a :class:`PolytopeBody`.

    Raises :class:`DegenerateGeometryError` when the points are not
    full-dimensional at relative tolerance ``HULL_RTOL``.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError(f"expected (m, n) vertex array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("vertex coordinates must be finite")
    m, d = pts.shape
    if not (1 <= d <= MAX_DIM):
        raise ValueError(f"dimension must be in [1, {MAX_DIM}], got {d}")

    center = pts.mean(axis=0)
    radius = float(np.linalg.norm(pts - center, axis=1).max()) if m > 1 else 0.0
    scale = max(radius, 1e-12)
    pts = _dedupe(pts, HULL_RTOL * scale)
    m = pts.shape[0]
    if d == 1:
        return _interval_body(pts)
    if m < d + 1:
        raise DegenerateGeometryError(f"{m} distinct points cannot span dim {d}")

    sing = np.linalg.svd(pts - center, compute_uv=False)
    if sing[d - 1] <= HULL_RTOL * scale:
        raise DegenerateGeometryError(
            f"points span an affine subspace of dim < {d} "
            f"(singular values {sing})"
        )

    off_tol = HULL_RTOL * (scale + float(np.linalg.norm(center)))
    normals, offsets = _candidate_planes(pts, HULL_RTOL * scale, off_tol)
    if len(normals) < d + 1:
        raise DegenerateGeometryError("fewer supporting hyperplanes than dim + 1")
    normals, offsets = _merge_planes(normals, offsets, off_tol)

    # refit each facet plane against all of its incident points, then
    # re-merge: near-degenerate defining subsets give noisy normals
    refit_n, refit_c = [], []
    for nv, cv in zip(normals, offsets):
        inc = np.abs(pts @ nv - cv) <= 10.0 * off_tol
        if inc.sum() < d:
            continue
        cloud = pts[inc]
        cmean = cloud.mean(axis=0)
        _, _, vt = np.linalg.svd(cloud - cmean)
        nv = vt[-1]
        cv = float(np.mean(cloud @ nv))
        if center @ nv > cv:
            nv, cv = -nv, -cv
        refit_n.append(nv)
        refit_c.append(cv)
    normals, offsets = _merge_planes(np.array(refit_n), np.array(refit_c), off_tol)

    incidence = np.abs(pts @ normals.T - offsets[None, :]) <= off_tol  # (m, F)
    interior_gap = offsets - normals @ center
    if interior_gap.min() <= off_tol:
        raise DegenerateGeometryError("vertex centroid is not strictly interior")

    # vertices: points whose incident facet normals span the whole space
    vert_ids = []
    for j in range(m):
        nj = normals[incidence[j]]
        if len(nj) >= d and np.linalg.matrix_rank(nj, tol=1e-6) == d:
            vert_ids.append(j)
    if len(vert_ids) < d + 1:
        raise DegenerateGeometryError("fewer hull vertices than dim + 1")
    vertices = pts[vert_ids]
    local_id = {g: i for i, g in enumerate(vert_ids)}

    facets = []
    for fi in range(len(normals)):
        ids = [local_id[j] for j in np.nonzero(incidence[:, fi])[0] if j in local_id]
        if len(ids) < d:
            raise DegenerateGeometryError(f"facet {fi} has {len(ids)} vertices")
        facets.append(_facet_geometry(vertices[ids], normals[fi], offsets[fi], ids))

    return _assemble_body(d, vertices, tuple(facets), scale)


def _facet_geometry(fverts, normal, offset, ids) -> FacetData:
    """Exact facet moments via recursion in local hyperplane coordinates."""
    d = fverts.shape[1]
    basis = householder_basis(normal)
    sub = build_hull(fverts @ basis)
    lifted_m1 = basis @ sub.moment_vector + offset * sub.volume * normal
    cross = np.outer(basis @ sub.moment_vector, normal)
    moment2 = (
        basis @ sub.second_moment @ basis.T
        + offset * (cross + cross.T)
        + offset * offset * sub.volume * np.outer(normal, normal)
    )
    simplices = sub.simplices @ basis.T + offset * normal  # (s, d, d)
    return FacetData(
        normal=normal,
        offset=float(offset),
        measure=sub.volume,
        moment1=lifted_m1,
        moment2=moment2,
        simplices=simplices,
        vertex_ids=tuple(ids),
    )


def _assemble_body(d, vertices, facets, scale) -> PolytopeBody:
    """Cone decomposition from the vertex centroid; exact simplex moments."""
    apex = vertices.mean(axis=0)
    walls = np.concatenate([f.simplices for f in facets])   # (s, d, d)
    s = walls.shape[0]
    vols = np.abs(np.linalg.det(walls - apex)) / math.factorial(d)
    full = np.concatenate(
        [walls, np.broadcast_to(apex, (s, 1, d))], axis=1)   # (s, d+1, d)
    vsum = full.sum(axis=1)
    volume = float(vols.sum())
    moment1 = (vols[:, None] * vsum).sum(axis=0) / (d + 1)
    moment2 = (
        np.einsum("s,sik,sil->kl", vols, full, full)
        + np.einsum("s,sk,sl->kl", vols, vsum, vsum)
    ) / ((d + 1) * (d + 2))
    return PolytopeBody(
        dim=d,
        vertices=vertices,
        facets=facets,
        volume=volume,
        moment_vector=moment1,
        second_moment=moment2,
        simplices=full,
        circumradius=scale,
    )


# -- queries ----------------------------------------------------------


def support(body: PolytopeBody, u) -> float:
    """Support function h(u) = max over vertices of <v, u>."""
    u = np.asarray(u, dtype=float)
    if np.linalg.norm(u) == 0.0:
        raise ValueError("support direction must be nonzero")
    return float((body.vertices @ u).max())


def contains(body: PolytopeBody, x, tol=None) -> bool:
    x = np.asarray(x, dtype=float)
    if tol is None:
        tol = HULL_RTOL * (body.circumradius + float(np.linalg.norm(x)))
    return all(f.normal @ x <= f.offset + tol for f in body.facets)


def volume_and_moments(body: PolytopeBody):
    """(volume, moment vector, half second moment as a rank-2 tensor)."""
    return (
        body.volume,
        body.moment_vector.copy(),
        SymTensor.from_matrix(body.second_moment / 2.0),
    )


# -- transforms -------------------------------------------------------


def translate_body(body: PolytopeBody, t) -> PolytopeBody:
    t = np.asarray(t, dtype=float)
    if t.shape != (body.dim,):
        raise ValueError(f"translation shape {t.shape} != ({body.dim},)")
    return build_hull(body.vertices + t)


def scale_body(body: PolytopeBody, lam: float) -> PolytopeBody:
    lam = float(lam)
    if lam <= 0.0:
        raise ValueError(f"scale factor must be positive, got {lam}")
    return build_hull(body.vertices * lam)


def apply_linear(body: PolytopeBody, mat) -> PolytopeBody:
    mat = np.asarray(mat, dtype=float)
    return build_hull(body.vertices @ mat.T)


def _extreme_subset(pts: np.ndarray, seed=0) -> np.ndarray:
    """Drop points expressible as convex combinations of the others.

    Support maximizers over a fixed direction set are kept outright;
    the rest are tested with an LP feasibility problem each.
    """
    from scipy.optimize import linprog

    m, d = pts.shape
    rng = np.random.default_rng(seed)
    dirs = np.vstack([np.eye(d), -np.eye(d), rng.standard_normal((128, d))])
    keep = np.zeros(m, dtype=bool)
    keep[np.unique(np.argmax(pts @ dirs.T, axis=0))] = True
    for i in np.nonzero(~keep)[0]:
        others = np.delete(np.arange(m), i)
        a_eq = np.vstack([pts[others].T, np.ones(len(others))])
        b_eq = np.concatenate([pts[i], [1.0]])
        res = linprog(np.zeros(len(others)), A_eq=a_eq, b_eq=b_eq,
                      bounds=(0.0, None), method="highs")
        if not res.success:
            keep[i] = True
    return pts[keep]


def minkowski_sum(a: PolytopeBody, b: PolytopeBody) -> PolytopeBody:
    """Minkowski sum via deduped vertex sums, LP-pruned when large."""
    if a.dim != b.dim:
        raise ValueError(f"dim mismatch: {a.dim} vs {b.dim}")
    raw = (a.vertices[:, None, :] + b.vertices[None, :, :]).reshape(-1, a.dim)
    raw = _dedupe(raw, HULL_RTOL * (a.circumradius + b.circumradius))
    if raw.shape[0] > LP_PRUNE_THRESHOLD:
        raw = _extreme_subset(raw)
    return build_hull(raw)


# -- projections ------------------------------------------------------


@dataclass(frozen=True)
class EmbeddedProjection:
    """Shadow of a body on u-perp, kept in orthonormal local coordinates.

    ``basis`` (n, n-1) maps local coordinates back into the ambient
    hyperplane through the origin, so ambient moments of the shadow are
    basis @ (local moments).
    """

    direction: np.ndarray
    basis: np.ndarray
    shadow: PolytopeBody

    def embed(self, local_vec) -> np.ndarray:
        return self.basis @ np.asarray(local_vec, dtype=float)

    @property
    def moment_ambient(self) -> np.ndarray:
        return self.basis @ self.shadow.moment_vector


def project(body: PolytopeBody, u) -> EmbeddedProjection:
    """Orthogonal projection onto the hyperplane u-perp (u must be unit)."""
    u = np.asarray(u, dtype=float)
    if u.shape != (body.dim,):
        raise ValueError(f"direction shape {u.shape} != ({body.dim},)")
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise ValueError("projection direction must be a unit vector")
    if body.dim < 2:
        raise ValueError("projection needs ambient dim >= 2")
    basis = householder_basis(u)
    return EmbeddedProjection(
        direction=u, basis=basis, shadow=build_hull(body.vertices @ basis))


# -- generators -------------------------------------------------------


def cube(dim: int, low=0.0, high=1.0) -> PolytopeBody:
    """Axis-aligned box, default the unit cube [0, 1]^n."""
    lo = np.broadcast_to(np.asarray(low, dtype=float), (dim,))
    hi = np.broadcast_to(np.asarray(high, dtype=float), (dim,))
    if np.any(hi <= lo):
        raise ValueError("cube needs high > low on every axis")
    corners = np.array(np.meshgrid(*[(lo[i], hi[i]) for i in range(dim)],
                                   indexing="ij")).reshape(dim, -1).T
    return build_hull(corners)


def simplex(dim: int, side: float = 1.0) -> PolytopeBody:
    """Standard corner simplex conv{0, side * e_1, ..., side * e_n}."""
    return build_hull(np.vstack([np.zeros(dim), side * np.eye(dim)]))


def cross_polytope(dim: int, radius: float = 1.0) -> PolytopeBody:
    """conv{+-radius * e_i}."""
    return build_hull(np.vstack([radius * np.eye(dim), -radius * np.eye(dim)]))


def random_hull(dim: int, count: int = 12, low: float = -1.0,
                high: float = 1.0, seed: int = 0) -> PolytopeBody:
    """Hull of seeded uniform points in a box."""
    if count < dim + 1:
        raise ValueError(f"need at least {dim + 1} points, got {count}")
    rng = np.random.default_rng(seed)
    return build_hull(rng.uniform(low, high, size=(count, dim)))


def random_translated_hull(dim: int, seed: int = 0,
                           count: int = 12) -> PolytopeBody:
    """Seeded random hull shifted off-center by a uniform [0, 2]^n offset.

    The shift keeps origin-dependent functionals (moments, support
    asymmetry) nontrivial in tests.
    """
    rng = np.random.default_rng(seed)
    verts = rng.uniform(-1.0, 1.0, size=(count, dim))
    return build_hull(verts + rng.uniform(0.0, 2.0, size=dim))


def make_body(name: str, dim: int, seed: int = 0, count: int = 12) -> PolytopeBody:
    """Named generator lookup used by the CLI and service."""
    table = {
        "cube": lambda: cube(dim),
        "simplex": lambda: simplex(dim),
        "cross_polytope": lambda: cross_polytope(dim),
        "random": lambda: random_translated_hull(dim, seed=seed, count=count),
    }
    if name not in table:
        raise ValueError(f"unknown body {name!r}; choose from {sorted(table)}")
    return table[name]()


def body_from_json_dict(data: dict) -> PolytopeBody:
    """Body from the {"dim": n, "vertices": [[...], ...]} wire format."""
    verts = np.asarray(data["vertices"], dtype=float)
    dim = int(data["dim"])
    if verts.ndim != 2 or verts.shape[1] != dim:
        raise ValueError(
            f"vertices shape {verts.shape} inconsistent with dim {dim}")
    return build_hull(verts)


def body_to_json_dict(body: PolytopeBody) -> dict:
    return {"dim": body.dim, "vertices": body.vertices.tolist()}
