"""Symmetric tensors over R^n and ball/sphere constants.

A symmetric rank-r tensor is stored as one coefficient per sorted
multi-index (i1 <= ... <= ir), i.e. per orbit of the symmetric group,
so no redundancy and no symmetrization bookkeeping downstream.
Evaluation on vectors expands each orbit over its distinct
permutations.  Ranks 0..4 in dimensions 1..5 are all this library
needs; the cap is enforced so silent combinatorial blowups cannot
happen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, permutations

import numpy as np

MAX_RANK = 4
MAX_DIM = 5


def kappa(k: int) -> float:
    """Volume of the k-dimensional unit ball."""
    if k < 0:
        raise ValueError(f"ball dimension must be >= 0, got {k}")
    return math.pi ** (k / 2.0) / math.gamma(k / 2.0 + 1.0)


def omega(k: int) -> float:
    """Surface area of the (k-1)-sphere bounding the k-ball."""
    if k < 1:
        raise ValueError(f"sphere ambient dimension must be >= 1, got {k}")
    return k * kappa(k)


def sorted_indices(rank: int, dim: int):
    """All sorted multi-indices of the given rank, lexicographic order."""
    return combinations_with_replacement(range(dim), rank)


def orbit_size(idx: tuple) -> int:
    """Number of distinct permutations of a multi-index."""
    n = math.factorial(len(idx))
    for i in set(idx):
        n //= math.factorial(idx.count(i))
    return n


@dataclass(frozen=True)
class SymTensor:
    """Symmetric tensor: rank, dimension, and one coefficient per orbit.

    ``coeffs`` maps sorted index tuples to floats; missing entries are
    zero.  Instances are value objects: arithmetic returns new tensors.
    """

    rank: int
    dim: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (0 <= self.rank <= MAX_RANK):
            raise ValueError(f"rank must be in [0, {MAX_RANK}], got {self.rank}")
        if not (1 <= self.dim <= MAX_DIM):
            raise ValueError(f"dim must be in [1, {MAX_DIM}], got {self.dim}")
        clean = {}
        for idx, val in self.coeffs.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != self.rank:
                raise ValueError(f"index {idx} has wrong length for rank {self.rank}")
            if tuple(sorted(idx)) != idx:
                raise ValueError(f"index {idx} is not sorted")
            if not all(0 <= i < self.dim for i in idx):
                raise ValueError(f"index {idx} out of range for dim {self.dim}")
            val = float(val)
            if not math.isfinite(val):
                raise ValueError(f"non-finite coefficient at {idx}")
            if val != 0.0:
                clean[idx] = val
        object.__setattr__(self, "coeffs", clean)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(rank: int, dim: int) -> "SymTensor":
        return SymTensor(rank, dim, {})

    @staticmethod
    def from_scalar(value: float, dim: int) -> "SymTensor":
        return SymTensor(0, dim, {(): float(value)})

    @staticmethod
    def from_vector(v) -> "SymTensor":
        v = np.asarray(v, dtype=float)
        return SymTensor(1, v.shape[0], {(i,): v[i] for i in range(v.shape[0])})

    @staticmethod
    def from_matrix(m) -> "SymTensor":
        m = np.asarray(m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if not np.allclose(m, m.T, rtol=1e-10, atol=1e-12 * max(1.0, np.abs(m).max())):
            raise ValueError("matrix is not symmetric")
        d = m.shape[0]
        return SymTensor(2, d, {(i, j): m[i, j] for i in range(d) for j in range(i, d)})

    @staticmethod
    def from_dense(arr) -> "SymTensor":
        """Build from a dense ndarray assumed symmetric in all axes."""
        arr = np.asarray(arr, dtype=float)
        rank = arr.ndim
        if rank == 0:
            return SymTensor.from_scalar(float(arr), 1)
        dim = arr.shape[0]
        if any(s != dim for s in arr.shape):
            raise ValueError(f"expected a hypercubic array, got shape {arr.shape}")
        return SymTensor(rank, dim, {idx: arr[idx] for idx in sorted_indices(rank, dim)})

    # -- accessors ----------------------------------------------------

    def coefficient(self, *idx) -> float:
        return self.coeffs.get(tuple(sorted(int(i) for i in idx)), 0.0)

    def scalar(self) -> float:
        if self.rank != 0:
            raise ValueError(f"not a scalar (rank {self.rank})")
        return self.coeffs.get((), 0.0)

    def vector(self) -> np.ndarray:
        if self.rank != 1:
            raise ValueError(f"not a vector (rank {self.rank})")
        out = np.zeros(self.dim)
        for (i,), val in self.coeffs.items():
            out[i] = val
        return out

    def matrix(self) -> np.ndarray:
        if self.rank != 2:
            raise ValueError(f"not a matrix (rank {self.rank})")
        out = np.zeros((self.dim, self.dim))
        for (i, j), val in self.coeffs.items():
            out[i, j] = val
            out[j, i] = val
        return out

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim,) * self.rank)
        for idx, val in self.coeffs.items():
            for perm in set(permutations(idx)):
                out[perm] = val
        return out

    def __call__(self, *vectors) -> float:
        """Evaluate T(v1, ..., vr)."""
        if len(vectors) != self.rank:
            raise ValueError(f"rank-{self.rank} tensor needs {self.rank} arguments")
        vs = [np.asarray(v, dtype=float) for v in vectors]
        for v in vs:
            if v.shape != (self.dim,):
                raise ValueError(f"argument shape {v.shape} != ({self.dim},)")
        total = 0.0
        for idx, val in self.coeffs.items():
            s = 0.0
            for perm in set(permutations(idx)):
                p = 1.0
                for slot, i in enumerate(perm):
                    p *= vs[slot][i]
                s += p
            total += val * s
        return total

    def max_abs(self) -> float:
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    # -- arithmetic ---------------------------------------------------

    def _like(self, other: "SymTensor"):
        if self.rank != other.rank or self.dim != other.dim:
            raise ValueError(
                f"shape mismatch: rank {self.rank} dim {self.dim} vs "
                f"rank {other.rank} dim {other.dim}"
            )

    def __add__(self, other: "SymTensor") -> "SymTensor":
        self._like(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return SymTensor(
            self.rank, self.dim,
            {k: self.coeffs.get(k, 0.0) + other.coeffs.get(k, 0.0) for k in keys},
        )

    def __sub__(self, other: "SymTensor") -> "SymTensor":
        return self + (other * -1.0)

    def __mul__(self, c: float) -> "SymTensor":
        c = float(c)
        return SymTensor(self.rank, self.dim, {k: v * c for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, c: float) -> "SymTensor":
        return self * (1.0 / float(c))

    def allclose(self, other: "SymTensor", rtol=1e-9, atol=1e-12) -> bool:
        self._like(other)
        scale = max(self.max_abs(), other.max_abs())
        bound = rtol * scale + atol
        for k in set(self.coeffs) | set(other.coeffs):
            if abs(self.coeffs.get(k, 0.0) - other.coeffs.get(k, 0.0)) > bound:
                return False
        return True

    # -- serialization ------------------------------------------------

    def to_json_dict(self) -> dict:
        """JSON form; indices are 1-based and sorted."""
        entries = [
            [[i + 1 for i in idx], val]
            for idx, val in sorted(self.coeffs.items())
        ]
        return {"rank": self.rank, "dim": self.dim, "coeffs": entries}

    @staticmethod
    def from_json_dict(data: dict) -> "SymTensor":
        rank, dim = int(data["rank"]), int(data["dim"])
        coeffs = {}
        for entry in data["coeffs"]:
            idx, val = entry
            key = tuple(int(i) - 1 for i in idx)
            if key in coeffs:
                raise ValueError(f"duplicate index {idx} in tensor JSON")
            coeffs[key] = float(val)
        return SymTensor(rank, dim, coeffs)


def sym_power(x, r: int) -> SymTensor:
    """r-fold symmetric power x^r with (x^r)_{i1..ir} = x_i1 * ... * x_ir."""
    x = np.asarray(x, dtype=float)
    if r == 0:
        return SymTensor.from_scalar(1.0, x.shape[0])
    coeffs = {}
    for idx in sorted_indices(r, x.shape[0]):
        p = 1.0
        for i in idx:
            p *= x[i]
        coeffs[idx] = p
    return SymTensor(r, x.shape[0], coeffs)


def metric_tensor(dim: int) -> SymTensor:
    """The rank-2 identity tensor Q (the inner product itself)."""
    return SymTensor(2, dim, {(i, i): 1.0 for i in range(dim)})


def sym_product(a: SymTensor, b: SymTensor) -> SymTensor:
    """Symmetrized outer product, normalized so sym_product(x^p, x^q) = x^(p+q)."""
    if a.dim != b.dim:
        raise ValueError(f"dim mismatch: {a.dim} vs {b.dim}")
    rank = a.rank + b.rank
    if rank > MAX_RANK:
        raise ValueError(f"product rank {rank} exceeds cap {MAX_RANK}")
    ra = a.rank
    norm = math.factorial(rank)
    coeffs = {}
    for idx in sorted_indices(rank, a.dim):
        s = 0.0
        for perm in permutations(idx):
            left = tuple(sorted(perm[:ra]))
            right = tuple(sorted(perm[ra:]))
            va = a.coeffs.get(left, 0.0)
            if va != 0.0:
                s += va * b.coeffs.get(right, 0.0)
        coeffs[idx] = s / norm
    return SymTensor(rank, a.dim, coeffs)


def contract(t: SymTensor, v) -> SymTensor:
    """Contract one slot with a vector: (t . v)_J = sum_i t_{J,i} v_i."""
    v = np.asarray(v, dtype=float)
    if v.shape != (t.dim,):
        raise ValueError(f"vector shape {v.shape} != ({t.dim},)")
    if t.rank == 0:
        raise ValueError("cannot contract a rank-0 tensor")
    coeffs = {}
    for jdx in sorted_indices(t.rank - 1, t.dim):
        s = 0.0
        for i in range(t.dim):
            s += t.coeffs.get(tuple(sorted(jdx + (i,))), 0.0) * v[i]
        coeffs[jdx] = s
    return SymTensor(t.rank - 1, t.dim, coeffs)
