"""Dense linear algebra over GF(p) on numpy integer arrays.

Matrices act on column vectors.  Subspaces are stored by the rows of their
reduced row echelon basis, which makes equal subspaces equal values.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterator

import numpy as np

__all__ = [
    "LinAlgError",
    "rref",
    "rank",
    "kernel",
    "inverse",
    "is_invertible",
    "batch_rref",
    "batch_rank",
    "Subspace",
    "gaussian_binomial",
    "enumerate_subspaces",
    "all_vectors",
    "projective_points",
    "encode",
    "random_invertible",
    "enumerate_gl",
    "gl_order",
]

DTYPE = np.int64
INT_MAX = np.iinfo(np.int64).max


class LinAlgError(ValueError):
    pass


def _as_mat(A, p: int) -> np.ndarray:
    A = np.array(A, dtype=DTYPE)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    return A % p


def _inv_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=DTYPE)
    for x in range(1, p):
        t[x] = pow(x, -1, p)
    return t


def rref(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` over GF(p) and its pivot columns."""
    R = _as_mat(A, p)
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        f = R[:, c].copy()
        f[r] = 0
        R = (R - np.outer(f, R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def kernel(A, p: int) -> "Subspace":
    """Right kernel {v : A v = 0} as a subspace of GF(p)^cols."""
    A = _as_mat(A, p)
    cols = A.shape[1]
    R, pivots = rref(A, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=DTYPE)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = -R[i, f] % p
    return Subspace.from_rows(basis, p, cols)


def inverse(A, p: int) -> np.ndarray:
    A = _as_mat(A, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise LinAlgError(f"inverse of non-square matrix {A.shape}")
    R, pivots = rref(np.hstack([A, np.eye(n, dtype=DTYPE)]), p)
    if pivots[:n] != list(range(n)):
        raise LinAlgError("matrix is singular")
    return R[:, n:]


def is_invertible(A, p: int) -> bool:
    A = np.asarray(A)
    return A.ndim == 2 and A.shape[0] == A.shape[1] and rank(A, p) == A.shape[0]


def batch_rref(A, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-reduce a stack of matrices at once.

    ``A`` has shape (N, r, c).  Returns the reduced stack and the rank of
    each matrix.  Every operation is vectorized over the batch axis.
    """
    A = np.array(A, dtype=DTYPE) % p
    N, r, c = A.shape
    ranks = np.zeros(N, dtype=DTYPE)
    if N == 0 or r == 0 or c == 0:
        return A, ranks
    inv = _inv_table(p)
    row_ids = np.arange(r)
    for col in range(c):
        nz = (A[:, :, col] != 0) & (row_ids[None, :] >= ranks[:, None])
        has = nz.any(axis=1)
        if not has.any():
            continue
        idx = np.nonzero(has)[0]
        piv = nz[idx].argmax(axis=1)
        rk = ranks[idx]
        sub = A[idx]
        k = np.arange(idx.size)
        top = sub[k, rk].copy()
        sub[k, rk] = sub[k, piv]
        sub[k, piv] = top
        sub[k, rk] = sub[k, rk] * inv[sub[k, rk, col]][:, None] % p
        f = sub[:, :, col].copy()
        f[k, rk] = 0
        sub = (sub - f[:, :, None] * sub[k, rk][:, None, :]) % p
        A[idx] = sub
        ranks[idx] += 1
    return A, ranks


def batch_rank(A, p: int, chunk: int = 200_000) -> np.ndarray:
    A = np.asarray(A)
    if A.shape[1] > A.shape[2]:
        A = np.swapaxes(A, 1, 2)
    out = np.empty(A.shape[0], dtype=DTYPE)
    for s in range(0, A.shape[0], chunk):
        out[s : s + chunk] = batch_rref(A[s : s + chunk], p)[1]
    return out


class Subspace:
    """A subspace of GF(p)^d, stored as its reduced row echelon basis."""

    __slots__ = ("p", "ambient", "basis", "pivots", "_key")

    def __init__(self, basis: np.ndarray, p: int, ambient: int, pivots: list[int]):
        self.p = p
        self.ambient = ambient
        self.basis = basis
        self.basis.setflags(write=False)
        self.pivots = tuple(pivots)
        self._key = (p, ambient, basis.tobytes())

    @classmethod
    def from_rows(cls, rows, p: int, ambient: int | None = None) -> "Subspace":
        rows = np.asarray(rows, dtype=DTYPE)
        if ambient is None:
            if rows.ndim != 2:
                raise LinAlgError("ambient dimension required for empty basis")
            ambient = rows.shape[1]
        rows = rows.reshape(-1, ambient) if ambient else np.zeros((0, 0), dtype=DTYPE)
        if rows.shape[0] == 0:
            return cls(np.zeros((0, ambient), dtype=DTYPE), p, ambient, [])
        R, pivots = rref(rows, p)
        return cls(np.ascontiguousarray(R[: len(pivots)]), p, ambient, pivots)

    @classmethod
    def zero(cls, d: int, p: int) -> "Subspace":
        return cls.from_rows(np.zeros((0, d), dtype=DTYPE), p, d)

    @classmethod
    def full(cls, d: int, p: int) -> "Subspace":
        return cls.from_rows(np.eye(d, dtype=DTYPE), p, d)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        rows = ";".join(",".join(str(int(x)) for x in row) for row in self.basis)
        return f"Subspace(p={self.p}, d={self.ambient}, [{rows}])"

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=DTYPE) % self.p
        return rank(np.vstack([self.basis, v.reshape(1, -1)]), self.p) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.dim == 0:
            return True
        return rank(np.vstack([self.basis, other.basis]), self.p) == self.dim

    def image(self, M) -> "Subspace":
        """Image of the subspace under the matrix ``M`` acting on columns."""
        M = np.asarray(M, dtype=DTYPE)
        return Subspace.from_rows((self.basis @ M.T) % self.p, self.p, M.shape[0])

    def vectors(self) -> np.ndarray:
        """Every vector of the subspace, in coefficient order."""
        coeffs = all_vectors(self.dim, self.p)
        return (coeffs @ self.basis) % self.p

    def reduce(self, v) -> np.ndarray:
        """Reduce ``v`` against the echelon basis; zero on pivot columns."""
        v = np.array(v, dtype=DTYPE) % self.p
        for row, pc in zip(self.basis, self.pivots):
            v = (v - v[pc] * row) % self.p
        return v

    def complement_indices(self) -> list[int]:
        return [i for i in range(self.ambient) if i not in self.pivots]

    def quotient_projection(self) -> np.ndarray:
        """Matrix of GF(p)^d -> GF(p)^d / U in non-pivot coordinates.

        The quotient is coordinatized by the standard basis vectors whose
        indices are not pivot columns of the echelon basis.
        """
        d = self.ambient
        P = np.eye(d, dtype=DTYPE)
        for row, pc in zip(self.basis, self.pivots):
            # e_pc = row - (row without its pivot) modulo U
            P[:, pc] = -row % self.p
            P[pc, pc] = 0
        return P[self.complement_indices()] % self.p


def gaussian_binomial(d: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of GF(p)^d."""
    if not 0 <= k <= d:
        raise ValueError(f"need 0 <= k <= d, got k={k}, d={d}")
    num = den = 1
    for i in range(k):
        num *= p ** (d - i) - 1
        den *= p ** (i + 1) - 1
    value = num // den
    if value > INT_MAX:
        raise OverflowError(f"[{d} choose {k}]_{p} = {value} exceeds the int64 range")
    return value


def enumerate_subspaces(d: int, k: int, p: int) -> Iterator[Subspace]:
    """Every k-subspace of GF(p)^d exactly once.

    Order: pivot patterns lexicographically, then free entries in
    row-major order with the last entry varying fastest.
    """
    gaussian_binomial(d, k, p)
    if k == 0:
        yield Subspace.zero(d, p)
        return
    for pivots in combinations(range(d), k):
        free = [
            (i, c)
            for i, pc in enumerate(pivots)
            for c in range(pc + 1, d)
            if c not in pivots
        ]
        base = np.zeros((k, d), dtype=DTYPE)
        for i, pc in enumerate(pivots):
            base[i, pc] = 1
        for vals in product(range(p), repeat=len(free)):
            B = base.copy()
            for (i, c), v in zip(free, vals):
                B[i, c] = v
            yield Subspace(B, p, d, list(pivots))


def all_vectors(d: int, p: int) -> np.ndarray:
    """All p^d vectors as rows; row index equals ``encode`` of the row."""
    if d == 0:
        return np.zeros((1, 0), dtype=DTYPE)
    idx = np.arange(p**d, dtype=DTYPE)
    return np.stack([(idx // p**i) % p for i in range(d)], axis=1)


def encode(v, p: int) -> np.ndarray:
    """Base-p integer code of vectors (last axis), first coordinate least significant."""
    v = np.asarray(v, dtype=DTYPE)
    weights = p ** np.arange(v.shape[-1], dtype=DTYPE)
    return (v % p) @ weights


def projective_points(d: int, p: int) -> np.ndarray:
    """One representative per line of GF(p)^d: last nonzero coordinate equal to 1."""
    V = all_vectors(d, p)[1:]
    last = np.array([row[np.nonzero(row)[0][-1]] for row in V]) if len(V) else np.zeros(0)
    return V[last == 1]


def random_invertible(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        M = rng.integers(0, p, size=(n, n), dtype=DTYPE)
        if rank(M, p) == n:
            return M


def gl_order(n: int, p: int) -> int:
    out = 1
    for i in range(n):
        out *= p**n - p**i
    return out


def enumerate_gl(n: int, p: int, budget: int = 10**6) -> np.ndarray:
    """All invertible n x n matrices over GF(p), shape (|GL|, n, n).

    Lexicographic in the row-major entries (first entry most significant).
    """
    total = p ** (n * n)
    if total > budget * 64:
        raise LinAlgError(f"GL({n},{p}) sweep over {total} matrices exceeds budget")
    out = []
    for chunk_start in range(0, total, 1 << 20):
        idx = np.arange(chunk_start, min(total, chunk_start + (1 << 20)), dtype=DTYPE)
        digits = np.stack([(idx // p ** (n * n - 1 - i)) % p for i in range(n * n)], axis=1)
        mats = digits.reshape(-1, n, n)
        ok = batch_rank(mats, p) == n
        out.append(mats[ok])
    return np.concatenate(out) if out else np.zeros((0, n, n), dtype=DTYPE)
