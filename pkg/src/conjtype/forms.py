"""Commutator forms of class-2 groups and the conjugacy data they determine.

A class-2 group with Z(G) = G' is described, up to isoclinism, by the
alternating bilinear map ``B: V x V -> W`` with V = G/Z(G) and W = G'.
The conjugacy class of an element whose image in V is ``x`` has size
``p ** rank(y -> B(x, y))``, so all class-size questions reduce to rank
computations over GF(p).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .field import ExtField, PrimeField, is_prime
from .linalg import (
    DTYPE,
    Subspace,
    batch_rank,
    inverse,
    is_invertible,
    kernel,
    projective_points,
    rank,
    rref,
)

__all__ = [
    "FormError",
    "BaseChangeError",
    "BudgetError",
    "AlternatingMap",
    "pair_list",
    "pair_index",
    "full_lambda2",
    "heisenberg_ext",
    "zero_map",
    "lambda2_action",
    "breadth",
    "breadths",
    "conjugate_type",
    "breadth_profile",
    "is_camina",
    "quotient",
    "base_change",
    "transform",
    "solve_theta",
    "radical",
    "StructureReport",
    "check_structure_constraints",
    "FORM_BUDGET",
]

# Form-level scans touch at most this many vectors of V.
FORM_BUDGET = 10**7


class FormError(ValueError):
    pass


class BudgetError(RuntimeError):
    """An exhaustive scan would exceed its budget."""


class BaseChangeError(ValueError):
    """The base change does not induce a consistent invertible map on W.

    ``witness`` is the offending basis pair (i, j), or None when the
    failure is non-invertibility of the induced map.
    """

    def __init__(self, msg: str, witness: tuple[int, int] | None = None):
        super().__init__(msg)
        self.witness = witness


def pair_list(n: int) -> list[tuple[int, int]]:
    """Basis pairs i < j in lexicographic order; this indexes W = Lambda^2 V."""
    return list(combinations(range(n), 2))


def pair_index(i: int, j: int, n: int) -> int:
    if not 0 <= i < j < n:
        raise IndexError((i, j, n))
    return i * n - i * (i + 1) // 2 + (j - i - 1)


class AlternatingMap:
    """Alternating bilinear map GF(p)^n x GF(p)^n -> GF(p)^m.

    Stored as a tensor ``T[i, j, :] = B(e_i, e_j)``, antisymmetric in
    (i, j) with zero diagonal.
    """

    __slots__ = ("p", "tensor", "_key")

    def __init__(self, p: int, tensor):
        PrimeField(p)
        T = np.array(tensor, dtype=DTYPE) % p
        if T.ndim != 3 or T.shape[0] != T.shape[1]:
            raise FormError(f"tensor must have shape (n, n, m), got {T.shape}")
        if np.any((T + T.transpose(1, 0, 2)) % p) or np.any(np.diagonal(T, axis1=0, axis2=1)):
            raise FormError("tensor is not alternating")
        T.setflags(write=False)
        self.p = p
        self.tensor = T
        self._key = (p, T.shape, T.tobytes())

    @classmethod
    def from_pairs(cls, p: int, n: int, m: int, pairs: dict) -> "AlternatingMap":
        T = np.zeros((n, n, m), dtype=DTYPE)
        for (i, j), w in pairs.items():
            if not 0 <= i < j < n:
                raise FormError(f"pair ({i}, {j}) must satisfy 0 <= i < j < {n}")
            w = np.asarray(w, dtype=DTYPE)
            T[i, j] = w
            T[j, i] = -w
        return cls(p, T)

    @classmethod
    def from_pair_values(cls, p: int, n: int, S) -> "AlternatingMap":
        """Build from a (n choose 2) x m matrix of values on ``pair_list(n)``."""
        S = np.asarray(S, dtype=DTYPE)
        pairs = pair_list(n)
        if S.shape[0] != len(pairs):
            raise FormError("one row per basis pair required")
        return cls.from_pairs(p, n, S.shape[1], dict(zip(pairs, S)))

    @property
    def dim_v(self) -> int:
        return self.tensor.shape[0]

    @property
    def dim_w(self) -> int:
        return self.tensor.shape[2]

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def group_order_exponent(self) -> int:
        """log_p |G| for the special group the form describes."""
        return self.dim_v + self.dim_w

    def __eq__(self, other):
        return isinstance(other, AlternatingMap) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"AlternatingMap(p={self.p}, dimV={self.dim_v}, dimW={self.dim_w})"

    def pair_values(self) -> np.ndarray:
        """Values B(e_i, e_j) on ``pair_list(n)`` as rows."""
        n = self.dim_v
        if n < 2:
            return np.zeros((0, self.dim_w), dtype=DTYPE)
        i, j = np.triu_indices(n, 1)
        return self.tensor[i, j]

    def __call__(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=DTYPE)
        y = np.asarray(y, dtype=DTYPE)
        return np.einsum("...i,...j,ijk->...k", x, y, self.tensor) % self.p

    def left_matrix(self, x) -> np.ndarray:
        """Matrix (m x n) of the linear map y -> B(x, y)."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=DTYPE), self.tensor) % self.p

    def image_rank(self) -> int:
        """dim of the span of all values B(x, y), i.e. log_p |G'|."""
        return rank(self.pair_values(), self.p) if self.dim_w else 0

    def is_spanning(self) -> bool:
        return self.image_rank() == self.dim_w

    def to_text(self) -> str:
        lines = [f"{self.p} {self.dim_v} {self.dim_w}"]
        for (i, j), w in zip(pair_list(self.dim_v), self.pair_values()):
            if w.any():
                lines.append(" ".join(str(int(v)) for v in (i, j, *w)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "AlternatingMap":
        rows = _data_lines(text)
        if not rows:
            raise FormError("empty form file")
        return _parse_form_rows(rows)[0]


def _data_lines(text: str) -> list[list[str]]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line.split())
    return out


def _parse_form_rows(rows: list[list[str]]) -> tuple[AlternatingMap, int]:
    """Parse a header plus pair lines; stops at a section keyword.

    Returns the form and the number of rows consumed.
    """
    try:
        p, n, m = (int(t) for t in rows[0])
    except ValueError as exc:
        raise FormError(f"bad header {' '.join(rows[0])!r}; expected 'p dimV dimW'") from exc
    if not is_prime(p) or n < 0 or m < 0:
        raise FormError(f"bad header {' '.join(rows[0])!r}: p must be prime, dimensions non-negative")
    pairs = {}
    used = 1
    for row in rows[1:]:
        if not row[0].lstrip("-").isdigit():
            break
        try:
            vals = [int(t) for t in row]
        except ValueError as exc:
            raise FormError(f"bad pair line {' '.join(row)!r}") from exc
        if len(vals) != m + 2:
            raise FormError(f"pair line {' '.join(row)!r} needs {m + 2} integers")
        i, j = vals[:2]
        if (i, j) in pairs:
            raise FormError(f"duplicate pair ({i}, {j})")
        if any(not 0 <= v < p for v in vals[2:]):
            raise FormError(f"entries of pair ({i}, {j}) must be reduced mod {p}")
        pairs[(i, j)] = vals[2:]
        used += 1
    return AlternatingMap.from_pairs(p, n, m, pairs), used


# -- constructions ---------------------------------------------------------


def full_lambda2(n_gen: int, p: int) -> AlternatingMap:
    """The universal alternating map V x V -> Lambda^2 V, B(e_i, e_j) = e_ij.

    Its groups are the (n_gen)-generator special groups of maximal
    derived length n_gen(n_gen-1)/2 (for odd p, the exponent-p group on
    ``n_gen`` generators with all commutators independent).
    """
    if n_gen < 2:
        raise FormError("n_gen must be >= 2")
    pairs = pair_list(n_gen)
    return AlternatingMap.from_pair_values(p, n_gen, np.eye(len(pairs), dtype=DTYPE))


def zero_map(n: int, m: int, p: int) -> AlternatingMap:
    return AlternatingMap(p, np.zeros((n, n, m), dtype=DTYPE))


def heisenberg_ext(p: int, m: int, modulus=None) -> AlternatingMap:
    """Commutator form of the 3x3 unitriangular group over GF(p^m).

    V = F^2 with coordinates (alpha1, alpha3), W = F, and
    B((a1, a3), (b1, b3)) = a1*b3 - a3*b1, written over GF(p) in the
    polynomial basis 1, x, ..., x^(m-1) of F.
    """
    F = ExtField(p, m, tuple(modulus) if modulus else ())
    basis = [F.element([0] * k + [1]) for k in range(m)]
    T = np.zeros((2 * m, 2 * m, m), dtype=DTYPE)
    for i in range(m):
        for j in range(m):
            prod = np.array(F.mul(basis[i], basis[j]), dtype=DTYPE)
            T[i, m + j] = prod
            T[m + j, i] = -prod
    return AlternatingMap(p, T)


def lambda2_action(phi, p: int) -> np.ndarray:
    """Matrix of the map induced by ``phi`` on Lambda^2 V (pair_list basis).

    Column (i, j) holds phi(e_i) ^ phi(e_j); the entry at (k, l) is the
    2x2 minor phi[k, i] phi[l, j] - phi[l, i] phi[k, j].
    """
    phi = np.asarray(phi, dtype=DTYPE)
    n = phi.shape[0]
    k, l = np.triu_indices(n, 1)
    # theta[kl, ij]
    th = phi[k][:, k] * phi[l][:, l] - phi[l][:, k] * phi[k][:, l]
    return th % p


# -- breadth and conjugacy data ------------------------------------------


def breadth(B: AlternatingMap, x) -> int:
    """log_p of the conjugacy class size of any element over ``x``."""
    if B.dim_w == 0:
        return 0
    return rank(B.left_matrix(x), B.p)


def breadths(B: AlternatingMap, X, chunk: int = 100_000) -> np.ndarray:
    """Breadths of many vectors at once (rows of ``X``)."""
    X = np.asarray(X, dtype=DTYPE)
    if B.dim_w == 0 or len(X) == 0:
        return np.zeros(len(X), dtype=DTYPE)
    out = np.empty(len(X), dtype=DTYPE)
    for s in range(0, len(X), chunk):
        M = np.einsum("pi,ijk->pkj", X[s : s + chunk], B.tensor) % B.p
        out[s : s + chunk] = batch_rank(M, B.p)
    return out


def _check_budget(B: AlternatingMap, budget: int) -> None:
    if B.p**B.dim_v > budget:
        raise BudgetError(
            f"p^dimV = {B.p}^{B.dim_v} exceeds the exhaustion budget {budget}; "
            "restrict the scan to projective points or raise the budget"
        )


def projective_breadths(B: AlternatingMap, budget: int = FORM_BUDGET) -> np.ndarray:
    _check_budget(B, budget)
    return breadths(B, projective_points(B.dim_v, B.p))


def breadth_profile(B: AlternatingMap, budget: int = FORM_BUDGET) -> dict[int, int]:
    """Census {breadth: number of nonzero x in V with that breadth}.

    Breadth is constant on lines, so each projective point counts p - 1
    times.
    """
    b = projective_breadths(B, budget)
    vals, counts = np.unique(b, return_counts=True)
    return {int(v): int(c) * (B.p - 1) for v, c in zip(vals, counts)}


def conjugate_type(B: AlternatingMap, budget: int = FORM_BUDGET) -> frozenset[int]:
    """The set of conjugacy class sizes, always containing 1."""
    return frozenset({1} | {B.p ** int(b) for b in np.unique(projective_breadths(B, budget))})


def is_camina(B: AlternatingMap, budget: int = FORM_BUDGET) -> bool:
    if B.dim_w == 0:
        warnings.warn("is_camina on an abelian (dimW = 0) form is defined as False", stacklevel=2)
        return False
    return bool(np.all(projective_breadths(B, budget) == B.dim_w))


def radical(B: AlternatingMap) -> Subspace:
    """{x : B(x, .) = 0}; zero exactly when Z(G) = G' for the special group."""
    n, m = B.dim_v, B.dim_w
    if m == 0:
        return Subspace.full(n, B.p)
    R = B.tensor.transpose(1, 2, 0).reshape(n * m, n)
    return kernel(R, B.p)


def quotient(B: AlternatingMap, U: Subspace) -> AlternatingMap:
    """The form B composed with W -> W/U.

    W/U is coordinatized by the standard basis vectors whose indices are
    not pivots of U's echelon basis.
    """
    if U.ambient != B.dim_w or U.p != B.p:
        raise FormError(f"subspace lives in GF({U.p})^{U.ambient}, not in W = GF({B.p})^{B.dim_w}")
    P = U.quotient_projection()
    return AlternatingMap(B.p, np.einsum("ijk,lk->ijl", B.tensor, P) % B.p)


def solve_theta(B1: AlternatingMap, B2: AlternatingMap, phi) -> np.ndarray:
    """The map theta: W1 -> W2 with theta(B1(e_i, e_j)) = B2(phi e_i, phi e_j).

    theta is determined on the span of the B1 values; when that span is
    proper it is extended by sending the non-pivot standard vectors of
    one span complement to those of the other.  Raises BaseChangeError
    when no invertible linear theta satisfies all basis pairs.
    """
    p = B1.p
    phi = np.asarray(phi, dtype=DTYPE) % p
    if B1.dim_w != B2.dim_w:
        raise BaseChangeError(f"dimW differs ({B1.dim_w} vs {B2.dim_w})")
    m = B1.dim_w
    if m == 0:
        return np.zeros((0, 0), dtype=DTYPE)
    S1 = B1.pair_values()
    S2 = _transformed(B2, phi).pair_values()
    _, row_piv = rref(S1.T, p) if len(S1) else (None, [])
    src = [S1[i] for i in row_piv]
    dst = [S2[i] for i in row_piv]
    if len(src) < m:
        U1 = Subspace.from_rows(np.array(src).reshape(-1, m), p, m)
        U2 = Subspace.from_rows(np.array(dst).reshape(-1, m), p, m)
        if U2.dim != U1.dim:
            raise BaseChangeError("induced map on commutator values is not injective")
        eye = np.eye(m, dtype=DTYPE)
        src += [eye[c] for c in U1.complement_indices()]
        dst += [eye[c] for c in U2.complement_indices()]
    A = np.array(src, dtype=DTYPE)
    C = np.array(dst, dtype=DTYPE)
    theta_t = inverse(A, p) @ C % p
    mismatch = np.nonzero(((S1 @ theta_t - S2) % p).any(axis=1))[0]
    if mismatch.size:
        raise BaseChangeError(
            "base change does not induce a consistent map on W",
            witness=pair_list(B1.dim_v)[int(mismatch[0])],
        )
    theta = theta_t.T.copy()
    if not is_invertible(theta, p):
        raise BaseChangeError("induced map on W is singular")
    return theta


def _transformed(B: AlternatingMap, phi) -> AlternatingMap:
    phi = np.asarray(phi, dtype=DTYPE)
    return AlternatingMap(B.p, np.einsum("ai,bj,abk->ijk", phi, phi, B.tensor) % B.p)


def transform(B: AlternatingMap, phi) -> AlternatingMap:
    """B o (phi x phi): always isoclinic to B, via (phi, identity)."""
    phi = np.asarray(phi, dtype=DTYPE) % B.p
    if phi.shape != (B.dim_v, B.dim_v) or not is_invertible(phi, B.p):
        raise BaseChangeError("phi must be an invertible dimV x dimV matrix")
    return _transformed(B, phi)


def base_change(B: AlternatingMap, phi) -> tuple[AlternatingMap, np.ndarray]:
    """Return (B', theta) with B'(x, y) = B(phi x, phi y) and theta o B = B'."""
    phi = np.asarray(phi, dtype=DTYPE) % B.p
    if phi.shape != (B.dim_v, B.dim_v) or not is_invertible(phi, B.p):
        raise BaseChangeError("phi must be an invertible dimV x dimV matrix")
    Bp = _transformed(B, phi)
    theta = solve_theta(B, B, phi)
    return Bp, theta


# -- structural constraints ---------------------------------------------


@dataclass
class StructureReport:
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def add(self, name: str, ok: bool, detail: str) -> None:
        self.checks[name] = bool(ok)
        self.details[name] = detail


def check_structure_constraints(B: AlternatingMap, budget: int = FORM_BUDGET) -> StructureReport:
    """Check the known necessary conditions on class sizes against this form.

    * |G'| <= p^(b(b+1)/2) where p^b is the largest class size.
    * For conjugate type {1, p^n}: at least n generators and
      |Omega_1(Z(G))| >= p^n.
    * For conjugate type {1, p^3} with p odd: either |G'| = p^3 and
      [G : Z] >= p^4, or |G'| >= p^4 and [G : Z] = p^4.

    Z(G) is read off the form as radical x W, which is elementary abelian
    for the exponent-p groups the form stands for.
    """
    rep = StructureReport()
    prof = breadth_profile(B, budget)
    b = max(prof) if prof else 0
    derived = B.image_rank()
    rep.add("vaughan_lee", derived <= b * (b + 1) // 2, f"log|G'| = {derived}, max breadth = {b}")
    rad = radical(B).dim
    center = rad + B.dim_w
    # informational: Z(G) = G' exactly when the radical vanishes
    rep.details["stem"] = f"dim radical = {rad}"
    nontrivial = sorted(set(prof) - {0})
    if len(nontrivial) == 1:
        n = nontrivial[0]
        rep.add("ito_generators", B.dim_v >= n, f"generators = {B.dim_v}, n = {n}")
        rep.add("ito_omega1", center >= n, f"log|Omega_1(Z)| = {center}, n = {n}")
        if n == 3 and B.p != 2:
            index = B.dim_v - rad
            case_i = derived == 3 and index >= 4
            case_ii = derived >= 4 and index == 4
            rep.add(
                "breadth3_dichotomy",
                case_i or case_ii,
                f"log|G'| = {derived}, log[G:Z] = {index}, case {'(i)' if case_i else '(ii)' if case_ii else 'none'}",
            )
    return rep
