"""Isoclinism of class-2 special p-groups through their commutator forms.

Two forms B1, B2 are isoclinic when there are invertible phi on V and
theta on W with theta(B1(x, y)) = B2(phi x, phi y).  Since W is spanned
by the values of B1, theta is forced by phi, so the search runs over
GL(V) only and theta is solved for each candidate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonicalize import canonical_line, canonical_plane, canonicalize
from .forms import (
    FORM_BUDGET,
    AlternatingMap,
    BaseChangeError,
    BudgetError,
    _transformed,
    breadths,
    conjugate_type,
    full_lambda2,
    heisenberg_ext,
    is_camina,
    projective_breadths,
    quotient,
    solve_theta,
)
from .linalg import (
    DTYPE,
    all_vectors,
    batch_rank,
    enumerate_gl,
    gl_order,
    is_invertible,
    kernel,
    projective_points,
    rank,
)

__all__ = [
    "Fingerprint",
    "fingerprint",
    "IsoclinismCertificate",
    "IsoclinismResult",
    "find_isoclinism",
    "count_isoclinisms",
    "Classification",
    "classify_against_theorem",
    "theorem_representatives",
    "SEARCH_BUDGET",
    "VECTOR_SWEEP_LIMIT",
]

# backtracking nodes visited before giving up with "inconclusive"
SEARCH_BUDGET = 10**6
# GL(V) is swept as one array when p^(n^2) stays below this
VECTOR_SWEEP_LIMIT = 1 << 20


@dataclass(frozen=True)
class Fingerprint:
    p: int
    dim_v: int
    dim_w: int
    breadth_profile: tuple[tuple[int, int], ...]
    commuting_pairs: int
    functional_ranks: tuple[tuple[int, int], ...]

    def differences(self, other: "Fingerprint") -> list[str]:
        return [
            name for name in self.__dataclass_fields__
            if getattr(self, name) != getattr(other, name)
        ]


def fingerprint(B: AlternatingMap, budget: int = FORM_BUDGET) -> Fingerprint:
    """Base-change invariants of a form.

    * breadth census over nonzero x;
    * number of unordered pairs of distinct lines <x>, <y> with B(x, y) = 0;
    * census of rank(f o B) over the lines <f> of W* (ranks of the
      alternating matrices f(B(e_i, e_j))), taken exhaustively.
    """
    p, n, m = B.p, B.dim_v, B.dim_w
    if p**m > budget:
        raise BudgetError(f"functional census over {p}^{m} functionals exceeds the budget")
    b = projective_breadths(B, budget)
    vals, counts = np.unique(b, return_counts=True)
    profile = tuple((int(v), int(c) * (p - 1)) for v, c in zip(vals, counts))
    # lines in ker B(x, .) other than <x> itself
    lines_in_kernel = (p ** (n - b) - 1) // (p - 1) - 1
    pairs = int(lines_in_kernel.sum()) // 2
    if m:
        F = projective_points(m, p)
        mats = np.einsum("fk,ijk->fij", F, B.tensor) % p
        r = batch_rank(mats, p)
        rv, rc = np.unique(r, return_counts=True)
        ranks = tuple((int(v), int(c)) for v, c in zip(rv, rc))
    else:
        ranks = ()
    return Fingerprint(p, n, m, profile, pairs, ranks)


@dataclass(frozen=True)
class IsoclinismCertificate:
    phi: np.ndarray
    theta: np.ndarray

    def verify(self, B1: AlternatingMap, B2: AlternatingMap) -> bool:
        """theta(B1(e_i, e_j)) = B2(phi e_i, phi e_j) on all basis pairs, both maps invertible."""
        p = B1.p
        if not (is_invertible(self.phi, p) and (B1.dim_w == 0 or is_invertible(self.theta, p))):
            return False
        if B1.dim_v != B2.dim_v or B1.dim_w != B2.dim_w:
            return False
        lhs = B1.pair_values() @ np.asarray(self.theta).T % p
        rhs = _transformed(B2, self.phi).pair_values()
        return bool(np.array_equal(lhs, rhs))

    def to_text(self) -> str:
        def block(name, M):
            return [name] + [" ".join(str(int(t)) for t in row) for row in M]

        return "\n".join(block("phi", self.phi) + block("theta", self.theta)) + "\n"


@dataclass
class IsoclinismResult:
    status: str  # "isoclinic" | "not_isoclinic" | "inconclusive"
    certificate: IsoclinismCertificate | None = None
    reason: str = ""
    nodes: int = 0

    @property
    def exit_code(self) -> int:
        return {"isoclinic": 0, "not_isoclinic": 1, "inconclusive": 2}[self.status]


def _consistent(S1: np.ndarray, S2: np.ndarray, p: int) -> bool:
    # a linear injective theta with theta(S1 rows) = S2 rows exists iff
    # the stacked ranks agree
    if len(S1) == 0:
        return True
    r1 = rank(S1, p)
    return r1 == rank(S2, p) == rank(np.hstack([S1, S2]), p)


def _sweep(B1: AlternatingMap, B2: AlternatingMap, first_only: bool):
    """Vectorized pass over all of GL(V) in lexicographic order."""
    p, n = B1.p, B1.dim_v
    S1 = B1.pair_values()
    r1 = rank(S1, p)
    i, j = np.triu_indices(n, 1)
    mats = enumerate_gl(n, p, budget=VECTOR_SWEEP_LIMIT)
    hits = []
    for s in range(0, len(mats), 50_000):
        phi = mats[s : s + 50_000]
        # S2[g, pair] = B2(phi e_i, phi e_j)
        T = np.einsum("gai,gbj,abk->gijk", phi, phi, B2.tensor) % p
        S2 = T[:, i, j]
        ok = (batch_rank(S2, p) == r1) & (
            batch_rank(np.concatenate([np.broadcast_to(S1, S2.shape), S2], axis=2), p) == r1
        )
        idx = np.nonzero(ok)[0] + s
        if first_only and idx.size:
            return mats[idx[:1]], int(idx[0]) + 1
        hits.append(mats[idx])
    out = np.concatenate(hits) if hits else np.zeros((0, n, n), dtype=DTYPE)
    return out, len(mats)


def _backtrack(B1: AlternatingMap, B2: AlternatingMap, budget: int):
    """Depth-first search for phi column by column, pruned by breadth and theta-consistency."""
    p, n = B1.p, B1.dim_v
    V = all_vectors(n, p)
    b1 = breadths(B1, np.eye(n, dtype=DTYPE))
    b2 = breadths(B2, V)
    by_breadth = {int(b): V[(b2 == b) & V.any(axis=1)] for b in np.unique(b1)}
    cols: list[np.ndarray] = []
    nodes = 0

    def pair_rows(k):
        S1 = np.array([B1.tensor[a, k] for a in range(k)], dtype=DTYPE)
        S2 = np.array([B2(cols[a], cols[k]) for a in range(k)], dtype=DTYPE)
        return S1, S2

    acc1: list[np.ndarray] = []
    acc2: list[np.ndarray] = []

    def search(k):
        nonlocal nodes
        if k == n:
            return True
        for c in by_breadth[int(b1[k])]:
            nodes += 1
            if nodes > budget:
                raise BudgetError("isoclinism search budget exhausted")
            if rank(np.array(cols + [c]), p) < k + 1:
                continue
            cols.append(c)
            S1, S2 = pair_rows(k)
            if k:
                acc1.append(S1)
                acc2.append(S2)
            if _consistent(
                np.vstack(acc1) if acc1 else np.zeros((0, B1.dim_w), dtype=DTYPE),
                np.vstack(acc2) if acc2 else np.zeros((0, B1.dim_w), dtype=DTYPE),
                p,
            ) and search(k + 1):
                return True
            cols.pop()
            if k:
                acc1.pop()
                acc2.pop()
        return False

    found = search(0)
    phi = np.array(cols, dtype=DTYPE).T if found else None
    return phi, nodes


def find_isoclinism(
    B1: AlternatingMap, B2: AlternatingMap, budget: int = SEARCH_BUDGET
) -> IsoclinismResult:
    """Certificate, definite negative, or an honest "inconclusive"."""
    if B1.p != B2.p or B1.dim_v != B2.dim_v or B1.dim_w != B2.dim_w:
        return IsoclinismResult("not_isoclinic", reason="dimensions differ")
    diff = fingerprint(B1).differences(fingerprint(B2))
    if diff:
        return IsoclinismResult("not_isoclinic", reason="fingerprints differ in " + ", ".join(diff))
    p, n = B1.p, B1.dim_v
    if p ** (n * n) <= VECTOR_SWEEP_LIMIT:
        mats, total = _sweep(B1, B2, first_only=True)
        if not len(mats):
            return IsoclinismResult("not_isoclinic", reason=f"exhaustive sweep of {total} base changes", nodes=total)
        phi = mats[0]
        nodes = total  # base changes examined up to the first hit
    else:
        try:
            phi, nodes = _backtrack(B1, B2, budget)
        except BudgetError:
            return IsoclinismResult("inconclusive", reason=f"search budget {budget} exhausted", nodes=budget)
        if phi is None:
            return IsoclinismResult("not_isoclinic", reason="exhaustive pruned search", nodes=nodes)
    cert = IsoclinismCertificate(phi, solve_theta(B1, B2, phi))
    assert cert.verify(B1, B2)
    return IsoclinismResult("isoclinic", cert, reason="certificate found", nodes=nodes)


def count_isoclinisms(B1: AlternatingMap, B2: AlternatingMap) -> tuple[int, int]:
    """(number of phi in GL(V) admitting a theta, |GL(V)|), by a full sweep."""
    if B1.p != B2.p or B1.dim_v != B2.dim_v or B1.dim_w != B2.dim_w:
        return 0, gl_order(B1.dim_v, B1.p)
    mats, total = _sweep(B1, B2, first_only=False)
    return len(mats), total


# -- classification of {1, p^3} forms ------------------------------------

THEOREM_CASES = {
    "camina": "i",
    "full": "ii",
    "quotient-M": "iii",
    "quotient-N": "iv",
    "counterexample": "-",
}


@dataclass
class Classification:
    label: str
    case: str
    certificate: IsoclinismCertificate | None = None
    representative: AlternatingMap | None = None
    confirmed: bool = False
    note: str = ""


def theorem_representatives(p: int) -> dict[str, AlternatingMap]:
    """One form per class of the {1, p^3} classification."""
    full = full_lambda2(4, p)
    return {
        "camina": heisenberg_ext(p, 3),
        "full": full,
        "quotient-M": quotient(full, canonical_line(4, 2, p)),
        "quotient-N": quotient(full, canonical_plane(p)),
    }


def _kernel_certificate(B: AlternatingMap, label: str):
    """Certificate against the representative for dimV = 4 forms.

    B(x, y) = L(x ^ y) for the pair-value matrix L; its kernel K in
    Lambda^2 V is a central subspace of the universal group, and the base
    change normalizing K carries B onto the representative quotient.
    """
    p = B.p
    full = full_lambda2(4, p)
    L = B.pair_values().T  # W x Lambda^2
    K = kernel(L, p)
    if K.dim == 0:
        rep = full
        phi = np.eye(4, dtype=DTYPE)
    else:
        res = canonicalize(full, K)
        if not res.accepted:
            return None, None, f"kernel of the form is rejected: {res.reason}"
        rep = quotient(full, res.canonical_subspace)
        phi = res.transform
    try:
        theta = solve_theta(B, rep, phi)
    except BaseChangeError as exc:
        return None, None, str(exc)
    return IsoclinismCertificate(phi, theta), rep, ""


def classify_against_theorem(B: AlternatingMap, budget: int = FORM_BUDGET) -> Classification:
    """Place a form of conjugate type {1, p^3} into one of the four classes.

    Camina forms with dimW = 3 are labelled by definition; forms with
    dimV = 4 are confirmed by an explicit isoclinism certificate to the
    stored representative.
    """
    p = B.p
    ct = conjugate_type(B, budget)
    if ct != frozenset({1, p**3}):
        raise ValueError(f"conjugate type {sorted(ct)} is not {{1, {p**3}}}")
    n, m = B.dim_v, B.dim_w
    if m == 3 and is_camina(B, budget):
        return Classification("camina", "i", confirmed=True, note="Camina with |G'| = p^3")
    label = {6: "full", 5: "quotient-M", 4: "quotient-N"}.get(m) if n == 4 else None
    if label is None or not B.is_spanning():
        return Classification("counterexample", "-", note=f"no class for dimV={n}, dimW={m}")
    cert, rep, why = _kernel_certificate(B, label)
    if cert is None:
        return Classification("counterexample", "-", note=why)
    ok = cert.verify(B, rep)
    return Classification(label, THEOREM_CASES[label], cert, rep, confirmed=ok)
