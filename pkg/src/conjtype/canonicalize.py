"""Normal forms for central subspaces of the universal form Lambda^2 V.

Given a line M or (for dim V = 4) a plane N inside W = Lambda^2 V, the
reducers below apply a chain of generator substitutions a_i -> a_i * ...
until the subspace reaches a fixed normal form, or they stop with a pair
of independent vectors x, y whose commutator B(x, y) = x ^ y lies in the
subspace, which proves that the quotient has a class of smaller size.

Vectors of W use the ``pair_list`` basis e_ij (i < j, 0-indexed), so
e_01 + e_23 is the product of commutators [a, b][c, d].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .field import PrimeField
from .forms import AlternatingMap, full_lambda2, lambda2_action, pair_index, pair_list
from .linalg import DTYPE, Subspace, inverse, is_invertible

__all__ = [
    "CanonResult",
    "CanonError",
    "canon_line",
    "canon_plane_odd",
    "canon_plane_two",
    "canon_plane",
    "canonicalize",
    "canonical_line",
    "canonical_plane",
    "wedge",
    "pfaffian4",
    "verify_witness",
]


class CanonError(ValueError):
    pass


def wedge(x, y, p: int) -> np.ndarray:
    """x ^ y in the pair_list basis of Lambda^2 V."""
    x = np.asarray(x, dtype=DTYPE)
    y = np.asarray(y, dtype=DTYPE)
    i, j = np.triu_indices(len(x), 1)
    return (x[i] * y[j] - x[j] * y[i]) % p


def pfaffian4(w, p: int) -> int:
    """Pfaffian of a bivector on GF(p)^4; zero iff the bivector is decomposable."""
    w01, w02, w03, w12, w13, w23 = (int(t) for t in w)
    return (w01 * w23 - w02 * w13 + w03 * w12) % p


def verify_witness(x, y, U: Subspace) -> bool:
    """x, y independent and x ^ y a nonzero vector of U."""
    p = U.p
    w = wedge(x, y, p)
    return bool(w.any()) and U.contains(w)


def canonical_line(n: int, m: int, p: int) -> Subspace:
    """<e_01 + e_23 + ... + e_{2m-2, 2m-1}> in Lambda^2 GF(p)^n."""
    if not 1 <= m <= n // 2:
        raise CanonError(f"m must lie in 1..{n // 2}")
    w = np.zeros(n * (n - 1) // 2, dtype=DTYPE)
    for k in range(m):
        w[pair_index(2 * k, 2 * k + 1, n)] = 1
    return Subspace.from_rows([w], p)


def canonical_plane(p: int) -> Subspace:
    """<[a,b][c,d], [a,c][b,d]^r> for odd p (r the least non-square),
    <[a,b][c,d], [a,c][b,d][c,d]> for p = 2."""
    omega = [1, 0, 0, 0, 0, 1]
    if p == 2:
        second = [0, 1, 0, 0, 1, 1]
    else:
        second = [0, 1, 0, 0, PrimeField(p).smallest_nonsquare(), 0]
    return Subspace.from_rows([omega, second], p)


@dataclass
class CanonResult:
    status: str
    input_subspace: Subspace
    transform: np.ndarray
    canonical_subspace: Subspace | None = None
    witness: tuple[np.ndarray, np.ndarray] | None = None
    m_value: int | None = None
    reason: str = ""
    steps: list[str] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.status == "canonical"

    def verify(self) -> bool:
        """Machine check of the result against its input subspace."""
        p = self.input_subspace.p
        if not is_invertible(self.transform, p):
            return False
        if self.accepted:
            theta = lambda2_action(self.transform, p)
            return self.input_subspace.image(theta) == self.canonical_subspace
        x, y = self.witness
        return verify_witness(x, y, self.input_subspace)

    def to_text(self) -> str:
        def row(v):
            return " ".join(str(int(t)) for t in v)

        lines = [f"status {self.status}"]
        if self.reason:
            lines.append(f"reason {self.reason}")
        lines.append("input " + ";".join(",".join(map(str, r)) for r in self.input_subspace.basis.tolist()))
        if self.canonical_subspace is not None:
            lines.append(
                "canonical " + ";".join(",".join(map(str, r)) for r in self.canonical_subspace.basis.tolist())
            )
        if self.m_value is not None:
            lines.append(f"m {self.m_value}")
        lines.append("transform")
        lines.extend(row(r) for r in self.transform)
        if self.witness is not None:
            lines.append("witness_x " + row(self.witness[0]))
            lines.append("witness_y " + row(self.witness[1]))
        lines.append("steps " + (", ".join(self.steps) if self.steps else "none"))
        return "\n".join(lines) + "\n"


class _Reduction:
    """Running state: accumulated base change and the current spanning vectors."""

    def __init__(self, n: int, p: int, vectors):
        self.n = n
        self.p = p
        self.phi = np.eye(n, dtype=DTYPE)
        self.vecs = [np.asarray(v, dtype=DTYPE) % p for v in vectors]
        self.steps: list[str] = []
        self.F = PrimeField(p)

    def coef(self, k: int, i: int, j: int) -> int:
        return int(self.vecs[k][pair_index(i, j, self.n)])

    def apply(self, sigma, label: str) -> None:
        sigma = np.asarray(sigma, dtype=DTYPE) % self.p
        if np.array_equal(sigma, np.eye(self.n, dtype=DTYPE)):
            return
        theta = lambda2_action(sigma, self.p)
        self.vecs = [theta @ v % self.p for v in self.vecs]
        self.phi = sigma @ self.phi % self.p
        self.steps.append(label)

    def substitute(self, target: int, combo: dict[int, int], label: str) -> None:
        """a_target -> a_target * prod a_k^combo[k]."""
        sigma = np.eye(self.n, dtype=DTYPE)
        for k, c in combo.items():
            sigma[k, target] = (sigma[k, target] + c) % self.p
        self.apply(sigma, label)

    def scale(self, target: int, lam: int, label: str) -> None:
        sigma = np.eye(self.n, dtype=DTYPE)
        sigma[target, target] = lam % self.p
        self.apply(sigma, label)

    def swap(self, a: int, b: int) -> None:
        if a == b:
            return
        sigma = np.eye(self.n, dtype=DTYPE)
        sigma[:, [a, b]] = sigma[:, [b, a]]
        self.apply(sigma, f"swap a{a + 1}<->a{b + 1}")

    def pull_back(self, v) -> np.ndarray:
        """Coordinates before the reduction of a vector given after it."""
        return inverse(self.phi, self.p) @ np.asarray(v, dtype=DTYPE) % self.p

    def normalize_bivector(self, k: int) -> int:
        """Bring vecs[k] to e_01 + e_23 + ... + e_{2m-2,2m-1}; return m.

        Each round moves the least nonzero coefficient (i, j) with
        i, j >= base to (base, base+1), makes it 1 and clears every other
        term touching a_base or a_{base+1}.
        """
        n, p = self.n, self.p
        pairs = pair_list(n)
        base = 0
        while base + 1 < n:
            v = self.vecs[k]
            support = [(i, j) for idx, (i, j) in enumerate(pairs) if i >= base and v[idx]]
            if not support:
                break
            i, j = support[0]
            self.swap(base, i)
            self.swap(base + 1, j)
            lead = self.coef(k, base, base + 1)
            if base == 0:
                self.vecs[k] = self.vecs[k] * self.F.inv(lead) % p
            else:
                self.scale(base + 1, self.F.inv(lead), f"a{base + 2} -> a{base + 2}^(1/{lead})")
            a, b = base, base + 1
            combo = {c: -self.coef(k, a, c) % p for c in range(b + 1, n) if self.coef(k, a, c)}
            self.substitute(b, combo, f"clear [a{a + 1}, *]")
            combo = {c: self.coef(k, b, c) for c in range(b + 1, n) if self.coef(k, b, c)}
            self.substitute(a, combo, f"clear [a{b + 1}, *]")
            base += 2
        return base // 2

    def subspace(self) -> Subspace:
        return Subspace.from_rows(np.array(self.vecs), self.p, len(self.vecs[0]))


def _require_full(B: AlternatingMap) -> None:
    if B != full_lambda2(B.dim_v, B.p):
        raise CanonError("reduction is defined for the universal form full_lambda2(n) only")


def _check_input(B: AlternatingMap, U: Subspace, dim: int) -> None:
    _require_full(B)
    if U.p != B.p or U.ambient != B.dim_w:
        raise CanonError(f"subspace must live in W = GF({B.p})^{B.dim_w}")
    if U.dim != dim:
        raise CanonError(f"expected a subspace of dimension {dim}, got {U.dim}")


def canon_line(B: AlternatingMap, M: Subspace) -> CanonResult:
    """Reduce a line M of Lambda^2 V (dim V = n >= 4).

    The quotient has all non-central classes of size p^(n-1) iff M is
    spanned by a bivector of rank >= 4; such M reduce to
    <e_01 + e_23 + ... + e_{2m-2,2m-1}> with 2 <= m <= n/2.
    """
    _check_input(B, M, 1)
    n, p = B.dim_v, B.p
    if n < 4:
        raise CanonError("line reduction needs n >= 4")
    red = _Reduction(n, p, [M.basis[0]])
    m = red.normalize_bivector(0)
    if m == 1:
        x, y = red.pull_back(np.eye(n, dtype=DTYPE)[0]), red.pull_back(np.eye(n, dtype=DTYPE)[1])
        return CanonResult(
            "rejected", M, red.phi, witness=(x, y), m_value=1,
            reason="decomposable bivector: x ^ y spans the line, so x and y commute in the quotient", steps=red.steps,
        )
    canon = canonical_line(n, m, p)
    if red.subspace() != canon:
        raise AssertionError("line reduction did not reach the normal form")
    return CanonResult("canonical", M, red.phi, canonical_subspace=canon, m_value=m, steps=red.steps)


def _reject(red: _Reduction, N: Subspace, x, y, reason: str) -> CanonResult:
    return CanonResult(
        "rejected", N, red.phi, witness=(red.pull_back(x), red.pull_back(y)),
        reason=reason, steps=red.steps,
    )


def _to_n5(red: _Reduction, N: Subspace):
    """Shared front half of the plane reductions.

    Returns either a rejection or (i1, i2) with the current plane equal to
    <e_01 + e_23, e_02 + i1 e_13 + i2 e_23>.
    """
    p = red.p
    e = np.eye(4, dtype=DTYPE)
    u1, u2 = N.basis
    candidates = [(u1 + t * u2) % p for t in range(p)] + [u2]
    good = [k for k, w in enumerate(candidates) if pfaffian4(w, p)]
    if not good:
        # every element of N is decomposable; factor the first one
        probe = _Reduction(4, p, [u1])
        probe.normalize_bivector(0)
        red.phi = probe.phi
        red.steps = probe.steps
        return _reject(red, N, e[0], e[1], "every element of N is decomposable")
    k = good[0]
    w1 = candidates[k]
    other = u2 if k < p else u1
    red.vecs = [w1, other]
    red.normalize_bivector(0)

    omega = np.array([1, 0, 0, 0, 0, 1], dtype=DTYPE)

    def reduce_second():
        # first vector is +-omega after symplectic moves; rescale and clear e_01 from the second
        red.vecs[0] = omega.copy()
        red.vecs[1] = (red.vecs[1] - red.vecs[1][0] * omega) % p

    reduce_second()
    u = red.vecs[1]
    if not u[1]:
        if u[4]:
            red.apply(np.eye(4, dtype=DTYPE)[:, [1, 0, 3, 2]], "a<->b, c<->d")
        elif u[2]:
            red.apply(np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]), "c -> d, d -> c^-1")
        elif u[3]:
            red.apply(np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]), "a -> b, b -> a^-1")
        else:
            return _reject(red, N, e[2], e[3], "N contains [c, d]: the images of c and d commute")
        reduce_second()
    F = red.F
    red.vecs[1] = red.vecs[1] * F.inv(int(red.vecs[1][1])) % p
    # c -> c d^(-j1): clears [a, d] from the second generator
    j1 = int(red.vecs[1][2])
    red.substitute(2, {3: -j1}, "c -> c d^(-j1)")
    reduce_second()
    _, _, j_ad, j1, j2, j3 = (int(t) for t in red.vecs[1])
    assert j_ad == 0
    if j2 == 0:
        x = (e[0] + j1 * e[1] - j3 * e[3]) % p
        return _reject(red, N, x, e[2], "coefficient of [b, d] vanishes: a b^j1 d^-j3 commutes with c")
    # d -> c^(-j1/j2) d
    red.substitute(3, {2: -j1 * F.inv(j2)}, "d -> c^(-j1/j2) d")
    reduce_second()
    v = red.vecs[1]
    assert int(v[1]) == 1 and not v[2] and not v[3]
    return int(v[4]), int(v[5])


def canon_plane_odd(B: AlternatingMap, N: Subspace) -> CanonResult:
    """Reduce a plane N of Lambda^2 GF(p)^4, p odd.

    The quotient is of conjugate type {1, p^3} iff N reduces to
    <e_01 + e_23, e_02 + r e_13> with r the least non-square mod p.
    """
    if B.p == 2:
        raise CanonError("p = 2: use canon_plane_two")
    _check_input(B, N, 2)
    if B.dim_v != 4:
        raise CanonError("plane reduction is defined for dim V = 4")
    p = B.p
    F = PrimeField(p)
    red = _Reduction(4, p, N.basis)
    out = _to_n5(red, N)
    if isinstance(out, CanonResult):
        return out
    i1, i2 = out
    e = np.eye(4, dtype=DTYPE)
    disc = (i2 * i2 + 4 * i1) % p
    if F.is_square(disc):
        # k^2 i1 - k i2 - 1 = 0 has a root; a d^j and b c^k then commute
        k = (i2 + F.sqrt(disc)) * F.inv(2 * i1) % p
        j = -k * i1 % p
        return _reject(
            red, N, (e[0] + j * e[3]) % p, (e[1] + k * e[2]) % p,
            f"i2^2 + 4 i1 = {disc} is a square mod {p}",
        )
    r = F.smallest_nonsquare()
    if i2:
        lam = F.sqrt(disc * F.inv(4 * r))
        t = i2 * F.inv(2) % p
        sigma = np.eye(4, dtype=DTYPE)
        sigma[:, 0] = lam * e[0] + t * e[3]
        sigma[:, 2] = t * e[1] + lam * e[2]
        red.apply(sigma, f"a -> a^{lam} d^{t}, c -> b^{t} c^{lam}")
    elif i1 != r:
        lam = F.sqrt(r * F.inv(i1))
        sigma = np.diag([1, 1, F.inv(lam), lam])
        red.apply(sigma, f"c -> c^(1/{lam}), d -> d^{lam}")
    canon = canonical_plane(p)
    if red.subspace() != canon:
        raise AssertionError("plane reduction did not reach the normal form")
    return CanonResult("canonical", N, red.phi, canonical_subspace=canon, steps=red.steps)


def canon_plane_two(B: AlternatingMap, N: Subspace) -> CanonResult:
    """Reduce a plane N of Lambda^2 GF(2)^4.

    The quotient is of conjugate type {1, 8} iff N reduces to
    <e_01 + e_23, e_02 + e_13 + e_23>.
    """
    if B.p != 2:
        raise CanonError("canon_plane_two works over GF(2) only")
    _check_input(B, N, 2)
    if B.dim_v != 4:
        raise CanonError("plane reduction is defined for dim V = 4")
    red = _Reduction(4, 2, N.basis)
    out = _to_n5(red, N)
    if isinstance(out, CanonResult):
        return out
    i1, i2 = out
    e = np.eye(4, dtype=DTYPE)
    if i2 == 0:
        return _reject(red, N, e[0] + e[3], e[1] + e[2], "i2 = 0: a d^-1 commutes with b c")
    canon = canonical_plane(2)
    if red.subspace() != canon:
        raise AssertionError("plane reduction did not reach the normal form")
    return CanonResult("canonical", N, red.phi, canonical_subspace=canon, steps=red.steps)


def canon_plane(B: AlternatingMap, N: Subspace) -> CanonResult:
    return canon_plane_two(B, N) if B.p == 2 else canon_plane_odd(B, N)


def canonicalize(B: AlternatingMap, U: Subspace) -> CanonResult:
    """Dispatch on dim U: lines for any n >= 4, planes for n = 4."""
    if U.dim == 1:
        return canon_line(B, U)
    if U.dim == 2:
        return canon_plane(B, U)
    raise CanonError(f"no normal form for central subspaces of dimension {U.dim}")
