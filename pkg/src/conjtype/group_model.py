"""Element-level model of a class-2 special p-group.

Elements are pairs (v, w) with v in V = GF(p)^n and w in W = GF(p)^m,
multiplied through a bilinear cocycle f:

    (v, w)(v', w') = (v + v', w + w' + f(v, v'))

with f(x, y) - f(y, x) = B(x, y), so that commutators of lifts reproduce
the commutator form.  This model is deliberately computed element by
element; it is the independent check on the rank-based form engine.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forms import AlternatingMap, BudgetError, FormError, _data_lines, _parse_form_rows
from .linalg import DTYPE, Subspace, all_vectors, encode

__all__ = [
    "GroupModel",
    "GroupElement",
    "ModelMismatchError",
    "default_cocycle",
    "collection_cocycle",
    "element_order",
    "conjugacy_class",
    "class_sizes",
    "conjugate_type_element_level",
    "structural_report",
    "ELEMENT_BUDGET",
]

ELEMENT_BUDGET = 10**6


class ModelMismatchError(ValueError):
    pass


def collection_cocycle(B: AlternatingMap) -> np.ndarray:
    """f(e_i, e_j) = B(e_i, e_j) for i > j and 0 otherwise."""
    F = np.tril(np.ones((B.dim_v, B.dim_v), dtype=DTYPE), -1)[:, :, None] * B.tensor
    return F % B.p


def default_cocycle(B: AlternatingMap) -> np.ndarray:
    """Half the form for odd p (exponent-p group), the collection cocycle for p = 2."""
    if B.p == 2:
        return collection_cocycle(B)
    half = pow(2, -1, B.p)
    return B.tensor * half % B.p


@dataclass(frozen=True, eq=False)
class GroupModel:
    form: AlternatingMap
    cocycle: np.ndarray

    def __init__(self, form: AlternatingMap, cocycle=None):
        F = default_cocycle(form) if cocycle is None else np.array(cocycle, dtype=DTYPE) % form.p
        n, m = form.dim_v, form.dim_w
        if F.shape != (n, n, m):
            raise FormError(f"cocycle must have shape {(n, n, m)}, got {F.shape}")
        if np.any((F - F.transpose(1, 0, 2) - form.tensor) % form.p):
            raise FormError("cocycle does not satisfy f(x, y) - f(y, x) = B(x, y)")
        F.setflags(write=False)
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "cocycle", F)
        object.__setattr__(self, "_cocycle_f64", F.reshape(n * n, m).astype(np.float64))

    def __eq__(self, other):
        return (
            isinstance(other, GroupModel)
            and self.form == other.form
            and np.array_equal(self.cocycle, other.cocycle)
        )

    def __hash__(self):
        return hash((self.form, self.cocycle.tobytes()))

    @property
    def p(self) -> int:
        return self.form.p

    @property
    def dim_v(self) -> int:
        return self.form.dim_v

    @property
    def dim_w(self) -> int:
        return self.form.dim_w

    @property
    def order(self) -> int:
        return self.p ** (self.dim_v + self.dim_w)

    # -- element constructors -----------------------------------------

    def element(self, v=None, w=None) -> "GroupElement":
        v = np.zeros(self.dim_v, dtype=DTYPE) if v is None else np.asarray(v, dtype=DTYPE)
        w = np.zeros(self.dim_w, dtype=DTYPE) if w is None else np.asarray(w, dtype=DTYPE)
        if v.shape != (self.dim_v,) or w.shape != (self.dim_w,):
            raise FormError("coordinate lengths do not match the model")
        return GroupElement(self, tuple(int(x) for x in v % self.p), tuple(int(x) for x in w % self.p))

    @property
    def identity(self) -> "GroupElement":
        return self.element()

    def generators(self) -> list["GroupElement"]:
        eye = np.eye(self.dim_v, dtype=DTYPE)
        return [self.element(row) for row in eye]

    def elements(self):
        for v in all_vectors(self.dim_v, self.p):
            for w in all_vectors(self.dim_w, self.p):
                yield self.element(v, w)

    # -- vectorized arithmetic on coordinate arrays --------------------

    def f(self, x, y) -> np.ndarray:
        # float matmul uses BLAS; every partial sum is an exact small integer
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        n, m = self.dim_v, self.dim_w
        shape = np.broadcast_shapes(x.shape, y.shape)[:-1]
        outer = (x[..., :, None] * y[..., None, :]).reshape(-1, n * n)
        prod = (outer @ self._cocycle_f64).astype(DTYPE)
        return (prod % self.p).reshape(*shape, m)

    def mul_arrays(self, v1, w1, v2, w2):
        p = self.p
        return (v1 + v2) % p, (w1 + w2 + self.f(v1, v2)) % p

    def inv_arrays(self, v, w):
        p = self.p
        return -v % p, (-w + self.f(v, v)) % p

    def commutator_arrays(self, v1, w1, v2, w2):
        a = self.inv_arrays(v1, w1)
        b = self.inv_arrays(v2, w2)
        ab = self.mul_arrays(*a, *b)
        abg = self.mul_arrays(*ab, v1, w1)
        return self.mul_arrays(*abg, v2, w2)

    def conjugate_arrays(self, v, w, hv, hw):
        """h^-1 g h."""
        hi = self.inv_arrays(hv, hw)
        return self.mul_arrays(*self.mul_arrays(*hi, v, w), hv, hw)

    def to_text(self) -> str:
        text = self.form.to_text()
        if np.array_equal(self.cocycle, default_cocycle(self.form)):
            return text
        lines = ["cocycle"]
        n = self.dim_v
        for i in range(n):
            for j in range(i + 1):
                w = self.cocycle[i, j]
                if w.any():
                    lines.append(" ".join(str(int(x)) for x in (i, j, *w)))
        return text + "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GroupModel":
        """Parse a form file with an optional ``cocycle`` section.

        Cocycle lines ``i j w...`` give f(e_i, e_j) for i >= j; the values
        for i < j follow from f(e_i, e_j) = B(e_i, e_j) + f(e_j, e_i).
        """
        rows = _data_lines(text)
        if not rows:
            raise FormError("empty group file")
        form, used = _parse_form_rows(rows)
        rest = rows[used:]
        if not rest:
            return cls(form)
        if rest[0] != ["cocycle"]:
            raise FormError(f"unexpected section {' '.join(rest[0])!r}")
        n, m, p = form.dim_v, form.dim_w, form.p
        F = np.zeros((n, n, m), dtype=DTYPE)
        for row in rest[1:]:
            try:
                vals = [int(t) for t in row]
            except ValueError as exc:
                raise FormError(f"bad cocycle line {' '.join(row)!r}") from exc
            if len(vals) != m + 2:
                raise FormError(f"cocycle line {' '.join(row)!r} needs {m + 2} integers")
            i, j = vals[:2]
            if not 0 <= j <= i < n:
                raise FormError(f"cocycle pair ({i}, {j}) must satisfy 0 <= j <= i < {n}")
            F[i, j] = vals[2:]
        for i in range(n):
            for j in range(i + 1, n):
                F[i, j] = form.tensor[i, j] + F[j, i]
        return cls(form, F % p)


@dataclass(frozen=True)
class GroupElement:
    model: GroupModel
    v: tuple[int, ...]
    w: tuple[int, ...]

    def _arrays(self):
        return np.array(self.v, dtype=DTYPE), np.array(self.w, dtype=DTYPE)

    def _check(self, other: "GroupElement") -> None:
        if not isinstance(other, GroupElement) or other.model != self.model:
            raise ModelMismatchError("elements belong to different group models")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.model.element(*self.model.mul_arrays(*self._arrays(), *other._arrays()))

    def inverse(self) -> "GroupElement":
        return self.model.element(*self.model.inv_arrays(*self._arrays()))

    def __pow__(self, k: int) -> "GroupElement":
        base = self if k >= 0 else self.inverse()
        out = self.model.identity
        for _ in range(abs(k)):
            out = out * base
        return out

    def commutator(self, other: "GroupElement") -> "GroupElement":
        """[g, h] = g^-1 h^-1 g h."""
        self._check(other)
        return self.inverse() * other.inverse() * self * other

    def conjugate(self, h: "GroupElement") -> "GroupElement":
        self._check(h)
        return h.inverse() * self * h

    def is_identity(self) -> bool:
        return not any(self.v) and not any(self.w)

    def __repr__(self):
        return f"({','.join(map(str, self.v))} | {','.join(map(str, self.w))})"


def element_order(g: GroupElement) -> int:
    k, x = 1, g
    while not x.is_identity():
        x = x * g
        k += 1
    return k


def _conjugator_budget(model: GroupModel, budget: int) -> None:
    if model.p**model.dim_v > budget:
        raise BudgetError(f"{model.p}^{model.dim_v} conjugators exceed the budget {budget}")


def conjugacy_class(g: GroupElement, budget: int = ELEMENT_BUDGET) -> set[GroupElement]:
    """{h^-1 g h}, with h running over the coset representatives (u, 0)."""
    model = g.model
    _conjugator_budget(model, budget)
    U = all_vectors(model.dim_v, model.p)
    v, w = g._arrays()
    cv, cw = model.conjugate_arrays(
        np.broadcast_to(v, U.shape), np.broadcast_to(w, (len(U), model.dim_w)),
        U, np.zeros((len(U), model.dim_w), dtype=DTYPE),
    )
    return {model.element(a, b) for a, b in {(tuple(a), tuple(b)) for a, b in zip(cv, cw)}}


def _whole_group_budget(model: GroupModel, budget: int) -> None:
    if model.order * model.p**model.dim_v > budget * 100:
        raise BudgetError(f"element-level scan of a group of order {model.order} exceeds the budget")


def class_sizes(model: GroupModel, budget: int = ELEMENT_BUDGET) -> np.ndarray:
    """Conjugacy class size of every element.

    Returns an array of shape (p^n, p^m) indexed by the codes of v and w
    (see ``linalg.encode``).  Each class is computed by conjugating with
    every coset representative and counting distinct results.
    """
    _whole_group_budget(model, budget)
    p, n, m = model.p, model.dim_v, model.dim_w
    V = all_vectors(n, p)
    W = all_vectors(m, p)
    nv, nw = len(V), len(W)
    out = np.empty((nv, nw), dtype=DTYPE)
    hv = np.repeat(V[None, :, :], nw, axis=0)
    hw = np.zeros((nw, nv, m), dtype=DTYPE)
    for iv, v in enumerate(V):
        gv = np.broadcast_to(v, (nw, nv, n))
        gw = np.broadcast_to(W[:, None, :], (nw, nv, m))
        cv, cw = model.conjugate_arrays(gv, gw, hv, hw)
        codes = np.sort(encode(cv, p) * p**m + encode(cw, p), axis=1)
        out[iv] = 1 + (np.diff(codes, axis=1) != 0).sum(axis=1)
    return out


def conjugate_type_element_level(model: GroupModel, budget: int = ELEMENT_BUDGET) -> frozenset[int]:
    return frozenset(int(s) for s in np.unique(class_sizes(model, budget)))


def _orders(model: GroupModel, V, W) -> np.ndarray:
    """Element orders for the elements given by coordinate rows."""
    p = model.p
    order = np.zeros(len(V), dtype=DTYPE)
    xv, xw = V.copy(), W.copy()
    k = 1
    while True:
        done = ~(xv.any(axis=1) | xw.any(axis=1))
        order[(order == 0) & done] = k
        if (order > 0).all():
            return order
        if k > p**3:
            raise AssertionError("element order exceeds p^3 in a class-2 model")
        xv, xw = model.mul_arrays(xv, xw, V, W)
        k += 1


def structural_report(model: GroupModel, budget: int = ELEMENT_BUDGET) -> dict:
    """Center, derived subgroup, Frattini subgroup, exponent and specialness by element scans."""
    _whole_group_budget(model, budget)
    p, n, m = model.p, model.dim_v, model.dim_w
    V = all_vectors(n, p)
    W = all_vectors(m, p)
    GV = np.repeat(V, len(W), axis=0)
    GW = np.tile(W, (len(V), 1))

    # center: commutes with every (e_i, 0) and every (0, e_k).  In
    # g s versus s g the w-parts agree exactly when f(v, s_v) = f(s_v, v),
    # so the whole scan is two matrix products over all elements.
    gens_v = np.vstack([np.eye(n, dtype=DTYPE), np.zeros((m, n), dtype=DTYPE)])
    Fc = model.cocycle.astype(np.float64)
    Sv = gens_v.astype(np.float64)
    gs = GV.astype(np.float64) @ np.einsum("gb,abk->agk", Sv, Fc).reshape(n, -1)
    sg = GV.astype(np.float64) @ np.einsum("ga,abk->bgk", Sv, Fc).reshape(n, -1)
    central = ((gs - sg).astype(DTYPE) % p == 0).all(axis=1)
    ZV, ZW = GV[central], GW[central]

    # derived subgroup: generated by commutators of coset representatives
    iv, jv = np.meshgrid(np.arange(len(V)), np.arange(len(V)), indexing="ij")
    zero_w = np.zeros((iv.size, m), dtype=DTYPE)
    cv, cw = model.commutator_arrays(V[iv.ravel()], zero_w, V[jv.ravel()], zero_w)
    comm_central = not cv.any()
    derived = Subspace.from_rows(cw, p, m) if m else Subspace.zero(0, p)

    # Frattini subgroup: generated by G' and the p-th powers
    xv, xw = GV.copy(), GW.copy()
    for _ in range(p - 1):
        xv, xw = model.mul_arrays(xv, xw, GV, GW)
    powers_central = not xv.any()
    frattini = Subspace.from_rows(np.vstack([derived.basis, xw]), p, m) if m else derived

    orders = _orders(model, GV, GW)
    z_in_w = not ZV.any()
    center = Subspace.from_rows(ZW, p, m) if (z_in_w and m) else None
    omega1 = int(((orders[central] == 1) | (orders[central] == p)).sum())
    log_center = round(np.log(len(ZV)) / np.log(p))
    special = (
        z_in_w and comm_central and powers_central
        and center is not None and center == derived == frattini
    )
    return {
        "order": model.order,
        "log_order": n + m,
        "log_center": int(log_center),
        "log_derived": derived.dim,
        "log_frattini": frattini.dim,
        "frattini_quotient_dim": n + m - frattini.dim,
        "min_generators": n + m - frattini.dim,
        "exponent": int(orders.max()),
        "special": bool(special),
        "log_omega1_center": int(round(np.log(omega1) / np.log(p))),
        "commutators_central": bool(comm_central),
        "nilpotency_class": 1 if derived.dim == 0 else 2,
    }
