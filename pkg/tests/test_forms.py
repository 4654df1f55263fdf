from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conjtype.forms import (
    AlternatingMap,
    BaseChangeError,
    BudgetError,
    FormError,
    base_change,
    breadth,
    breadth_profile,
    breadths,
    check_structure_constraints,
    conjugate_type,
    full_lambda2,
    heisenberg_ext,
    is_camina,
    lambda2_action,
    pair_index,
    quotient,
    radical,
    transform,
    zero_map,
)
from conjtype.linalg import Subspace, all_vectors, enumerate_subspaces, random_invertible, rank


def image_breadth(B: AlternatingMap, x) -> int:
    """log_p of the number of distinct values B(x, y): independent of rank code."""
    vals = {tuple(B(x, y)) for y in all_vectors(B.dim_v, B.p)}
    return round(math.log(len(vals), B.p))


def random_form(rng, p, n, m) -> AlternatingMap:
    T = np.zeros((n, n, m), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            T[i, j] = rng.integers(0, p, size=m)
            T[j, i] = -T[i, j] % p
    return AlternatingMap(p, T)


forms = st.tuples(st.sampled_from([2, 3, 5]), st.integers(2, 4), st.integers(0, 4), st.integers(0, 2**32 - 1)).map(
    lambda t: random_form(np.random.default_rng(t[3]), t[0], t[1], t[2])
)


def test_rejects_non_alternating():
    T = np.zeros((2, 2, 1), dtype=np.int64)
    T[0, 1] = 1
    with pytest.raises(FormError):
        AlternatingMap(3, T)
    T[1, 0] = 2
    T[0, 0] = 1
    with pytest.raises(FormError):
        AlternatingMap(3, T)


def test_full_lambda2_examples():
    B = full_lambda2(4, 3)
    assert (B.dim_v, B.dim_w, B.group_order_exponent) == (4, 6, 10)
    assert B.image_rank() == 6
    assert full_lambda2(2, 5).dim_w == 1
    for i in range(4):
        for j in range(i + 1, 4):
            e = np.eye(4, dtype=int)
            assert B(e[i], e[j])[pair_index(i, j, 4)] == 1
            assert B(e[i], e[j]).sum() == 1


def test_heisenberg_examples():
    H = heisenberg_ext(2, 3)
    assert (H.dim_v, H.dim_w, H.group_order_exponent) == (6, 3, 9)
    assert conjugate_type(heisenberg_ext(3, 3)) == {1, 27}
    assert conjugate_type(heisenberg_ext(3, 1)) == {1, 3}
    for p, m in [(2, 3), (3, 2), (3, 3)]:
        assert is_camina(heisenberg_ext(p, m))


def test_heisenberg_matches_field_multiplication():
    # B((a1, a3), (b1, b3)) = a1 b3 - a3 b1 computed in GF(8) directly
    from conjtype.field import ExtField

    F = ExtField(2, 3)
    H = heisenberg_ext(2, 3)
    rng = np.random.default_rng(0)
    for _ in range(50):
        x, y = rng.integers(0, 2, size=6), rng.integers(0, 2, size=6)
        a1, a3, b1, b3 = tuple(x[:3]), tuple(x[3:]), tuple(y[:3]), tuple(y[3:])
        expect = F.sub(F.mul(a1, b3), F.mul(a3, b1))
        assert tuple(H(x, y)) == expect


def test_breadth_examples():
    B = full_lambda2(4, 3)
    assert breadth(B, np.zeros(4, dtype=int)) == 0
    for x in all_vectors(4, 3)[1:]:
        assert breadth(B, x) == 3
    H = heisenberg_ext(2, 3)
    assert all(breadth(H, x) == 3 for x in all_vectors(6, 2)[1:])


@pytest.mark.parametrize("B", [full_lambda2(4, 2), heisenberg_ext(3, 2), full_lambda2(3, 3)])
def test_breadth_against_image_size(B):
    for x in all_vectors(B.dim_v, B.p):
        assert breadth(B, x) == image_breadth(B, x)


def test_profile_examples():
    assert breadth_profile(full_lambda2(4, 2)) == {3: 15}
    assert breadth_profile(zero_map(2, 1, 3)) == {0: 8}
    assert breadth_profile(heisenberg_ext(3, 2)) == {2: 80}
    assert breadth_profile(heisenberg_ext(2, 3)) == {3: 63}


def test_conjugate_type_examples():
    B = full_lambda2(4, 3)
    assert conjugate_type(B) == {1, 27}
    assert conjugate_type(zero_map(3, 0, 5)) == {1}
    assert not is_camina(B)
    assert is_camina(full_lambda2(2, 7))
    Q = quotient(B, Subspace.from_rows([[1, 0, 0, 0, 0, 0]], 3))
    assert 9 in conjugate_type(Q)
    with pytest.warns(UserWarning):
        assert is_camina(zero_map(2, 0, 3)) is False


def test_quotient_examples():
    B = full_lambda2(4, 3)
    assert conjugate_type(quotient(B, Subspace.zero(6, 3))) == conjugate_type(B)
    assert quotient(B, Subspace.zero(6, 3)) == B
    M = Subspace.from_rows([[1, 0, 0, 0, 0, 1]], 3)
    assert conjugate_type(quotient(B, M)) == {1, 27}
    N = Subspace.from_rows([[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 2, 0]], 3)
    Q = quotient(B, N)
    assert Q.dim_w == 4 and conjugate_type(Q) == {1, 27}
    with pytest.raises(FormError):
        quotient(B, Subspace.zero(5, 3))


def test_quotient_breadth_equals_projected_rank():
    B = full_lambda2(4, 3)
    for U in list(enumerate_subspaces(6, 2, 3))[::97]:
        Q = quotient(B, U)
        P = U.quotient_projection()
        for x in all_vectors(4, 3)[::5]:
            # independent path: stack B(x, .) with U and subtract dim U
            assert breadth(Q, x) == rank(np.hstack([B.left_matrix(x), U.basis.T]), 3) - U.dim
            assert breadth(Q, x) == rank(P @ B.left_matrix(x) % 3, 3)


def test_type_criterion_kernel_is_line():
    # {1, p^(n-1)} iff every kernel of B(x, .) is exactly <x>
    for U in list(enumerate_subspaces(6, 1, 3))[::11]:
        Q = quotient(full_lambda2(4, 3), U)
        crit = all(rank(Q.left_matrix(x), 3) == 3 for x in all_vectors(4, 3)[1:])
        assert (conjugate_type(Q) == {1, 27}) == crit


def test_base_change_transposition():
    B = full_lambda2(4, 3)
    phi = np.eye(4, dtype=int)[:, [1, 0, 2, 3]]
    Bp, theta = base_change(B, phi)
    e12 = np.eye(6, dtype=int)[pair_index(0, 1, 4)]
    e34 = np.eye(6, dtype=int)[pair_index(2, 3, 4)]
    assert np.array_equal(theta @ e12 % 3, 2 * e12)
    assert np.array_equal(theta @ e34 % 3, e34)


def test_base_change_identity_and_errors():
    B = full_lambda2(3, 5)
    Bp, theta = base_change(B, np.eye(3, dtype=int))
    assert Bp == B and np.array_equal(theta, np.eye(3, dtype=int))
    with pytest.raises(BaseChangeError):
        base_change(B, np.zeros((3, 3), dtype=int))
    # in K = full / <e_01>, B(e_0, e_1) = 0 but swapping e_0, e_2 sends it to -e_12
    K = quotient(full_lambda2(3, 3), Subspace.from_rows([[1, 0, 0]], 3))
    with pytest.raises(BaseChangeError) as exc:
        base_change(K, np.eye(3, dtype=int)[:, [2, 1, 0]])
    assert exc.value.witness == (0, 1)


@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]), st.integers(2, 5))
@settings(max_examples=60, deadline=None)
def test_lambda2_functorial(seed, p, n):
    rng = np.random.default_rng(seed)
    a, b = random_invertible(n, p, rng), random_invertible(n, p, rng)
    B = full_lambda2(n, p)
    th = lambda2_action(a, p)
    assert rank(th, p) == th.shape[0]
    assert np.array_equal(lambda2_action(a @ b % p, p), th @ lambda2_action(b, p) % p)
    Bp, theta = base_change(B, a)
    assert np.array_equal(theta, th)
    x, y = rng.integers(0, p, size=n), rng.integers(0, p, size=n)
    assert np.array_equal(theta @ B(x, y) % p, Bp(x, y))


@given(forms, st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_alternating_and_bilinear(B, seed):
    rng = np.random.default_rng(seed)
    p, n = B.p, B.dim_v
    x, x2, y = (rng.integers(0, p, size=n) for _ in range(3))
    c = int(rng.integers(0, p))
    assert not B(x, x).any()
    assert np.array_equal(B(x, y), -B(y, x) % p)
    assert np.array_equal(B((x + c * x2) % p, y), (B(x, y) + c * B(x2, y)) % p)


@given(forms)
@settings(max_examples=60, deadline=None)
def test_breadth_constant_on_lines(B):
    X = all_vectors(B.dim_v, B.p)[1:]
    b = breadths(B, X)
    for lam in range(2, B.p):
        assert np.array_equal(breadths(B, X * lam % B.p), b)


@given(forms, st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_transform_preserves_type_and_camina(B, seed):
    phi = random_invertible(B.dim_v, B.p, np.random.default_rng(seed))
    B2 = transform(B, phi)
    assert conjugate_type(B2) == conjugate_type(B)
    assert breadth_profile(B2) == breadth_profile(B)
    if B.dim_w:
        assert is_camina(B2) == is_camina(B)


def test_base_change_invariance_on_constructed_groups():
    rng = np.random.default_rng(5)
    for B in [full_lambda2(4, 3), heisenberg_ext(2, 3), heisenberg_ext(3, 2)]:
        for _ in range(10):
            B2 = transform(B, random_invertible(B.dim_v, B.p, rng))
            assert conjugate_type(B2) == conjugate_type(B)
            assert is_camina(B2) == is_camina(B)


def test_text_round_trip_examples():
    for B in [full_lambda2(4, 3), heisenberg_ext(2, 3), zero_map(3, 2, 5)]:
        text = B.to_text()
        assert AlternatingMap.from_text(text) == B
        assert AlternatingMap.from_text(text).to_text() == text
    assert full_lambda2(3, 2).to_text() == "2 3 3\n0 1 1 0 0\n0 2 0 1 0\n1 2 0 0 1\n"


@given(forms)
def test_text_round_trip_random(B):
    text = B.to_text()
    assert AlternatingMap.from_text(text).to_text() == text


@pytest.mark.parametrize(
    "text",
    ["", "3 2\n", "4 2 1\n0 1 1\n", "3 2 1\n1 0 1\n", "3 2 1\n0 1 5\n", "3 2 1\n0 1\n", "3 2 1\n0 1 1\n0 1 2\n"],
)
def test_parse_errors(text):
    with pytest.raises(FormError):
        AlternatingMap.from_text(text)


def test_budget_guard():
    with pytest.raises(BudgetError):
        breadth_profile(full_lambda2(4, 3), budget=10)


def test_radical():
    assert radical(full_lambda2(4, 3)).dim == 0
    Q = quotient(full_lambda2(4, 3), Subspace.from_rows([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]], 3))
    assert radical(Q) == Subspace.from_rows([[1, 0, 0, 0]], 3)


def test_structure_examples():
    rep = check_structure_constraints(full_lambda2(4, 3))
    assert rep.passed and rep.checks["vaughan_lee"]
    assert full_lambda2(4, 3).dim_w == 3 * 4 // 2
    rep = check_structure_constraints(heisenberg_ext(3, 3))
    assert rep.passed and "breadth3_dichotomy" in rep.checks
    assert "case (i)" in rep.details["breadth3_dichotomy"]
    N = Subspace.from_rows([[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 2, 0]], 3)
    rep = check_structure_constraints(quotient(full_lambda2(4, 3), N))
    assert rep.passed and "case (ii)" in rep.details["breadth3_dichotomy"]
