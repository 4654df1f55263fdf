from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conjtype.canonicalize import (
    CanonError,
    canon_line,
    canon_plane,
    canon_plane_odd,
    canon_plane_two,
    canonical_line,
    canonical_plane,
    canonicalize,
    pfaffian4,
    verify_witness,
    wedge,
)
from conjtype.forms import conjugate_type, full_lambda2, heisenberg_ext, lambda2_action, quotient
from conjtype.linalg import Subspace, enumerate_subspaces, random_invertible, rank

I4 = np.eye(4, dtype=int)


def bivector_rank(w, n, p):
    A = np.zeros((n, n), dtype=int)
    i, j = np.triu_indices(n, 1)
    A[i, j] = w
    A[j, i] = -np.asarray(w)
    return rank(A % p, p)


def brute_accepts(B, U):
    return conjugate_type(quotient(B, U)) == {1, B.p ** (B.dim_v - 1)}


def test_line_already_canonical():
    B = full_lambda2(4, 3)
    r = canon_line(B, Subspace.from_rows([[1, 0, 0, 0, 0, 1]], 3))
    assert r.accepted and r.m_value == 2
    assert np.array_equal(r.transform, I4)
    assert r.canonical_subspace == canonical_line(4, 2, 3)


def test_line_decomposable_rejected_with_witness():
    B = full_lambda2(4, 3)
    M = Subspace.from_rows([[1, 0, 0, 0, 0, 0]], 3)
    r = canon_line(B, M)
    assert not r.accepted and r.m_value == 1
    x, y = r.witness
    assert verify_witness(x, y, M)
    assert np.array_equal(x, I4[0]) and np.array_equal(y, I4[1])
    assert r.verify()


def test_line_counts_p3():
    B = full_lambda2(4, 3)
    results = [canon_line(B, M) for M in enumerate_subspaces(6, 1, 3)]
    assert len(results) == 364
    assert sum(r.accepted for r in results) == 364 - 130 == 234
    assert all(r.m_value == 2 for r in results if r.accepted)
    assert all(r.verify() for r in results)


def test_line_completeness_p5():
    B = full_lambda2(4, 5)
    for M in enumerate_subspaces(6, 1, 5):
        r = canon_line(B, M)
        assert r.verify()
        assert r.accepted == brute_accepts(B, M) == (bivector_rank(M.basis[0], 4, 5) == 4)


lines = st.tuples(st.sampled_from([2, 3, 5]), st.integers(4, 6), st.integers(0, 2**32 - 1))


@given(lines)
@settings(max_examples=120, deadline=None)
def test_line_reduction_random(data):
    p, n, seed = data
    rng = np.random.default_rng(seed)
    d = n * (n - 1) // 2
    w = rng.integers(0, p, size=d)
    if not w.any():
        w[0] = 1
    B = full_lambda2(n, p)
    M = Subspace.from_rows([w], p)
    r = canon_line(B, M)
    assert r.verify()
    rk = bivector_rank(w, n, p)
    assert r.accepted == (rk >= 4)
    if r.accepted:
        assert r.m_value == rk // 2
        assert M.image(lambda2_action(r.transform, p)) == canonical_line(n, r.m_value, p)
    if p ** n <= 3**5:
        assert r.accepted == brute_accepts(B, M)


def test_line_completeness_p2_n5():
    B = full_lambda2(5, 2)
    for M in enumerate_subspaces(10, 1, 2):
        r = canon_line(B, M)
        assert r.verify() and r.accepted == brute_accepts(B, M)


def test_distinct_m_not_related_by_base_change():
    p, n = 2, 6
    L2, L3 = canonical_line(n, 2, p), canonical_line(n, 3, p)
    rng = np.random.default_rng(7)
    for _ in range(500):
        phi = random_invertible(n, p, rng)
        assert L2.image(lambda2_action(phi, p)) != L3
    # the rank of the spanning bivector is the obstruction
    assert bivector_rank(L2.basis[0], n, p) == 4 and bivector_rank(L3.basis[0], n, p) == 6


def test_plane_odd_examples():
    B = full_lambda2(4, 3)
    N = Subspace.from_rows([[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 2, 0]], 3)
    r = canon_plane_odd(B, N)
    assert r.accepted and np.array_equal(r.transform, I4)
    assert r.canonical_subspace == canonical_plane(3)
    # <[a,b][c,d], [c,d]> contains [c,d]: c and d commute in the quotient
    N = Subspace.from_rows([[1, 0, 0, 0, 0, 1], [0, 0, 0, 0, 0, 1]], 3)
    r = canon_plane_odd(B, N)
    assert not r.accepted
    x, y = r.witness
    assert np.array_equal(x, I4[2]) and np.array_equal(y, I4[3])


def test_plane_family_p5_square_discriminant():
    B = full_lambda2(4, 5)
    N = Subspace.from_rows([[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 1, 0]], 5)
    r = canon_plane_odd(B, N)
    assert not r.accepted and verify_witness(*r.witness, N)
    assert not brute_accepts(B, N)
    # k^2 i1 - k i2 - 1 = 0 with i1 = 1, i2 = 0 has k = 1 or 4
    k = int(r.witness[1][2])
    assert (k * k - 1) % 5 == 0


@pytest.mark.parametrize("p", [3, 5, 7])
def test_plane_family_criterion(p):
    B = full_lambda2(4, p)
    for i1 in range(p):
        for i2 in range(p):
            N = Subspace.from_rows([[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, i1, i2]], p)
            r = canon_plane_odd(B, N)
            disc = (i2 * i2 + 4 * i1) % p
            nonsquare = pow(disc, (p - 1) // 2, p) == p - 1
            assert r.accepted == nonsquare == brute_accepts(B, N)
            assert r.verify()


planes = st.tuples(st.sampled_from([3, 5, 7]), st.integers(0, 2**32 - 1))


@given(planes)
@settings(max_examples=150, deadline=None)
def test_plane_odd_random(data):
    p, seed = data
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, p, size=(2, 6))
    if rank(rows, p) < 2:
        rows = np.array([[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 1, 1]])
    B = full_lambda2(4, p)
    N = Subspace.from_rows(rows, p)
    r = canon_plane_odd(B, N)
    assert r.verify()
    assert r.accepted == brute_accepts(B, N)
    # acceptance means no nonzero decomposable element in N
    has_decomposable = any(pfaffian4(v, p) == 0 for v in N.vectors()[1:])
    assert r.accepted == (not has_decomposable)


def test_plane_two_examples():
    B = full_lambda2(4, 2)
    N = Subspace.from_rows([[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 1, 1]], 2)
    r = canon_plane_two(B, N)
    assert r.accepted and np.array_equal(r.transform, I4)
    # i1 = 0: c commutes with a d^(-i2)
    for i2 in (0, 1):
        N = Subspace.from_rows([[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, i2]], 2)
        r = canon_plane_two(B, N)
        assert not r.accepted and verify_witness(*r.witness, N)


def test_plane_two_completeness():
    B = full_lambda2(4, 2)
    acc = []
    for N in enumerate_subspaces(6, 2, 2):
        r = canon_plane_two(B, N)
        assert r.verify() and r.accepted == brute_accepts(B, N)
        acc.append(r.accepted)
    assert sum(acc) == 56


def test_dispatch_and_errors():
    B3, B2 = full_lambda2(4, 3), full_lambda2(4, 2)
    N3 = canonical_plane(3)
    N2 = canonical_plane(2)
    assert canon_plane(B3, N3).accepted and canon_plane(B2, N2).accepted
    assert canonicalize(B3, canonical_line(4, 2, 3)).accepted
    with pytest.raises(CanonError):
        canon_plane_odd(B2, N2)
    with pytest.raises(CanonError):
        canon_plane_two(B3, N3)
    with pytest.raises(CanonError):
        canon_line(B3, N3)
    with pytest.raises(CanonError):
        canon_line(heisenberg_ext(3, 2), Subspace.from_rows([[1, 0]], 3))
    with pytest.raises(CanonError):
        canon_plane_odd(full_lambda2(5, 3), Subspace.from_rows(np.eye(10, dtype=int)[:2], 3))
    with pytest.raises(CanonError):
        canonicalize(B3, Subspace.from_rows(np.eye(6, dtype=int)[:3], 3))


def test_result_text():
    r = canonicalize(full_lambda2(4, 3), Subspace.from_rows([[0, 1, 0, 2, 2, 0], [1, 0, 0, 0, 0, 1]], 3))
    text = r.to_text()
    assert text.startswith("status canonical")
    assert "canonical 1,0,0,0,0,1;0,1,0,0,2,0" in text
    r = canonicalize(full_lambda2(4, 3), Subspace.from_rows([[1, 0, 0, 0, 0, 0]], 3))
    assert "witness_x 1 0 0 0" in r.to_text()


def test_wedge_and_pfaffian():
    e = np.eye(4, dtype=int)
    assert list(wedge(e[0], e[1], 3)) == [1, 0, 0, 0, 0, 0]
    assert list(wedge(e[1], e[0], 3)) == [2, 0, 0, 0, 0, 0]
    assert pfaffian4([1, 0, 0, 0, 0, 1], 3) == 1
    assert pfaffian4(wedge([1, 2, 0, 1], [0, 1, 1, 2], 5), 5) == 0
