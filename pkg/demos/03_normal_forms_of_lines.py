"""
Normal forms of central lines
=============================

A line M in the exterior square of GF(p)^n is spanned by one bivector.
Base changes of V act on it, and the only invariant is the rank of the
bivector.  Quotients G/M keep all class sizes equal to p^(n-1) exactly
when that rank is at least 4.
"""

from conjtype import Subspace, canonicalize, full_lambda2
from conjtype.canonicalize import canonical_line

B = full_lambda2(4, 3)
# [a0, a1][a2, a3]^2 [a0, a2]: a bivector of rank 4 written in a messy basis
M = Subspace.from_rows([[1, 1, 0, 0, 0, 2]], 3)
res = canonicalize(B, M)
print(res.to_text())
print("lands on", canonical_line(4, res.m_value, 3).basis, "verified:", res.verify())

###############################################################################
# A decomposable bivector x ^ y is rejected.  The witness is the pair
# x, y itself, which commutes in the quotient.
res = canonicalize(B, Subspace.from_rows([[1, 2, 0, 0, 0, 0]], 3))
print(res.status, res.reason)
print("witness", res.witness, "verified:", res.verify())
