"""
Planes and quadratic residues
=============================

For planes N of central elements in the universal 4-generator group,
acceptance comes down to a two-parameter family
<e01 + e23, e02 + i1 e13 + i2 e23>.  For odd p the quotient has all
noncentral classes of size p^3 exactly when i2^2 + 4 i1 is a non-square.
"""

import numpy as np

from conjtype import Subspace, canonicalize, conjugate_type, full_lambda2, quotient

p = 5
B = full_lambda2(4, p)
table = np.zeros((p, p), dtype=int)
for i1 in range(p):
    for i2 in range(p):
        N = Subspace.from_rows([[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, i1, i2]], p)
        table[i1, i2] = canonicalize(B, N).accepted
print("accepted (rows i1, columns i2):")
print(table)

###############################################################################
# Compare with the discriminant test and with brute force.
squares = {x * x % p for x in range(p)}
disc = np.array([[(i2 * i2 + 4 * i1) % p not in squares for i2 in range(p)] for i1 in range(p)])
print("matches discriminant test:", np.array_equal(table, disc))
N = Subspace.from_rows([[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 2, 0]], p)
print("brute force on (2, 0):", sorted(conjugate_type(quotient(B, N))))
