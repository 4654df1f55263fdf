"""
Isoclinism certificates
=======================

Two groups are isoclinic when a base change phi of V and a linear map
theta of W carry one commutator form onto the other.  Since W is spanned
by commutators, theta is determined by phi.
"""

import numpy as np

from conjtype import find_isoclinism, fingerprint, full_lambda2, quotient, transform
from conjtype.canonicalize import canonical_line
from conjtype.isoclinism import classify_against_theorem
from conjtype.linalg import Subspace, random_invertible

B = quotient(full_lambda2(4, 2), canonical_line(4, 2, 2))
C = transform(B, random_invertible(4, 2, np.random.default_rng(1)))
res = find_isoclinism(B, C)
print(res.status, "-", res.reason)
print(res.certificate.to_text())

###############################################################################
# Fingerprints separate groups cheaply.  A quotient by a decomposable
# line has a different breadth census.
D = quotient(full_lambda2(4, 2), Subspace.from_rows([[1, 0, 0, 0, 0, 0]], 2))
print(fingerprint(B).differences(fingerprint(D)))
print(find_isoclinism(B, D).status)

###############################################################################
# Forms with all noncentral classes of size p^3 fall into four classes.
for B in (full_lambda2(4, 3), quotient(full_lambda2(4, 3), canonical_line(4, 2, 3))):
    c = classify_against_theorem(B)
    print(c.label, "confirmed by certificate:", c.confirmed)
