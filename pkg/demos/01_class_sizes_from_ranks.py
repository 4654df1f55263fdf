"""
Class sizes from ranks
======================

In a class-2 group built from an alternating form B: V x V -> W, the
conjugacy class of (v, w) is the coset (v, w + image of B(v, .)), so its
size is p raised to the rank of y -> B(v, y).  This script checks that on
the universal 4-generator group at p = 3, which has 3^10 elements.
"""

import numpy as np

from conjtype import GroupModel, conjugate_type, full_lambda2
from conjtype.forms import breadths
from conjtype.group_model import conjugacy_class, structural_report

# the universal form: W is the exterior square, B(e_i, e_j) = e_i ^ e_j
B = full_lambda2(4, 3)
model = GroupModel(B)
print(B, "order", model.order)

###############################################################################
# The form-level answer: every nonzero v has breadth 3, so the
# conjugate type is {1, 27}.
print("conjugate type from ranks:", sorted(conjugate_type(B)))

###############################################################################
# The element-level answer: conjugate a few random elements by every
# coset representative and count.
rng = np.random.default_rng(0)
for _ in range(5):
    v, w = rng.integers(0, 3, size=4), rng.integers(0, 3, size=6)
    g = model.element(v, w)
    size = len(conjugacy_class(g))
    print(f"v={v} class size {size}, 3^breadth = {3 ** breadths(B, v[None])[0]}")

###############################################################################
# Structural invariants read off the group itself.
rep = structural_report(model)
print({k: rep[k] for k in ("log_order", "log_center", "log_derived", "special", "exponent")})
