"""
Camina groups from field extensions
===================================

The unitriangular 3x3 matrices over GF(p^m) give a group whose commutator
form is the field multiplication, viewed as a GF(p)-bilinear map.  Every
noncentral element then has the same class size p^m.
"""

from conjtype import GroupModel, conjugate_type, heisenberg_ext, is_camina
from conjtype.group_model import conjugate_type_element_level

for p, m in [(2, 3), (3, 3), (5, 2)]:
    H = heisenberg_ext(p, m)
    print(f"p={p} m={m}: {H}, camina={is_camina(H)}, type={sorted(conjugate_type(H))}")

###############################################################################
# At p = 2 the whole group has 512 elements, small enough to confirm the
# type by conjugating everything.
model = GroupModel(heisenberg_ext(2, 3))
print("element level:", sorted(conjugate_type_element_level(model)))
