"""
Cocompact Fuchsian groups
=========================

Every nontrivial finite subgroup lies in a unique maximal cyclic one, so
the answer splits into the surface part and one term per cone point.
"""

from kborel import fuchsian_pipeline, mnm_assemble
from kborel.complexes import surface_complex
from kborel.groups import cyclic_group

for k in (0, 1):
    out = fuchsian_pipeline(2, [2, 3], k)
    print(f"K^{k} =", out["value"].format())

# the general Mayer-Vietoris route gives the same group
via = mnm_assemble([cyclic_group(2), cyclic_group(3)], surface_complex(2), 0)
print("split:", via["split"], " value:", via["unreduced"].format())

# a triangle group: the sphere contributes Z^2 in degree 0 and nothing in degree 1
print(fuchsian_pipeline(0, [2, 3, 7], 0)["value"].format())
