"""
K-theory of classifying spaces of finite groups
===============================================

For a finite group acting on a point the exact sequences collapse and the
answer is exact.  The p-adic ranks count conjugacy classes of p-power order.
"""

from kborel import finite_group_pipeline
from kborel.groups import con_p, cyclic_group, symmetric_group

# the cyclic group of order 5: four nontrivial classes, all of 5-power order
out = finite_group_pipeline(cyclic_group(5))
print("K^0(BZ/5) =", out["cohomology"][0].resolved.format())
print("K_1(BZ/5) =", out["homology"][1].resolved.format())

# S3 has one class of involutions and one class of 3-cycles (order, size)
s3 = symmetric_group(3)
for p in (2, 3):
    print(f"con_{p}(S3):", [(c.order_of_rep, c.class_size) for c in con_p(s3, p)])
out = finite_group_pipeline(s3)
print("K^0(BS3) =", out["cohomology"][0].resolved.format())

# the homology side is the Pontryagin dual picture, one degree up
print("duality holds:", all(d["passed"] for d in out["duality"].values()))
