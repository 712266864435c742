"""
Towers, limits and pro-isomorphisms
===================================

The p-adic integers arise as the limit of Z/p^n; towers whose maps
eventually vanish are invisible to lim, lim^1 and the colimits of hom/ext.
"""

from kborel.abelian import FgAbGroup, Z
from kborel.pro import EventuallyZeroMaps, Level, PAdicQuotient, Tower, TowerMap
from kborel.pro import colim_hom_ext, is_pro_isomorphism, is_pro_trivial, lim_lim1
from kborel.repring import CyclicRepRing, augmentation_tower, completion_rank

t = Tower((), PAdicQuotient(Z, 3))
print([t.group(n).format() for n in range(1, 5)])
res = lim_lim1(t)
print("lim =", res.limit.format(), " lim^1 =", res.lim1.format())
print("colim ext =", colim_hom_ext(t).colim_ext.format())

# multiplication by 2 is invertible 3-adically, by 3 it is not
for u in (2, 3):
    tm = TowerMap(t, t, (), ("induced", [[u]]))
    print(f"x{u} pro-iso:", is_pro_isomorphism(tm))

z = Tower((Level(FgAbGroup(0, (4,))),), EventuallyZeroMaps())
print("pro-trivial:", is_pro_trivial(z), lim_lim1(z).limit.format())

# the augmentation-ideal tower of R(Z/4): one Z_2^ per nontrivial element
ring = CyclicRepRing(4)
at = augmentation_tower(ring, 5)
print([at.group(n).format() for n in range(1, 6)])
print("completion rank at 2:", completion_rank(ring, 2))
