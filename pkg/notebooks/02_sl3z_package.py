"""
An infinite group from a package of class data
==============================================

SL3(Z) has four conjugacy classes of elements of order 2 and two of
order 3, all with rationally acyclic centralizers, and its proper
classifying space has contractible quotient.  That is all the engine needs.
"""

from kborel.assemble import assemble_cohomology, builtin_package, r_table, rationalize

pkg = builtin_package("sl3z")
print("r-table:", r_table(pkg))

# unreduced and reduced presentations of K^0; the B/C slots are the
# finite groups the sequence cannot pin down (torsion at 2 and 3 only)
pres = assemble_cohomology(pkg, 0)
print(pres.format())
print(pres.to_reduced().format())

# K^1 is finite: no odd-degree rational cohomology in any centralizer
print(assemble_cohomology(pkg, 1).format())

# after inverting 6 everything is exact
print(rationalize(pres).format())
