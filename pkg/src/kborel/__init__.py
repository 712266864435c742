"""K-theory of classifying spaces BG from torsion and fixed-point data."""

from .abelian import (
    AdicGroup,
    DivisibleGroup,
    FgAbGroup,
    dim_hat_p,
    direct_sum,
    euler_dim_hat_sum,
    ext_to_Z,
    hom_to_Z,
    invert_primes,
    pontryagin_dual,
    uct_transfer,
)
from .assemble import (
    GroupPackage,
    HypothesisError,
    KPresentation,
    QuotientData,
    TorsionClass,
    assemble_cohomology,
    assemble_homology,
    borel_uct,
    builtin_package,
    duality_check,
    finite_group_pipeline,
    fuchsian_pipeline,
    mnm_assemble,
    package_from_complex,
    r_pk_from_complex,
    r_pk_from_package,
    rationalize,
)
from .complexes import (
    CwComplex,
    GCwComplex,
    check_acyclicity,
    fixed_subcomplex,
    quotient_complex,
    rational_quotient_cohomology,
    smith_consistency,
    surface_complex,
)
from .groups import FiniteGroup, con_p, conjugacy_classes, cyclic_group, dihedral_group, symmetric_group
from .linalg import ChainComplex, IntMatrix, betti, cokernel, homology, smith_normal_form
from .pro import Tower, TowerMap, colim_hom_ext, is_pro_isomorphism, is_pro_trivial, lim_lim1
from .repring import CyclicRepRing, RepRing, augmentation_tower, completion_rank

__version__ = "0.1.0"
