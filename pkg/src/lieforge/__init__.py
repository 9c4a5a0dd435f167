"""Exact computer algebra for Lie algebras given by structure constants."""

from .coadjoint import (GenExpr, apply_field, coadjoint_fields, commutator_matrix, genexpr_zero_test,
                        is_invariant, num_invariants_bb, quadratic_invariants, semi_invariant_weight)
from .exterior import (ExtForm, contact_check, contact_search, d_of_one_form, j0_of_algebra, j0_of_form,
                       maurer_cartan, num_invariants_rc, wedge)
from .families import FamilySpec, build, canonical_invariants, contraction_spec_Q_to_n
from .liealg import (LieAlgebra, bracket, center, derived_series, graded_algebra, is_nilpotent, is_solvable,
                     jacobi_check, lower_central_series, subalgebra_restrict)
from .linalg import bareiss_rank, nullspace
from .ring import Poly, RatFunc, VarRegistry, differentiate, eval_poly
from .structure import (ContractionSpec, ad_matrix, contraction_limit, derivation_profile_check, derivation_space,
                        is_nilpotent_matrix, nil_independence_check, quadratic_form_of, quasi_classical_check,
                        same_constants)

__version__ = "0.1.0"
