"""Exact Krull dimension of finitely presented modules over polynomial rings."""

from .autom import (VarChange, compose, identity, invert, is_monic_in_last, monicize, nested_shear,
                    power_subst, shear_swap)
from .coeff import Coeff, CoeffRing, DualNumbers, PrimeField, ProductField, Rationals, parse_ring
from .config import Limits, get_limits, limits
from .errors import (KrullModError, NotAUnit, NotMonic, NotTorsion, ParseError, ResourceLimit,
                     RingMismatch, UnsupportedRing, ZeroModule, ZeroPolynomial)
from .gb import FreeElem, GroebnerBasis, Ideal, buchberger, eliminate, element_annihilator, lt_dimension
from .krull import (DimReport, catalog, check_fg_dim_equality, check_fixed_coordinate_profile, check_kdc,
                    check_strong_kdc, check_torsion_dimension_drop, dim_descent, dim_from_annihilators, dim_oracle,
                    hunt_profile_mismatches)
from .modpres import (ModulePresentation, TorsionProfile, descend, is_torsion_element, is_torsion_module,
                      prune, torsion_profile)
from .nilrad import (check_artinian_profile, is_CN_regular, is_N_torsion, n_dimension, n_torsion_profile,
                     reduce_mod_N)
from .poly import GREVLEX, LEX, MINUS_INFINITY, Block, MonomialOrder, Poly, parse_poly

__version__ = "0.1.0"
