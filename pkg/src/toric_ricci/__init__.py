"""Greatest Ricci lower bound of Fano homogeneous toric bundles, in exact arithmetic."""
from .bundle import (AmpleVerdict, BundleSpec, DensityForm, FanoFiber, TorusMap, build_delta_M,
                     check_ample, check_fano, density_forms, pullback_forms)
from .exceptions import PreconditionError, SchemaError, ToricRicciError
from .lie import (FlagStructure, RootSystem, build_root_system, center_project, chamber_membership,
                  character_shift, compute_IV, make_flag, validate_complex_structure)
from .polytope import (AffineForm, RationalPolytope, Simplex, brute_force_integrate, contains,
                       from_fano_rays, integrate_product_of_affine_forms, triangulate, vertex_enumeration,
                       weighted_barycenter)
from .ricci import RicciBoundResult, bisect_check, compute_R, toric_R

__version__ = "0.1.0"
