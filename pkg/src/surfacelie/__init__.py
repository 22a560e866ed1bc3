"""Exact integer algebra of surface-group lower central series quotients.

Free Lie algebras in Lyndon coordinates, Magnus expansions, the graded Lie
algebra of a closed surface group, the symplectic module maps around
wedge^3 H, the Johnson homomorphism on word-level Torelli elements, and
brute-force cohomology of finite groups.
"""
from .errors import (DegreeOverflow, ExactnessFailed, IdentityFailed, LiftDegreeError, NotAUnit,
                     NotInImage, NotLie, NotTorelli, NotTorelliModN, ParseError, SurfaceLieError,
                     TooLarge, TorsionFound, TrivialWithinCap)
from .exact_linalg import (SmithForm, cokernel, kernel_basis, smith_normal_form, solve_in_image)
from .free_lie import (DEFAULT_MAX_DEGREE, LieElement, LyndonBasis, NcPoly, assoc_coords, lie_bracket,
                       lyndon_basis, witt_dimension)
from .words import GroupEndo, Word, commutator, parse_endo, parse_word, surface_relator
from .magnus import (AtLeast, SurfaceGr, epsilon_n, filtration_degree, gr_class, magnus_expand,
                     surface_gr)
from .sp_modules import (BasedModule, ModuleMap, build_standard_maps, check_ci_identity,
                         check_decomposition, check_lmodh_roundtrip, check_mod2_injection, decompose,
                         jacobi_exactness, module_lambda3, sp_generator_action, transvection, wedge_power)
from .johnson import (TorelliEndo, f_map, inner_endo, johnson_tau, symplectic_automorphisms,
                      tau_tilde, validate_endo)
from .finite_coh import (FiniteGroupTable, FiniteModule, bockstein_check, cyclic_group, cyclic_module,
                         h1_bruteforce, invariants_mod_p)
from .corpus import CorpusEntry, load_corpus, regenerate_expected, verify_corpus

__version__ = "0.1.0"
