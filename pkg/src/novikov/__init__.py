"""Exact algebra for the Novikov complex of a circle-valued Morse function.

The input is the chain data (D, F, c, h_D, h_F) of a fundamental domain;
the output is the deformed complex with differential
d_F + z h_F (1 - z h_D)^-1 c over the twisted Laurent ring, its torsion and
the checks relating it to the mapping cone of g - z h.
"""

from .chain import (BasedComplex, ChainHomotopy, ChainIsotopy, ChainMap, cokernel, cokernel_block,
                    cone_coker_equivalence, cone_projection, iso_from_homotopy, iso_from_isotopy,
                    isotopy_compose, isotopy_inverse, mapping_cone)
from .errors import *  # noqa: F401,F403
from .fundamental import (CobordismPiece, FundamentalDomain, exchange, glue, glue_assoc_check,
                          truncated_union, validate, verify_glue_homotopy)
from .homology import BettiTable, betti, compare_cone_coker, novikov_betti, smith_normal_form
from .linalg import adjugate, determinant, inverse, is_invertible, rank
from .matrix import Matrix
from .novikov import (NovikovResult, WittVector, apply_homotopy, cokernel_theorem_data, deformed_differential,
                      exact_deformed_complex, exchange_check, invariance_iso, series_geometric_inverse,
                      sigma_invertible, torsion_witt, tower_check)
from .rings import *  # noqa: F401,F403
from .scenario import Scenario, parse_scenario, serialize_scenario

__version__ = "0.1.0"
