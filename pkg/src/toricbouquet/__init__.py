"""Bouquet decompositions of integer matrices and the toric ideal data they transport."""

from .bases import (GraverBasis, GraverCapExceeded, LawrenceReport, MarkovBasis, NotPositivelyGraded,
                    NotStable, TheoremViolation, check_stable_transport, circuits, classify_lawrence,
                    empty_set_lawrence, fiber_of, find_semiconformal_decomposition, graver_basis,
                    indispensable_binomials, is_generic, is_markov_basis, is_positively_graded,
                    is_s_lawrence, minimal_markov_basis)
from .bouquets import (Bouquet, BouquetDecomposition, Kind, NotInImage, NotSubbouquet,
                       canonical_stable_decomposition, check_unimodular_correspondence,
                       compute_bouquets, is_stable, lift_vector, subbouquet_decomposition,
                       unlift_vector)
from .constructors import (ConstructionError, LawrenceSpec, build_complete_uniform_witness,
                           build_sunflower_family, encode01_stable, generalized_lawrence,
                           hypergraph_from_matrix, second_lawrence)
from .core import (Cancelled, Inconclusive, IntMatrix, SizeLimitExceeded, ToricError,
                   enumerate_bounded_kernel, enumerate_nonnegative_solutions, is_unimodular,
                   kernel_lattice_basis)
from .formats import FormatError, format_matrix, parse_matrix, parse_matrix_file
from .hypergraphs import (Hypergraph, MonomialWalk, check_bouquet_with_basis, imbalance_vector,
                          incidence_matrix, walk_from_vector)

__version__ = "0.1.0"
