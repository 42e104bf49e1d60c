"""Exact solvers for list packing and correspondence packing of graphs.

Build covers of small graphs, decide integral and fractional
packability with certificates, compute packing numbers by exhaustive
enumeration, and reproduce a suite of pinned verdicts end to end.
"""

from .covers import (CorrespondenceCover, ListAssignment, cover_from_lists,
                     enumerate_covers, enumerate_list_covers, expand,
                     identity_cover, is_list_cover, monodromy, untwist, validate)
from .fractional import (FractionalPacking, InfeasibilityCertificate,
                         check_flexibility, enumerate_transversals,
                         fractional_packing, fractional_packing_number,
                         general_fractional_packing)
from .graphs import (Graph, build_standard, clique_number, complete,
                     complete_bipartite, cycle, degeneracy, diamond,
                     diamond_necklace, edge_not_in_triangle, fan7,
                     latin_square, max_degree, path, petersen)
from .packing import (Packing, count_packings, delta3_case_analysis,
                      extend_packing_two_vertices, find_packing,
                      greedy_degenerate_packing, packing_number, validate_packing)

__version__ = "0.1.0"
