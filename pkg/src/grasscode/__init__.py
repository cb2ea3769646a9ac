"""Grassmann graphs of linear codes over small finite fields.

Exact GF(q) linear algebra, enumeration of Grassmannians, the graph of
non-degenerate codes, its maximal cliques, explicit vertex maps, and the
exhaustive suites that check the combinatorial claims about them.
"""

from .field import FieldAutomorphism, FieldElem, FieldSpec, field_automorphisms, gf
from .linalg import Subspace, canonicalize, intersect, orthocomplement, span, subspace_sum
from .grassmannian import (
    BudgetExceededError,
    GrassmannianParams,
    enumerate_grassmannian,
    gaussian_binomial,
    gaussian_number,
    grassmann_distance,
    is_adjacent,
)
from .codegraph import (
    GraphHandle,
    build_graph,
    coordinate_profile,
    count_codes,
    distance_coincidence_report,
    is_nondegenerate,
    n_count,
)
from .cliques import (
    check_prop_star,
    check_prop_top,
    is_maximal_clique,
    line,
    maximal_clique_census,
    star,
    star_restricted,
    top,
    top_restricted,
)
from .morphisms import (
    MonomialMap,
    SemilinearMap,
    apply_map,
    classify_ABC,
    h_map,
    hyperplane_H,
    orthocomplement_map_check,
    p_subspace,
    verify_automorphism,
    verify_counterexample,
    x_complement,
)
from .suites import run_all, run_suite

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
