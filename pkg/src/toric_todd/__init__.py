"""Exact localized equivariant Todd classes of toric varieties.

The public surface re-exports the main types and operations; see the
individual modules for details.
"""

from .cones import (
    Cone,
    ConeError,
    HalfOpenSimplicialCone,
    cofacet_generator,
    dual_cone,
    half_open_triangulation,
    multiplicity,
    parallelepiped_points,
)
from .equivariant import (
    HomologyClass,
    PiecewisePoly,
    PresentationRelation,
    TruncatedPoly,
    cech_cohomology_dims,
    courant_and_phi,
    homology_presentation,
    localized_pd_restrict,
    nonequivariant_ranks,
    piecewise_poly_dims,
    pushforward_subdivision,
    smooth_todd_series,
)
from .fans import (
    Fan,
    FanError,
    FanReport,
    LatticePolytope,
    RefinementMap,
    normal_fan,
    resolve_to_smooth,
    stellar_subdivision,
    validate_fan,
)
from .genfun import (
    RationalGenFun,
    TruncatedSeries,
    cone_generating_function,
    gf_combine,
    gf_equals,
    specialize,
)
from .lattice import primitive_vector
from .polys import LaurentPoly, Polynomial
from .todd import (
    ToddClass,
    a_sigma,
    brion_character,
    count_lattice_points,
    equivariant_todd,
    smooth_crosscheck,
    subdivision_crosscheck,
)

__version__ = "0.1.0"
