"""Planar soap-bubble clusters of fixed combinatorial type.

Circular-arc geometry with signed-segment-area (bulge) coordinates, a
half-edge cluster model with JSON and SVG output, equilibrium residuals and
pressures, an area-constrained solver, tangent-space dimension and
second-variation stability, preset constructions, and the oriented-circle /
de Sitter correspondence.
"""

from .cluster import (
    EXTERIOR,
    Cluster,
    EdgeRecord,
    ValidationReport,
    area_jacobian,
    build_cluster_from_arcs,
    dumps,
    loads,
    perimeter,
    region_areas,
    to_svg,
    validate,
)
from .constructions import (
    arc_triangle,
    decorate,
    double_bubble,
    flower,
    four_bubble,
    mobius_apply_cluster,
    necklace,
    quasi_variant,
    random_mobius,
    scale_three_sided,
    triple_bubble,
    two_lens,
)
from .desitter import (
    CorrespondenceReport,
    DeSitterPoint,
    HermitianCircle,
    circle_to_point,
    junction_triples,
    minkowski_form,
    point_to_circle,
    verify_correspondence,
)
from .equilibrium import (
    ResidualReport,
    SolveOptions,
    Verdict,
    classify,
    pressures,
    residuals,
    solve,
)
from .errors import (
    ClusterFormatError,
    FoamlabError,
    GeometryDomainError,
    NonConvergence,
    NotConcurrent,
    PathInconsistent,
    StructuralError,
    TopologyBreakdown,
)
from .geometry import (
    Arc,
    MobiusMap,
    Point,
    arc_carrier,
    arc_length,
    arc_point,
    arc_tangent,
    arc_through,
    bulge_angle_from_area,
    second_intersection,
    segment_area,
)
from .tolerances import DEFAULT, LOOSE, PROFILES, STRICT, TolerancePolicy
from .variation import (
    HessianReport,
    TangentReport,
    continue_family,
    discretize,
    stability_report,
    tangent_dimension,
)

__version__ = "0.1.0"
