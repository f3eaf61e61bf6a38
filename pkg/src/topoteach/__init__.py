"""Teaching manifold topology to ball-union and demonstration learners."""

from .complex import (
    FilteredComplex,
    SimplicialComplex,
    cech_filtration,
    complex_at,
    delaunay_cech_filtration,
    min_enclosing_radius,
    rips_filtration,
)
from .demos import DemonstrationSet, DemoComplex, build_demo_complex, format_demo, parse_demo
from .homology import (
    Barcode,
    BettiProfile,
    betti_gf2,
    filter_barcode,
    persistence,
    rank_at,
    rank_measure,
)
from .learners import feasible, persistent_policy, taught_policy, uniform_policy
from .shapes import (
    BarbellAnnulus,
    Circle,
    ReachProfile,
    Torus,
    contains,
    reach_profile,
    sample_uniform,
    target_betti,
)
from .teaching import (
    TeachingCount,
    TeachingSet,
    Window,
    circle_demo,
    circle_teaching_set,
    min_teaching_number_closed,
    min_teaching_number_with_boundary,
    pants_decomposition_count,
    pants_demo,
    pants_gluing_demo,
    torus_demo,
    torus_grid_teaching_set,
    torus_teaching_count,
    verify_teaching_set,
)

__version__ = "0.1.0"
