"""Sprawl: average word-metric distance on spheres of Cayley graphs and convex perimeters.

Exact planar values come from the cutline integrator, d-dimensional values
from cone-measure Monte Carlo, and finite-radius values from breadth-first
search on Cayley graphs.
"""

from .cayley import (
    EmpiricalSprawl,
    FreeGroup,
    Lamplighter,
    ZdGroup,
    bfs_spheres,
    empirical_sprawl,
    growth,
    lamplighter_sprawl,
    parse_group,
    word_lengths,
)
from .closed_forms import ShapeSpec, asymptotic_gap, hexagon_formula, sphere_quadrature_check, sprawl_formula
from .cutline import cells, cutlines, hexagon_normalize, side_pair_average, sprawl_exact
from .errors import SprawlError
from .exact import Q
from .geometry import (
    GeneratorSet,
    Perimeter,
    PolytopeH,
    PolytopeV,
    apply_linear,
    approximate_circle,
    cone_weights,
    cube,
    h_from_v,
    hexagon,
    hull,
    knight_octagon,
    norm,
    orthoplex,
    regular_polygon,
    v_from_h,
    volume,
)
from .mahler import MahlerReport, kuperberg_bound, mahler_report, polar, polar_perimeter, santalo_bound
from .montecarlo import (
    FacetSampler,
    SprawlEstimate,
    average_distance_ball,
    average_distance_volume,
    sample_cone,
    sprawl_mc,
    sprawl_mc_sphere,
)

__version__ = "0.1.0"
