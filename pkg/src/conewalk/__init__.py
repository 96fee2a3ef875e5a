"""Cone-walk navigation on Delaunay triangulations.

A deterministic planar navigation strategy with constant competitiveness:
each step grows a search cone of half angle pi/8 toward the aim until it
hits a site, following only Delaunay adjacencies.  The package bundles the
walk engine, two path generators, reference baseline walks, and a
statistical benchmark harness that validates the closed-form step laws.
"""

from .backend import HAS_COMPILED, backend_name, get_kernel
from .baselines import BaselineResult, compass_walk, greedy_walk, straight_walk
from .bench import ExperimentResult, run_experiment, run_walks
from .delaunay import (
    SiteSet,
    Triangulation,
    build,
    load_sites,
    max_degree,
    neighbors,
    neighbors_of_query,
    save_sites,
    site_set,
    validate,
)
from .errors import (
    ConsistencyError,
    DegeneracyError,
    DivergenceError,
    HullError,
    PathSearchError,
)
from .geometry import (
    UNREACHABLE,
    ConeFrame,
    TheoryConstants,
    angle_cdf,
    angle_pdf,
    in_cone,
    min_disc_radius,
    radius_survival,
    theory_constants,
)
from .paths import (
    DEFAULT_STRETCH_LAMBDA,
    Path,
    PathAudit,
    competitive_path,
    path_audit,
    simple_path,
)
from .sampling import ExperimentConfig, domain_radius, sample_sites, uniform_in_disc
from .stats import StatsTable, WalkRow, export, ks_statistic
from .walk import (
    StepRecord,
    Violation,
    WalkTrace,
    check_step_lemmata,
    cone_walk,
    discovery_length,
    step_oracle,
    trace_from_text,
    trace_to_text,
)

__version__ = "0.1.0"
