"""Planar division-tessellation simulator with extreme-value statistics for
cell inradii: geometry kernel, invariant line measure, event-driven engine,
closed-form laws, neighborhood bookkeeping and a Monte Carlo harness."""

__version__ = "0.1.0"

from .geometry import (
    ConvexPolygon,
    GeometryError,
    Line,
    axis_rectangle,
    axis_square,
    clip_halfplane,
    contains,
    incircle,
    perimeter,
    projection_interval,
)
from .linemeasure import (
    lambda_conv_two_disks,
    lambda_hitting,
    lambda_separating_disks,
    sample_hitting_line,
)
from .stit import (
    Cell,
    MaximalSegment,
    SimulationError,
    Tessellation,
    from_json,
    restrict,
    scale,
    simulate,
    to_json,
)
from .extremes import (
    InradiusRecord,
    InradiusRecordSet,
    ObservationWindow,
    build_window,
    collect_records,
    exceedance_count,
    order_statistic,
    threshold_v,
)
from .laws import (
    agg_bound,
    cell_intensity,
    gumbel_limit,
    poisson_pmf,
    tv_distance,
    two_disk_avoidance,
    two_disk_avoidance_envelope,
    typical_inradius_survival,
)
from .chenstein import (
    SubdivisionSpec,
    b1_bound,
    build_subdivision,
    estimate_pair_exceedance,
    neighborhood,
    p_i_analytic,
    rho0_satisfied,
)
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    run_exceedance_experiment,
    run_gumbel_curve,
    run_order_statistics,
    run_two_disk_validation,
    run_typical_inradius_check,
)
