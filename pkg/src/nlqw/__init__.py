"""Deterministic simulator and analysis toolkit for nonlinear quantum walks
on the integer lattice with a norm-dependent rotation coin."""

from .coin import CoinParams, apply_coin, rotate, rotation_angle
from .edge import (
    BasinDecomposition,
    BasinLocation,
    EdgeClass,
    EdgeOrbit,
    FixedPointSet,
    Membership,
    amplitude_edge_map,
    basin_intervals,
    critical_points,
    edge_map,
    edge_map_derivative,
    fixed_points,
    in_basin,
    iterate_edge,
    solve_level,
)
from .errors import (
    BranchRootError,
    ComponentError,
    InitSpecError,
    NumericsError,
    RootFindingError,
    WalkError,
    WindowOverflowError,
)
from .evolution import (
    DEFAULT_MAX_WINDOW,
    Observation,
    Trajectory,
    evolve,
    gauge_rescale,
    shift,
    step,
    step_back,
)
from .experiments import (
    CollisionResult,
    CollisionScenario,
    DecayFit,
    PeakPoint,
    PeakTrack,
    TimeSeries,
    edge_perturbation,
    run_collision,
    run_decay,
    scenario_catalog,
    total_variation_profile,
    track_peaks,
)
from .io import InitSpec, format_init_spec, parse_init_spec, write_series
from .solitons import (
    SolitonKind,
    SolitonSpec,
    classify_angle,
    make_soliton,
    soliton_amplitude,
    soliton_spec,
    target_angle,
)
from .state import (
    Spinor,
    SpinorField,
    point_source,
    sup_distance,
    superpose,
    zero_field,
)

__version__ = "0.1.0"
