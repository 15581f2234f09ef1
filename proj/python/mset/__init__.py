"""Multi-drone sensing simulator."""

from ._mset_core import (
    AgentPlanSet,
    BatteryInfeasible,
    CoincidentPositions,
    Config,
    DataError,
    DimensionError,
    DroneSpec,
    EmptyPopulation,
    Grid,
    InvalidGeometry,
    InvalidPriority,
    InvalidSpec,
    MsetError,
    Plan,
    Selection,
    UnresolvedSchedule,
    brute_force,
    detect_collisions,
    field_vector,
    generate_plans,
    greedy_select,
    ingest,
    load_config,
    nominal_power,
    optimize,
    default_grid,
    plan_cost,
    repulsion_radius,
    rss,
    run_batch,
    run_cell,
    scale_factor,
)

METHODS = ("EPOS", "EPOS-CA", "EPOS-PF", "Greedy-PF")

__all__ = [name for name in dir() if not name.startswith("_")]
