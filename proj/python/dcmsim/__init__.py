"""Python interface to the data-driven connectivity maintenance simulator."""

from ._dcm import (
    Arena,
    CommGraph,
    ConstraintRow,
    FieldSpec,
    GpEval,
    GpHyper,
    GpModel,
    ObstacleSet,
    PairSample,
    QpProblem,
    QpSolution,
    QpStatus,
    RobotSpec,
    RunSummary,
    Scenario,
    SpanningTree,
    StepRecord,
    algebraic_connectivity,
    build_graph,
    format_scenario,
    is_strongly_connected,
    load_scenario,
    make_ring_scenario,
    min_spanning_tree,
    rssi,
    run,
    solve_qp,
    summarize,
    try_measure,
)

__all__ = [
    "Arena",
    "CommGraph",
    "ConstraintRow",
    "FieldSpec",
    "GpEval",
    "GpHyper",
    "GpModel",
    "ObstacleSet",
    "PairSample",
    "QpProblem",
    "QpSolution",
    "QpStatus",
    "RobotSpec",
    "RunSummary",
    "Scenario",
    "SpanningTree",
    "StepRecord",
    "algebraic_connectivity",
    "build_graph",
    "format_scenario",
    "is_strongly_connected",
    "load_scenario",
    "make_ring_scenario",
    "min_spanning_tree",
    "rssi",
    "run",
    "solve_qp",
    "summarize",
    "try_measure",
]
