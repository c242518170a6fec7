"""Fastest-k distributed SGD simulator: analytic bounds and seeded runs."""

from fastk._core import (
    BoundParams,
    Dataset,
    ExpMeanScaling,
    Optimum,
    OrderStatSummary,
    ResponseTimeModel,
    Shard,
    SwitchEntry,
    SwitchSchedule,
    confidence_level,
    error_bound_iterations,
    error_bound_time,
    full_gradient,
    generate_synthetic,
    loss,
    mean_order_statistic,
    partial_gradient,
    piecewise_bound_curve,
    run,
    shard,
    solve_optimum,
    stationary_floor,
    summarize_order_stats,
    switching_schedule,
    var_order_statistic,
)

__all__ = [
    "BoundParams",
    "Dataset",
    "ExpMeanScaling",
    "Optimum",
    "OrderStatSummary",
    "ResponseTimeModel",
    "Shard",
    "SwitchEntry",
    "SwitchSchedule",
    "confidence_level",
    "error_bound_iterations",
    "error_bound_time",
    "full_gradient",
    "generate_synthetic",
    "loss",
    "mean_order_statistic",
    "partial_gradient",
    "piecewise_bound_curve",
    "run",
    "shard",
    "solve_optimum",
    "stationary_floor",
    "summarize_order_stats",
    "switching_schedule",
    "var_order_statistic",
]
