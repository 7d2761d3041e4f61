"""Python bindings for the LFU / PLFU / PLFUA cache-management simulator."""

from ._core import (
    AccessEvent,
    CacheEngine,
    Outcome,
    PlfuError,
    Policy,
    RunReport,
    ScatterPoint,
    SweepConfig,
    capacity_for,
    default_grid,
    generate,
    hot_set,
    hot_set_for_zipf,
    ingest_sessions,
    parse_policy,
    replay,
    run_sweep,
    scatter,
    timed_run,
    zipf_pmf,
)

__all__ = [
    "AccessEvent",
    "CacheEngine",
    "Outcome",
    "PlfuError",
    "Policy",
    "RunReport",
    "ScatterPoint",
    "SweepConfig",
    "capacity_for",
    "default_grid",
    "generate",
    "hot_set",
    "hot_set_for_zipf",
    "ingest_sessions",
    "parse_policy",
    "replay",
    "run_sweep",
    "scatter",
    "timed_run",
    "zipf_pmf",
]
