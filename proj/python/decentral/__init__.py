"""Decentralization metrics for block production in proof-of-work chains."""

from ._decentral import (
    AnomalyFlag,
    BlockRecord,
    DecentralError,
    MetricPoint,
    MetricSeries,
    MetricStats,
    MetricValue,
    MinerProfile,
    Summary,
    compute_all,
    expected_metrics,
    flag_anomalies,
    generate,
    gini,
    nakamoto,
    parse_stream,
    run,
    serialize,
    shannon_entropy,
    sliding_window_count,
    tally,
    window_labels,
)

__all__ = [
    "AnomalyFlag",
    "BlockRecord",
    "DecentralError",
    "MetricPoint",
    "MetricSeries",
    "MetricStats",
    "MetricValue",
    "MinerProfile",
    "Summary",
    "compute_all",
    "expected_metrics",
    "flag_anomalies",
    "generate",
    "gini",
    "nakamoto",
    "parse_stream",
    "run",
    "serialize",
    "shannon_entropy",
    "sliding_window_count",
    "tally",
    "window_labels",
]
