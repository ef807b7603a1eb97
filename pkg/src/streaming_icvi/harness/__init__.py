from __future__ import annotations

from streaming_icvi.harness.data import (
    Dataset,
    generate_d4,
    ingest,
    normalize,
    presentation_order,
    write_dataset,
)
from streaming_icvi.harness.runner import (
    Experiment,
    RunResult,
    RunSummary,
    StepRecord,
    records_frame,
    run_experiment,
)
from streaming_icvi.harness.sweep import (
    SeriesComparison,
    SweepPoint,
    SweepReport,
    batch_shadow,
    compare_conn,
    compare_series,
)

__all__ = [
    "Dataset",
    "ingest",
    "generate_d4",
    "normalize",
    "presentation_order",
    "write_dataset",
    "Experiment",
    "StepRecord",
    "RunSummary",
    "RunResult",
    "records_frame",
    "run_experiment",
    "SeriesComparison",
    "SweepPoint",
    "SweepReport",
    "batch_shadow",
    "compare_conn",
    "compare_series",
]
