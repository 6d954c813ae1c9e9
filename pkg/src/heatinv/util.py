"""Shared runtime knobs."""

from __future__ import annotations

import os


def worker_count() -> int:
    """Worker cap for parallel sections, from the HEATINV_THREADS environment
    variable (default 1, i.e. serial).  Results never depend on this value;
    work is partitioned by fixed-size chunk before any parallel dispatch."""
    raw = os.environ.get("HEATINV_THREADS", "1")
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"HEATINV_THREADS must be an integer, got {raw!r}") from exc
    return max(1, min(value, os.cpu_count() or 1))
