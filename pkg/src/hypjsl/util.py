"""Small shared helpers."""

from __future__ import annotations

import os


def worker_count() -> int:
    """Number of workers for data-parallel jobs; capped by HYPJSL_THREADS."""
    n = os.cpu_count() or 1
    cap = os.environ.get("HYPJSL_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n
