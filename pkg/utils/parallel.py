# Copyright (c) 2024.
"""Deterministic fan-out of independent seeded tasks."""

from collections.abc import Callable, Sequence

import numpy as np
from joblib import Parallel, delayed


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent child seeds of one root seed, fixed by (seed, count)."""
    return np.random.SeedSequence(seed).spawn(count)


def fan_out[T, R](
    func: Callable[[T], R], tasks: Sequence[T], n_jobs: int = 1
) -> list[R]:
    """Run func over tasks, returning results in task order

    The order of results never depends on n_jobs, so merges over them are
    deterministic.

    Args:
        func: Picklable task function.
        tasks: Task arguments.
        n_jobs: Worker count handed to joblib; 1 runs inline.

    Returns:
        One result per task, in order

    """
    if n_jobs == 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    results = Parallel(n_jobs=n_jobs)(delayed(func)(task) for task in tasks)
    return list(results)
