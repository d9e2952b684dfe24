"""Seeded random streams.

Every trial draws from its own generator derived from the master seed by a
counter-based rule: ``stream(seed, *key)`` is ``PCG64`` seeded with
``SeedSequence(entropy=seed, spawn_key=key)``.  The key is a tuple of
non-negative integers, conventionally ``(model_index, trial_index)``, so adding
trials never perturbs the streams of earlier ones.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np


def stream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def default_workers() -> int:
    env = os.environ.get("RAGLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _run_chunk(args):
    fn, seed, key, indices = args
    return [fn(stream(seed, *key, i)) for i in indices]


def run_trials(fn: Callable[[np.random.Generator], float], seed: int, key: Sequence[int],
               trials: int, workers: int = 1) -> list:
    """Evaluate ``fn(stream(seed, *key, t))`` for ``t = 0..trials-1``.

    Results come back in trial order whatever the worker count, so the
    reduction downstream is bit-reproducible.  ``fn`` must be picklable when
    ``workers > 1``.
    """
    key = tuple(key)
    if workers <= 1 or trials < 2 * workers:
        return [fn(stream(seed, *key, t)) for t in range(trials)]
    chunks = np.array_split(np.arange(trials), workers)
    jobs = [(fn, seed, key, c.tolist()) for c in chunks if len(c)]
    out: list = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_run_chunk, jobs):
            out.extend(part)
    return out
