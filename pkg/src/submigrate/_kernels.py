"""Batched numeric kernels for the Monte Carlo simulators.

The coordination model needs a maximum matching per sample; doing that in a
Python loop dominates a whole experiment run, so the augmenting-path routine
is compiled with numba when available and falls back to pure Python
otherwise.  Adjacency is bitmask-encoded (one int64 per agent, jobs <= 62).
"""
from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


@njit(cache=True)
def _matching_sizes_impl(masks, n_jobs):  # pragma: no cover - exercised via wrapper
    n_samples, n_agents = masks.shape
    out = np.zeros(n_samples, np.int64)
    match_r = np.empty(n_jobs, np.int64)
    visited = np.empty(n_jobs, np.uint8)
    stack_agent = np.empty(n_jobs + 1, np.int64)
    stack_ptr = np.empty(n_jobs + 1, np.int64)
    stack_via = np.empty(n_jobs + 1, np.int64)
    for s in range(n_samples):
        for j in range(n_jobs):
            match_r[j] = -1
        size = 0
        for u0 in range(n_agents):
            for j in range(n_jobs):
                visited[j] = 0
            top = 0
            stack_agent[0] = u0
            stack_ptr[0] = 0
            success = False
            while top >= 0:
                u = stack_agent[top]
                m = masks[s, u]
                v = stack_ptr[top]
                found = -1
                while v < n_jobs:
                    if (m >> v) & 1 == 1 and visited[v] == 0:
                        found = v
                        break
                    v += 1
                if found == -1:
                    top -= 1
                    continue
                visited[found] = 1
                stack_ptr[top] = found + 1
                w = match_r[found]
                if w == -1:
                    match_r[found] = u
                    t = top
                    while t > 0:
                        match_r[stack_via[t]] = stack_agent[t - 1]
                        t -= 1
                    success = True
                    break
                top += 1
                stack_agent[top] = w
                stack_ptr[top] = 0
                stack_via[top] = found
            if success:
                size += 1
        out[s] = size
    return out


def batch_matching_sizes(masks: np.ndarray, n_jobs: int) -> np.ndarray:
    """Maximum-matching size for each row batch of bitmask adjacencies.

    ``masks`` has shape (n_samples, n_agents); bit j of masks[s, u] marks an
    edge between agent u and job j in sample s.
    """
    if n_jobs > 62:
        raise ValueError("bitmask kernel supports at most 62 jobs per locality")
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    if masks.size == 0 or n_jobs == 0:
        return np.zeros(masks.shape[0], dtype=np.int64)
    return _matching_sizes_impl(masks, n_jobs)
