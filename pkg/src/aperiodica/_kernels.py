"""Hot inner loops with a numba path and a bitwise-identical numpy fallback.

The chaos-game walk is the only loop in the package whose cost grows with the
requested point count, so it is the one worth compiling.  Both backends
consume the same pre-drawn uniforms and apply floating point operations in
the same order, so their outputs agree bit for bit; the selection is made per
call from the ``APERIODICA_DISABLE_NUMBA`` environment variable (any of
``1/true/yes`` disables compilation).  When numba is unavailable the numpy
path is used silently.

``benchmarks/bench_kernels.py`` times the two paths against each other.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    numba = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    flag = os.environ.get("APERIODICA_DISABLE_NUMBA", "").strip().lower()
    if flag in {"1", "true", "yes"}:
        return False
    return HAVE_NUMBA


def _walk_python(qmat, offsets, map_target, src_ptr, cum_weights, uniforms,
                 start_types, burn_in, out_points, out_types):
    walkers, steps = uniforms.shape
    dim = qmat.shape[0]
    n_out_per = steps - burn_in
    for w in range(walkers):
        x = np.zeros(dim)
        t = start_types[w]
        for step in range(steps):
            lo = src_ptr[t]
            hi = src_ptr[t + 1]
            u = uniforms[w, step]
            k = lo
            while k < hi - 1 and u >= cum_weights[k]:
                k += 1
            y = np.zeros(dim)
            for i in range(dim):
                acc = offsets[k, i]
                for j in range(dim):
                    acc += qmat[i, j] * x[j]
                y[i] = acc
            x = y
            t = map_target[k]
            if step >= burn_in:
                row = w * n_out_per + (step - burn_in)
                for i in range(dim):
                    out_points[row, i] = x[i]
                out_types[row] = t


if HAVE_NUMBA:
    _walk_numba = numba.njit(cache=True)(_walk_python)


def _walk_numpy(qmat, offsets, map_target, src_ptr, cum_weights, uniforms,
                start_types, burn_in, out_points, out_types):
    walkers, steps = uniforms.shape
    dim = qmat.shape[0]
    n_out_per = steps - burn_in
    x = np.zeros((walkers, dim))
    t = start_types.copy()
    counts = src_ptr[1:] - src_ptr[:-1]
    for step in range(steps):
        base = src_ptr[t]
        u = uniforms[:, step]
        k = base.copy()
        active = counts[t] > 1
        # same left-to-right scan as the scalar loop, vectorized over walkers
        remaining = active.copy()
        while remaining.any():
            cw = cum_weights[np.minimum(k, len(cum_weights) - 1)]
            step_up = remaining & (u >= cw) & (k < base + counts[t] - 1)
            if not step_up.any():
                break
            k = k + step_up.astype(np.int64)
            remaining = step_up
        # y_i = offsets[k, i] + sum_j qmat[i, j] * x_j, accumulated in j order
        y = offsets[k].copy()
        for i in range(dim):
            acc = y[:, i]
            for j in range(dim):
                acc = acc + qmat[i, j] * x[:, j]
            y[:, i] = acc
        x = y
        t = map_target[k]
        if step >= burn_in:
            rows = np.arange(walkers) * n_out_per + (step - burn_in)
            out_points[rows] = x
            out_types[rows] = t


def chaos_walk(qmat, offsets, map_target, src_ptr, cum_weights, uniforms,
               start_types, burn_in):
    """Run the graph-directed chaos game; returns (types, points).

    Parameters describe the map system in CSR layout: maps with source type t
    occupy slots src_ptr[t]:src_ptr[t+1]; cum_weights holds the per-source
    cumulative selection thresholds, map_target the type each map lands in.
    """
    walkers, steps = uniforms.shape
    n_out = walkers * (steps - burn_in)
    out_points = np.zeros((n_out, qmat.shape[0]))
    out_types = np.zeros(n_out, dtype=np.int8)
    if numba_enabled():
        _walk_numba(qmat, offsets, map_target, src_ptr, cum_weights, uniforms,
                    start_types, burn_in, out_points, out_types)
    else:
        _walk_numpy(qmat, offsets, map_target, src_ptr, cum_weights, uniforms,
                    start_types, burn_in, out_points, out_types)
    return out_types, out_points
