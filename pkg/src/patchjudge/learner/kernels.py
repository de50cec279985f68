"""Hot split-search kernel with numba and pure-numpy implementations.

The exact greedy scan over one presorted feature column dominates training
time, so it is jitted when numba is available.  Both implementations use
the same sequential accumulation order (a running sum in the loop, a
cumulative sum in numpy), so they return bit-identical results; the
``PATCHJUDGE_NUMBA`` environment variable picks the backend:

    PATCHJUDGE_NUMBA=0  force the pure-numpy path
    PATCHJUDGE_NUMBA=1  require numba (ImportError if missing)
    unset / auto        numba when importable, numpy otherwise

``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np

NO_SPLIT = (-np.inf, 0.0, 0)


def _split_scan_loop(values, grad, hess, lam):
    """Best split of one presorted column.

    values/grad/hess are aligned ascending by value.  Returns
    (gain, threshold, left_count); gain is -inf when no boundary between
    distinct values exists.
    """
    n = values.shape[0]
    best_gain = -np.inf
    best_thr = 0.0
    best_left = 0
    if n < 2:
        return best_gain, best_thr, best_left
    total_g = 0.0
    total_h = 0.0
    for i in range(n):
        total_g += grad[i]
        total_h += hess[i]
    parent = total_g * total_g / (total_h + lam)
    gl = 0.0
    hl = 0.0
    for i in range(n - 1):
        gl += grad[i]
        hl += hess[i]
        if values[i] == values[i + 1]:
            continue
        gr = total_g - gl
        hr = total_h - hl
        gain = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent)
        if gain > best_gain:
            best_gain = gain
            best_thr = (values[i] + values[i + 1]) / 2.0
            best_left = i + 1
    return best_gain, best_thr, best_left


def split_scan_numpy(values, grad, hess, lam):
    """Vectorized twin of the loop kernel; same accumulation order."""
    n = values.shape[0]
    if n < 2:
        return NO_SPLIT
    gcum = np.cumsum(grad)
    hcum = np.cumsum(hess)
    total_g = gcum[-1]
    total_h = hcum[-1]
    parent = total_g * total_g / (total_h + lam)
    gl = gcum[:-1]
    hl = hcum[:-1]
    gr = total_g - gl
    hr = total_h - hl
    gains = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent)
    gains[values[:-1] == values[1:]] = -np.inf
    best = int(np.argmax(gains))
    best_gain = float(gains[best])
    if best_gain == -np.inf:
        return NO_SPLIT
    return best_gain, (values[best] + values[best + 1]) / 2.0, best + 1


def _resolve_backend():
    flag = os.environ.get("PATCHJUDGE_NUMBA", "auto").strip().lower()
    if flag in ("0", "off", "false", "no"):
        return "numpy", split_scan_numpy, None
    try:
        from numba import njit
    except ImportError:
        if flag in ("1", "on", "true", "yes"):
            raise
        return "numpy", split_scan_numpy, None
    jitted = njit(cache=True)(_split_scan_loop)
    return "numba", jitted, jitted


_BACKEND_NAME, _IMPL, split_scan_numba = _resolve_backend()


def backend() -> str:
    return _BACKEND_NAME


def split_scan(values, grad, hess, lam):
    return _IMPL(values, grad, hess, lam)
