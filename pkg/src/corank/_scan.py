"""Batch triviality scan for power-substituted words.

This is the one hot loop in the package: evaluating a parametric word at
every integer point of a parameter box and free-reducing in F(x, y).  The
kernel is compiled with numba when available; setting CORANK_DISABLE_NUMBA=1
selects the pure-numpy fallback instead (the linear algebra is vectorized,
the per-point reduction runs in Python).  benchmarks/bench_scan.py compares
the two paths.
"""

from __future__ import annotations

import os

import numpy as np

_TRUTHY = {"1", "true", "yes", "on"}


def _numba_disabled() -> bool:
    return os.environ.get("CORANK_DISABLE_NUMBA", "").strip().lower() in _TRUTHY


def _scan_loop(targets, coeffs, consts, points, out):
    npts = points.shape[0]
    nb = targets.shape[0]
    gens = np.empty(nb, dtype=np.int64)
    exps = np.empty(nb, dtype=np.int64)
    for p in range(npts):
        top = -1
        for i in range(nb):
            e = consts[i]
            for q in range(4):
                e += coeffs[i, q] * points[p, q]
            if e == 0:
                continue
            t = targets[i]
            if top >= 0 and gens[top] == t:
                s = exps[top] + e
                if s == 0:
                    top -= 1
                else:
                    exps[top] = s
            else:
                top += 1
                gens[top] = t
                exps[top] = e
        out[p] = top < 0
    return out


def _scan_numpy(targets, coeffs, consts, points, out):
    expo = points @ coeffs.T + consts
    nb = targets.shape[0]
    tgt = targets.tolist()
    for p in range(points.shape[0]):
        row = expo[p]
        stack: list[tuple[int, int]] = []
        for i in range(nb):
            e = row[i]
            if e == 0:
                continue
            t = tgt[i]
            if stack and stack[-1][0] == t:
                s = stack[-1][1] + e
                stack.pop()
                if s != 0:
                    stack.append((t, s))
            else:
                stack.append((t, e))
        out[p] = not stack
    return out


if _numba_disabled():
    _kernel = _scan_numpy
    BACKEND = "numpy"
else:
    try:
        from numba import njit

        _kernel = njit(cache=True)(_scan_loop)
        BACKEND = "numba"
    except ImportError:
        _kernel = _scan_numpy
        BACKEND = "numpy"


def parametric_arrays(pw) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flatten a ParametricWord into (targets, coefficient matrix, constants)."""
    nb = len(pw.blocks)
    targets = np.empty(nb, dtype=np.int64)
    coeffs = np.empty((nb, 4), dtype=np.int64)
    consts = np.empty(nb, dtype=np.int64)
    for i, (tgt, f) in enumerate(pw.blocks):
        targets[i] = tgt
        coeffs[i] = f.coeffs
        consts[i] = f.const
    return targets, coeffs, consts


def scan_trivial(pw, points: np.ndarray) -> np.ndarray:
    """For each parameter row, whether the substituted word reduces to 1."""
    points = np.ascontiguousarray(points, dtype=np.int64)
    if points.ndim != 2 or points.shape[1] != 4:
        raise ValueError("points must be an (n, 4) integer array")
    out = np.zeros(points.shape[0], dtype=np.bool_)
    if not pw.blocks:
        out[:] = True
        return out
    targets, coeffs, consts = parametric_arrays(pw)
    return np.asarray(_kernel(targets, coeffs, consts, points, out))
