"""Pure-numpy damped least-squares kernel (fallback backend).

Vectorised across restarts: every live restart takes its step in lockstep,
each with its own damping parameter. Semantics and constants match the
compiled twin exactly; only the execution strategy differs.

The per-edge residual for endpoints u, v with unit parameters t is

    ww + t_u^2 + t_v^2 + 2 t_u wa - 2 t_v wb - 2 t_u t_v ab - target

where ww, wa, wb, ab are the precomputed scalars of the edge's line pair
(offset norm, offset-direction products, direction cosine).
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

LAM_START = 1e-3
LAM_DOWN = 0.3
LAM_UP = 10.0
LAM_MIN = 1e-14
LAM_MAX = 1e14


def _residuals(t, eu, ev, ww, wa, wb, ab, target):
    tu = t[:, eu]
    tv = t[:, ev]
    return ww + tu * tu + tv * tv + 2.0 * tu * wa - 2.0 * tv * wb - 2.0 * tu * tv * ab - target


def _solve_rows(A, g):
    """Batched linear solve; flags rows whose system could not be solved."""
    try:
        return np.linalg.solve(A, g[..., None])[..., 0], np.ones(A.shape[0], dtype=bool)
    except np.linalg.LinAlgError:
        out = np.zeros_like(g)
        good = np.zeros(A.shape[0], dtype=bool)
        for i in range(A.shape[0]):
            try:
                out[i] = np.linalg.solve(A[i], g[i])
                good[i] = True
            except np.linalg.LinAlgError:
                pass
        return out, good


def polish_batch(t0, eu, ev, ww, wa, wb, ab, target, tol, max_iter):
    """Polish every row of t0 to a root of the edge residuals.

    Each restart runs until it stalls: the damping parameter overflows
    LAM_MAX (no step improves any more, so roots are already at machine
    precision) or the iteration cap is hit. ``tol`` is applied afterwards
    as the pass/fail classification of the final residual sup norm, never
    as a stopping rule; stopping at the first sub-tol point would leave
    distinct restarts scattered across a tol-wide tube around each root.

    Args:
        t0: (restarts, n) float64 initial parameter vectors.
        eu, ev: (m,) int64 edge endpoint indices.
        ww, wa, wb, ab, target: (m,) float64 per-edge scalars.
        tol: absolute threshold on the final residual sup norm.
        max_iter: iteration cap per restart.

    Returns:
        (tout, ok, iters): final parameters, uint8 convergence flags, and
        per-restart iteration counts.
    """
    t = np.array(t0, dtype=np.float64, copy=True)
    nrestarts, n = t.shape
    m = eu.shape[0]
    iters = np.zeros(nrestarts, dtype=np.int64)
    if m == 0:
        return t, np.ones(nrestarts, dtype=np.uint8), iters

    lam = np.full(nrestarts, LAM_START)
    res = _residuals(t, eu, ev, ww, wa, wb, ab, target)
    sse = np.einsum("rm,rm->r", res, res)
    alive = np.ones(nrestarts, dtype=bool)
    eye = np.eye(n)

    for _ in range(max_iter):
        idx = np.nonzero(alive)[0]
        if idx.size == 0:
            break
        ta = t[idx]
        ra = res[idx]
        A = np.zeros((idx.size, n, n))
        grad = np.zeros((idx.size, n))
        for k in range(m):
            u, v = eu[k], ev[k]
            gu = 2.0 * (ta[:, u] + wa[k] - ta[:, v] * ab[k])
            gv = 2.0 * (ta[:, v] - wb[k] - ta[:, u] * ab[k])
            rk = ra[:, k]
            A[:, u, u] += gu * gu
            A[:, u, v] += gu * gv
            A[:, v, u] += gu * gv
            A[:, v, v] += gv * gv
            grad[:, u] += gu * rk
            grad[:, v] += gv * rk
        A += lam[idx, None, None] * eye
        delta, solvable = _solve_rows(A, grad)
        tnew = ta - delta
        rnew = _residuals(tnew, eu, ev, ww, wa, wb, ab, target)
        snew = np.einsum("rm,rm->r", rnew, rnew)
        better = solvable & np.isfinite(snew) & (snew < sse[idx])

        acc = idx[better]
        rej = idx[~better]
        t[acc] = tnew[better]
        res[acc] = rnew[better]
        sse[acc] = snew[better]
        lam[acc] = np.maximum(lam[acc] * LAM_DOWN, LAM_MIN)
        lam[rej] *= LAM_UP
        iters[idx] += 1
        alive &= lam <= LAM_MAX

    ok = (np.max(np.abs(res), axis=1) <= tol).astype(np.uint8)
    return t, ok, iters
