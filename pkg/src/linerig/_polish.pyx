# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled damped least-squares kernel.

Twin of _polish_py.polish_batch: same signature, same constants, same
accept/reject rule, so either backend may serve the oracle. Each restart
runs entirely in C with a stack-allocated Cholesky solve (the oracle caps
the problem at 12 vertices, well under the buffers here).
"""

import numpy as np

from libc.math cimport fabs, isfinite, sqrt

DEF NMAX = 16
DEF MMAX = 128

BACKEND = "compiled"

cdef double LAM_START = 1e-3
cdef double LAM_DOWN = 0.3
cdef double LAM_UP = 10.0
cdef double LAM_MIN = 1e-14
cdef double LAM_MAX = 1e14


cdef inline double _fill_residuals(double* t, Py_ssize_t m,
                                   long long* eu, long long* ev,
                                   double* ww, double* wa, double* wb,
                                   double* ab, double* target,
                                   double* out) nogil:
    """Residuals into out; returns their sup norm."""
    cdef Py_ssize_t k
    cdef double tu, tv, r, linf = 0.0
    for k in range(m):
        tu = t[eu[k]]
        tv = t[ev[k]]
        r = ww[k] + tu * tu + tv * tv + 2.0 * tu * wa[k] - 2.0 * tv * wb[k] \
            - 2.0 * tu * tv * ab[k] - target[k]
        out[k] = r
        if fabs(r) > linf:
            linf = fabs(r)
    return linf


def polish_batch(double[:, ::1] t0, long long[::1] eu, long long[::1] ev,
                 double[::1] ww, double[::1] wa, double[::1] wb,
                 double[::1] ab, double[::1] target, double tol, int max_iter):
    """Polish every row of t0 to a root of the edge residuals.

    See _polish_py.polish_batch for the full contract; behaviour matches.
    """
    cdef Py_ssize_t nrestarts = t0.shape[0]
    cdef Py_ssize_t n = t0.shape[1]
    cdef Py_ssize_t m = eu.shape[0]
    if n > NMAX:
        raise ValueError(f"kernel supports at most {NMAX} parameters, got {n}")
    if m > MMAX:
        raise ValueError(f"kernel supports at most {MMAX} edges, got {m}")

    tout_arr = np.array(t0, dtype=np.float64)
    ok_arr = np.zeros(nrestarts, dtype=np.uint8)
    it_arr = np.zeros(nrestarts, dtype=np.int64)
    cdef double[:, ::1] tout = tout_arr
    cdef unsigned char[::1] ok = ok_arr
    cdef long long[::1] iters = it_arr

    if m == 0:
        ok_arr[:] = 1
        return tout_arr, ok_arr, it_arr

    cdef double t[NMAX]
    cdef double tnew[NMAX]
    cdef double grad[NMAX]
    cdef double delta[NMAX]
    cdef double y[NMAX]
    cdef double A[NMAX][NMAX]
    cdef double res[MMAX]
    cdef double rnew[MMAX]
    cdef double sse, snew, linf, lam, s, gu, gv, rk
    cdef Py_ssize_t r, i, j, k, kk, u, v
    cdef int it, fail
    cdef long long* eup = &eu[0]
    cdef long long* evp = &ev[0]
    cdef double* wwp = &ww[0]
    cdef double* wap = &wa[0]
    cdef double* wbp = &wb[0]
    cdef double* abp = &ab[0]
    cdef double* tgp = &target[0]

    with nogil:
        for r in range(nrestarts):
            for i in range(n):
                t[i] = tout[r, i]
            linf = _fill_residuals(t, m, eup, evp, wwp, wap, wbp, abp, tgp, res)
            sse = 0.0
            for k in range(m):
                sse += res[k] * res[k]
            lam = LAM_START
            it = 0
            # Run to stall (damping overflow or iteration cap); tol is the
            # final classification, not a stopping rule, so every root gets
            # polished to machine precision.
            while it < max_iter and lam <= LAM_MAX:
                it += 1
                for i in range(n):
                    grad[i] = 0.0
                    for j in range(n):
                        A[i][j] = 0.0
                    A[i][i] = lam
                for k in range(m):
                    u = eup[k]
                    v = evp[k]
                    gu = 2.0 * (t[u] + wap[k] - t[v] * abp[k])
                    gv = 2.0 * (t[v] - wbp[k] - t[u] * abp[k])
                    rk = res[k]
                    A[u][u] += gu * gu
                    A[u][v] += gu * gv
                    A[v][u] += gu * gv
                    A[v][v] += gv * gv
                    grad[u] += gu * rk
                    grad[v] += gv * rk

                # Cholesky A = L L^T in place (lower triangle).
                fail = 0
                for i in range(n):
                    for j in range(i + 1):
                        s = A[i][j]
                        for kk in range(j):
                            s -= A[i][kk] * A[j][kk]
                        if i == j:
                            if s <= 0.0 or not isfinite(s):
                                fail = 1
                                break
                            A[i][i] = sqrt(s)
                        else:
                            A[i][j] = s / A[j][j]
                    if fail:
                        break
                if not fail:
                    for i in range(n):
                        s = grad[i]
                        for kk in range(i):
                            s -= A[i][kk] * y[kk]
                        y[i] = s / A[i][i]
                    for i in range(n - 1, -1, -1):
                        s = y[i]
                        for kk in range(i + 1, n):
                            s -= A[kk][i] * delta[kk]
                        delta[i] = s / A[i][i]
                    for i in range(n):
                        tnew[i] = t[i] - delta[i]
                    linf = _fill_residuals(tnew, m, eup, evp, wwp, wap, wbp, abp, tgp, rnew)
                    snew = 0.0
                    for k in range(m):
                        snew += rnew[k] * rnew[k]
                else:
                    snew = sse  # force the reject branch

                if not fail and isfinite(snew) and snew < sse:
                    for i in range(n):
                        t[i] = tnew[i]
                    for k in range(m):
                        res[k] = rnew[k]
                    sse = snew
                    lam = lam * LAM_DOWN
                    if lam < LAM_MIN:
                        lam = LAM_MIN
                else:
                    lam = lam * LAM_UP
            linf = 0.0
            for k in range(m):
                if fabs(res[k]) > linf:
                    linf = fabs(res[k])
            if linf <= tol:
                ok[r] = 1
            iters[r] = it
            for i in range(n):
                tout[r, i] = t[i]

    return tout_arr, ok_arr, it_arr
