"""Numeric fiber-search oracle over the per-vertex line parameters.

Searches the preimage of a framework's measurement by random restarts plus
damped least squares in the natural chart (one scalar per vertex), then
groups the converged points into congruence classes under the isometry
group of the used lines. The class count corroborates YES verdicts (one
class found) and refutes NO instances constructively (two or more).

The polish kernel has two interchangeable backends: a compiled extension
and a pure-numpy fallback. Set LINERIG_PURE=1 to force the fallback;
otherwise the compiled kernel is used when the build produced it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .linegeom import (
    IsomGroup,
    LineSet,
    UnsupportedLineSet,
    is_general_position,
    isometry_group,
)
from .pgraph import partitioned_graph
from .rigidity import Framework, random_generic_framework

if os.environ.get("LINERIG_PURE", "") not in ("", "0"):
    from . import _polish_py as _backend
else:
    try:
        from . import _polish as _backend  # built by setup.py when Cython is present
    except ImportError:
        from . import _polish_py as _backend

MAX_VERTICES = 12
REL_TOL = 1e-9
DEDUP_TOL = 1e-6
MAX_ITER = 200


class TooLarge(ValueError):
    """The oracle runs at desk scale only (at most MAX_VERTICES vertices)."""


def backend_name() -> str:
    """Active polish kernel: "compiled" or "python"."""
    return _backend.BACKEND


@dataclass(frozen=True)
class FiberSearchResult:
    """Converged fiber points grouped into congruence classes.

    classes holds one representative parameter vector per class (unit-speed
    parameters, sorted lexicographically). residual_tol is the absolute
    convergence threshold that every representative satisfies.
    """

    classes: tuple
    restarts_used: int
    n_converged: int
    residual_tol: float
    quotient_group: IsomGroup


def _float_vec(x) -> np.ndarray:
    return np.array([float(c) for c in x], dtype=np.float64)


def _line_floats(line) -> tuple:
    """(base, unit direction, direction norm) of a line as float arrays."""
    b = _float_vec(line.base)
    d = _float_vec(line.direction)
    nrm = float(np.sqrt(d @ d))
    return b, d / nrm, nrm


def _half_turn_taus(group: IsomGroup) -> list:
    """Unit parameters of the half turn's fixed point on each line."""
    taus = []
    for i, x in enumerate(group.generator.points):
        b, dh, _ = _line_floats(group.line_set.lines[i])
        taus.append(float((_float_vec(x) - b) @ dh))
    return taus


def congruent(q1, q2, group: IsomGroup, parts, tol: float = DEDUP_TOL) -> bool:
    """Whether some element of the group maps q1 onto q2 within tol.

    Parameters are unit-speed line parameters; ``parts[v]`` indexes the
    vertex's line within ``group.line_set``. For the continuous 1-d
    Euclidean group the best shift and reflection are solved in closed form
    on the absolute coordinates before comparing.
    """
    a = np.asarray(q1, dtype=np.float64)
    b = np.asarray(q2, dtype=np.float64)
    if a.shape != b.shape or a.shape != (len(parts),):
        raise ValueError("parameter vectors and parts must share one length")
    if group.structure == "trivial":
        return bool(np.max(np.abs(a - b), initial=0.0) <= tol)
    if group.structure == "cyclic_2":
        if np.max(np.abs(a - b), initial=0.0) <= tol:
            return True
        taus = _half_turn_taus(group)
        tau = np.array([taus[p] for p in parts])
        return bool(np.max(np.abs((2.0 * tau - a) - b), initial=0.0) <= tol)
    if group.structure == "euclidean_1d":
        ls = group.line_set
        _, d0, _ = _line_floats(ls.lines[0])
        bproj = np.empty(len(ls.lines))
        sigma = np.empty(len(ls.lines))
        for i, line in enumerate(ls.lines):
            bi, dhi, _ = _line_floats(line)
            bproj[i] = bi @ d0
            sigma[i] = dhi @ d0
        pidx = np.asarray(parts, dtype=np.int64)
        s1 = bproj[pidx] + sigma[pidx] * a
        s2 = bproj[pidx] + sigma[pidx] * b
        diffs = s2 - s1
        c = (diffs.max() + diffs.min()) / 2.0
        if np.max(np.abs(diffs - c)) <= tol:
            return True
        sums = s2 + s1
        c = (sums.max() + sums.min()) / 2.0
        return bool(np.max(np.abs(sums - c)) <= tol)
    raise UnsupportedLineSet(f"unknown group structure {group.structure!r}")


def fiber_search(fw: Framework, restarts: int = 200, seed: int = 0) -> FiberSearchResult:
    """Search the measurement fiber of fw and count congruence classes.

    Draws ``restarts`` initial parameter vectors from a box three times the
    extent of the reference placement (each restart seeded independently
    from (seed, index), so batching cannot change the result), polishes
    them, keeps the converged points, dedupes at parameter distance 1e-6
    and quotients by the isometry group of the used lines.

    Zero converged restarts is reported through ``n_converged`` and an
    empty class list, not as an exception.

    Raises:
        TooLarge: more than MAX_VERTICES vertices.
        UnsupportedLineSet: used lines neither general position nor
            all-parallel.
    """
    g = fw.graph
    if g.n == 0:
        raise ValueError("the fiber of an empty framework is not searchable")
    if g.n > MAX_VERTICES:
        raise TooLarge(f"{g.n} vertices exceed the desk-scale cap {MAX_VERTICES}")
    used = sorted(set(g.part))
    sub = LineSet([fw.lines[p] for p in used])
    remap = {p: i for i, p in enumerate(used)}
    parts = tuple(remap[p] for p in g.part)
    group = isometry_group(sub)

    floats = [_line_floats(line) for line in sub.lines]
    bases = [f[0] for f in floats]
    dhats = [f[1] for f in floats]
    norms = [f[2] for f in floats]
    tref = np.array([float(fw.t[v]) * norms[parts[v]] for v in range(g.n)])

    m = len(g.edges)
    eu = np.array([e[0] for e in g.edges], dtype=np.int64)
    ev = np.array([e[1] for e in g.edges], dtype=np.int64)
    ww = np.empty(m)
    wa = np.empty(m)
    wb = np.empty(m)
    ab = np.empty(m)
    for k, (u, v) in enumerate(g.edges):
        wvec = bases[parts[u]] - bases[parts[v]]
        ww[k] = wvec @ wvec
        wa[k] = wvec @ dhats[parts[u]]
        wb[k] = wvec @ dhats[parts[v]]
        ab[k] = dhats[parts[u]] @ dhats[parts[v]]
    tu, tv = tref[eu], tref[ev]
    target = ww + tu * tu + tv * tv + 2 * tu * wa - 2 * tv * wb - 2 * tu * tv * ab
    tol_abs = REL_TOL * max(1.0, float(np.max(np.abs(target))) if m else 0.0)

    center = float(tref.mean())
    spread = max(1.0, float(np.max(np.abs(tref - center))))
    t0 = np.empty((restarts, g.n))
    for idx in range(restarts):
        rng = np.random.default_rng([seed, idx])
        t0[idx] = rng.uniform(center - 3 * spread, center + 3 * spread, g.n)

    tout, ok, _ = _backend.polish_batch(t0, eu, ev, ww, wa, wb, ab, target, tol_abs, MAX_ITER)
    conv = np.asarray(tout)[np.asarray(ok, dtype=bool)]
    n_converged = int(conv.shape[0])

    reps: list = []
    if n_converged:
        order = np.lexsort(tuple(conv[:, j] for j in range(g.n - 1, -1, -1)))
        for i in order:
            row = conv[i]
            if all(np.max(np.abs(row - r)) > DEDUP_TOL for r in reps):
                reps.append(row)
    classes: list = []
    for row in reps:
        q = tuple(float(x) for x in row)
        if not any(congruent(q, c, group, parts, DEDUP_TOL) for c in classes):
            classes.append(q)
    classes.sort()
    return FiberSearchResult(tuple(classes), restarts, n_converged, tol_abs, group)


def triangle_flex_check(lines: LineSet, seed: int = 0, restarts: int = 200) -> bool:
    """Verify the two-line triangle property on a random placement.

    Builds the triangle with two vertices on the first line and one on the
    second, searches its fiber, and checks that in every class the lone
    vertex sits either at its reference parameter or at its reflection
    through the closest point. Returns False as soon as a class violates
    that (or none converged at all).

    Raises:
        UnsupportedLineSet: not exactly two general-position lines.
    """
    if len(lines.lines) != 2:
        raise UnsupportedLineSet("the triangle check needs exactly two lines")
    if is_general_position(lines) is not True:
        raise UnsupportedLineSet("the triangle check needs the pair in general position")
    g = partitioned_graph(3, (0, 0, 1), [(0, 1), (0, 2), (1, 2)])
    fw = random_generic_framework(g, lines, seed=seed, mode="float")
    res = fiber_search(fw, restarts=restarts, seed=seed)
    if not res.classes:
        return False
    tau = _half_turn_taus(res.quotient_group)[1]
    pw = float(fw.t[2]) * _line_floats(lines.lines[1])[2]
    for cls in res.classes:
        qw = cls[2]
        if not (abs(qw - pw) <= DEDUP_TOL or abs(qw - (2.0 * tau - pw)) <= DEDUP_TOL):
            return False
    return True
