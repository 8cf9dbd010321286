"""Brute-force reference implementations.

These trade speed for transparency: a dense grid scan of the least
squares objective and an exhaustive box enumeration for closest-point
queries.  They ship in the library (not just the test suite) so the CLI
can cross-check production answers with --verify.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import InputError
from .estimator import PhaseObservation, ls_objective, wrap_array
from .lattice import CvpSolution, DualBasis, RangingPlan, evaluate_candidate

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_MAX_BOX_POINTS = 10**8
# Near-tie margin used when re-ranking box candidates with the canonical
# distance formula.
_TIE_REL = 1e-9


def _golden_min(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    best_x, best_f = (c, fc) if fc <= fd else (d, fd)
    while (b - a) > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
            if fc < best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
            if fd < best_f:
                best_x, best_f = d, fd
    return best_x, best_f


def grid_argmin(
    plan: RangingPlan, obs: PhaseObservation, grid_points: int
) -> tuple[float, float]:
    """Best range on a uniform grid over [0, P), refined by golden section.

    The refinement runs inside the winning grid cell down to 1e-12 * P and
    never reports a value above the coarse grid minimum.
    """
    if grid_points < 1000:
        raise InputError("grid_points must be at least 1000")
    p = plan.period_float
    betas = np.arange(grid_points, dtype=float) / grid_points
    total = np.zeros(grid_points)
    for i in range(plan.size):
        e = wrap_array(obs.values[i] - betas * plan.v_float[i])
        total += e * e
    idx = int(np.argmin(total))
    coarse_r = p * idx / grid_points
    coarse_val = float(total[idx])

    h = p / grid_points
    refined_r, _ = _golden_min(
        lambda r: ls_objective(plan, obs, r), coarse_r - h, coarse_r + h, 1e-12 * p
    )
    refined_r %= p
    refined_val = ls_objective(plan, obs, refined_r)
    if refined_val <= coarse_val:
        return refined_r, refined_val
    return coarse_r, coarse_val


def brute_cvp(basis: DualBasis, target: Sequence[float], box_radius: int) -> CvpSolution:
    """Exhaustive closest-point search over a coefficient box.

    The box is taken in the coordinates of the reduced lift (basis columns
    times basis.reduced_transform): the raw projected basis is far too
    skewed for any fixed box to contain optima, while reduced coefficients
    of realistic targets are single digits.  Every box point is scanned in
    lexicographic order and the smallest canonical distance wins (ties
    resolved toward the first).  The returned coefficients are raw, so
    x = B w as everywhere else.  Raises if the winner touches the box
    boundary, since the true optimum may then lie outside.
    """
    n = basis.dim
    if box_radius < 0:
        raise InputError("box_radius must be nonnegative")
    if (2 * box_radius + 1) ** n > _MAX_BOX_POINTS:
        raise InputError("box too large to enumerate")
    t = np.asarray(target, dtype=float)
    if t.shape != (n + 1,) or not np.isfinite(t).all():
        raise InputError("target must be a finite vector matching the basis")

    tr = basis.reduced_transform
    b_red = basis.B @ np.array(tr, dtype=float)
    coords = np.arange(-box_radius, box_radius + 1)
    rest: np.ndarray | None = None
    if n > 1:
        grids = np.meshgrid(*([coords] * (n - 1)), indexing="ij")
        rest = np.stack(grids, axis=-1).reshape(-1, n - 1)

    dmin = math.inf
    near: list[tuple[float, tuple[int, ...]]] = []
    for w0 in coords:
        if rest is None:
            block = np.array([[w0]])
        else:
            block = np.hstack([np.full((rest.shape[0], 1), w0), rest])
        diff = t[None, :] - block @ b_red.T
        dists = np.einsum("ij,ij->i", diff, diff)
        margin = dmin + _TIE_REL * dmin + 1e-15
        hits = np.nonzero(dists <= margin)[0]
        for i in hits:
            d = float(dists[i])
            if d < dmin:
                dmin = d
                margin = dmin + _TIE_REL * dmin + 1e-15
                near = [(dd, ww) for dd, ww in near if dd <= margin]
            near.append((d, tuple(int(c) for c in block[i])))

    best: CvpSolution | None = None
    best_red: tuple[int, ...] = ()
    for _, w_red in near:
        w_raw = [sum(tr[i][j] * w_red[j] for j in range(n)) for i in range(n)]
        cand = evaluate_candidate(basis, t, w_raw)
        if best is None or cand.dist_sq < best.dist_sq:
            best = cand
            best_red = w_red
    assert best is not None
    if best_red and max(abs(c) for c in best_red) == box_radius:
        raise InputError("optimum on box boundary: box_radius too small")
    return best
