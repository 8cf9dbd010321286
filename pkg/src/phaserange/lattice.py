"""Lattice machinery for multi-wavelength ranging.

Given positive rational wavelengths with least common multiple P, the
integer vector v (entries P divided by each wavelength) defines an
(N-1)-dimensional lattice: the projections Q z of the integer lattice onto
the hyperplane orthogonal to v, where Q is the orthogonal projector.  This
module builds an explicit basis for that lattice from a chain of 2x2
elementary unimodular matrices, and solves closest-point queries against
it with a depth-first sphere search.

All constructions are exact (Python integers / fractions); floats appear
only in the final basis matrix handed to the enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import InputError, InternalCheckError
from .exactmath import Rational, extended_gcd, lcm_rationals

_LLL_DELTA = Fraction(3, 4)
_RANK_TOL = 1e-10
# Relative slack on the enumeration pruning radius so float noise in the
# triangular factorization can never prune the true optimum.
_PRUNE_SLACK = 1e-9


# ---------------------------------------------------------------------------
# exact integer matrix helpers

def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact product of two integer matrices."""
    rows, inner, cols = len(a), len(b), len(b[0])
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def mat_vec(a: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    """Exact integer matrix-vector product."""
    return [sum(row[j] * x[j] for j in range(len(x))) for row in a]


def det_exact(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free Bareiss)."""
    a = [[int(x) for x in row] for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def inverse_exact(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Exact inverse of a square integer (or rational) matrix."""
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise InternalCheckError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


# ---------------------------------------------------------------------------
# ranging plan

@dataclass(frozen=True)
class RangingPlan:
    """Validated wavelength set with its period and integer vector.

    v[n] = period / wavelength[n] is exactly integral, and the v are
    jointly relatively prime (guaranteed by minimality of the lcm).
    """

    wavelengths: tuple[Fraction, ...]
    period: Fraction
    v: tuple[int, ...]

    @property
    def size(self) -> int:
        """Number of wavelengths N."""
        return len(self.v)

    @cached_property
    def v_norm_sq(self) -> int:
        return sum(x * x for x in self.v)

    @cached_property
    def v_float(self) -> np.ndarray:
        a = np.array(self.v, dtype=float)
        a.setflags(write=False)
        return a

    @cached_property
    def period_float(self) -> float:
        return float(self.period)


def build_plan(wavelengths: Sequence[Rational]) -> RangingPlan:
    """Validate wavelengths and derive the period P and integer vector v."""
    try:
        ws = tuple(Fraction(w) for w in wavelengths)
    except (ValueError, TypeError, ArithmeticError) as exc:
        raise InputError(f"wavelengths must be rationals: {exc}") from exc
    if len(ws) < 2:
        raise InputError("a ranging plan needs at least 2 wavelengths")
    period = lcm_rationals(ws)
    v = []
    for w in ws:
        q = period / w
        if q.denominator != 1:
            raise InternalCheckError(f"period {period} not divisible by wavelength {w}")
        v.append(q.numerator)
    if math.gcd(*v) != 1:
        raise InternalCheckError(f"v = {v} is not jointly relatively prime")
    return RangingPlan(ws, period, tuple(v))


# ---------------------------------------------------------------------------
# unimodular lift construction

def gcd_chain(v: Sequence[int]) -> list[int]:
    """Tail-anchored gcd chain: g[-1] = v[-1], g[k] = gcd(v[k], g[k+1]).

    The chain must terminate at 1 (jointly relatively prime input);
    anything else is an invalid plan.
    """
    if not v:
        raise InputError("gcd_chain of an empty vector")
    g = [0] * len(v)
    g[-1] = int(v[-1])
    for k in range(len(v) - 2, -1, -1):
        g[k] = math.gcd(int(v[k]), g[k + 1])
    if g[0] != 1:
        raise InputError(f"entries are not jointly relatively prime: gcd = {g[0]}")
    return g


def elementary_matrix(k: int, v: Sequence[int], g: Sequence[int]) -> list[list[int]]:
    """The k-th elementary factor of the lift (k is 1-based, 1 <= k <= N-1).

    Identity apart from the 2x2 block at rows/cols {k, k+1}:

        [ v[k]/g[k]      a ]
        [ g[k+1]/g[k]    b ]

    with b*(v[k]/g[k]) - a*(g[k+1]/g[k]) = 1, so the block (and the whole
    matrix) has determinant exactly 1.  The Bezout pair comes from
    extended_gcd and inherits its minimal-magnitude convention.
    """
    n = len(v)
    if not 1 <= k <= n - 1:
        raise InputError(f"k = {k} outside 1..{n - 1}")
    p = int(v[k - 1]) // int(g[k - 1])
    q = int(g[k]) // int(g[k - 1])
    _, s, t = extended_gcd(p, q)
    b, a = s, -t
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    m[k - 1][k - 1] = p
    m[k - 1][k] = a
    m[k][k - 1] = q
    m[k][k] = b
    return m


@dataclass(frozen=True)
class UnimodularLift:
    """Unimodular U with first column v, and U2 = U without that column."""

    U: tuple[tuple[int, ...], ...]
    U2: tuple[tuple[int, ...], ...]
    det: int


def build_lift(plan: RangingPlan) -> UnimodularLift:
    """Product of the elementary factors, checked exactly before returning."""
    v = list(plan.v)
    n = len(v)
    g = gcd_chain(v)
    u = elementary_matrix(1, v, g)
    for k in range(2, n):
        u = mat_mul(elementary_matrix(k, v, g), u)
    first_col = [u[i][0] for i in range(n)]
    if first_col != v:
        raise InternalCheckError(f"lift first column {first_col} != v {v}")
    d = det_exact(u)
    if d not in (1, -1):
        raise InternalCheckError(f"lift determinant {d} is not +-1")
    return UnimodularLift(
        U=tuple(tuple(row) for row in u),
        U2=tuple(tuple(row[1:]) for row in u),
        det=d,
    )


# ---------------------------------------------------------------------------
# lattice reduction (exact, Gram-based) used to precondition enumeration

def _gso(gram: list[list[int]]):
    """Gram-Schmidt coefficients mu and squared norms from a Gram matrix."""
    n = len(gram)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n
    for i in range(n):
        bstar[i] = Fraction(gram[i][i])
        for j in range(i):
            num = Fraction(gram[i][j])
            for k in range(j):
                num -= mu[i][k] * mu[j][k] * bstar[k]
            mu[i][j] = num / bstar[j]
            bstar[i] -= mu[i][j] * mu[i][j] * bstar[j]
    return mu, bstar


def _round_half_up(x: Fraction) -> int:
    return (2 * x.numerator + x.denominator) // (2 * x.denominator)


def _lll_transform(gram: Sequence[Sequence[int]]) -> list[list[int]]:
    """Size-reduce + swap (delta = 3/4) on an exact integer Gram matrix.

    Returns the unimodular transform T such that the reduced basis is the
    original basis times T.  Exact rational arithmetic throughout, so the
    reduction itself can never corrupt the lattice.
    """
    n = len(gram)
    g = [[int(x) for x in row] for row in gram]
    t = [[int(i == j) for j in range(n)] for i in range(n)]

    def addmul(k: int, j: int, c: int) -> None:
        # b_k += c * b_j
        for i in range(n):
            g[k][i] += c * g[j][i]
        for i in range(n):
            g[i][k] += c * g[i][j]
        for i in range(n):
            t[i][k] += c * t[i][j]

    def swap(k: int, j: int) -> None:
        g[k], g[j] = g[j], g[k]
        for row in g:
            row[k], row[j] = row[j], row[k]
        for row in t:
            row[k], row[j] = row[j], row[k]

    mu, bstar = _gso(g)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = _round_half_up(mu[k][j])
            if q:
                addmul(k, j, -q)
                mu, bstar = _gso(g)
        if bstar[k] >= (_LLL_DELTA - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]:
            k += 1
        else:
            swap(k, k - 1)
            mu, bstar = _gso(g)
            k = max(k - 1, 1)
    return t


# ---------------------------------------------------------------------------
# dual basis

@dataclass(frozen=True)
class DualBasis:
    """Float basis B for the projected lattice plus its exact origins.

    B's columns are the projections of the last N-1 lift columns; the
    exact rational columns are retained (common denominator v_norm_sq).
    Instances are immutable and safe to share across threads; the
    enumeration state prepared here is read-only per closest_point call.
    """

    B: np.ndarray
    lift: UnimodularLift
    v_norm_sq: int
    exact_columns: tuple[tuple[Fraction, ...], ...]
    _B_rows: tuple[tuple[float, ...], ...] = field(repr=False)
    _T: tuple[tuple[int, ...], ...] = field(repr=False)
    _R: tuple[tuple[float, ...], ...] = field(repr=False)
    _pinv_red: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        """Lattice dimension N-1."""
        return len(self._R)

    @property
    def reduced_transform(self) -> tuple[tuple[int, ...], ...]:
        """Unimodular T from the exact lattice reduction of the lift.

        B @ T is the well-conditioned basis actually enumerated; raw
        coefficient vectors are T times reduced ones.
        """
        return self._T


@dataclass(frozen=True)
class CvpSolution:
    """Integer coefficients w, lattice point x = B w, and squared distance."""

    w: tuple[int, ...]
    x: np.ndarray
    dist_sq: float


def build_dual_basis(plan: RangingPlan) -> DualBasis:
    """Construct the projected-lattice basis for a plan.

    Exact rational columns u_j - v (v.u_j)/|v|^2 are formed first and
    demoted to doubles exactly once.  An exact lattice reduction of the
    integer lift preconditions the float triangular factorization used by
    closest_point.
    """
    lift = build_lift(plan)
    v = plan.v
    n = plan.size
    vsq = plan.v_norm_sq

    cols_exact = []
    dots = []
    for j in range(1, n):
        uj = [lift.U[i][j] for i in range(n)]
        d = sum(v[i] * uj[i] for i in range(n))
        dots.append(d)
        cols_exact.append(tuple(Fraction(uj[i] * vsq - v[i] * d, vsq) for i in range(n)))

    b_float = np.array([[float(cols_exact[j][i]) for j in range(n - 1)] for i in range(n)])

    # Integer Gram of the projected columns, scaled by |v|^2 to stay integral.
    gram = [
        [
            vsq * sum(lift.U[i][a + 1] * lift.U[i][b + 1] for i in range(n))
            - dots[a] * dots[b]
            for b in range(n - 1)
        ]
        for a in range(n - 1)
    ]
    t = _lll_transform(gram)

    b_red = b_float @ np.array(t, dtype=float)
    _, r = np.linalg.qr(b_red)
    for i in range(n - 1):
        if r[i, i] < 0:
            r[i, :] = -r[i, :]
    diag = np.abs(np.diag(r))
    if diag.min() < _RANK_TOL * diag.max():
        raise InternalCheckError("basis numerically rank deficient")
    pinv_red = np.linalg.pinv(b_red)

    b_float.setflags(write=False)
    pinv_red.setflags(write=False)
    return DualBasis(
        B=b_float,
        lift=lift,
        v_norm_sq=vsq,
        exact_columns=tuple(cols_exact),
        _B_rows=tuple(tuple(row) for row in b_float.tolist()),
        _T=tuple(tuple(row) for row in t),
        _R=tuple(tuple(row) for row in r.tolist()),
        _pinv_red=pinv_red,
    )


def evaluate_candidate(basis: DualBasis, target: Sequence[float], w: Sequence[int]) -> CvpSolution:
    """Lattice point B w and its squared distance to target.

    This is the canonical distance formula; the enumeration and the brute
    force oracle both report distances through it so that equal w always
    yields bit-identical dist_sq.
    """
    rows = basis._B_rows
    m = len(w)
    x = []
    dist = 0.0
    for i in range(len(rows)):
        row = rows[i]
        s = 0.0
        for j in range(m):
            s += row[j] * w[j]
        x.append(s)
        e = float(target[i]) - s
        dist += e * e
    xa = np.array(x)
    xa.setflags(write=False)
    return CvpSolution(w=tuple(int(c) for c in w), x=xa, dist_sq=dist)


def closest_point(basis: DualBasis, target: Sequence[float]) -> CvpSolution:
    """Exact closest lattice point to target (depth-first sphere search).

    Enumerates integer coefficients of the reduced basis in nearest-first
    zig-zag order per level, shrinking the search radius as leaves are
    found.  Ties in distance go to the candidate visited first.
    """
    t = np.asarray(target, dtype=float)
    n = basis.dim
    if t.shape != (n + 1,):
        raise InputError(f"target has shape {t.shape}, expected ({n + 1},)")
    if not np.isfinite(t).all():
        raise InputError("target must be finite")

    r = basis._R
    tmat = basis._T
    ws = [float(x) for x in (basis._pinv_red @ t)]
    rdiag = [r[i][i] for i in range(n)]
    tlist = t.tolist()

    u = [0] * n
    step = [0] * n
    cent = [0.0] * n
    above = [0.0] * n  # above[k]: squared residual from levels > k

    best: CvpSolution | None = None
    best_val = math.inf
    best_metric = math.inf
    bound = math.inf

    k = n - 1
    cent[k] = ws[k]
    u[k] = math.floor(cent[k] + 0.5)
    step[k] = 1 if cent[k] >= u[k] else -1

    while True:
        e = rdiag[k] * (u[k] - cent[k])
        d = above[k] + e * e
        if d <= bound:
            if k == 0:
                w_orig = [sum(tmat[i][j] * u[j] for j in range(n)) for i in range(n)]
                cand = evaluate_candidate(basis, tlist, w_orig)
                if cand.dist_sq < best_val:
                    best_val = cand.dist_sq
                    best = cand
                if d < best_metric:
                    best_metric = d
                    bound = best_metric + _PRUNE_SLACK * (1.0 + best_metric)
                u[0] += step[0]
                step[0] = -step[0] - (1 if step[0] > 0 else -1)
            else:
                above[k - 1] = d
                k -= 1
                row = r[k]
                s = 0.0
                for j in range(k + 1, n):
                    s += row[j] * (u[j] - ws[j])
                cent[k] = ws[k] - s / rdiag[k]
                u[k] = math.floor(cent[k] + 0.5)
                step[k] = 1 if cent[k] >= u[k] else -1
        else:
            if k == n - 1:
                break
            k += 1
            u[k] += step[k]
            step[k] = -step[k] - (1 if step[k] > 0 else -1)

    assert best is not None
    return best
