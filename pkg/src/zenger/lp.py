"""Dense tableau simplex with Bland's rule, plus an exhaustive vertex oracle.

Problems are stated as: maximize <c, x> subject to A x <= b with x free.
Free variables are split as x = u - v, slacks make rows equalities, and rows
with negative right-hand side get a big-M artificial.  No presolve; every
pivot updates the full tableau.  Deterministic by construction, so repeated
runs give bit-identical answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import TooLarge, ZengerError, as_vector

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

PIVOT_EPS = 1e-12  # pivot magnitudes below this abort the run
COST_EPS = 1e-9    # reduced costs within this of zero count as optimal
ACTIVE_EPS = 1e-9  # constraint slack below this counts as active

# Exhaustive enumeration stays tractable only at desk scale.
BRUTE_MAX_DIM = 6
BRUTE_MAX_CONSTRAINTS = 24


class LPError(ZengerError):
    """Base class for simplex failures."""


class MaxPivotsExceeded(LPError):
    """The pivot cap was hit before reaching optimality."""


class NumericalBreakdown(LPError):
    """The selected pivot element is too small to divide by safely."""


@dataclass(frozen=True)
class LinearProgram:
    """maximize <objective, x> subject to lhs @ x <= rhs, x free."""

    objective: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        c = as_vector(self.objective)
        b = as_vector(self.rhs)
        A = np.asarray(self.lhs, dtype=float)
        if A.ndim != 2 or A.shape != (b.size, c.size):
            raise ValueError(
                f"constraint matrix shape {A.shape} does not match "
                f"{b.size} rows and {c.size} variables"
            )
        if not np.all(np.isfinite(A)):
            raise ValueError("constraint entries must be finite")
        A = A.copy()
        for arr in (c, A, b):
            arr.setflags(write=False)
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "lhs", A)
        object.__setattr__(self, "rhs", b)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: float
    point: np.ndarray | None
    active_set: np.ndarray | None


def default_pivot_cap(m: int, n: int) -> int:
    """Generous diagnostic cap; Bland's rule terminates long before it."""
    return 1000 + 50 * (m + 2 * n)


def solve_lp(lp: LinearProgram, max_pivots: int | None = None) -> LPResult:
    """Solve ``lp`` by the primal simplex method.

    Entering variable: lowest index with improving reduced cost (Bland).
    Leaving variable: minimum ratio, ties broken by lowest basis index.
    Raises :class:`MaxPivotsExceeded` or :class:`NumericalBreakdown`;
    infeasible and unbounded problems are reported through ``status``.
    """
    c = np.asarray(lp.objective, dtype=float)
    A = np.asarray(lp.lhs, dtype=float)
    b = np.asarray(lp.rhs, dtype=float)
    m, n = A.shape
    if max_pivots is None:
        max_pivots = default_pivot_cap(m, n)

    # Rows with negative rhs are flipped so the tableau rhs is nonnegative;
    # their slack coefficient becomes -1, so they need an artificial column.
    neg = b < 0
    flip = np.where(neg, -1.0, 1.0)
    A2 = A * flip[:, None]
    b2 = b * flip
    art_rows = np.nonzero(neg)[0]
    k = art_rows.size

    ncols = 2 * n + m + k
    T = np.zeros((m, ncols + 1))
    T[:, :n] = A2
    T[:, n:2 * n] = -A2
    T[np.arange(m), 2 * n + np.arange(m)] = flip
    for j, i in enumerate(art_rows):
        T[i, 2 * n + m + j] = 1.0
    T[:, -1] = b2

    cost = np.zeros(ncols)
    cost[:n] = c
    cost[n:2 * n] = -c
    big_m = 1e7 * max(1.0, float(np.max(np.abs(c))) if c.size else 1.0)
    cost[2 * n + m:] = -big_m

    basis = 2 * n + np.arange(m)
    if k:
        basis[art_rows] = 2 * n + m + np.arange(k)

    # z holds cost_B B^-1 N - cost; optimal when every entry >= -COST_EPS.
    z = -cost.copy()
    z = np.append(z, 0.0)
    for i in art_rows:
        z += big_m * T[i]

    for _ in range(max_pivots):
        improving = np.nonzero(z[:-1] < -COST_EPS)[0]
        if improving.size == 0:
            break
        e = int(improving[0])
        col = T[:, e]
        eligible = np.nonzero(col > PIVOT_EPS)[0]
        if eligible.size == 0:
            if np.any(col > 0):
                raise NumericalBreakdown(
                    f"pivot column {e} has only entries below {PIVOT_EPS}"
                )
            if k and np.any(T[np.isin(basis, range(2 * n + m, ncols)), -1] > 1e-7):
                return LPResult(INFEASIBLE, float("nan"), None, None)
            return LPResult(UNBOUNDED, float("inf"), None, None)
        ratios = T[eligible, -1] / col[eligible]
        best = np.min(ratios)
        tied = eligible[ratios <= best + 1e-12 * (1.0 + abs(best))]
        r = int(tied[np.argmin(basis[tied])])
        piv = T[r, e]
        if abs(piv) < PIVOT_EPS:
            raise NumericalBreakdown(f"pivot magnitude {abs(piv):.3e}")
        T[r] /= piv
        colvals = T[:, e].copy()
        colvals[r] = 0.0
        T -= np.outer(colvals, T[r])
        z -= z[e] * T[r]
        basis[r] = e
    else:
        raise MaxPivotsExceeded(f"no optimum within {max_pivots} pivots")

    if k:
        art_level = T[np.isin(basis, range(2 * n + m, ncols)), -1]
        if art_level.size and np.max(art_level) > 1e-7:
            return LPResult(INFEASIBLE, float("nan"), None, None)

    x = np.zeros(n)
    for i, j in enumerate(basis):
        if j < n:
            x[j] += T[i, -1]
        elif j < 2 * n:
            x[j - n] -= T[i, -1]

    x = _crash_to_vertex(A, b, c, x)
    value = float(c @ x)
    active = np.nonzero(b - A @ x <= ACTIVE_EPS * (1.0 + np.abs(b)))[0]
    return LPResult(OPTIMAL, value, x, active)


def _crash_to_vertex(A, b, c, x):
    """Slide along the optimal face until n independent constraints bind.

    At an optimum the objective lies in the span of the active rows, so any
    null direction of those rows keeps the value constant.  Each pass either
    reaches full rank or adds one active constraint; directions that change
    the objective or never hit a constraint are left alone.
    """
    m, n = A.shape
    cnorm = 1.0 + float(np.linalg.norm(c))
    for _ in range(n):
        act = np.nonzero(b - A @ x <= ACTIVE_EPS * (1.0 + np.abs(b)))[0]
        rows = A[act] if act.size else np.zeros((0, n))
        _, sv, vt = np.linalg.svd(rows) if act.size else (None, np.zeros(0), np.eye(n))
        rank = int(np.sum(sv > 1e-10))
        if rank >= n:
            break
        d = vt[rank]
        nz = np.nonzero(np.abs(d) > 1e-12)[0]
        if nz.size == 0:
            break
        if d[nz[0]] < 0:
            d = -d
        if abs(float(c @ d)) > 1e-9 * cnorm:
            break
        moved = False
        for direction in (d, -d):
            Ad = A @ direction
            slack = b - A @ x
            pos = np.nonzero(Ad > 1e-12)[0]
            if pos.size == 0:
                continue
            t = float(np.min(slack[pos] / Ad[pos]))
            if t > 1e13:
                continue
            x = x + max(t, 0.0) * direction
            moved = True
            break
        if not moved:
            break
    return x


def brute_force_vertices(lp: LinearProgram) -> tuple[float, np.ndarray]:
    """Independent oracle: enumerate every n-subset of constraints, solve the
    square system, keep feasible points, return the best value and point.

    Only valid on bounded feasible regions at desk scale.
    """
    c = np.asarray(lp.objective, dtype=float)
    A = np.asarray(lp.lhs, dtype=float)
    b = np.asarray(lp.rhs, dtype=float)
    m, n = A.shape
    if n > BRUTE_MAX_DIM or m > BRUTE_MAX_CONSTRAINTS:
        raise TooLarge(
            f"vertex enumeration limited to {BRUTE_MAX_DIM} variables "
            f"and {BRUTE_MAX_CONSTRAINTS} constraints"
        )
    if m < n:
        raise LPError("fewer constraints than variables, region is unbounded")

    subsets = np.array(list(combinations(range(m), n)))
    mats = A[subsets]
    rhss = b[subsets]
    dets = np.linalg.det(mats)
    keep = np.abs(dets) > 1e-12
    if not np.any(keep):
        raise LPError("no nondegenerate constraint subset found")
    points = np.linalg.solve(mats[keep], rhss[keep][..., None])[..., 0]
    feas_tol = ACTIVE_EPS * (1.0 + np.max(np.abs(b)))
    feasible = np.all(points @ A.T <= b[None, :] + feas_tol, axis=1)
    if not np.any(feasible):
        raise LPError("no feasible vertex found")
    points = points[feasible]
    values = points @ c
    best = int(np.argmax(values))
    return float(values[best]), points[best]
