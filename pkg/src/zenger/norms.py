"""Polyhedral norms, their support functionals, and dual-norm evaluation.

Every polyhedral norm here is a positive combination of sup norms of linear
images, ``sum_j coef_j * max_r |(A_j x)_r|``.  Expanding the sign and row
choices of each block yields a finite symmetric set of support functionals
u_i with ``norm(x) = max_i <u_i, x>``; the unit ball is the polytope they cut
out, and the dual norm of g is the LP value ``max <g, x>`` over that ball.

Two structured norms round out the family: the sequence norm
``sup + limsup`` on eventually constant sequences, and a weighted-difference
norm ``max|x_k| + max_k |x_k - x_1 2^{1-k}|`` whose tail behaviour on
eventually constant sequences is computed exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import DimensionMismatch, TailVector, ZengerError, as_vector
from . import lp as _lp

GENERATOR_LIMIT = 10 ** 6
RANK_TOL = 1e-10


class GeneratorBlowup(ZengerError):
    """The support-functional expansion would exceed the generator cap."""


class RankDeficientNorm(ZengerError):
    """Stacked block rows do not have full column rank, so the formula is
    only a seminorm."""


class LPFailure(ZengerError):
    """The dual-norm LP did not reach an optimum."""


class NotPolyhedral(ZengerError):
    """Operation requires a norm with a finite generator description."""


@dataclass(frozen=True)
class SupNorm:
    """max_k |x_k| on vectors of a fixed length."""

    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")


@dataclass(frozen=True)
class Block:
    coef: float
    matrix: np.ndarray

    def __post_init__(self):
        if not (np.isfinite(self.coef) and self.coef > 0):
            raise ValueError("block coefficient must be positive and finite")
        M = np.array(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
            raise ValueError(f"block matrix must be 2-d, got shape {M.shape}")
        if not np.all(np.isfinite(M)):
            raise ValueError("block entries must be finite")
        M.setflags(write=False)
        object.__setattr__(self, "coef", float(self.coef))
        object.__setattr__(self, "matrix", M)


@dataclass(frozen=True)
class CompositeNorm:
    """sum_j coef_j * max_r |(A_j x)_r| with full-column-rank stacked rows."""

    blocks: tuple[Block, ...]

    def __post_init__(self):
        entries = []
        for blk in self.blocks:
            entries.append(blk if isinstance(blk, Block) else Block(*blk))
        if not entries:
            raise ValueError("at least one block is required")
        n = entries[0].matrix.shape[1]
        for blk in entries:
            if blk.matrix.shape[1] != n:
                raise DimensionMismatch("blocks disagree on dimension")
        stacked = np.vstack([blk.matrix for blk in entries])
        if _column_rank(stacked) < n:
            raise RankDeficientNorm(
                "stacked block rows are column rank deficient"
            )
        object.__setattr__(self, "blocks", tuple(entries))

    @property
    def dimension(self) -> int:
        return self.blocks[0].matrix.shape[1]


@dataclass(frozen=True)
class Example2Norm:
    """max_k |x_k| + max_k |x_k - x_1 w_k| with w_k = 2^{1-k}.

    On a dense vector this is the dimension-n truncation; on a
    :class:`TailVector` the supremum over the infinite tail is exact.
    """

    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")

    @property
    def weights(self) -> np.ndarray:
        return 2.0 ** (-np.arange(self.dimension))


@dataclass(frozen=True)
class Example1TailNorm:
    """sup |x_k| + limsup |x_k| on eventually constant sequences."""


PolyhedralSpec = (SupNorm, CompositeNorm, Example2Norm)
NormSpec = SupNorm | CompositeNorm | Example2Norm | Example1TailNorm


@dataclass(frozen=True)
class GeneratorSet:
    """Support functionals u_i with norm(x) = max_i <u_i, x>.

    The list is sign symmetric and may repeat functionals when a block row
    is null; duplicates keep the count at prod_j (2 rows_j)."""

    functionals: np.ndarray

    def __len__(self) -> int:
        return self.functionals.shape[0]


class DualEval(NamedTuple):
    value: float
    achiever: np.ndarray


@dataclass(frozen=True)
class EquivalenceConstants:
    """Best constants in c_lower * sup|x| <= norm(x) <= C_upper * sup|x|."""

    c_lower: float
    C_upper: float


def _column_rank(M: np.ndarray, tol: float = RANK_TOL) -> int:
    """Column rank by Gaussian elimination with partial pivoting; pivots at
    or below ``tol`` in magnitude do not count."""
    A = np.array(M, dtype=float)
    rows, cols = A.shape
    rank = 0
    for j in range(cols):
        if rank >= rows:
            break
        p = rank + int(np.argmax(np.abs(A[rank:, j])))
        if abs(A[p, j]) <= tol:
            continue
        if p != rank:
            A[[rank, p]] = A[[p, rank]]
        A[rank] = A[rank] / A[rank, j]
        others = np.arange(rows) != rank
        A[others] -= np.outer(A[others, j], A[rank])
        rank += 1
    return rank


def norm_dimension(spec: NormSpec) -> int | None:
    """Ambient dimension for dense vectors, or None when the norm acts only
    on sequences."""
    if isinstance(spec, (SupNorm, Example2Norm)):
        return spec.dimension
    if isinstance(spec, CompositeNorm):
        return spec.dimension
    if isinstance(spec, Example1TailNorm):
        return None
    raise TypeError(f"not a norm spec: {spec!r}")


def _blocks_of(spec: NormSpec) -> tuple[Block, ...]:
    if isinstance(spec, SupNorm):
        return (Block(1.0, np.eye(spec.dimension)),)
    if isinstance(spec, CompositeNorm):
        return spec.blocks
    if isinstance(spec, Example2Norm):
        n = spec.dimension
        second = np.eye(n) - np.outer(spec.weights, _unit(n, 0))
        return (Block(1.0, np.eye(n)), Block(1.0, second))
    raise NotPolyhedral(f"{type(spec).__name__} has no generator description")


def _unit(n: int, k: int) -> np.ndarray:
    e = np.zeros(n)
    e[k] = 1.0
    return e


def _check_dense(spec: NormSpec, x) -> np.ndarray:
    v = as_vector(x)
    n = norm_dimension(spec)
    if v.size != n:
        raise DimensionMismatch(f"vector has length {v.size}, norm expects {n}")
    return v


def eval_norm(spec: NormSpec, x) -> float:
    """Evaluate the norm on a dense vector or a :class:`TailVector`.

    Tail vectors are accepted by the sup norm, the sup+limsup norm, and the
    weighted-difference norm (whose tail supremum is computed in closed
    form); dense vectors must match the spec dimension.
    """
    if isinstance(x, TailVector):
        if isinstance(spec, SupNorm):
            return x.sup
        if isinstance(spec, Example1TailNorm):
            return x.sup + x.limsup
        if isinstance(spec, Example2Norm):
            return _example2_tail_eval(x)
        raise DimensionMismatch(
            "eventually constant sequences are not supported by this norm"
        )
    if isinstance(spec, Example1TailNorm):
        raise DimensionMismatch(
            "this norm needs a TailVector with an explicit tail constant"
        )
    v = _check_dense(spec, x)
    if isinstance(spec, SupNorm):
        return float(np.max(np.abs(v)))
    if isinstance(spec, Example2Norm):
        term1 = float(np.max(np.abs(v)))
        if v.size == 1:
            return term1
        diffs = v[1:] - v[0] * spec.weights[1:]
        return term1 + float(np.max(np.abs(diffs)))
    total = 0.0
    for blk in spec.blocks:
        total += blk.coef * float(np.max(np.abs(blk.matrix @ v)))
    return total


def _example2_tail_eval(x: TailVector) -> float:
    # The difference sequence x_k - x_1 2^{1-k} is eventually |c - x_1 t|
    # with t running down (0, 2^{-H}]; convexity in t puts its sup at an
    # endpoint.
    x1 = x.entry(1)
    h = x.head.size
    he = max(h, 1)
    term1 = x.sup
    term2 = max(abs(x.tail - x1 * 2.0 ** (-he)), abs(x.tail))
    if h >= 2:
        diffs = x.head[1:] - x1 * 2.0 ** (-np.arange(1, h))
        term2 = max(term2, float(np.max(np.abs(diffs))))
    return term1 + term2


def eval_norm_many(spec: NormSpec, X: np.ndarray) -> np.ndarray:
    """Vectorized :func:`eval_norm` over the rows of ``X``."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != norm_dimension(spec):
        raise DimensionMismatch(f"expected rows of length {norm_dimension(spec)}")
    total = np.zeros(X.shape[0])
    for blk in _blocks_of(spec):
        total += blk.coef * np.max(np.abs(X @ blk.matrix.T), axis=1)
    return total


def generators(spec: NormSpec, limit: int = GENERATOR_LIMIT) -> GeneratorSet:
    """Expand the sign and row choices of every block into the full set of
    support functionals.  The count is prod_j (2 * rows_j); anything past
    ``limit`` raises :class:`GeneratorBlowup` before allocating."""
    blocks = _blocks_of(spec)
    count = math.prod(2 * blk.matrix.shape[0] for blk in blocks)
    if count > limit:
        raise GeneratorBlowup(
            f"{count} support functionals exceed the cap of {limit}"
        )
    n = blocks[0].matrix.shape[1]
    combos = np.zeros((1, n))
    for blk in blocks:
        scaled = blk.coef * blk.matrix
        step = np.concatenate([scaled, -scaled])
        combos = (combos[:, None, :] + step[None, :, :]).reshape(-1, n)
    combos.setflags(write=False)
    return GeneratorSet(combos)


def dual_norm_lmo(spec: NormSpec, g, *, gens: GeneratorSet | None = None) -> DualEval:
    """Dual-norm evaluation: value and maximizer of <g, x> over the unit ball.

    Solved as the LP over the generator constraints <u_i, x> <= 1.  Passing a
    precomputed generator set skips re-expansion on repeated calls.
    """
    v = _check_dense(spec, g)
    if gens is None:
        gens = generators(spec)
    U = np.unique(gens.functionals, axis=0)  # same constraint set, fewer rows
    program = _lp.LinearProgram(v, U, np.ones(U.shape[0]))
    try:
        result = _lp.solve_lp(program)
    except _lp.LPError as exc:
        raise LPFailure(f"simplex failed on the dual-norm LP: {exc}") from exc
    if result.status != _lp.OPTIMAL:
        raise LPFailure(f"dual-norm LP ended with status {result.status}")
    return DualEval(result.value, result.point)


def projection_norm(spec: NormSpec, N: int, *, gens: GeneratorSet | None = None) -> float:
    """Operator norm of the truncation projection P_N on this normed space.

    Since P_N is diagonal, sup over the ball of norm(P_N x) equals the
    largest dual norm of a projected support functional.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if gens is None:
        gens = generators(spec)
    V = gens.functionals.copy()
    V[:, N:] = 0.0
    V = _canonical_rows(V)
    best = 0.0
    for row in V:
        best = max(best, dual_norm_lmo(spec, row, gens=gens).value)
    return best


def _canonical_rows(V: np.ndarray) -> np.ndarray:
    """Drop null rows and sign duplicates; the dual norm is even, so one
    representative per +-pair suffices."""
    nonzero = np.any(V != 0.0, axis=1)
    V = V[nonzero]
    if V.shape[0] == 0:
        return V
    idx = np.argmax(V != 0.0, axis=1)
    lead = V[np.arange(V.shape[0]), idx]
    V = V * np.where(lead < 0, -1.0, 1.0)[:, None]
    return np.unique(V, axis=0)


def equivalence_constants(spec: NormSpec, *, gens: GeneratorSet | None = None) -> EquivalenceConstants:
    """Best constants relating the norm to the sup norm.

    Upper: the norm of a sign vector matching u_i is ||u_i||_1, so the max
    over functionals is attained.  Lower: the largest coordinate functional
    on the unit ball is max_k dual_norm(e_k).
    """
    if gens is None:
        gens = generators(spec)
    U = gens.functionals
    upper = float(np.max(np.sum(np.abs(U), axis=1)))
    n = U.shape[1]
    worst = 0.0
    for k in range(n):
        worst = max(worst, dual_norm_lmo(spec, _unit(n, k), gens=gens).value)
    return EquivalenceConstants(c_lower=1.0 / worst, C_upper=upper)
