"""Dual-mode matrix kernels: exact rationals for certification, floats for numerics.

Every matrix carries a mode tag, either ``"exact"`` (entries are
``fractions.Fraction``) or ``"float"`` (finite doubles).  Exact and float
values never mix inside one operation; mixing raises ``ModeMismatch``
instead of coercing, because a silently coerced entry would poison any
certificate computed downstream.

The exact rank routine uses fraction-free (Bareiss) elimination after
clearing denominators row by row, so intermediate values stay integers of
bounded size and the reported pivots select a minor whose determinant is
provably nonzero.  The float rank routine runs complete-pivoting
elimination and counts pivot magnitudes above a tolerance scaled by the
largest entry.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    ModeMismatch,
    NonFiniteEntry,
    NotInvertible,
    NotSquare,
    ShapeMismatch,
)

Scalar = Union[Fraction, float]
ExactVector = tuple[Fraction, ...]

EXACT = "exact"
FLOAT = "float"

#: Default relative tolerance for float-mode rank decisions.
DEFAULT_FLOAT_TOL = 1e-8

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact Fraction.

    Floats are rejected: an exact value must never be fabricated from a
    rounded one.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot build an exact scalar from {type(value).__name__}")


def exact_vector(values: Iterable) -> ExactVector:
    return tuple(as_fraction(v) for v in values)


def scalar_to_json(value: Scalar):
    """JSON form of a scalar: int, "p/q" string, or float by mode."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return f"{value.numerator}/{value.denominator}"
    return float(value)


@dataclass(frozen=True)
class Matrix:
    """Immutable row-major matrix with a uniform scalar mode."""

    rows: int
    cols: int
    mode: str
    entries: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        if self.mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown mode {self.mode!r}")
        if len(self.entries) != self.rows:
            raise ShapeMismatch("entry rows do not match declared row count")
        for row in self.entries:
            if len(row) != self.cols:
                raise ShapeMismatch("ragged matrix rows")
        if self.mode == FLOAT:
            for row in self.entries:
                for v in row:
                    if not math.isfinite(v):
                        raise NonFiniteEntry("float matrix entry is not finite")

    # -- constructors -------------------------------------------------

    @staticmethod
    def exact(rows: Iterable[Iterable]) -> "Matrix":
        data = tuple(tuple(as_fraction(v) for v in row) for row in rows)
        return Matrix(len(data), len(data[0]) if data else 0, EXACT, data)

    @staticmethod
    def of_floats(rows: Iterable[Iterable]) -> "Matrix":
        data = tuple(tuple(float(v) for v in row) for row in rows)
        return Matrix(len(data), len(data[0]) if data else 0, FLOAT, data)

    @staticmethod
    def identity(m: int, mode: str = EXACT) -> "Matrix":
        if mode == EXACT:
            return Matrix(
                m, m, EXACT,
                tuple(tuple(_ONE if i == j else _ZERO for j in range(m)) for i in range(m)),
            )
        return Matrix(
            m, m, FLOAT,
            tuple(tuple(1.0 if i == j else 0.0 for j in range(m)) for i in range(m)),
        )

    # -- basic structure ----------------------------------------------

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entry(self, i: int, j: int) -> Scalar:
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Scalar, ...]:
        return self.entries[i]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols, self.rows, self.mode,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def vectorize(self) -> tuple[Scalar, ...]:
        """Row-major flattening, used to treat matrices as span vectors."""
        return tuple(v for row in self.entries for v in row)

    def to_ndarray(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries], dtype=float)

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "mode": self.mode,
            "entries": [[scalar_to_json(v) for v in row] for row in self.entries],
        }

    # -- arithmetic ----------------------------------------------------

    def _check_same_shape(self, other: "Matrix"):
        if self.mode != other.mode:
            raise ModeMismatch("cannot mix exact and float matrices")
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch(
                f"shape ({self.rows}x{self.cols}) vs ({other.rows}x{other.cols})"
            )

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            self.rows, self.cols, self.mode,
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            self.rows, self.cols, self.mode,
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def scale(self, c) -> "Matrix":
        c = as_fraction(c) if self.mode == EXACT else float(c)
        return Matrix(
            self.rows, self.cols, self.mode,
            tuple(tuple(c * v for v in row) for row in self.entries),
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.mode != other.mode:
            raise ModeMismatch("cannot mix exact and float matrices")
        if self.cols != other.rows:
            raise ShapeMismatch(
                f"inner dimensions {self.cols} and {other.rows} differ"
            )
        cols = other.transpose().entries
        return Matrix(
            self.rows, other.cols, self.mode,
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.entries
            ),
        )

    def apply(self, vec: Sequence[Scalar]) -> tuple[Scalar, ...]:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise ShapeMismatch(f"vector length {len(vec)} vs {self.cols} columns")
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.entries)

    def frobenius_norm_sq(self) -> Scalar:
        return sum(v * v for row in self.entries for v in row)

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)


def from_rows(rows: Sequence[Sequence[Scalar]], mode: str) -> Matrix:
    if mode == EXACT:
        return Matrix.exact(rows)
    return Matrix.of_floats(rows)


# ---------------------------------------------------------------------------
# Rank
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankResult:
    """Rank together with a re-checkable pivot selection.

    In exact mode the minor picked out by ``pivot_rows`` x ``pivot_cols``
    has nonzero determinant; anyone can recompute it to audit the claim.
    """

    rank: int
    pivot_rows: tuple[int, ...]
    pivot_cols: tuple[int, ...]
    mode: str
    tol: Optional[float] = None

    def to_json(self) -> dict:
        out = {
            "rank": self.rank,
            "pivot_rows": list(self.pivot_rows),
            "pivot_cols": list(self.pivot_cols),
            "mode": self.mode,
        }
        if self.tol is not None:
            out["tol"] = self.tol
        return out


def _integer_rows(m: Matrix) -> list[list[int]]:
    """Scale each row by the lcm of its denominators.

    Row scaling by a nonzero rational preserves rank and every minor's
    vanishing pattern, so pivots found on the scaled matrix certify the
    original one.
    """
    out = []
    for row in m.entries:
        denom = math.lcm(*(v.denominator for v in row)) if row else 1
        out.append([int(v * denom) for v in row])
    return out


def _bareiss_rank(a: list[list[int]]) -> tuple[int, list[int], list[int]]:
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    row_of = list(range(nrows))  # original index of the row now in each slot
    prev = 1
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            row_of[r], row_of[p] = row_of[p], row_of[r]
        pivot = a[r][c]
        pivot_rows.append(row_of[r])
        pivot_cols.append(c)
        for i in range(r + 1, nrows):
            ai = a[i]
            ar = a[r]
            f = ai[c]
            if f == 0:
                # Sylvester identity still demands the pivot scaling here.
                for j in range(c + 1, ncols):
                    ai[j] = ai[j] * pivot // prev
            else:
                for j in range(c + 1, ncols):
                    ai[j] = (ai[j] * pivot - f * ar[j]) // prev
                ai[c] = 0
        prev = pivot
        r += 1
    return r, sorted(pivot_rows), pivot_cols


def _rank_exact(m: Matrix) -> RankResult:
    rk, prows, pcols = _bareiss_rank(_integer_rows(m))
    return RankResult(rk, tuple(prows), tuple(pcols), EXACT)


def _rank_float(m: Matrix, tol: float) -> RankResult:
    a = m.to_ndarray()
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntry("float matrix entry is not finite")
    maxabs = float(np.max(np.abs(a))) if a.size else 0.0
    if maxabs == 0.0:
        return RankResult(0, (), (), FLOAT, tol)
    thresh = tol * maxabs
    nrows, ncols = a.shape
    free_rows = list(range(nrows))
    free_cols = list(range(ncols))
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    while free_rows and free_cols:
        sub = np.abs(a[np.ix_(free_rows, free_cols)])
        k = int(np.argmax(sub))
        ri, ci = divmod(k, sub.shape[1])
        if sub[ri, ci] <= thresh:
            break
        pr, pc = free_rows[ri], free_cols[ci]
        pivot_rows.append(pr)
        pivot_cols.append(pc)
        free_rows.remove(pr)
        free_cols.remove(pc)
        if free_rows:
            factors = a[free_rows, pc] / a[pr, pc]
            a[free_rows, :] -= np.outer(factors, a[pr, :])
    return RankResult(
        len(pivot_rows), tuple(sorted(pivot_rows)), tuple(sorted(pivot_cols)), FLOAT, tol
    )


def rank(m: Matrix, tol: Optional[float] = None) -> RankResult:
    """Certified rank of a matrix.

    Exact mode ignores ``tol`` and returns the true rank; float mode counts
    complete-pivoting pivot magnitudes above ``tol`` scaled by the largest
    absolute entry.
    """
    if m.mode == EXACT:
        return _rank_exact(m)
    if tol is None:
        tol = DEFAULT_FLOAT_TOL
    if not tol > 0:
        raise ValueError("float-mode rank requires tol > 0")
    return _rank_float(m, tol)


def rank_of_rows(rows: Sequence[Sequence[Scalar]], mode: str, tol: Optional[float] = None) -> RankResult:
    return rank(from_rows(rows, mode), tol)


# ---------------------------------------------------------------------------
# Determinant / inverse
# ---------------------------------------------------------------------------


def det(m: Matrix) -> Scalar:
    """Determinant; exact in exact mode."""
    if not m.is_square:
        raise NotSquare("determinant of a non-square matrix")
    if m.mode == FLOAT:
        return float(np.linalg.det(m.to_ndarray()))
    if m.rows == 0:
        return _ONE
    a = m.entries
    denom = _ONE
    rows = []
    for row in a:
        l = math.lcm(*(v.denominator for v in row))
        denom *= l
        rows.append([int(v * l) for v in row])
    sign = 1
    prev = 1
    n = m.rows
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return _ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            sign = -sign
        pivot = rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c]
            for j in range(c + 1, n):
                rows[i][j] = (rows[i][j] * pivot - f * rows[c][j]) // prev
            rows[i][c] = 0
        prev = pivot
    return Fraction(sign * rows[n - 1][n - 1], 1) / denom


def invertible(m: Matrix, tol: Optional[float] = None) -> bool:
    """Whether a square matrix is invertible.

    Exact mode decides by the determinant; float mode requires the smallest
    singular value to exceed the scaled tolerance.
    """
    if not m.is_square:
        raise NotSquare("invertibility of a non-square matrix")
    if m.mode == EXACT:
        return det(m) != 0
    if tol is None:
        tol = DEFAULT_FLOAT_TOL
    a = m.to_ndarray()
    if a.size == 0:
        return True
    maxabs = float(np.max(np.abs(a)))
    if maxabs == 0.0:
        return False
    smin = float(np.linalg.svd(a, compute_uv=False)[-1])
    return smin > tol * maxabs


def inverse(m: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination over Fractions."""
    if not m.is_square:
        raise NotSquare("inverse of a non-square matrix")
    if m.mode != EXACT:
        raise ModeMismatch("exact inverse requires an exact matrix")
    n = m.rows
    a = [list(row) for row in m.entries]
    b = [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise NotInvertible("matrix is singular")
        if p != c:
            a[c], a[p] = a[p], a[c]
            b[c], b[p] = b[p], b[c]
        inv = _ONE / a[c][c]
        a[c] = [v * inv for v in a[c]]
        b[c] = [v * inv for v in b[c]]
        for i in range(n):
            if i == c or a[i][c] == 0:
                continue
            f = a[i][c]
            a[i] = [u - f * v for u, v in zip(a[i], a[c])]
            b[i] = [u - f * v for u, v in zip(b[i], b[c])]
    return Matrix.exact(b)


# ---------------------------------------------------------------------------
# Span solving
# ---------------------------------------------------------------------------


class SpanSolver:
    """Repeated exact membership tests against the span of fixed matrices.

    The vectorized span generators are reduced once to a normalized row
    echelon form together with the transform that produced it; each
    membership query is then a single read-off plus an equality check.
    """

    def __init__(self, mats: Sequence[Matrix]):
        if not mats:
            raise ShapeMismatch("empty span basis")
        shape = (mats[0].rows, mats[0].cols)
        self.mode = mats[0].mode
        for m in mats:
            if (m.rows, m.cols) != shape:
                raise ShapeMismatch("span basis matrices differ in shape")
            if m.mode != self.mode:
                raise ModeMismatch("span basis matrices differ in mode")
        if self.mode != EXACT:
            raise ModeMismatch("SpanSolver is exact-only; use float_span_solve")
        self.n = len(mats)
        self.width = shape[0] * shape[1]
        rows = [list(m.vectorize()) for m in mats]
        transform = [
            [_ONE if i == j else _ZERO for j in range(self.n)] for i in range(self.n)
        ]
        pivots: list[int] = []
        r = 0
        for c in range(self.width):
            p = next((i for i in range(r, self.n) if rows[i][c] != 0), None)
            if p is None:
                continue
            rows[r], rows[p] = rows[p], rows[r]
            transform[r], transform[p] = transform[p], transform[r]
            inv = _ONE / rows[r][c]
            rows[r] = [v * inv for v in rows[r]]
            transform[r] = [v * inv for v in transform[r]]
            for i in range(self.n):
                if i == r or rows[i][c] == 0:
                    continue
                f = rows[i][c]
                rows[i] = [u - f * v for u, v in zip(rows[i], rows[r])]
                transform[i] = [u - f * v for u, v in zip(transform[i], transform[r])]
            pivots.append(c)
            r += 1
        self._rows = rows[:r]
        self._transform = transform[:r]
        self._pivots = pivots

    @property
    def span_dim(self) -> int:
        return len(self._pivots)

    def _candidate(self, target: Sequence[Fraction]):
        gammas = [target[c] for c in self._pivots]
        combo = [_ZERO] * self.width
        for g, row in zip(gammas, self._rows):
            if g == 0:
                continue
            for j in range(self.width):
                if row[j] != 0:
                    combo[j] += g * row[j]
        return gammas, combo

    def coefficients(self, target: Sequence[Fraction]) -> Optional[ExactVector]:
        """Coefficients expressing ``target`` over the span basis, or None."""
        if len(target) != self.width:
            raise ShapeMismatch("target length does not match span width")
        gammas, combo = self._candidate(target)
        if any(u != v for u, v in zip(combo, target)):
            return None
        coeffs = [_ZERO] * self.n
        for g, trow in zip(gammas, self._transform):
            if g == 0:
                continue
            for j in range(self.n):
                coeffs[j] += g * trow[j]
        return tuple(coeffs)

    def residual_sq(self, target: Sequence[Fraction]) -> Fraction:
        """Squared distance between ``target`` and its echelon candidate."""
        _, combo = self._candidate(target)
        return sum((u - v) ** 2 for u, v in zip(combo, target))


def float_span_solve(
    mats: Sequence[Matrix], target: Matrix, tol: float
) -> tuple[Optional[tuple[float, ...]], float]:
    """Least-squares span membership for float matrices.

    Returns (coefficients or None, residual Frobenius norm).
    """
    stack = np.column_stack([m.to_ndarray().ravel() for m in mats])
    t = target.to_ndarray().ravel()
    coeffs, *_ = np.linalg.lstsq(stack, t, rcond=None)
    resid = float(np.linalg.norm(stack @ coeffs - t))
    if resid <= tol:
        return tuple(float(c) for c in coeffs), resid
    return None, resid


def solve_in_span(
    basis_mats: Sequence[Matrix], target: Matrix, tol: Optional[float] = None
):
    """Express ``target`` as a linear combination of ``basis_mats``.

    Returns the coefficient vector, or None when the target lies outside
    the span (exactly in exact mode, beyond ``tol`` residual in float mode).
    """
    if not basis_mats:
        raise ShapeMismatch("empty span basis")
    mode = basis_mats[0].mode
    if target.mode != mode:
        raise ModeMismatch("target and basis modes differ")
    if (target.rows, target.cols) != (basis_mats[0].rows, basis_mats[0].cols):
        raise ShapeMismatch("target shape does not match basis shape")
    if mode == EXACT:
        return SpanSolver(basis_mats).coefficients(target.vectorize())
    if tol is None:
        tol = DEFAULT_FLOAT_TOL
    coeffs, _ = float_span_solve(basis_mats, target, tol)
    return coeffs


# ---------------------------------------------------------------------------
# Fast full-row-rank test (validation only)
# ---------------------------------------------------------------------------

_PRIMES = (2147483629, 2147483587, 2147483563)


def _full_row_rank_modp(rows: list[list[Fraction]], p: int) -> Optional[bool]:
    """One-sided full-row-rank test over GF(p).

    Full rank mod p implies full rank over the rationals.  Returns True on
    that certificate, False when rank dropped mod p (inconclusive for the
    rationals), or None when a denominator vanishes mod p.
    """
    n = len(rows)
    if n == 0:
        return True
    width = len(rows[0])
    if n > width:
        return False
    a = np.zeros((n, width), dtype=np.int64)
    inv_cache: dict[int, int] = {1: 1}
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            den = v.denominator % p
            if den == 0:
                return None
            inv = inv_cache.get(den)
            if inv is None:
                inv = pow(den, p - 2, p)
                inv_cache[den] = inv
            a[i, j] = (v.numerator % p) * inv % p
    r = 0
    for c in range(width):
        if r >= n:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        below = a[r + 1:, c].copy()
        if below.any():
            a[r + 1:] = (a[r + 1:] - np.outer(below, a[r])) % p
        r += 1
    return None if r < n else True


def has_full_row_rank(rows: Sequence[Sequence[Fraction]]) -> bool:
    """Exact full-row-rank decision with a modular fast path.

    A full-rank result modulo a large prime certifies full rank over the
    rationals; only the (rare) inconclusive outcome falls back to exact
    fraction-free elimination.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return True
    for p in _PRIMES:
        res = _full_row_rank_modp(rows, p)
        if res:
            return True
        if res is None:
            continue
        break
    rk, _, _ = _bareiss_rank(_integer_rows(Matrix.exact(rows)))
    return rk == len(rows)


# ---------------------------------------------------------------------------
# Misc helpers
# ---------------------------------------------------------------------------


def scalar_multiple_of_identity(m: Matrix) -> Optional[Scalar]:
    """The q with m == q*identity, or None."""
    if not m.is_square:
        return None
    q = m.entries[0][0]
    for i in range(m.rows):
        for j in range(m.cols):
            v = m.entries[i][j]
            if i == j:
                if v != q:
                    return None
            elif v != 0:
                return None
    return q


def random_int_vector(rng: random.Random, length: int, bound: int) -> ExactVector:
    """Seeded random integer vector with entries in [-bound, bound], not all zero."""
    while True:
        vec = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(length))
        if any(v != 0 for v in vec):
            return vec
