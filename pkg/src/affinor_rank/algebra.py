"""Finite-dimensional algebras with unity given by structure constants.

Conventions, fixed once for the whole package:

* ``c[i][j][k]`` is the coefficient of the k-th basis element in the
  product of the i-th and j-th basis elements (in that order).
* Index 0 is the unity element; inputs whose first element fails the
  unity identities are reported, never silently permuted.
* ``chat(sc).c_hat[i]`` has the left factor as its row index: entry
  ``[j][k] = c[j][i][k]``.  This is the orientation under which the
  multiplication-operator identity ``c_hat_j @ c_hat_k ==
  sum_s c[j][k][s] * c_hat_s`` holds for noncommutative algebras; the
  row-pinning unit test on the complex numbers documents it.
* ``chat(sc).c_hat_star[i]`` has entry ``[j][k] = c[i][k][j]``; it is the
  familiar left-multiplication operator on coefficient vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, TYPE_CHECKING

from .errors import (
    DimensionMismatch,
    InvalidAlgebra,
    ModeMismatch,
    NotClosed,
    ShapeMismatch,
)
from .linalg import (
    EXACT,
    FLOAT,
    Matrix,
    Scalar,
    SpanSolver,
    as_fraction,
    float_span_solve,
)

if TYPE_CHECKING:
    from .hullrank import AffinorBasis


@dataclass(frozen=True)
class StructureConstants:
    """Third-order coefficient array of an n-dimensional algebra with unity."""

    n: int
    mode: str
    c: tuple[tuple[tuple[Scalar, ...], ...], ...]

    def __post_init__(self):
        if len(self.c) != self.n:
            raise ShapeMismatch("structure constant array is not n x n x n")
        for plane in self.c:
            if len(plane) != self.n:
                raise ShapeMismatch("structure constant array is not n x n x n")
            for row in plane:
                if len(row) != self.n:
                    raise ShapeMismatch("structure constant array is not n x n x n")

    @staticmethod
    def exact(c: Sequence[Sequence[Sequence]]) -> "StructureConstants":
        data = tuple(
            tuple(tuple(as_fraction(v) for v in row) for row in plane) for plane in c
        )
        return StructureConstants(len(data), EXACT, data)

    def require_exact(self):
        if self.mode != EXACT:
            raise ModeMismatch("this operation requires exact structure constants")

    def to_json(self) -> dict:
        from .linalg import scalar_to_json

        return {
            "n": self.n,
            "mode": self.mode,
            "C": [
                [[scalar_to_json(v) for v in row] for row in plane] for plane in self.c
            ],
        }


@dataclass(frozen=True)
class AlgebraElement:
    """Coefficient vector over the algebra basis."""

    coeffs: tuple[Scalar, ...]

    @staticmethod
    def exact(values: Sequence) -> "AlgebraElement":
        return AlgebraElement(tuple(as_fraction(v) for v in values))


@dataclass(frozen=True)
class ChatMatrices:
    """Multiplication-operator matrices derived from structure constants."""

    c_hat: tuple[Matrix, ...]
    c_hat_star: tuple[Matrix, ...]


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of an identity check with the offending indices, if any."""

    ok: bool
    violations: tuple = ()

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [list(v) for v in self.violations]}


@dataclass(frozen=True)
class AssociativityResult:
    """Associativity verdict via both operator-matrix identity families.

    ``families_agree`` is a self-check: the plain and starred identity
    families are equivalent characterizations, so a mismatch indicates an
    internal inconsistency, not a property of the input.
    """

    ok: bool
    violations: tuple = ()
    star_violations: tuple = ()
    families_agree: bool = True

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [list(v) for v in self.violations],
            "star_violations": [list(v) for v in self.star_violations],
            "families_agree": self.families_agree,
        }


def verify_unity(sc: StructureConstants) -> VerifyResult:
    """Check that index 0 multiplies as the unity element on both sides."""
    violations = []
    for i in range(sc.n):
        for k in range(sc.n):
            expected = 1 if i == k else 0
            if sc.c[0][i][k] != expected:
                violations.append((0, i, k))
            if sc.c[i][0][k] != expected:
                violations.append((i, 0, k))
    # deduplicate (0, 0, k) which the two loops both visit
    seen = set()
    uniq = [v for v in violations if not (v in seen or seen.add(v))]
    return VerifyResult(not uniq, tuple(uniq))


def _chat_raw(sc: StructureConstants) -> ChatMatrices:
    n = sc.n
    c_hat = tuple(
        Matrix(
            n, n, sc.mode,
            tuple(tuple(sc.c[j][i][k] for k in range(n)) for j in range(n)),
        )
        for i in range(n)
    )
    c_hat_star = tuple(
        Matrix(
            n, n, sc.mode,
            tuple(tuple(sc.c[i][k][j] for k in range(n)) for j in range(n)),
        )
        for i in range(n)
    )
    return ChatMatrices(c_hat, c_hat_star)


def chat(sc: StructureConstants) -> ChatMatrices:
    """Operator matrices for every basis element.

    Raises InvalidAlgebra when the first operator matrix is not the
    identity, which is the matrix form of the unity identities.
    """
    mats = _chat_raw(sc)
    ident = Matrix.identity(sc.n, sc.mode)
    if mats.c_hat[0].entries != ident.entries:
        raise InvalidAlgebra("first operator matrix is not the identity; unity fails")
    return mats


def _combination(mats: Sequence[Matrix], coeffs: Sequence[Scalar], mode: str) -> Matrix:
    n = mats[0].rows
    acc = [[0 if mode == FLOAT else Fraction(0)] * n for _ in range(n)]
    for c, m in zip(coeffs, mats):
        if c == 0:
            continue
        for i, row in enumerate(m.entries):
            arow = acc[i]
            for j, v in enumerate(row):
                if v != 0:
                    arow[j] += c * v
    return Matrix(n, n, mode, tuple(tuple(row) for row in acc))


def verify_associativity(sc: StructureConstants) -> AssociativityResult:
    """Check the operator-matrix form of associativity for every index pair.

    Both the plain and starred identity families are evaluated; they must
    produce the same verdict.
    """
    mats = _chat_raw(sc)
    violations = []
    star_violations = []
    for j in range(sc.n):
        for k in range(sc.n):
            coeffs = sc.c[j][k]
            lhs = mats.c_hat[j] @ mats.c_hat[k]
            rhs = _combination(mats.c_hat, coeffs, sc.mode)
            if lhs.entries != rhs.entries:
                violations.append((j, k))
            lhs_s = mats.c_hat_star[j] @ mats.c_hat_star[k]
            rhs_s = _combination(mats.c_hat_star, coeffs, sc.mode)
            if lhs_s.entries != rhs_s.entries:
                star_violations.append((j, k))
    ok = not violations
    ok_star = not star_violations
    return AssociativityResult(
        ok and ok_star,
        tuple(violations),
        tuple(star_violations),
        families_agree=(ok == ok_star),
    )


def multiply(sc: StructureConstants, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product of two elements through the structure constants."""
    if len(a.coeffs) != sc.n or len(b.coeffs) != sc.n:
        raise DimensionMismatch("element length does not match algebra dimension")
    zero = 0.0 if sc.mode == FLOAT else Fraction(0)
    out = [zero] * sc.n
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j, bj in enumerate(b.coeffs):
            if bj == 0:
                continue
            f = ai * bj
            row = sc.c[i][j]
            for s in range(sc.n):
                if row[s] != 0:
                    out[s] += f * row[s]
    return AlgebraElement(tuple(out))


def from_affinors(basis: "AffinorBasis", tol: Optional[float] = None) -> StructureConstants:
    """Structure constants of a matrix span, when it is closed under products.

    Every pairwise product is expressed over the span; the first product
    that falls outside raises NotClosed with the offending pair and the
    residual.  Closure failing is a meaningful result for callers that only
    need weak-rank arguments, so they catch NotClosed rather than treating
    it as a bug.
    """
    mats = basis.mats
    n = len(mats)
    if basis.mode == EXACT:
        solver = SpanSolver(mats)
        planes = []
        for i in range(n):
            plane = []
            for j in range(n):
                prod = mats[i] @ mats[j]
                coeffs = solver.coefficients(prod.vectorize())
                if coeffs is None:
                    raise NotClosed((i, j), solver.residual_sq(prod.vectorize()))
                plane.append(coeffs)
            planes.append(tuple(plane))
        return StructureConstants(n, EXACT, tuple(planes))
    if tol is None:
        from .linalg import DEFAULT_FLOAT_TOL

        tol = DEFAULT_FLOAT_TOL
    planes = []
    for i in range(n):
        plane = []
        for j in range(n):
            prod = mats[i] @ mats[j]
            coeffs, resid = float_span_solve(mats, prod, tol)
            if coeffs is None:
                raise NotClosed((i, j), resid * resid)
            plane.append(coeffs)
        planes.append(tuple(plane))
    return StructureConstants(n, FLOAT, tuple(planes))
