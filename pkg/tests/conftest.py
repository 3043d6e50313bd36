"""Shared fixtures: small algebras with hand-verified multiplication tables."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from affinor_rank import AffinorBasis, Matrix, StructureConstants


def cofactor_det(rows):
    """Recursive cofactor determinant; the slow independent oracle."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    sign = 1
    for j in range(n):
        if rows[0][j] != 0:
            minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
            total += sign * rows[0][j] * cofactor_det(minor)
        sign = -sign
    return total


def brute_force_rank(rows):
    """Largest k with some k x k minor nonzero, by full enumeration."""
    nrows, ncols = len(rows), len(rows[0])
    for k in range(min(nrows, ncols), 0, -1):
        for rsel in itertools.combinations(range(nrows), k):
            for csel in itertools.combinations(range(ncols), k):
                minor = [[rows[i][j] for j in csel] for i in rsel]
                if cofactor_det(minor) != 0:
                    return k
    return 0


def random_exact_matrix(rng: random.Random, rows: int, cols: int, bound: int = 9) -> Matrix:
    return Matrix.exact(
        [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]
    )


def rotation_block(m: int) -> Matrix:
    """Block-diagonal quarter-turn rotations: squares to -E. Requires even m."""
    assert m % 2 == 0
    entries = [[0] * m for _ in range(m)]
    for b in range(m // 2):
        entries[2 * b][2 * b + 1] = -1
        entries[2 * b + 1][2 * b] = 1
    return Matrix.exact(entries)


def quaternion_matrices() -> tuple[Matrix, Matrix, Matrix, Matrix]:
    """Left multiplication by 1, i, j, k on the coefficient space of (1,i,j,k)."""
    e = Matrix.identity(4)
    i = Matrix.exact([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    j = Matrix.exact([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])
    k = Matrix.exact([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])
    return e, i, j, k


def block_double(mat: Matrix) -> Matrix:
    """diag(mat, mat) on the doubled space."""
    m = mat.rows
    z = [Fraction(0)] * m
    rows = [tuple(mat.entries[i]) + tuple(z) for i in range(m)]
    rows += [tuple(z) + tuple(mat.entries[i]) for i in range(m)]
    return Matrix(2 * m, 2 * m, mat.mode, tuple(rows))


# Hand multiplication tables, the oracles for everything built on them.

QUATERNION_TABLE = {
    # (a, b) -> (sign, c) meaning F_a F_b = sign * F_c over basis (1, i, j, k)
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion_constants() -> StructureConstants:
    c = [[[0] * 4 for _ in range(4)] for _ in range(4)]
    for (a, b), (sign, target) in QUATERNION_TABLE.items():
        c[a][b][target] = sign
    return StructureConstants.exact(c)


def dual_number_constants() -> StructureConstants:
    """Basis (1, x) with x*x = 0."""
    c = [[[0, 0], [0, 0]] for _ in range(2)]
    c[0][0] = [1, 0]
    c[0][1] = [0, 1]
    c[1][0] = [0, 1]
    c[1][1] = [0, 0]
    return StructureConstants.exact(c)


def complex_constants() -> StructureConstants:
    """Basis (1, i) with i*i = -1."""
    c = [[[0, 0], [0, 0]] for _ in range(2)]
    c[0][0] = [1, 0]
    c[0][1] = [0, 1]
    c[1][0] = [0, 1]
    c[1][1] = [-1, 0]
    return StructureConstants.exact(c)


def local3_constants() -> StructureConstants:
    """Basis (1, x, y) with every product of x and y vanishing."""
    n = 3
    c = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        c[0][i][i] = 1
        c[i][0][i] = 1
    return StructureConstants.exact(c)


def cross_product_with_unity_constants() -> StructureConstants:
    """Basis (1, i, j, k) with the anticommuting cross product: not associative."""
    n = 4
    c = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        c[0][i][i] = 1
        c[i][0][i] = 1
    cross = {(1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
             (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)}
    for (a, b), (sign, target) in cross.items():
        c[a][b][target] = sign
    return StructureConstants.exact(c)


def matrix_algebra_2x2_constants() -> StructureConstants:
    """Full 2x2 matrix algebra over the basis {E, e11, e12, e21}; e22 = E - e11.

    Four independent endomorphisms of a 2-space cannot form an affinor
    basis (the span rank exceeds the module dimension), so the constants
    are extracted from the raw products directly.
    """
    from affinor_rank.linalg import SpanSolver

    e = Matrix.identity(2)
    e11 = Matrix.exact([[1, 0], [0, 0]])
    e12 = Matrix.exact([[0, 1], [0, 0]])
    e21 = Matrix.exact([[0, 0], [1, 0]])
    mats = [e, e11, e12, e21]
    solver = SpanSolver(mats)
    planes = []
    for a in mats:
        plane = []
        for b in mats:
            coeffs = solver.coefficients((a @ b).vectorize())
            assert coeffs is not None  # matrix products stay in the span
            plane.append(coeffs)
        planes.append(tuple(plane))
    return StructureConstants(4, "exact", tuple(planes))


@pytest.fixture
def rng():
    return random.Random(20240811)


@pytest.fixture
def quaternions_r4() -> AffinorBasis:
    return AffinorBasis(quaternion_matrices(), allow_equal_dim=True)


@pytest.fixture
def quaternions_r8() -> AffinorBasis:
    return AffinorBasis(tuple(block_double(m) for m in quaternion_matrices()))


@pytest.fixture
def complex_r4() -> AffinorBasis:
    return AffinorBasis((Matrix.identity(4), rotation_block(4)))
