"""Exact and float matrix kernels."""

import random
from fractions import Fraction

import pytest

from affinor_rank import Matrix, det, inverse, invertible, rank, solve_in_span
from affinor_rank.errors import (
    ModeMismatch,
    NonFiniteEntry,
    NotInvertible,
    NotSquare,
    ShapeMismatch,
)
from affinor_rank.linalg import SpanSolver, has_full_row_rank
from affinor_rank.multipoly import Poly, determinant

from conftest import (
    brute_force_rank,
    cofactor_det,
    quaternion_matrices,
    random_exact_matrix,
)


def test_rank_identity():
    r = rank(Matrix.identity(3))
    assert r.rank == 3
    assert r.pivot_rows == (0, 1, 2)
    assert r.pivot_cols == (0, 1, 2)


def test_rank_proportional_rows():
    assert rank(Matrix.exact([[1, 2], [2, 4]])).rank == 1


def test_rank_quaternion_hull_at_unit():
    # rows are the images of e1 under 1, i, j, k; brute-force minor
    # enumeration is the oracle for the expected full rank
    e, i, j, k = quaternion_matrices()
    x = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    rows = [m.apply(x) for m in (e, i, j, k)]
    assert brute_force_rank(rows) == 4
    assert rank(Matrix.exact(rows)).rank == 4


def test_rank_rational_entries():
    m = Matrix.exact([["1/2", "1/3"], ["1/4", "1/6"]])
    assert rank(m).rank == 1
    m2 = Matrix.exact([["1/2", "1/3"], ["1/4", "1/5"]])
    assert rank(m2).rank == 2


def test_exact_rank_matches_brute_force(rng):
    for _ in range(60):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        m = random_exact_matrix(rng, rows, cols, bound=3)
        assert rank(m).rank == brute_force_rank(m.entries)


def test_rank_permutation_invariance(rng):
    for _ in range(40):
        m = random_exact_matrix(rng, 4, 5)
        rperm = list(range(4))
        cperm = list(range(5))
        rng.shuffle(rperm)
        rng.shuffle(cperm)
        permuted = Matrix.exact(
            [[m.entries[i][j] for j in cperm] for i in rperm]
        )
        assert rank(permuted).rank == rank(m).rank


def test_rank_transpose_invariance(rng):
    for _ in range(40):
        m = random_exact_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        assert rank(m).rank == rank(m.transpose()).rank


def test_exact_rank_equals_float_rank_on_integer_matrices():
    # seeded property run, at least 1000 cases, mixing full-rank draws with
    # forced low-rank products
    rng = random.Random(7)
    cases = 0
    while cases < 1000:
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        if cases % 2 == 0:
            m = random_exact_matrix(rng, rows, cols, bound=9)
        else:
            inner = rng.randint(1, min(rows, cols))
            a = [[rng.randint(-1, 1) for _ in range(inner)] for _ in range(rows)]
            b = [[rng.randint(-2, 2) for _ in range(cols)] for _ in range(inner)]
            m = Matrix.exact(a) @ Matrix.exact(b)
        exact = rank(m).rank
        floats = rank(Matrix.of_floats(m.entries), tol=1e-8).rank
        assert exact == floats, f"case {cases}: exact {exact} vs float {floats}"
        cases += 1


def test_pivot_minor_is_nonsingular(rng):
    for _ in range(60):
        m = random_exact_matrix(rng, rng.randint(2, 5), rng.randint(2, 5), bound=4)
        res = rank(m)
        assert len(res.pivot_rows) == res.rank == len(res.pivot_cols)
        if res.rank:
            minor = [
                [m.entries[i][j] for j in res.pivot_cols] for i in res.pivot_rows
            ]
            assert cofactor_det(minor) != 0


def test_float_rank_requires_positive_tol():
    m = Matrix.of_floats([[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        rank(m, tol=0.0)
    assert rank(m).rank == 2  # default tolerance applies


def test_float_matrix_rejects_nonfinite():
    with pytest.raises(NonFiniteEntry):
        Matrix.of_floats([[1.0, float("nan")]])
    with pytest.raises(NonFiniteEntry):
        Matrix.of_floats([[float("inf")]])


def test_mode_mixing_rejected():
    a = Matrix.identity(2)
    b = Matrix.of_floats([[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(ModeMismatch):
        a @ b
    with pytest.raises(ModeMismatch):
        a + b


def test_exact_entries_reject_floats():
    with pytest.raises(TypeError):
        Matrix.exact([[0.5]])


# ---------------------------------------------------------------------------
# solve_in_span
# ---------------------------------------------------------------------------


def test_solve_in_span_identity_target():
    e = Matrix.identity(2)
    coeffs = solve_in_span([e], e.scale(5))
    assert coeffs == (Fraction(5),)


def test_solve_in_span_rotation_square():
    # F is the quarter turn; F @ F = -E checked entrywise is the oracle
    e = Matrix.identity(2)
    f = Matrix.exact([[0, -1], [1, 0]])
    ff = f @ f
    assert ff.entries == e.scale(-1).entries
    coeffs = solve_in_span([e, f], ff)
    assert coeffs == (Fraction(-1), Fraction(0))


def test_solve_in_span_infeasible():
    e = Matrix.identity(3)
    p = Matrix.exact([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    target = Matrix.exact([[0, 0, 0], [0, 0, 0], [0, 0, 1]])
    assert solve_in_span([e, p], target) is None


def test_solve_in_span_shape_checks():
    e2, e3 = Matrix.identity(2), Matrix.identity(3)
    with pytest.raises(ShapeMismatch):
        solve_in_span([e2], e3)


def test_solve_in_span_float_mode():
    e = Matrix.of_floats([[1, 0], [0, 1]])
    f = Matrix.of_floats([[0, -1], [1, 0]])
    target = Matrix.of_floats([[-1, 0], [0, -1]])
    coeffs = solve_in_span([e, f], target, tol=1e-9)
    assert coeffs is not None
    assert abs(coeffs[0] + 1) < 1e-9 and abs(coeffs[1]) < 1e-9
    outside = Matrix.of_floats([[1, 1], [1, 1]])
    assert solve_in_span([e], outside, tol=1e-9) is None


def test_span_solver_residual():
    e = Matrix.identity(2)
    solver = SpanSolver([e])
    target = Matrix.exact([[1, 1], [0, 1]]).vectorize()
    assert solver.coefficients(target) is None
    assert solver.residual_sq(target) == 1


# ---------------------------------------------------------------------------
# invertibility / determinant / inverse
# ---------------------------------------------------------------------------


def test_invertible_basic():
    assert invertible(Matrix.identity(3))
    assert not invertible(Matrix.exact([[1, 0], [0, 0]]))
    with pytest.raises(NotSquare):
        invertible(Matrix.exact([[1, 0]]))


def test_generic_quaternion_element_is_invertible():
    # symbolic oracle: det(aE + bI + cJ + dK) expands to (a^2+b^2+c^2+d^2)^2
    e, i, j, k = quaternion_matrices()
    mats = (e, i, j, k)
    entries = []
    for r in range(4):
        row = []
        for c in range(4):
            terms = {}
            for v, mat in enumerate(mats):
                coeff = mat.entries[r][c]
                if coeff != 0:
                    mono = tuple(1 if t == v else 0 for t in range(4))
                    terms[mono] = Fraction(coeff)
            row.append(Poly(4, terms))
        entries.append(row)
    sym_det = determinant(entries)
    norm = Poly(4)
    for v in range(4):
        norm = norm + Poly.variable(4, v) * Poly.variable(4, v)
    expected = norm * norm
    assert sym_det.terms == expected.terms

    rng = random.Random(3)
    for _ in range(20):
        coeffs = [rng.randint(-9, 9) for _ in range(4)]
        if all(c == 0 for c in coeffs):
            coeffs[0] = 1
        element = e.scale(coeffs[0])
        for c, mat in zip(coeffs[1:], mats[1:]):
            element = element + mat.scale(c)
        assert invertible(element)


def test_det_matches_cofactor_oracle(rng):
    for _ in range(40):
        n = rng.randint(1, 4)
        m = random_exact_matrix(rng, n, n, bound=5)
        assert det(m) == cofactor_det([list(r) for r in m.entries])


def test_det_rational_scaling():
    m = Matrix.exact([["1/2", 0], [0, "1/3"]])
    assert det(m) == Fraction(1, 6)


def test_inverse_round_trip(rng):
    ident = Matrix.identity(3)
    found = 0
    while found < 20:
        m = random_exact_matrix(rng, 3, 3, bound=4)
        if det(m) == 0:
            continue
        found += 1
        assert (m @ inverse(m)).entries == ident.entries
    with pytest.raises(NotInvertible):
        inverse(Matrix.exact([[1, 1], [1, 1]]))


def test_float_invertible_uses_singular_values():
    m = Matrix.of_floats([[1.0, 0.0], [0.0, 1e-12]])
    assert not invertible(m, tol=1e-8)
    assert invertible(Matrix.of_floats([[2.0, 0.0], [0.0, 2.0]]), tol=1e-8)


def test_has_full_row_rank_agrees_with_rank(rng):
    for _ in range(60):
        rows = rng.randint(1, 5)
        cols = rng.randint(rows, 7)
        m = random_exact_matrix(rng, rows, cols, bound=6)
        assert has_full_row_rank(m.entries) == (rank(m).rank == rows)
