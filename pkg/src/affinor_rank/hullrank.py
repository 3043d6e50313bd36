"""Hulls of vectors under an affinor span, and rank certification.

An affinor basis is an ordered list of square matrices whose first element
is the identity.  The hull of a vector X is the subspace swept out by
applying every element of the span to X; its dimension is the rank of the
matrix whose rows are the basis images of X.

Two levels of claim are certified:

* weak generic rank n: some vector's hull has dimension n.  One exact
  witness settles this, because the witness set is the complement of a
  proper algebraic subset.
* generic rank n: hull pairs generically span dimension 2n.  This is
  certified through the closure-of-products pipeline (span is an algebra,
  weak witness exists, 2n <= m) and corroborated by an explicit pair
  witness, which is mandatory: there are spans satisfying the first three
  conditions whose pair spans never reach 2n (for example two mutually
  annihilating projectors, one of rank 1, on R^4), so a certificate is
  only emitted once a concrete pair achieves the claimed dimension.

Witness searches are deterministic first (standard basis vectors, then the
all-ones vector), then draw seeded random integer vectors with a doubling
coefficient bound, so identical seeds reproduce identical certificates.
Failure to find a witness is reported as evidence, never as a proof of
absence; a definitive negative is only emitted when every maximal minor of
the symbolic hull matrix vanishes identically (expanded for small sizes).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import algebra as _algebra
from .errors import (
    DimensionMismatch,
    InvalidBasis,
    ModeMismatch,
    NotClosed,
)
from .linalg import (
    EXACT,
    DEFAULT_FLOAT_TOL,
    ExactVector,
    Matrix,
    RankResult,
    Scalar,
    det,
    exact_vector,
    from_rows,
    has_full_row_rank,
    rank,
    random_int_vector,
    scalar_multiple_of_identity,
    scalar_to_json,
)
from .multipoly import Poly, determinant, find_nonzero_point

DEFAULT_TRIALS = 64
DEFAULT_SEED = 0

_RANDOM_ROUND = 8
_INITIAL_BOUND = 4

# Symbolic minor expansion is attempted only below these sizes.
_SYMBOLIC_MAX_ROWS = 6
_SYMBOLIC_MAX_MINORS = 100


@dataclass(frozen=True)
class AffinorBasis:
    """Validated ordered span of affinors with the identity first.

    Validation happens once, here: the first element must equal the
    identity exactly, the elements must be linearly independent as vectors
    in matrix space, and the span rank n must be below the module
    dimension m.  Multiplication-operator modules and full matrix-algebra
    representations legitimately act on a space of their own dimension;
    they are built with ``allow_equal_dim=True``.
    """

    mats: tuple[Matrix, ...]
    allow_equal_dim: bool = False

    def __post_init__(self):
        object.__setattr__(self, "mats", tuple(self.mats))
        if not self.mats:
            raise InvalidBasis("empty affinor basis")
        first = self.mats[0]
        if not first.is_square:
            raise InvalidBasis("affinors must be square")
        m = first.rows
        mode = first.mode
        for mat in self.mats:
            if mat.rows != m or mat.cols != m:
                raise InvalidBasis("affinors differ in shape")
            if mat.mode != mode:
                raise ModeMismatch("affinors differ in scalar mode")
        ident = Matrix.identity(m, mode)
        if first.entries != ident.entries:
            raise InvalidBasis("first basis element must be the identity")
        n = len(self.mats)
        if n > m or (n == m and not self.allow_equal_dim):
            raise InvalidBasis(
                f"span rank {n} must be below module dimension {m}"
            )
        if mode == EXACT:
            independent = has_full_row_rank([mat.vectorize() for mat in self.mats])
        else:
            vec_rank = rank(
                from_rows([mat.vectorize() for mat in self.mats], mode),
                DEFAULT_FLOAT_TOL,
            ).rank
            independent = vec_rank == n
        if not independent:
            raise InvalidBasis("basis elements are linearly dependent")

    @property
    def m(self) -> int:
        return self.mats[0].rows

    @property
    def n(self) -> int:
        return len(self.mats)

    @property
    def mode(self) -> str:
        return self.mats[0].mode

    def require_exact(self):
        if self.mode != EXACT:
            raise ModeMismatch("certification requires an exact basis")

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "mode": self.mode,
            "mats": [mat.to_json() for mat in self.mats],
        }


@dataclass(frozen=True)
class Hull:
    """Image of one vector under every basis affinor, with its dimension."""

    base_vector: tuple[Scalar, ...]
    matrix: Matrix
    rank_result: RankResult

    @property
    def dim(self) -> int:
        return self.rank_result.rank


def hull(basis: AffinorBasis, x: Sequence[Scalar], tol: Optional[float] = None) -> Hull:
    """Hull of ``x``: rows are the basis images, in basis order."""
    if len(x) != basis.m:
        raise DimensionMismatch(f"vector length {len(x)} vs module dimension {basis.m}")
    x = tuple(x)
    rows = [mat.apply(x) for mat in basis.mats]
    mat = from_rows(rows, basis.mode)
    return Hull(x, mat, rank(mat, tol))


def pair_span_dim(
    basis: AffinorBasis,
    x: Sequence[Scalar],
    y: Sequence[Scalar],
    tol: Optional[float] = None,
) -> int:
    """Dimension of the sum of the hulls of two vectors."""
    if len(x) != basis.m or len(y) != basis.m:
        raise DimensionMismatch("pair vectors must match the module dimension")
    rows = [mat.apply(tuple(x)) for mat in basis.mats]
    rows += [mat.apply(tuple(y)) for mat in basis.mats]
    return rank(from_rows(rows, basis.mode), tol).rank


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankCertificate:
    """Self-contained, re-verifiable witness for a rank claim.

    The basis is embedded so the certificate can be audited without the
    original input: recompute the hull of the witness, recheck the pivot
    minor, and (for the generic kind) recheck the closure equations, the
    dimension inequality and the pair witness.
    """

    kind: str  # "weak" | "generic"
    claimed_rank: int
    witness: ExactVector
    pivot_rows: tuple[int, ...]
    pivot_cols: tuple[int, ...]
    basis: AffinorBasis
    closure: Optional[_algebra.StructureConstants] = None
    pair: Optional[tuple[ExactVector, ExactVector, int]] = None
    inequality: Optional[tuple[int, int]] = None  # (2n, m)
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "claimed_rank": self.claimed_rank,
            "witness": [scalar_to_json(v) for v in self.witness],
            "pivot_rows": list(self.pivot_rows),
            "pivot_cols": list(self.pivot_cols),
            "basis": self.basis.to_json(),
        }
        if self.closure is not None:
            out["closure"] = self.closure.to_json()
        if self.pair is not None:
            x, y, d = self.pair
            out["pair"] = {
                "x": [scalar_to_json(v) for v in x],
                "y": [scalar_to_json(v) for v in y],
                "dim": d,
            }
        if self.inequality is not None:
            out["inequality"] = {"two_ell": self.inequality[0], "m": self.inequality[1]}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@dataclass(frozen=True)
class NoWitnessFound:
    """Search exhausted without a witness.

    Inconclusive unless ``definitive`` is set, which only happens when the
    symbolic minor expansion proved that no witness exists anywhere.
    """

    target_rank: int
    stage: str  # "hull" | "pair"
    max_dim_seen: int
    trials: int
    definitive: bool = False
    note: str = ""

    def to_json(self) -> dict:
        return {
            "outcome": "no_witness_found",
            "target_rank": self.target_rank,
            "stage": self.stage,
            "max_dim_seen": self.max_dim_seen,
            "trials": self.trials,
            "definitive": self.definitive,
            "note": self.note,
        }


@dataclass(frozen=True)
class Inapplicable:
    """The generic-rank pipeline's hypotheses fail for this basis."""

    reason: str  # "DimensionTooSmall" | "NotAnAlgebra"
    detail: str = ""

    def to_json(self) -> dict:
        return {"outcome": "inapplicable", "reason": self.reason, "detail": self.detail}


@dataclass(frozen=True)
class AllSampledInvertible:
    """Every sampled span element was invertible: evidence, not proof."""

    samples: int
    implied_weak_rank: int
    note: str = (
        "sampling evidence only; if every nonzero element is invertible the "
        "span has weak generic rank equal to its dimension"
    )

    def to_json(self) -> dict:
        return {
            "outcome": "all_sampled_invertible",
            "samples": self.samples,
            "implied_weak_rank": self.implied_weak_rank,
            "note": self.note,
        }


@dataclass(frozen=True)
class CounterexampleFound:
    """A singular element of the span, refuting invertibility."""

    coeffs: ExactVector
    det: Fraction

    def to_json(self) -> dict:
        return {
            "outcome": "counterexample_found",
            "coeffs": [scalar_to_json(v) for v in self.coeffs],
            "det": scalar_to_json(self.det),
        }


# ---------------------------------------------------------------------------
# Witness search
# ---------------------------------------------------------------------------


def _deterministic_candidates(m: int) -> list[ExactVector]:
    ident = [
        tuple(Fraction(1) if j == i else Fraction(0) for j in range(m))
        for i in range(m)
    ]
    return ident + [tuple(Fraction(1) for _ in range(m))]


def _random_candidates(rng: random.Random, m: int, trials: int):
    bound = _INITIAL_BOUND
    for k in range(trials):
        if k and k % _RANDOM_ROUND == 0:
            bound *= 2
        yield random_int_vector(rng, m, bound)


def _symbolic_hull_entries(basis: AffinorBasis) -> list[list[Poly]]:
    m = basis.m
    rows = []
    for mat in basis.mats:
        row = []
        for j in range(m):
            terms = {}
            for k in range(m):
                v = mat.entries[j][k]
                if v != 0:
                    mono = tuple(1 if t == k else 0 for t in range(m))
                    terms[mono] = Fraction(v)
            row.append(Poly(m, terms))
        rows.append(row)
    return rows


def _symbolic_minor_scan(basis: AffinorBasis):
    """Expand all maximal minors of the symbolic hull matrix.

    Returns ("vanish", None) when every minor is the zero polynomial,
    ("witness", point) with an exact point where some minor is nonzero,
    or ("too_large", None) when the expansion is out of budget.
    """
    m, n = basis.m, basis.n
    if n > _SYMBOLIC_MAX_ROWS or math.comb(m, n) > _SYMBOLIC_MAX_MINORS:
        return "too_large", None
    entries = _symbolic_hull_entries(basis)
    for cols in itertools.combinations(range(m), n):
        sub = [[entries[i][j] for j in cols] for i in range(n)]
        d = determinant(sub)
        if not d.is_zero:
            return "witness", find_nonzero_point(d)
    return "vanish", None


def certificate_from_witness(
    basis: AffinorBasis, x: Sequence, kind: str = "weak", notes: tuple[str, ...] = ()
) -> RankCertificate:
    """Build a weak-rank certificate from a known witness vector."""
    basis.require_exact()
    x = exact_vector(x)
    h = hull(basis, x)
    if h.dim != basis.n:
        raise ValueError(
            f"vector is not a witness: hull dimension {h.dim}, expected {basis.n}"
        )
    return RankCertificate(
        kind=kind,
        claimed_rank=basis.n,
        witness=x,
        pivot_rows=h.rank_result.pivot_rows,
        pivot_cols=h.rank_result.pivot_cols,
        basis=basis,
        notes=notes,
    )


def weak_rank_witness(
    basis: AffinorBasis,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    extra_candidates: Sequence[Sequence] = (),
) -> Union[RankCertificate, NoWitnessFound]:
    """Search for a vector whose hull has full span dimension.

    The first witness in the fixed candidate order is returned, so results
    are reproducible for a given seed.  When the search fails and the
    symbolic expansion is affordable, the outcome is upgraded: either a
    definitive "no witness exists" or a witness extracted from a nonzero
    minor.
    """
    basis.require_exact()
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n, m = basis.n, basis.m
    rng = random.Random(seed)
    max_seen = 0
    tried = 0
    candidates = itertools.chain(
        (exact_vector(c) for c in extra_candidates),
        _deterministic_candidates(m),
        _random_candidates(rng, m, trials),
    )
    for x in candidates:
        tried += 1
        h = hull(basis, x)
        if h.dim == n:
            return RankCertificate(
                kind="weak",
                claimed_rank=n,
                witness=h.base_vector,
                pivot_rows=h.rank_result.pivot_rows,
                pivot_cols=h.rank_result.pivot_cols,
                basis=basis,
            )
        max_seen = max(max_seen, h.dim)
    outcome, point = _symbolic_minor_scan(basis)
    if outcome == "witness" and point is not None:
        return certificate_from_witness(
            basis, point, notes=("witness extracted from a nonzero symbolic minor",)
        )
    if outcome == "vanish":
        return NoWitnessFound(
            target_rank=n,
            stage="hull",
            max_dim_seen=max_seen,
            trials=tried,
            definitive=True,
            note="every maximal minor of the symbolic hull matrix vanishes identically",
        )
    return NoWitnessFound(
        target_rank=n,
        stage="hull",
        max_dim_seen=max_seen,
        trials=tried,
        definitive=False,
        note="search exhausted; absence of a witness was not proved",
    )


def certify_generic_rank(
    basis: AffinorBasis,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    extra_candidates: Sequence[Sequence] = (),
    extra_pairs: Sequence[tuple[Sequence, Sequence]] = (),
) -> Union[RankCertificate, Inapplicable, NoWitnessFound]:
    """Full generic-rank pipeline.

    Steps: dimension inequality 2n <= m, closure of the span under
    composition, weak witness search, then a pair witness reaching
    dimension 2n.  The pair witness is required; without it no generic
    certificate is produced.
    """
    basis.require_exact()
    n, m = basis.n, basis.m
    if 2 * n > m:
        return Inapplicable(
            "DimensionTooSmall", f"2*{n} = {2 * n} exceeds module dimension {m}"
        )
    try:
        closure = _algebra.from_affinors(basis)
    except NotClosed as exc:
        return Inapplicable("NotAnAlgebra", str(exc))
    weak = weak_rank_witness(basis, trials, seed, extra_candidates)
    if isinstance(weak, NoWitnessFound):
        return weak

    best_dim = 0
    tried = 0
    unit = _deterministic_candidates(m)[:-1]
    pair_candidates = itertools.chain(
        ((exact_vector(a), exact_vector(b)) for a, b in extra_pairs),
        ((unit[i], unit[j]) for i in range(m) for j in range(i + 1, m)),
        ((weak.witness, unit[i]) for i in range(m)),
    )
    rng = random.Random(seed)
    random_pairs = zip(
        _random_candidates(rng, m, trials), _random_candidates(rng, m, trials)
    )
    for x, y in itertools.chain(pair_candidates, random_pairs):
        tried += 1
        d = pair_span_dim(basis, x, y)
        if d == 2 * n:
            return RankCertificate(
                kind="generic",
                claimed_rank=n,
                witness=weak.witness,
                pivot_rows=weak.pivot_rows,
                pivot_cols=weak.pivot_cols,
                basis=basis,
                closure=closure,
                pair=(x, y, d),
                inequality=(2 * n, m),
            )
        best_dim = max(best_dim, d)
    return NoWitnessFound(
        target_rank=2 * n,
        stage="pair",
        max_dim_seen=best_dim,
        trials=tried,
        definitive=False,
        note=(
            "closure, dimension inequality and weak witness hold, but no pair "
            "reached the doubled dimension; no generic certificate emitted"
        ),
    )


# ---------------------------------------------------------------------------
# Side checks
# ---------------------------------------------------------------------------


def scalar_multiple_check(basis: AffinorBasis) -> tuple[tuple[bool, Optional[Scalar]], ...]:
    """For each non-identity element, whether it is a scalar multiple of E."""
    out = []
    for mat in basis.mats[1:]:
        q = scalar_multiple_of_identity(mat)
        out.append((q is not None, q))
    return tuple(out)


def _linear_combination(mats: Sequence[Matrix], coeffs: Sequence[Fraction]) -> Matrix:
    acc = mats[0].scale(coeffs[0])
    for c, mat in zip(coeffs[1:], mats[1:]):
        if c != 0:
            acc = acc + mat.scale(c)
    return acc


def inversion_probe(
    basis: AffinorBasis,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
) -> Union[AllSampledInvertible, CounterexampleFound]:
    """Sample span elements and test invertibility.

    A singular sample refutes "every nonzero element is invertible"
    definitively; an all-pass is probabilistic evidence only and says so.
    Basis elements themselves and the all-ones combination are tried before
    random coefficients.
    """
    basis.require_exact()
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = basis.n
    rng = random.Random(seed)
    tried = 0
    candidates = itertools.chain(
        _deterministic_candidates(n), _random_candidates(rng, n, trials)
    )
    for coeffs in candidates:
        tried += 1
        element = _linear_combination(basis.mats, coeffs)
        d = det(element)
        if d == 0:
            return CounterexampleFound(coeffs=coeffs, det=d)
    return AllSampledInvertible(samples=tried, implied_weak_rank=n)
