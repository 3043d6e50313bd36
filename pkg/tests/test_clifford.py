"""Clifford representation construction and rank claims."""

import pytest

from affinor_rank import (
    CliffordBasis,
    CliffordSignature,
    Matrix,
    RankCertificate,
    blade_product,
    build_clifford,
    clifford_rank_theorem_check,
    doubled_generic_rank_check,
    doubled_module_basis,
    from_affinors,
    verify_associativity,
    verify_clifford_relations,
    verify_unity,
)
from affinor_rank.errors import SignatureTooLarge

from conftest import quaternion_constants, quaternion_matrices


def test_signature_validation():
    with pytest.raises(ValueError):
        CliffordSignature(0, 0)
    with pytest.raises(ValueError):
        CliffordSignature(-1, 2)
    with pytest.raises(SignatureTooLarge):
        CliffordSignature(9, 8)
    assert CliffordSignature(2, 3).dim == 32


def test_blade_product_signs():
    # e1 e2 = -e2 e1, and shared generators square by signature
    assert blade_product(0b01, 0b10, 0) == (1, 0b11)
    assert blade_product(0b10, 0b01, 0) == (-1, 0b11)
    assert blade_product(0b01, 0b01, 1) == (1, 0)   # positive square
    assert blade_product(0b01, 0b01, 0) == (-1, 0)  # negative square


def test_build_cl01_is_complex_multiplication():
    cb = build_clifford(CliffordSignature(0, 1))
    assert cb.labels == ("1", "e1")
    assert cb.basis.mats[1].entries == Matrix.exact([[0, -1], [1, 0]]).entries


def test_build_cl10_is_product_structure():
    cb = build_clifford(CliffordSignature(1, 0))
    assert cb.basis.mats[1].entries == Matrix.exact([[0, 1], [1, 0]]).entries


def test_build_cl02_is_quaternions():
    cb = build_clifford(CliffordSignature(0, 2))
    assert cb.labels == ("1", "e1", "e2", "e1e2")
    expected = quaternion_matrices()
    for built, known in zip(cb.basis.mats, expected):
        assert built.entries == known.entries
    # the abstract multiplication table round-trips through the span
    sc = from_affinors(cb.basis)
    assert sc.c == quaternion_constants().c


def test_blade_order_is_graded_lexicographic():
    cb = build_clifford(CliffordSignature(1, 2))
    assert cb.labels == ("1", "e1", "e2", "e3", "e1e2", "e1e3", "e2e3", "e1e2e3")


@pytest.mark.parametrize("s,t", [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2),
                                 (3, 0), (2, 1), (1, 2), (0, 3), (2, 2)])
def test_relations_hold_for_small_signatures(s, t):
    cb = build_clifford(CliffordSignature(s, t))
    assert verify_clifford_relations(cb).ok
    # the span is closed and genuinely associative with unity
    sc = from_affinors(cb.basis)
    assert verify_unity(sc).ok
    assert verify_associativity(sc).ok


def test_closure_constants_match_abstract_blade_table():
    # the span's structure constants must reproduce the blade product
    # table: exactly one +-1 per pair, at the blade-product position
    for s, t in [(1, 1), (0, 3)]:
        cb = build_clifford(CliffordSignature(s, t))
        sc = from_affinors(cb.basis)
        pos = {mask: idx for idx, mask in enumerate(cb.blades)}
        for i, bi in enumerate(cb.blades):
            for j, bj in enumerate(cb.blades):
                sign, result = blade_product(bi, bj, s)
                for k in range(sc.n):
                    expected = sign if k == pos[result] else 0
                    assert sc.c[i][j][k] == expected


def test_basis_span_has_full_dimension():
    for s, t in [(0, 2), (1, 1), (0, 3)]:
        cb = build_clifford(CliffordSignature(s, t))
        assert cb.basis.n == cb.signature.dim  # independence was validated


def test_tampered_generator_is_reported():
    cb = build_clifford(CliffordSignature(0, 2))
    bad = [list(row) for row in cb.basis.mats[1].entries]
    bad[0] = [-v for v in bad[0]]  # flip one row: square identity breaks
    mats = list(cb.basis.mats)
    mats[1] = Matrix.exact(bad)
    tampered = CliffordBasis(
        cb.signature,
        type(cb.basis)(tuple(mats), allow_equal_dim=True),
        cb.blades,
        cb.labels,
    )
    result = verify_clifford_relations(tampered)
    assert not result.ok
    assert any(v[0] == "square" and v[1] == 1 for v in result.violations)


def test_tampered_dense_matrix_falls_back():
    cb = build_clifford(CliffordSignature(0, 2))
    mats = list(cb.basis.mats)
    dense = [list(row) for row in mats[1].entries]
    dense[0][0] = 7  # no longer a signed permutation
    mats[1] = Matrix.exact(dense)
    tampered = CliffordBasis(
        cb.signature,
        type(cb.basis)(tuple(mats), allow_equal_dim=True),
        cb.blades,
        cb.labels,
    )
    assert not verify_clifford_relations(tampered).ok


def test_rank_theorem_check_small():
    for s, t, expected in [(0, 1, 2), (0, 2, 4), (1, 1, 4), (1, 2, 8)]:
        cert = clifford_rank_theorem_check(CliffordSignature(s, t))
        assert isinstance(cert, RankCertificate)
        assert cert.claimed_rank == expected
        # the canonical witness is the unit coefficient vector
        assert cert.witness[0] == 1 and all(v == 0 for v in cert.witness[1:])


def test_rank_theorem_check_gate():
    with pytest.raises(SignatureTooLarge):
        clifford_rank_theorem_check(CliffordSignature(6, 6))


def test_doubled_module_generic_rank():
    for s, t in [(0, 1), (1, 1), (0, 3)]:
        sig = CliffordSignature(s, t)
        result = doubled_generic_rank_check(sig)
        assert isinstance(result, RankCertificate)
        assert result.kind == "generic"
        assert result.claimed_rank == sig.dim
        assert result.pair[2] == 2 * sig.dim


def test_doubled_module_basis_shape():
    cb = build_clifford(CliffordSignature(0, 2))
    doubled = doubled_module_basis(cb)
    assert doubled.m == 8 and doubled.n == 4
