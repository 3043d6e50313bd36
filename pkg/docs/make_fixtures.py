#!/usr/bin/env python3
"""Regenerate the example input files under docs/fixtures/."""

import json
import math
from pathlib import Path

from affinor_rank import Matrix, AffinorBasis

FIXTURES = Path(__file__).parent / "fixtures"


def rotation_block(m):
    entries = [[0] * m for _ in range(m)]
    for b in range(m // 2):
        entries[2 * b][2 * b + 1] = -1
        entries[2 * b + 1][2 * b] = 1
    return Matrix.exact(entries)


def quaternions():
    e = Matrix.identity(4)
    i = Matrix.exact([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    j = Matrix.exact([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])
    k = Matrix.exact([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])
    return e, i, j, k


def double(mat):
    m = mat.rows
    rows = [list(r) + [0] * m for r in mat.entries]
    rows += [[0] * m + list(r) for r in mat.entries]
    return Matrix.exact(rows)


def dump(name, payload):
    path = FIXTURES / name
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {path}")


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)

    e4 = Matrix.identity(4)
    dump("complex_r4_basis.json", AffinorBasis((e4, rotation_block(4))).to_json())
    dump(
        "complex_r2_basis.json",
        AffinorBasis(
            (Matrix.identity(2), rotation_block(2)), allow_equal_dim=True
        ).to_json(),
    )
    dump(
        "quaternion_r8_basis.json",
        AffinorBasis(tuple(double(m) for m in quaternions())).to_json(),
    )
    dump(
        "quaternion_r4_basis.json",
        AffinorBasis(quaternions(), allow_equal_dim=True).to_json(),
    )

    dual = {"n": 2, "C": [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]}
    dump("dual_numbers_constants.json", dual)
    n = 3
    c = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        c[0][i][i] = 1
        c[i][0][i] = 1
    dump("local3_constants.json", {"n": 3, "C": c})

    zero4 = [[[0.0] * 4 for _ in range(4)] for _ in range(4)]
    dump("flat4_connection.json", {"m": 4, "gamma": {"constant": zero4}})
    zero2 = [[[0.0] * 2 for _ in range(2)] for _ in range(2)]
    dump("flat2_connection.json", {"m": 2, "gamma": {"constant": zero2}})

    dump(
        "helix_curve.json",
        {
            "kind": "closed",
            "m": 4,
            "domain": [0.0, 2 * math.pi],
            "coords": [
                [{"type": "cos", "coeff": 1.0, "omega": 1.0}],
                [{"type": "sin", "coeff": 1.0, "omega": 1.0}],
                [{"type": "power", "coeff": 1.0, "exp": 1}],
                [],
            ],
        },
    )
    dump(
        "circle2_curve.json",
        {
            "kind": "closed",
            "m": 2,
            "domain": [0.0, 2 * math.pi],
            "coords": [
                [{"type": "cos", "coeff": 1.0, "omega": 1.0}],
                [{"type": "sin", "coeff": 1.0, "omega": 1.0}],
            ],
        },
    )

    dump(
        "conjugation_q4.json",
        Matrix.exact([[1, 2, 0, 1], [0, 1, 1, 0], [1, 0, 1, 0], [0, 1, 0, 1]]).to_json(),
    )


if __name__ == "__main__":
    main()
