from fractions import Fraction

import sympy as sp
from hypothesis import given, settings, strategies as st

from supercalc import linalg

entries = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw):
    r = draw(st.integers(1, 6))
    c = draw(st.integers(1, 6))
    rows = [[draw(entries) if draw(st.booleans()) else 0 for _ in range(c)] for _ in range(r)]
    return rows


def sparse(rows):
    return {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v}


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert linalg.rank(sparse(rows), len(rows), len(rows[0])) == sp.Matrix(rows).rank()


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_is_a_kernel_basis(rows):
    r, c = len(rows), len(rows[0])
    ker = linalg.kernel(sparse(rows), r, c)
    assert len(ker) == c - sp.Matrix(rows).rank()
    for v in ker:
        for row in rows:
            assert sum(Fraction(row[j]) * v.get(j, 0) for j in range(c)) == 0
    if ker:
        K = sp.Matrix([[sp.Rational(v.get(j, 0).numerator, v.get(j, 0).denominator)
                        if v.get(j, 0) else 0 for j in range(c)] for v in ker])
        assert K.rank() == len(ker)


def test_matmul_transpose_vstack():
    A = {(0, 0): 1, (0, 1): 2, (1, 1): 3}
    B = {(0, 0): 4, (1, 0): 5}
    assert linalg.matmul(A, B) == {(0, 0): 14, (1, 0): 15}
    assert linalg.transpose(A) == {(0, 0): 1, (1, 0): 2, (1, 1): 3}
    assert linalg.vstack(A, B, 2) == {(0, 0): 1, (0, 1): 2, (1, 1): 3, (2, 0): 4, (3, 0): 5}
    assert linalg.rank({}, 3, 3) == 0
    assert len(linalg.kernel({}, 2, 3)) == 3
