import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from compgroups.fields import GF, FieldError
from compgroups.matrices import (Matrix, block_diag, jordan_profile, matrix_ops, nullspace_left,
                                 parse_matrix, rank)


def random_matrix(F, n, m, rng):
    return rng.integers(0, F.q, size=(n, m))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rank_det_inverse_against_sympy(p):
    F = GF(p)
    rng = np.random.default_rng(p)
    for _ in range(40):
        n = int(rng.integers(1, 7))
        A = random_matrix(F, n, n, rng)
        S = sympy.Matrix(A.tolist())
        det = int(S.det()) % p
        assert Matrix(F, A).det() == det
        if det:
            inv = np.array(S.inv_mod(p).tolist(), dtype=np.int64)
            assert np.array_equal(Matrix(F, A).inverse().a, inv)
        else:
            with pytest.raises(FieldError):
                Matrix(F, A).inverse()
        # rank over GF(p) via the row echelon form of sympy with modular pivots
        assert rank(F, A) == _rank_mod(S, p)


def _rank_mod(S, p):
    M = [[int(x) % p for x in row] for row in S.tolist()]
    r = 0
    cols = len(M[0])
    for c in range(cols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], p - 2, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        r += 1
    return r


def test_spec_examples():
    F2 = GF(2)
    assert matrix_ops("rank", Matrix(F2, [[0, 1], [0, 0]])) == 1
    I = Matrix.identity(GF(8), 4)
    assert matrix_ops("inverse", I) == I
    F = GF(5)
    a, b = 2, 3
    U = Matrix(F, [[1, a], [0, 1]])
    L = Matrix(F, [[1, 0], [b, 1]])
    assert matrix_ops("mul", U, L) == Matrix(F, [[(1 + a * b) % 5, a], [b, 1]])
    with pytest.raises(ValueError):
        Matrix(F, [[1, 2]]) @ Matrix(F, [[1, 2]])


def test_parse_matrix_literal():
    F = GF(4)
    M = parse_matrix(F, "[[1,0],[x,1]]")
    assert M.a.tolist() == [[1, 0], [2, 1]]
    assert (M @ M).a.tolist() == [[1, 0], [0, 1]]


def test_jordan_profiles():
    F = GF(2)
    assert jordan_profile(Matrix.identity(F, 6)) == [(1, 6)]
    J = Matrix(F, [[1, 1], [0, 1]])
    assert jordan_profile(block_diag(F, [J, J, J])) == [(2, 3)]
    with pytest.raises(FieldError):
        jordan_profile(Matrix(F, [[0, 1], [1, 1]]))


def test_encoding_is_canonical():
    F = GF(3)
    A = Matrix(F, [[1, 2], [0, 1]])
    B = Matrix(F, np.array([[1, 2], [0, 1]]))
    assert A.encode() == B.encode() and hash(A) == hash(B)
    assert A.encode() != Matrix(F, [[1, 2, 0, 1]]).encode()


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 8, 9]), st.integers(1, 5), st.integers(1, 5), st.integers(1, 5),
       st.integers(0, 2**32 - 1))
def test_rank_of_product(q, n, k, m, seed):
    F = GF(q)
    rng = np.random.default_rng(seed)
    A = Matrix(F, random_matrix(F, n, k, rng))
    B = Matrix(F, random_matrix(F, k, m, rng))
    assert (A @ B).rank() <= min(A.rank(), B.rank())
    N = nullspace_left(F, A.a)
    assert len(N) == n - A.rank()
    if len(N):
        assert not np.any((Matrix(F, N) @ A).a)
