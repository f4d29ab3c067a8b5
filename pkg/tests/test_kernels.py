import numpy as np
import pytest
import sympy
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from fpp import kernels

P = 32003
mats = st.integers(1, 8).flatmap(lambda r: st.integers(1, 8).flatmap(
    lambda c: arrays(np.int64, (r, c), elements=st.integers(0, 4))))

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba backend disabled")


@given(mats)
def test_rank_matches_sympy(M):
    dm = DomainMatrix.from_list_sympy(*M.shape, M.tolist()).convert_to(sympy.GF(P))
    assert kernels.rank(M, P) == dm.rank()


@given(mats)
def test_nullspace_is_kernel(M):
    N = kernels.nullspace(M, P)
    assert N.shape[0] == M.shape[1] - kernels.rank(M, P)
    if N.size:
        assert not (kernels.matmul_mod(M, N.T, P)).any()


@needs_numba
@given(mats)
def test_backends_agree_on_rref(M):
    A = M % P
    B = A.copy()
    r1, piv1 = kernels._np_rref(A, P)
    r2, piv2 = kernels._nb_rref(B, P)
    assert r1 == r2 and list(piv1) == list(piv2)
    assert (A == B).all()


@needs_numba
@given(mats, mats)
def test_backends_agree_on_matmul(A, B):
    B = np.resize(B, (A.shape[1], B.shape[1]))
    assert (kernels._np_matmul_mod(A, B, P) == kernels._nb_matmul_mod(A, B, P)).all()


def test_det_and_solve():
    M = np.array([[2, 1], [7, 3]])
    assert kernels.det(M, P) == (6 - 7) % P
    x = kernels.solve(M, [1, 2], P)
    assert ((M @ x - [1, 2]) % P == 0).all()
    assert kernels.solve(np.array([[1, 1], [1, 1]]), [0, 1], P) is None
