import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from scatpoly.gfield import batch_rank, fplinalg


def sympy_rank(a, p):
    rows = [[GF(p)(int(v)) for v in r] for r in a.tolist()]
    return DomainMatrix(rows, a.shape, GF(p)).rank()


matrices = st.tuples(st.sampled_from([3, 5, 7]), st.integers(1, 7), st.integers(1, 7), st.integers(0, 2**32 - 1))


def make(p, r, c, seed, sparse=True):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(r, c))
    if sparse:
        a[rng.random((r, c)) < 0.4] = 0
    return a


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_rank_matches_sympy(args):
    p, r, c, seed = args
    a = make(p, r, c, seed)
    assert fplinalg.rank(a, p) == sympy_rank(a, p)


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_nullspace(args):
    p, r, c, seed = args
    a = make(p, r, c, seed)
    ns = fplinalg.nullspace(a, p)
    assert ns.shape == (c - fplinalg.rank(a, p), c)
    assert not ((a @ ns.T) % p).any()
    if ns.shape[0]:
        assert fplinalg.rank(ns, p) == ns.shape[0]


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_batch_rank_matches_single(args):
    p, r, c, seed = args
    mats = np.stack([make(p, r, c, seed + i) for i in range(6)])
    assert batch_rank(mats, p).tolist() == [fplinalg.rank(m, p) for m in mats]


def test_inverse_and_solve():
    p = 7
    rng = np.random.default_rng(3)
    while True:
        a = rng.integers(0, p, size=(5, 5))
        if fplinalg.rank(a, p) == 5:
            break
    inv = fplinalg.inverse(a, p)
    assert np.array_equal((a @ inv) % p, np.eye(5, dtype=np.int64))
    b = rng.integers(0, p, 5)
    x = fplinalg.solve(a, b, p)
    assert np.array_equal((a @ x) % p, b)


def test_singular_and_inconsistent():
    p = 3
    a = np.array([[1, 2], [2, 1]])
    with pytest.raises(ZeroDivisionError):
        fplinalg.inverse(a, p)
    assert fplinalg.solve(a, np.array([1, 0]), p) is None
