import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from highdesc import linalg

PRIMES = [2, 3, 5]


@st.composite
def matrices(draw, max_rows=7, max_cols=7):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(vals, dtype=np.int64).reshape(r, c), p


def brute_rank(M, p):
    # size of the row space, by enumeration
    from itertools import product
    rows = {tuple((np.array(co) @ M) % p) for co in product(range(p), repeat=M.shape[0])}
    return round(np.log(len(rows)) / np.log(p))


@settings(max_examples=30)
@given(matrices(max_rows=4, max_cols=5))
def test_rank_against_enumeration(Mp):
    M, p = Mp
    assert linalg.rank(M, p) == brute_rank(M, p)


@given(matrices())
def test_kernel(Mp):
    M, p = Mp
    K = linalg.kernel(M, p)
    assert K.shape == (M.shape[1], M.shape[1] - linalg.rank(M, p))
    assert not ((M @ K) % p).any()
    assert linalg.rank(K.T, p) == K.shape[1] if K.size else True


@given(matrices(), st.data())
def test_solve(Mp, data):
    M, p = Mp
    x = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=M.shape[1], max_size=M.shape[1])))
    b = (M @ x) % p
    y = linalg.solve(M, b, p)
    assert y is not None and ((M @ y - b) % p == 0).all()


def test_solve_reports_inconsistency():
    assert linalg.solve(np.array([[1, 1], [1, 1]]), [0, 1], 2) is None


@pytest.mark.parametrize("p", [2, 3, 7])
def test_sparse_rank_matches_dense(p):
    rng = np.random.default_rng(p)
    for shape in [(250, 180), (180, 260), (220, 220)]:
        M = (rng.random(shape) < 0.02) * rng.integers(1, p, shape)
        assert M.shape[0] * M.shape[1] >= 40000
        assert linalg.rank(M, p) == len(linalg.rref(M, p)[1])


def test_zero_ring_and_composite_modulus():
    M = np.eye(3, dtype=np.int64)
    assert linalg.rank(M, 1) == 0 and linalg.kernel(M, 1).shape == (3, 0)
    with pytest.raises(ValueError, match="prime"):
        linalg.rank(M, 4)


def test_reduce_mod_span_is_canonical():
    B = np.array([[1], [1], [0]])
    a = linalg.reduce_mod_span(np.array([1, 0, 1]), B, 2)
    b = linalg.reduce_mod_span(np.array([0, 1, 1]), B, 2)
    assert (a == b).all()


def test_complement_basis():
    Z = np.eye(3, dtype=np.int64)
    B = np.array([[1], [1], [0]])
    C = linalg.complement_basis(Z, B, 3)
    assert C.shape[1] == 2 and linalg.rank(np.concatenate([B, C], axis=1).T, 3) == 3


def test_span_elements_limit():
    with pytest.raises(ValueError):
        list(linalg.span_elements(np.eye(20, dtype=np.int64), 2, limit=1000))
    assert len(list(linalg.span_elements(np.eye(3, dtype=np.int64), 3))) == 27
