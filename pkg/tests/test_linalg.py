from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from goorbit import linalg as la
from goorbit.linalg import Subspace

from strategies import matrices, small

F = Fraction


def sym(a):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in a])


def test_solve_examples():
    assert la.solve(la.identity(2), (1, 2)) == (1, 2)
    assert la.solve([[1, 1], [2, 2]], (1, 3)) is None
    x = la.solve([[1, 1], [2, 2]], (1, 2))
    assert x[0] + x[1] == 1


def test_kernel_examples():
    assert la.kernel(la.zero_matrix(2, 2), 2) == Subspace.full(2)
    assert la.kernel(la.identity(2)).is_zero()
    k = la.kernel([[1, 1]], 2)
    assert k == Subspace.span([(1, -1)], 2)


def test_subspace_examples():
    e1 = Subspace.span([(1, 0)], 2)
    e2 = Subspace.span([(0, 1)], 2)
    assert e1 + e2 == Subspace.full(2) and la.is_direct_sum(e1, e2)
    assert (e1 & Subspace.span([(1, 1)], 2)).is_zero()
    both = Subspace.span([(1, 0), (0, 1)], 2)
    assert both + e2 == both and not la.is_direct_sum(both, e2)


def test_orthocomplement_examples():
    r3 = Subspace.full(3)
    assert la.orthocomplement(la.identity(3), Subspace.span([(1, 0, 0)], 3), r3) == Subspace.span(
        [(0, 1, 0), (0, 0, 1)], 3)
    b = [[8, 0, 0], [0, 0, 4], [0, 4, 0]]  # Killing form of sl2 in (H, E, F)
    assert la.orthocomplement(b, Subspace.span([(0, 1, -1)], 3), r3) == Subspace.span(
        [(1, 0, 0), (0, 1, 1)], 3)
    assert la.orthocomplement(la.zero_matrix(3, 3), Subspace.span([(1, 2, 3)], 3), r3) == r3


def test_shape_errors():
    with pytest.raises(la.ShapeError):
        la.add((1, 2), (1, 2, 3))
    with pytest.raises(la.ShapeError):
        la.matmul([[1, 2]], [[1, 2]])


def test_format_scalar():
    assert la.format_scalar(F(3, 6)) == "1/2"
    assert la.format_scalar(F(-4)) == "-4"


@given(matrices())
def test_rank_nullity(a):
    ncols = len(a[0])
    assert la.rank(a) + la.kernel(a, ncols).dim == ncols


@given(matrices())
def test_rank_matches_sympy(a):
    assert la.rank(a) == sym(a).rank()


@given(matrices(), st.data())
def test_solve_or_certificate(a, data):
    b = data.draw(st.lists(small, min_size=len(a), max_size=len(a)))
    ncols = len(a[0])
    x = la.solve(a, b, ncols)
    if x is not None:
        assert la.matvec(a, x) == tuple(b)
    else:
        aug = [list(r) + [bi] for r, bi in zip(a, b)]
        assert la.rank(aug) > la.rank(a)
        y = la.inconsistency_certificate(a, b)
        assert all(v == 0 for v in la.matvec(la.transpose(a), y)) and la.dot(y, b) != 0


@given(matrices())
def test_kernel_vectors_annihilated(a):
    for v in la.kernel(a, len(a[0])).basis:
        assert not any(la.matvec(a, v))


@given(matrices(5, 6), matrices(5, 6))
def test_sum_intersection_dims(a, b):
    n = 6
    a = [list(r) + [F(0)] * (n - len(r)) for r in a]
    b = [list(r) + [F(0)] * (n - len(r)) for r in b]
    sa, sb = Subspace.span(a, n), Subspace.span(b, n)
    assert (sa + sb).dim + (sa & sb).dim == sa.dim + sb.dim
    inter = sa & sb
    assert sa.contains(inter) and sb.contains(inter)


@given(st.integers(1, 6).flatmap(lambda n: matrices(n, n).filter(lambda m: len(m) == len(m[0]) == n)))
def test_determinant_and_inverse(a):
    assert la.determinant(a) == sym(a).det()
    if la.determinant(a) != 0:
        assert la.matmul(a, la.inverse(a)) == la.identity(len(a))


@given(matrices(6, 6))
def test_positive_definite_gram(a):
    # A A^T is positive semidefinite; definite exactly when A has full row rank
    g = la.matmul(a, la.transpose(a))
    assert la.is_positive_definite(g) == (la.rank(a) == len(a))
    assert la.is_negative_definite(la.mat_scale(-1, g)) == la.is_positive_definite(g)


@given(matrices(5, 5))
def test_signature_matches_sympy(a):
    n = max(len(a), len(a[0]))
    sq = [[a[i][j] if i < len(a) and j < len(a[0]) else F(0) for j in range(n)] for i in range(n)]
    s = la.mat_add(sq, la.transpose(sq))
    pos, neg, zero = la.signature(s)
    w = np.linalg.eigvalsh(np.array(s, dtype=float))
    assert zero == n - sym(s).rank()
    assert pos == int((w > 1e-7).sum()) and neg == int((w < -1e-7).sum())


@given(matrices(4, 5), st.integers(0, 2**31))
def test_orthocomplement_twice(a, seed):
    import random

    n = 5
    rng = random.Random(seed)
    # random positive definite form
    m = [[F(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
    form = la.mat_add(la.matmul(m, la.transpose(m)), la.identity(n))
    rows = [list(r) + [F(0)] * (n - len(r)) for r in a]
    s = Subspace.span(rows, n)
    full = Subspace.full(n)
    perp = la.orthocomplement(form, s, full)
    assert la.orthocomplement(form, perp, full) == s
    assert perp.dim + s.dim == n


@given(matrices(4, 4))
def test_rref_canonical(a):
    r, piv = la.rref(a)
    r2, piv2 = la.rref(r)
    assert r == r2 and piv == piv2
