"""GF(2) linear algebra: spec examples plus randomized identities.

The oracle here is a naive dense Gaussian elimination on 0/1 lists, written
independently of the packed-int implementation.
"""

import pytest

from qtanner.gf2 import (
    BitMatrix,
    RowSpace,
    bits_of,
    dual_basis,
    is_orthogonal,
    kernel_basis,
    rank,
    rank_and_bases,
    solve,
    vector_from_bits,
    weight,
)
from qtanner.rng import SplitMix64


def dense_rank_oracle(rows, ncols):
    """Row-reduce lists of 0/1 entries; returns the rank."""
    work = [list(r) for r in rows]
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][col]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(len(work)):
            if i != r and work[i][col]:
                work[i] = [(x + y) % 2 for x, y in zip(work[i], work[r])]
        r += 1
    return r


def random_matrix(rng, nrows, ncols):
    return BitMatrix.from_rows((rng.bits(ncols) for _ in range(nrows)), ncols)


def test_rank_identity_matrix():
    m = BitMatrix.from_rows([1, 2, 4], 3)
    r, row_basis, kernel = rank_and_bases(m)
    assert r == 3
    assert kernel.nrows == 0
    assert set(row_basis.rows) == {1, 2, 4}


def test_rank_duplicate_rows():
    m = BitMatrix.from_rows([0b11, 0b11], 2)
    r, _, kernel = rank_and_bases(m)
    assert r == 1
    assert kernel.rows == (0b11,)


def test_rank_nullity_random_vs_oracle():
    rng = SplitMix64(7)
    m = random_matrix(rng, 10, 20)
    r, row_basis, kernel = rank_and_bases(m)
    assert r == dense_rank_oracle(m.to_dense(), 20)
    assert r + kernel.nrows == 20
    assert row_basis.nrows == r
    # every kernel row is annihilated by M
    for k in kernel.rows:
        assert m.mul_vec(k) == 0
    # row basis spans the same space as M
    assert rank(BitMatrix(m.rows + row_basis.rows, 20)) == r


@pytest.mark.parametrize("seed", range(8))
def test_kernel_annihilated_many(seed):
    rng = SplitMix64(100 + seed)
    m = random_matrix(rng, 6 + seed, 9 + seed)
    for k in kernel_basis(m).rows:
        assert m.mul_vec(k) == 0


def test_solve_identity():
    m = BitMatrix.from_rows([1, 2, 4, 8], 4)
    assert solve(m, 0b1011) == 0b1011


def test_solve_zero_matrix():
    m = BitMatrix.from_rows([0, 0], 3)
    assert solve(m, 0) == 0
    assert solve(m, 0b01) is None


@pytest.mark.parametrize("seed", range(10))
def test_solve_consistent_roundtrip(seed):
    rng = SplitMix64(500 + seed)
    m = random_matrix(rng, 7, 12)
    x0 = rng.bits(12)
    s = m.mul_vec(x0)
    x = solve(m, s)
    assert x is not None
    assert m.mul_vec(x) == s


def test_dual_basis_full_rank_code():
    g = BitMatrix.from_rows([1, 2, 4], 3)
    assert dual_basis(g).nrows == 0


def test_dual_basis_zero_code():
    g = BitMatrix.from_rows([], 4)
    d = dual_basis(g)
    assert d.nrows == 4
    assert rank(d) == 4


def test_dual_basis_random_code():
    rng = SplitMix64(3)
    while True:
        g = random_matrix(rng, 2, 6)
        if rank(g) == 2:
            break
    d = dual_basis(g)
    assert d.nrows == 4
    assert is_orthogonal(g, d)
    # dual of the dual spans the original row space
    dd = dual_basis(d)
    assert rank(dd) == rank(g) == rank(BitMatrix(dd.rows + g.rows, 6))


@pytest.mark.parametrize("seed", range(6))
def test_weight_inclusion_exclusion(seed):
    rng = SplitMix64(900 + seed)
    a, b = rng.bits(40), rng.bits(40)
    assert weight(a ^ b) == weight(a) + weight(b) - 2 * weight(a & b)
    assert weight(a ^ a) == 0


def test_pack_unpack_roundtrip():
    bits = [1, 0, 1, 1, 0, 0, 1]
    assert bits_of(vector_from_bits(bits), 7) == bits


def test_rowspace_membership():
    m = BitMatrix.from_rows([0b011, 0b110], 3)
    space = RowSpace(m)
    assert space.dim == 2
    assert space.contains(0b101)
    assert not space.contains(0b001)
    assert space.contains(0)


def test_transpose_involution():
    rng = SplitMix64(42)
    m = random_matrix(rng, 5, 9)
    assert m.transpose().transpose() == m
