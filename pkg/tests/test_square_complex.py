"""Square complex structure: labellings, incidence, derived graphs, spectra."""

import math

import numpy as np
import pytest

from qtanner.groups import CyclicGroup, DihedralGroup, GeneratorSet
from qtanner.square_complex import (
    V00,
    V01,
    V10,
    V11,
    NonRegular,
    NonSymmetric,
    SquareComplex,
    is_ramanujan,
    mixing_violations,
    spectral_lambda,
)


def tiny_complex():
    g = CyclicGroup(4)
    return SquareComplex(g, GeneratorSet((1, 3), "A"), GeneratorSet((1, 3), "B"))


def small_complex():
    g = CyclicGroup(11)
    return SquareComplex(
        g, GeneratorSet((1, 10, 3, 8), "A"), GeneratorSet((2, 9, 4, 7), "B")
    )


def dihedral_complex():
    g = DihedralGroup(4)
    return SquareComplex(
        g, GeneratorSet((1, 3, 4, 6), "A"), GeneratorSet((1, 3, 5, 7), "B")
    )


ALL = [tiny_complex, small_complex, dihedral_complex]


def test_sizes():
    x = tiny_complex()
    assert x.n_squares == 16
    assert x.n_vertices == 16
    assert x.delta == 2


def test_phi_v00_is_definition():
    x = tiny_complex()
    for g in range(4):
        for ia in range(2):
            for ib in range(2):
                assert x.phi(x.vid(V00, g), ia, ib) == x.sq(g, ia, ib)


def test_phi_v01_hand_value():
    # v = (0, 01), label (a, b) = (1, 1): base group element is inv(1)*0 = 3
    x = tiny_complex()
    v = x.vid(V01, 0)
    assert x.phi(v, 0, 0) == x.sq(3, 0, 0) == 12


@pytest.mark.parametrize("make", ALL)
def test_phi_bijection_roundtrip(make):
    x = make()
    d = x.delta
    for v in range(x.n_vertices):
        seen = set()
        for ia in range(d):
            for ib in range(d):
                q = x.phi(v, ia, ib)
                seen.add(q)
                assert x.phi_inv(v, q) == (ia, ib)
        assert len(seen) == d * d


@pytest.mark.parametrize("make", ALL)
def test_square_vertex_incidence(make):
    x = make()
    counts = [0] * x.n_vertices
    for q in range(x.n_squares):
        quad = x.square_vertices(q)
        assert [x.vertex_class(v) for v in quad] == [V00, V01, V10, V11]
        for v in quad:
            counts[v] += 1
            assert q in x.window(v)
    assert all(c == x.delta ** 2 for c in counts)


def test_shared_line_b_edge_column():
    x = tiny_complex()
    g = x.group
    for gv in range(4):
        for ib, b in enumerate(x.gens_b.elements):
            v = x.vid(V00, gv)
            w = x.vid(V10, g.mul(gv, b))
            assert x.shared_line(v, w) == ("column", ib)
            # the shared squares match label for label
            for ia in range(x.delta):
                assert x.phi(v, ia, ib) == x.phi(w, ia, ib)


def test_shared_line_a_edge_row():
    x = tiny_complex()
    g = x.group
    for gv in range(4):
        for ia, a in enumerate(x.gens_a.elements):
            v = x.vid(V00, gv)
            w = x.vid(V01, g.mul(a, gv))
            assert x.shared_line(v, w) == ("row", ia)
            for ib in range(x.delta):
                assert x.phi(v, ia, ib) == x.phi(w, ia, ib)


def test_shared_line_same_class_absent():
    x = tiny_complex()
    assert x.shared_line(x.vid(V00, 0), x.vid(V00, 1)) is None
    # diagonal classes (V00 vs V11) share squares but no edge/line
    assert x.shared_line(x.vid(V00, 0), x.vid(V11, 0)) is None


@pytest.mark.parametrize("make", ALL)
def test_adjacency_row_sums(make):
    x = make()
    d = x.delta
    assert (x.adjacency("cay_a").sum(axis=1) == d).all()
    assert (x.adjacency("cay_b").sum(axis=1) == d).all()
    assert (x.adjacency("square0").sum(axis=1) == d * d).all()
    assert (x.adjacency("square1").sum(axis=1) == d * d).all()
    assert (x.adjacency("edges_a").sum(axis=1) == d).all()
    assert (x.adjacency("edges_b").sum(axis=1) == d).all()


@pytest.mark.parametrize("make", ALL)
def test_square_graphs_from_edge_product(make):
    # oracle: the square graphs are the V0/V1 restrictions of Adj(A) @ Adj(B)
    x = make()
    n = x.group.order
    prod = x.adjacency("edges_a") @ x.adjacency("edges_b")
    v0 = list(range(0, n)) + list(range(3 * n, 4 * n))
    v1 = list(range(n, 3 * n))
    assert np.array_equal(prod[np.ix_(v0, v0)], x.adjacency("square0"))
    # square1 rows are ordered V01 then V10, matching the v1 slice
    assert np.array_equal(prod[np.ix_(v1, v1)], x.adjacency("square1"))


@pytest.mark.parametrize("make", ALL)
def test_edge_adjacencies_commute(make):
    x = make()
    a = x.adjacency("edges_a")
    b = x.adjacency("edges_b")
    assert np.array_equal(a @ b, b @ a)


def test_spectral_lambda_complete_graph():
    k4 = np.ones((4, 4), dtype=np.int64) - np.eye(4, dtype=np.int64)
    assert spectral_lambda(k4, 3) == pytest.approx(1.0, abs=1e-9)


def test_spectral_lambda_cycle():
    c6 = np.zeros((6, 6), dtype=np.int64)
    for i in range(6):
        c6[i, (i + 1) % 6] = 1
        c6[i, (i - 1) % 6] = 1
    assert spectral_lambda(c6, 2) == pytest.approx(1.0, abs=1e-9)


def test_spectral_lambda_circulant_oracle():
    # eigenvalues of Cay(Z_11, {+-1, +-3}) are 2cos(2 pi k/11) + 2cos(6 pi k/11)
    x = small_complex()
    adj = x.adjacency("cay_a")
    expected = max(
        abs(2 * math.cos(2 * math.pi * k / 11) + 2 * math.cos(6 * math.pi * k / 11))
        for k in range(1, 11)
    )
    assert spectral_lambda(adj, 4) == pytest.approx(expected, abs=1e-9)


def test_spectral_lambda_rejects_bad_input():
    with pytest.raises(NonSymmetric):
        spectral_lambda(np.array([[0, 1], [0, 0]]), 1)
    with pytest.raises(NonRegular):
        spectral_lambda(np.array([[0, 1], [1, 0]]), 2)


@pytest.mark.parametrize("make", ALL)
def test_mixing_inequality_square0(make):
    x = make()
    n = x.group.order
    adj = x.adjacency("square0")
    assert mixing_violations(adj, x.delta ** 2, n, seed=11, pairs=100) == []


def test_mixing_inequality_double_cover():
    x = small_complex()
    m = x.adjacency("cay_a")
    n = x.group.order
    full = np.block([[np.zeros((n, n), dtype=np.int64), m],
                     [m.T, np.zeros((n, n), dtype=np.int64)]])
    assert mixing_violations(full, x.delta, n, seed=5, pairs=100) == []


def test_spectra_report_conditional_bound():
    rep = small_complex().spectra_report()
    assert rep["delta"] == 4
    if rep["square_bound_applies"]:
        assert rep["square_bound_holds"]
    assert rep["lambda_a"] > 0
    assert is_ramanujan(2 * math.sqrt(3), 4)
