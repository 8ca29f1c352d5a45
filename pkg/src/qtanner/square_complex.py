"""Quadripartite left-right Cayley square complex.

Vertices are four copies of a group G laid out in blocks V00, V01, V10, V11;
squares are triples (g, a, b) standing for the four-vertex set
{(g,00), (ag,01), (gb,10), (agb,11)}.  Square ids are the canonical triple
encoding g*delta^2 + ia*delta + ib, so the four-vertex representation is
derived, never stored.

Each vertex sees exactly delta^2 squares, its Q-neighbourhood, labelled by
generator-index pairs (ia, ib) through the map ``phi``; the labelling is
chosen so that neighbouring vertices agree square-for-square on the row or
column their windows share.
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import Optional

import numpy as np

from .groups import GeneratorSet, Group, validate_generators
from .rng import SplitMix64

V00, V01, V10, V11 = 0, 1, 2, 3
CLASS_NAMES = ("V00", "V01", "V10", "V11")


class NonSymmetric(ValueError):
    pass


class NonRegular(ValueError):
    pass


class SquareComplex:
    """The complex built from a group and two symmetric generator sets."""

    def __init__(self, group: Group, gens_a: GeneratorSet, gens_b: GeneratorSet) -> None:
        if gens_a.side != "A" or gens_b.side != "B":
            raise ValueError("generator sets must be sided A and B")
        if gens_a.delta != gens_b.delta:
            raise ValueError(
                f"|A| = {gens_a.delta} and |B| = {gens_b.delta} must be equal"
            )
        self.group = group
        self.gens_a = gens_a
        self.gens_b = gens_b
        self.diagnostics_a = validate_generators(group, gens_a)
        self.diagnostics_b = validate_generators(group, gens_b)
        self.delta = gens_a.delta
        self._inv_a = tuple(group.inv(a) for a in gens_a.elements)
        self._inv_b = tuple(group.inv(b) for b in gens_b.elements)

    # -- sizes and id layout ------------------------------------------------

    @property
    def n_squares(self) -> int:
        return self.group.order * self.delta * self.delta

    @property
    def n_vertices(self) -> int:
        return 4 * self.group.order

    def vid(self, vclass: int, g: int) -> int:
        return vclass * self.group.order + g

    def vertex_class(self, v: int) -> int:
        return v // self.group.order

    def vertex_group(self, v: int) -> int:
        return v % self.group.order

    def class_vertices(self, vclass: int) -> range:
        n = self.group.order
        return range(vclass * n, (vclass + 1) * n)

    def v0_vertices(self) -> list[int]:
        """V0 = V00 u V11, in block order."""
        return list(self.class_vertices(V00)) + list(self.class_vertices(V11))

    def v1_vertices(self) -> list[int]:
        """V1 = V01 u V10, in block order."""
        return list(self.class_vertices(V01)) + list(self.class_vertices(V10))

    def sq(self, g: int, ia: int, ib: int) -> int:
        d = self.delta
        return (g * d + ia) * d + ib

    def sq_decode(self, q: int) -> tuple[int, int, int]:
        d = self.delta
        q, ib = divmod(q, d)
        g, ia = divmod(q, d)
        return g, ia, ib

    def square_vertices(self, q: int) -> tuple[int, int, int, int]:
        """The one vertex of each class incident to square q."""
        g, ia, ib = self.sq_decode(q)
        mul = self.group.mul
        a = self.gens_a.elements[ia]
        b = self.gens_b.elements[ib]
        ag = mul(a, g)
        gb = mul(g, b)
        return (
            self.vid(V00, g),
            self.vid(V01, ag),
            self.vid(V10, gb),
            self.vid(V11, mul(a, gb)),
        )

    # -- Q-neighbourhood labelling -------------------------------------------

    def phi(self, v: int, ia: int, ib: int) -> int:
        """Square labelled (ia, ib) in the window of vertex v."""
        d = self.delta
        if not (0 <= ia < d and 0 <= ib < d):
            raise IndexError(f"label ({ia}, {ib}) out of range for delta={d}")
        g = self.vertex_group(v)
        cls = self.vertex_class(v)
        mul = self.group.mul
        if cls == V00:
            base = g
        elif cls == V01:
            base = mul(self._inv_a[ia], g)
        elif cls == V10:
            base = mul(g, self._inv_b[ib])
        elif cls == V11:
            base = mul(self._inv_a[ia], mul(g, self._inv_b[ib]))
        else:
            raise IndexError(f"vertex {v} out of range")
        return self.sq(base, ia, ib)

    def phi_inv(self, v: int, q: int) -> tuple[int, int]:
        """Label of square q in the window of v; raises if not incident."""
        base, ia, ib = self.sq_decode(q)
        g = self.vertex_group(v)
        cls = self.vertex_class(v)
        mul = self.group.mul
        a = self.gens_a.elements[ia]
        b = self.gens_b.elements[ib]
        if cls == V00:
            ok = base == g
        elif cls == V01:
            ok = mul(a, base) == g
        elif cls == V10:
            ok = mul(base, b) == g
        else:
            ok = mul(a, mul(base, b)) == g
        if not ok:
            raise ValueError(f"square {q} is not incident to vertex {v}")
        return ia, ib

    @cached_property
    def _windows(self) -> list[tuple[int, ...]]:
        d = self.delta
        out = []
        for v in range(self.n_vertices):
            out.append(
                tuple(self.phi(v, ia, ib) for ia in range(d) for ib in range(d))
            )
        return out

    def window(self, v: int) -> tuple[int, ...]:
        """Square ids of Q(v) in local-index order (ia * delta + ib)."""
        return self._windows[v]

    def shared_line(self, v: int, w: int) -> Optional[tuple[str, int]]:
        """("row", ia) or ("column", ib) when v and w are adjacent, else None.

        An A-edge shares the row labelled by its generator index, a B-edge the
        column; the shared squares carry identical labels in both windows.
        """
        cv, cw = self.vertex_class(v), self.vertex_class(w)
        gv, gw = self.vertex_group(v), self.vertex_group(w)
        mul = self.group.mul
        # A-edges join Vi0 to Vi1: (g, i0) -- (a g, i1)
        a_pairs = {(V00, V01), (V01, V00), (V10, V11), (V11, V10)}
        b_pairs = {(V00, V10), (V10, V00), (V01, V11), (V11, V01)}
        if (cv, cw) in a_pairs:
            lo, hi = (gv, gw) if cv in (V00, V10) else (gw, gv)
            for ia, a in enumerate(self.gens_a.elements):
                if mul(a, lo) == hi:
                    return ("row", ia)
            return None
        if (cv, cw) in b_pairs:
            lo, hi = (gv, gw) if cv in (V00, V01) else (gw, gv)
            for ib, b in enumerate(self.gens_b.elements):
                if mul(lo, b) == hi:
                    return ("column", ib)
            return None
        return None

    # -- derived graphs -------------------------------------------------------

    def adjacency(self, kind: str) -> np.ndarray:
        """Integer multiplicity adjacency matrix of a derived graph.

        kinds: "cay_a", "cay_b" (the Cayley graphs over G), "square0",
        "square1" (the square graphs over V0 and V1, rows ordered block by
        block), "edges_a", "edges_b" (the full A-/B-edge graphs over V).
        """
        n = self.group.order
        mul = self.group.mul
        if kind == "cay_a":
            m = np.zeros((n, n), dtype=np.int64)
            for g in range(n):
                for a in self.gens_a.elements:
                    m[g, mul(a, g)] += 1
            return m
        if kind == "cay_b":
            m = np.zeros((n, n), dtype=np.int64)
            for g in range(n):
                for b in self.gens_b.elements:
                    m[g, mul(g, b)] += 1
            return m
        if kind in ("square0", "square1"):
            m = np.zeros((2 * n, 2 * n), dtype=np.int64)
            for g in range(n):
                for a in self.gens_a.elements:
                    ag = mul(a, g)
                    for b in self.gens_b.elements:
                        if kind == "square0":
                            # square (g,a,b) joins (g,00) and (agb,11)
                            i, j = g, n + mul(ag, b)
                        else:
                            # and joins (ag,01) with (gb,10)
                            i, j = ag, n + mul(g, b)
                        m[i, j] += 1
                        m[j, i] += 1
            return m
        if kind in ("edges_a", "edges_b"):
            m = np.zeros((4 * n, 4 * n), dtype=np.int64)
            for g in range(n):
                if kind == "edges_a":
                    for a in self.gens_a.elements:
                        for c0, c1 in ((V00, V01), (V10, V11)):
                            i, j = self.vid(c0, g), self.vid(c1, mul(a, g))
                            m[i, j] += 1
                            m[j, i] += 1
                else:
                    for b in self.gens_b.elements:
                        for c0, c1 in ((V00, V10), (V01, V11)):
                            i, j = self.vid(c0, g), self.vid(c1, mul(g, b))
                            m[i, j] += 1
                            m[j, i] += 1
            return m
        raise ValueError(f"unknown adjacency kind {kind!r}")

    def spectra_report(self) -> dict:
        """Second eigenvalues of the four derived graphs plus Ramanujan flags.

        The 4*delta bound on the square graphs is asserted only when both
        Cayley graphs are numerically Ramanujan; otherwise their lambda is
        merely reported.
        """
        d = self.delta
        lam_a = spectral_lambda(self.adjacency("cay_a"), d)
        lam_b = spectral_lambda(self.adjacency("cay_b"), d)
        lam_sq0 = spectral_lambda(self.adjacency("square0"), d * d)
        lam_sq1 = spectral_lambda(self.adjacency("square1"), d * d)
        ram_a = is_ramanujan(lam_a, d)
        ram_b = is_ramanujan(lam_b, d)
        report = {
            "delta": d,
            "lambda_a": lam_a,
            "lambda_b": lam_b,
            "lambda_square0": lam_sq0,
            "lambda_square1": lam_sq1,
            "ramanujan_a": ram_a,
            "ramanujan_b": ram_b,
            "square_bound": 4.0 * d,
            "square_bound_applies": ram_a and ram_b,
        }
        if ram_a and ram_b:
            report["square_bound_holds"] = (
                lam_sq0 <= 4 * d + 1e-9 and lam_sq1 <= 4 * d + 1e-9
            )
        return report


def spectral_lambda(adj: np.ndarray, degree: int, tol: float = 1e-9) -> float:
    """Largest |eigenvalue| of a regular graph excluding the +-degree ones."""
    adj = np.asarray(adj)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise NonSymmetric(f"adjacency must be square, got shape {adj.shape}")
    if not np.array_equal(adj, adj.T):
        raise NonSymmetric("adjacency matrix is not symmetric")
    row_sums = adj.sum(axis=1)
    if not np.all(row_sums == degree):
        raise NonRegular(f"row sums {sorted(set(row_sums.tolist()))} != degree {degree}")
    eig = np.linalg.eigvalsh(adj.astype(np.float64))
    cut = max(tol, tol * degree)
    kept = eig[np.abs(np.abs(eig) - degree) > cut]
    if kept.size == 0:
        return 0.0
    return float(np.max(np.abs(kept)))


def is_ramanujan(lam: float, degree: int, tol: float = 1e-9) -> bool:
    return lam <= 2.0 * math.sqrt(degree - 1) + tol


def _mixing_lambda(adj: np.ndarray, degree: int) -> float:
    """Second eigenvalue for the mixing bound: drop ONE copy of +-degree.

    On a connected bipartite graph this equals ``spectral_lambda``.  On a
    disconnected one the degree eigenvalue has multiplicity > 1 and remains,
    so the bound degenerates to the always-true |E| <= degree*sqrt(|S||T|)
    form instead of silently using an invalid lambda.
    """
    if not np.array_equal(adj, adj.T):
        raise NonSymmetric("adjacency matrix is not symmetric")
    if not np.all(adj.sum(axis=1) == degree):
        raise NonRegular("graph is not regular of the stated degree")
    eig = sorted(np.linalg.eigvalsh(adj.astype(np.float64)))
    eig.pop()  # the +degree eigenvalue every regular graph has
    if eig and abs(eig[0] + degree) < 1e-8:
        eig.pop(0)
    return max((abs(e) for e in eig), default=0.0)


def mixing_violations(
    adj: np.ndarray,
    degree: int,
    left_size: int,
    seed: int = 0,
    pairs: int = 100,
    slack: float = 1e-6,
) -> list[tuple[int, int, float, float]]:
    """Expander-mixing spot check on a bipartite regular multigraph.

    adj is the full adjacency with the left part first.  For random S in the
    left part and T in the right part, |E(S, T)| must stay below
    degree*|S|*|T|/left_size + lambda*sqrt(|S|*|T|).  Returns the violating
    (|S|, |T|, count, bound) tuples; empty means the check passed.
    """
    adj = np.asarray(adj)
    n = adj.shape[0]
    right_size = n - left_size
    lam = _mixing_lambda(adj, degree)
    rng = SplitMix64(seed)
    bad = []
    for _ in range(pairs):
        ks = 1 + rng.below(left_size)
        kt = 1 + rng.below(right_size)
        s = rng.sample_indices(left_size, ks)
        t = [left_size + j for j in rng.sample_indices(right_size, kt)]
        count = float(adj[np.ix_(s, t)].sum())
        bound = degree * ks * kt / left_size + lam * math.sqrt(ks * kt)
        if count > bound + slack:
            bad.append((ks, kt, count, bound))
    return bad
