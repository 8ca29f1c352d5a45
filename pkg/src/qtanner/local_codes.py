"""Local code pairs on the delta x delta window and their derived machinery.

A local word lives on the window A x B, packed row-major: bit ia*delta + ib
is entry (row ia, column ib).  Columns of the window carry C_A codewords,
rows carry C_B codewords.  The four derived spaces are

    tensor            C_A (x) C_B                          dim kA*kB
    dual_tensor       C_A (x) F2^B + F2^A (x) C_B          dim kA*d + kB*d - kA*kB
    perp_tensor       C_A^perp (x) C_B^perp
    perp_dual_tensor  C_A^perp (x) F2^B + F2^A (x) C_B^perp

tensor and perp_dual_tensor are mutual duals, and likewise perp_tensor and
dual_tensor, which is what makes the window syndromes and coset leaders of
the two decoding sides work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional

from . import gf2
from .gf2 import BitMatrix
from .rng import SplitMix64


class NotInDualTensorCode(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class DimensionTooLarge(RuntimeError):
    pass


def random_code(length: int, dim: int, seed: int) -> BitMatrix:
    """Uniformly random full-rank dim x length generator matrix.

    Rejection sampling from uniform bit matrices, so the draw is uniform over
    full-rank matrices and deterministic per seed.
    """
    if not 0 <= dim <= length:
        raise ValueError(f"need 0 <= dim <= length, got dim={dim}, length={length}")
    if dim == 0:
        return BitMatrix((), length)
    rng = SplitMix64(seed)
    while True:
        rows = tuple(rng.bits(length) for _ in range(dim))
        m = BitMatrix(rows, length)
        if gf2.rank(m) == dim:
            return m


def span(basis: tuple[int, ...]) -> Iterator[int]:
    """All 2^k combinations of the basis rows, Gray-code order, starting at 0."""
    word = 0
    yield word
    for i in range(1, 1 << len(basis)):
        word ^= basis[(i & -i).bit_length() - 1]
        yield word


def words_of_weight(nbits: int, w: int) -> Iterator[int]:
    """All nbits-bit words of weight w in increasing numeric order (Gosper)."""
    if w == 0:
        yield 0
        return
    if w > nbits:
        return
    v = (1 << w) - 1
    limit = 1 << nbits
    while v < limit:
        yield v
        lsb = v & -v
        ripple = v + lsb
        v = ripple | (((v ^ ripple) >> 2) // lsb)


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy argument {x} outside [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def binary_entropy_inverse(y: float, tol: float = 1e-12) -> float:
    """The x in [0, 1/2] with H2(x) = y, by bisection."""
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"entropy value {y} outside [0, 1]")
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def predicted_kappa(rho_a: float, rho_b: float) -> float:
    """Product-expansion constant predicted for uniformly random code pairs.

    rho_a and rho_b are the codimension fractions of the two codes and must
    lie in (0, 1).
    """
    if not (0.0 < rho_a < 1.0 and 0.0 < rho_b < 1.0):
        raise ValueError(f"rho arguments must lie in (0, 1), got {rho_a}, {rho_b}")
    h_a = binary_entropy_inverse(rho_a / 8.0)
    h_b = binary_entropy_inverse(rho_b / 8.0)
    h_ab = binary_entropy_inverse(rho_a * rho_b / 8.0)
    return 0.5 * min(0.25 * h_a * h_b, h_ab)


@dataclass(frozen=True)
class Decomposition:
    """A local word written as c + r with c column-coded and r row-coded."""

    c: int
    r: int
    norm_c: int
    norm_r: int
    minimal: bool

    @property
    def norm(self) -> int:
        return self.norm_c + self.norm_r


@dataclass(frozen=True)
class KappaReport:
    mode: str
    kappa: float
    witness: Optional[int] = None
    witness_weight: Optional[int] = None
    witness_norm: Optional[int] = None
    codewords_checked: int = 0

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "kappa": None if math.isinf(self.kappa) else self.kappa,
            "witness_weight": self.witness_weight,
            "witness_norm": self.witness_norm,
            "codewords_checked": self.codewords_checked,
        }


class LocalCodePair:
    """C_A, C_B with their window bases, norms, leaders and decompositions."""

    def __init__(self, gen_a: BitMatrix, gen_b: BitMatrix) -> None:
        if gen_a.ncols != gen_b.ncols:
            raise ValueError("C_A and C_B must have the same length")
        if gf2.rank(gen_a) != gen_a.nrows or gf2.rank(gen_b) != gen_b.nrows:
            raise ValueError("generator matrices must have full row rank")
        self.delta = gen_a.ncols
        self.gen_a = gen_a
        self.gen_b = gen_b
        self.k_a = gen_a.nrows
        self.k_b = gen_b.nrows
        self.par_a = gf2.dual_basis(gen_a)
        self.par_b = gf2.dual_basis(gen_b)

    @classmethod
    def random(cls, delta: int, k_a: int, k_b: int, seed_a: int, seed_b: int) -> "LocalCodePair":
        return cls(random_code(delta, k_a, seed_a), random_code(delta, k_b, seed_b))

    @property
    def complementary(self) -> bool:
        return self.k_b == self.delta - self.k_a

    # -- window geometry ------------------------------------------------------

    @cached_property
    def col_masks(self) -> tuple[int, ...]:
        d = self.delta
        return tuple(sum(1 << (ia * d + ib) for ia in range(d)) for ib in range(d))

    @cached_property
    def row_masks(self) -> tuple[int, ...]:
        d = self.delta
        return tuple(((1 << d) - 1) << (ia * d) for ia in range(d))

    def col_norm(self, word: int) -> int:
        return sum(1 for m in self.col_masks if word & m)

    def row_norm(self, word: int) -> int:
        return sum(1 for m in self.row_masks if word & m)

    def _col_word(self, u: int, ib: int) -> int:
        d = self.delta
        out = 0
        while u:
            lsb = u & -u
            out |= 1 << ((lsb.bit_length() - 1) * d + ib)
            u ^= lsb
        return out

    def _row_word(self, ia: int, w: int) -> int:
        return w << (ia * self.delta)

    # -- derived bases ----------------------------------------------------------

    def tensor_basis(self, kind: str) -> BitMatrix:
        if kind == "tensor":
            return self._tensor(self.gen_a, self.gen_b)
        if kind == "perp_tensor":
            return self._tensor(self.par_a, self.par_b)
        if kind == "dual_tensor":
            return self._dual_tensor_reduced(self.gen_a, self.gen_b)
        if kind == "perp_dual_tensor":
            return self._dual_tensor_reduced(self.par_a, self.par_b)
        raise ValueError(f"unknown basis kind {kind!r}")

    def _tensor(self, ga: BitMatrix, gb: BitMatrix) -> BitMatrix:
        d = self.delta
        rows = []
        for u in ga.rows:
            for w in gb.rows:
                word = 0
                uu = u
                while uu:
                    lsb = uu & -uu
                    word |= w << ((lsb.bit_length() - 1) * d)
                    uu ^= lsb
                rows.append(word)
        return BitMatrix(tuple(rows), d * d)

    def _dual_tensor_gens(self, ga: BitMatrix, gb: BitMatrix) -> tuple[list[int], list[int]]:
        """Unreduced generating sets: column-type words, then row-type words."""
        d = self.delta
        cols = [self._col_word(u, ib) for u in ga.rows for ib in range(d)]
        rows = [self._row_word(ia, w) for ia in range(d) for w in gb.rows]
        return cols, rows

    def _dual_tensor_reduced(self, ga: BitMatrix, gb: BitMatrix) -> BitMatrix:
        cols, rows = self._dual_tensor_gens(ga, gb)
        m = BitMatrix(tuple(cols + rows), self.delta ** 2)
        _, basis, _ = gf2.rank_and_bases(m)
        return basis

    @cached_property
    def _memo_bases(self) -> dict:
        return {}

    def basis(self, kind: str) -> BitMatrix:
        memo = self._memo_bases
        if kind not in memo:
            memo[kind] = self.tensor_basis(kind)
        return memo[kind]

    def dual_tensor_dim(self) -> int:
        return self.k_a * self.delta + self.k_b * self.delta - self.k_a * self.k_b

    def is_dual_tensor(self, word: int) -> bool:
        return all((p & word).bit_count() % 2 == 0 for p in self.basis("perp_tensor").rows)

    # -- decompositions ---------------------------------------------------------

    @cached_property
    def _decompose_system(self) -> tuple[BitMatrix, list[int], list[int]]:
        cols, rows = self._dual_tensor_gens(self.gen_a, self.gen_b)
        gens = BitMatrix(tuple(cols + rows), self.delta ** 2)
        return gens.transpose(), cols, rows

    def decompose_any(self, word: int) -> tuple[int, int]:
        """Some (c, r) with c + r == word; raises when word is not dual tensor."""
        system, cols, rows = self._decompose_system
        z = gf2.solve(system, word)
        if z is None:
            raise NotInDualTensorCode(f"word {word:#x} is not in the dual tensor code")
        c = r = 0
        for i, g in enumerate(cols):
            if (z >> i) & 1:
                c ^= g
        off = len(cols)
        for j, g in enumerate(rows):
            if (z >> (off + j)) & 1:
                r ^= g
        return c, r

    def min_norm_decompose(self, word: int, budget: int = 16) -> Decomposition:
        """Decomposition minimising the column count of c plus row count of r.

        Exact: every decomposition is (c0 + t, r0 + t) for a tensor codeword
        t, so all 2^(kA*kB) offsets are enumerated.  Ties prefer smaller
        norm_c, then the numerically smallest c.
        """
        if self.k_a * self.k_b > budget:
            raise BudgetExceeded(
                f"tensor dimension {self.k_a * self.k_b} exceeds budget {budget}"
            )
        c0, r0 = self.decompose_any(word)
        best: Optional[tuple[int, int, int, int, int]] = None
        for t in span(self.basis("tensor").rows):
            c = c0 ^ t
            r = r0 ^ t
            nc = self.col_norm(c)
            nr = self.row_norm(r)
            key = (nc + nr, nc, c)
            if best is None or key < best[:3]:
                best = (nc + nr, nc, c, r, nr)
        assert best is not None
        _, nc, c, r, nr = best
        return Decomposition(c=c, r=r, norm_c=nc, norm_r=nr, minimal=True)

    # -- window syndromes and coset leaders ---------------------------------------

    def syndrome_basis(self, side: str) -> BitMatrix:
        """Checks applied to a local window for the given decoding side.

        Side "x" windows are checked against C_A^perp (x) C_B^perp (the
        z-type generators); side "z" against C_A (x) C_B.
        """
        if side == "x":
            return self.basis("perp_tensor")
        if side == "z":
            return self.basis("tensor")
        raise ValueError(f"side must be 'x' or 'z', got {side!r}")

    def local_syndrome(self, side: str, word: int) -> int:
        return self.syndrome_basis(side).mul_vec(word)

    @cached_property
    def _memo_tables(self) -> dict:
        return {}

    def coset_table(self, side: str) -> list[int]:
        """Minimum-weight representative for every window syndrome.

        Built breadth-first by weight, visiting words of equal weight in
        increasing numeric order, so the leaders are deterministic and each
        table entry is a true coset leader.
        """
        memo = self._memo_tables
        if side in memo:
            return memo[side]
        basis = self.syndrome_basis(side)
        m = basis.nrows
        if m > 20:
            raise DimensionTooLarge(f"syndrome dimension {m} too large for a table")
        nbits = self.delta ** 2
        table: list[Optional[int]] = [None] * (1 << m)
        remaining = 1 << m
        for w in range(nbits + 1):
            if remaining == 0:
                break
            for word in words_of_weight(nbits, w):
                s = basis.mul_vec(word)
                if table[s] is None:
                    table[s] = word
                    remaining -= 1
                    if remaining == 0:
                        break
        assert remaining == 0  # the syndrome map is surjective
        memo[side] = table
        return table

    def coset_leader(self, side: str, syndrome: int) -> int:
        return self.coset_table(side)[syndrome]

    # -- code distances and robustness ---------------------------------------------

    def code_distances(self, max_dim: int = 12) -> dict:
        """Exhaustive distances of C_A, C_B and their duals, inf for zero codes.

        delta_rel is min of the four divided by the length; None when any
        enumeration would exceed 2^max_dim codewords.
        """
        out: dict = {}
        names = (
            ("d_a", self.gen_a), ("d_b", self.gen_b),
            ("d_a_perp", self.par_a), ("d_b_perp", self.par_b),
        )
        feasible = all(m.nrows <= max_dim for _, m in names)
        for key, m in names:
            if m.nrows > max_dim:
                out[key] = None
                continue
            best = math.inf
            for word in span(m.rows):
                if word:
                    best = min(best, word.bit_count())
            out[key] = best
        if feasible:
            out["delta_rel"] = min(
                out["d_a"], out["d_b"], out["d_a_perp"], out["d_b_perp"]
            ) / self.delta
        else:
            out["delta_rel"] = None
        return out

    def kappa_exact(self, max_dim: int = 22, budget: int = 22) -> KappaReport:
        """Exact product-expansion constant by full dual-tensor enumeration.

        kappa = min over nonzero codewords x of |x| / (delta * minNorm(x));
        the witness attains equality.  A pair of zero codes has an empty
        minimisation and reports +inf.
        """
        dim = self.dual_tensor_dim()
        if dim > max_dim:
            raise DimensionTooLarge(f"dual tensor dimension {dim} exceeds {max_dim}")
        basis = self.basis("dual_tensor")
        best = math.inf
        witness = None
        checked = 0
        for word in span(basis.rows):
            if not word:
                continue
            checked += 1
            mn = self.min_norm_decompose(word, budget=budget)
            ratio = word.bit_count() / (self.delta * mn.norm)
            if ratio < best:
                best = ratio
                witness = (word, mn.norm)
        if witness is None:
            return KappaReport(mode="exact", kappa=math.inf, codewords_checked=0)
        return KappaReport(
            mode="exact",
            kappa=best,
            witness=witness[0],
            witness_weight=witness[0].bit_count(),
            witness_norm=witness[1],
            codewords_checked=checked,
        )

    def kappa_sampled(self, samples: int, seed: int, budget: int = 22) -> KappaReport:
        """Upper bound on kappa from random nonzero dual-tensor codewords."""
        basis = self.basis("dual_tensor")
        if basis.nrows == 0:
            return KappaReport(mode="sampled", kappa=math.inf, codewords_checked=0)
        rng = SplitMix64(seed)
        best = math.inf
        witness = None
        for _ in range(samples):
            word = 0
            while word == 0:
                coeffs = rng.bits(basis.nrows)
                word = 0
                for i, row in enumerate(basis.rows):
                    if (coeffs >> i) & 1:
                        word ^= row
            mn = self.min_norm_decompose(word, budget=budget)
            ratio = word.bit_count() / (self.delta * mn.norm)
            if ratio < best:
                best = ratio
                witness = (word, mn.norm)
        return KappaReport(
            mode="sampled",
            kappa=best,
            witness=witness[0] if witness else None,
            witness_weight=witness[0].bit_count() if witness else None,
            witness_norm=witness[1] if witness else None,
            codewords_checked=samples,
        )

    def kappa_predictions(self) -> dict:
        """Theoretical kappa under both rho conventions (rate and codimension).

        The random-pair bound is stated for codimension fractions; the rate
        reading is reported alongside instead of guessing what a caller means.
        """
        d = self.delta
        out = {}
        for label, (ka, kb) in (
            ("codimension", (d - self.k_a, d - self.k_b)),
            ("rate", (self.k_a, self.k_b)),
        ):
            ra, rb = ka / d, kb / d
            if 0.0 < ra < 1.0 and 0.0 < rb < 1.0:
                out[label] = predicted_kappa(ra, rb)
            else:
                out[label] = None
        return out
