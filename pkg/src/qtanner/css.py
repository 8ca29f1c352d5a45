"""CSS code assembly on a square complex with a local code pair.

H_X holds one embedded tensor-code basis per V0 vertex (the x-type
generators); H_Z one embedded perp-tensor basis per V1 vertex.  Rows are
emitted vertex by vertex in block order with the local basis order fixed, so
the matrices are reproducible.  The two matrices commute exactly because any
two windows from opposite classes overlap on a single shared row or column,
where the local codes are orthogonal by construction.
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import Optional

from . import gf2
from .gf2 import BitMatrix, RowSpace
from .local_codes import DimensionTooLarge, LocalCodePair
from .rng import SplitMix64
from .square_complex import SquareComplex


class CssViolation(RuntimeError):
    """x- and z-type generators fail to commute; indicates a labelling bug."""


class QuantumTannerCode:
    def __init__(self, complex: SquareComplex, pair: LocalCodePair) -> None:
        if pair.delta != complex.delta:
            raise ValueError(
                f"local code length {pair.delta} != complex delta {complex.delta}"
            )
        self.complex = complex
        self.pair = pair
        self.n = complex.n_squares
        self.v0 = complex.v0_vertices()
        self.v1 = complex.v1_vertices()
        self.x_rows_per_vertex = pair.k_a * pair.k_b
        self.z_rows_per_vertex = (pair.delta - pair.k_a) * (pair.delta - pair.k_b)
        self.h_x = self._embed(self.v0, pair.basis("tensor"))
        self.h_z = self._embed(self.v1, pair.basis("perp_tensor"))
        if not gf2.is_orthogonal(self.h_x, self.h_z):
            raise CssViolation("H_X and H_Z rows do not all commute")

    def _embed(self, vertices: list[int], local_basis: BitMatrix) -> BitMatrix:
        d = self.complex.delta
        rows = []
        for v in vertices:
            window = self.complex.window(v)
            for word in local_basis.rows:
                out = 0
                w = word
                while w:
                    lsb = w & -w
                    out |= 1 << window[lsb.bit_length() - 1]
                    w ^= lsb
                rows.append(out)
        return BitMatrix(tuple(rows), self.n)

    # -- row <-> vertex bookkeeping -------------------------------------------

    def x_vertex_of_row(self, row: int) -> int:
        return self.v0[row // self.x_rows_per_vertex]

    def z_vertex_of_row(self, row: int) -> int:
        return self.v1[row // self.z_rows_per_vertex]

    def z_row_range(self, v1_index: int) -> range:
        per = self.z_rows_per_vertex
        return range(v1_index * per, (v1_index + 1) * per)

    def x_row_range(self, v0_index: int) -> range:
        per = self.x_rows_per_vertex
        return range(v0_index * per, (v0_index + 1) * per)

    # -- parameters --------------------------------------------------------------

    @cached_property
    def rank_x(self) -> int:
        return gf2.rank(self.h_x)

    @cached_property
    def rank_z(self) -> int:
        return gf2.rank(self.h_z)

    @cached_property
    def k(self) -> int:
        return self.n - self.rank_x - self.rank_z

    @cached_property
    def x_rowspace(self) -> RowSpace:
        return RowSpace(self.h_x)

    @cached_property
    def z_rowspace(self) -> RowSpace:
        return RowSpace(self.h_z)

    def params(self) -> tuple[int, int, Optional[bool]]:
        """(n, k, rate_bound_ok); the bound applies in complementary-rate mode.

        With dim C_B = delta - dim C_A the dimension is at least
        (1 - 2*rho)^2 * n for rho = k_a/delta; outside that mode no bound is
        claimed and the flag is None.
        """
        if not self.pair.complementary:
            return self.n, self.k, None
        rho = self.pair.k_a / self.pair.delta
        bound = (1.0 - 2.0 * rho) ** 2 * self.n
        return self.n, self.k, self.k >= bound - 1e-9

    # -- distance ------------------------------------------------------------------

    def distance_estimate(
        self,
        side: str,
        mode: str = "exact",
        trials: int = 1000,
        seed: int = 0,
        max_dim: int = 24,
    ) -> tuple[float, bool]:
        """Minimum weight of a logical word on one side.

        side "z": min over ker(H_Z) minus rowspace(H_X); side "x" mirrors.
        Exact mode enumerates the kernel (guarded); randomized mode reports
        the best upper bound from random kernel combinations after a greedy
        basis-reduction pass, with no confidence claim attached.
        """
        if side == "z":
            kernel = gf2.kernel_basis(self.h_z)
            stab = self.x_rowspace
        elif side == "x":
            kernel = gf2.kernel_basis(self.h_x)
            stab = self.z_rowspace
        else:
            raise ValueError(f"side must be 'x' or 'z', got {side!r}")
        if self.k == 0:
            return math.inf, True
        if mode == "exact":
            dim = kernel.nrows
            if dim > max_dim:
                raise DimensionTooLarge(f"kernel dimension {dim} exceeds {max_dim}")
            best = math.inf
            word = 0
            for i in range(1, 1 << dim):
                word ^= kernel.rows[(i & -i).bit_length() - 1]
                w = word.bit_count()
                if w < best and not stab.contains(word):
                    best = w
            return best, True
        if mode == "randomized":
            rng = SplitMix64(seed)
            rows = kernel.rows
            best = math.inf
            for _ in range(trials):
                word = 0
                while word == 0:
                    coeffs = rng.bits(len(rows))
                    word = 0
                    for i, r in enumerate(rows):
                        if (coeffs >> i) & 1:
                            word ^= r
                # greedy weight reduction over the kernel basis
                improved = True
                while improved:
                    improved = False
                    for r in rows:
                        cand = word ^ r
                        if cand and cand.bit_count() < word.bit_count():
                            word = cand
                            improved = True
                if not stab.contains(word):
                    best = min(best, word.bit_count())
            return best, False
        raise ValueError(f"unknown mode {mode!r}")

    # -- reporting --------------------------------------------------------------

    def summary(self, kappa_samples: int = 500, kappa_seed: int = 0) -> dict:
        """JSON-ready construction report: sizes, spectra, local diagnostics."""
        spec = self.complex.spectra_report()
        dists = self.pair.code_distances()
        dim = self.pair.dual_tensor_dim()
        if dim <= 16:
            kappa = self.pair.kappa_exact().as_dict()
        else:
            kappa = self.pair.kappa_sampled(kappa_samples, kappa_seed).as_dict()
        kappa["predicted"] = self.pair.kappa_predictions()
        n, k, bound_ok = self.params()
        return {
            "n": n,
            "k": k,
            "delta": self.complex.delta,
            "group_order": self.complex.group.order,
            "group": self.complex.group.name,
            "rate_bound_ok": bound_ok,
            "row_weights": {
                "hx_max": max((r.bit_count() for r in self.h_x.rows), default=0),
                "hz_max": max((r.bit_count() for r in self.h_z.rows), default=0),
            },
            "lambda_a": spec["lambda_a"],
            "lambda_b": spec["lambda_b"],
            "lambda_square": [spec["lambda_square0"], spec["lambda_square1"]],
            "ramanujan": [spec["ramanujan_a"], spec["ramanujan_b"]],
            "delta_local": dists["delta_rel"],
            "kappa_report": kappa,
        }

    def decoder(self, role: str, **kwargs):
        """Prepared decoder for this code, memoised per role and options."""
        from .decoder import Decoder

        key = (role, tuple(sorted(kwargs.items())))
        cache = self.__dict__.setdefault("_decoders", {})
        if key not in cache:
            cache[key] = Decoder(self, role, **kwargs)
        return cache[key]
