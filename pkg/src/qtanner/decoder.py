"""Mismatch-decomposition decoding for one Pauli error type.

Role "x" decodes x-type errors: the syndrome comes from H_Z, the local
minimum-weight estimates are made on V1 windows, and flips live in the dual
tensor code C_A (x) F2^B + F2^A (x) C_B.  Role "z" is the exact mirror with
H_X, V0 windows and the perp dual tensor code.

The pipeline is: preprocess a syndrome into the mismatch vector Z (the sum
of per-vertex coset leaders, supported on squares where neighbouring local
estimates disagree), decompose Z into column/row accumulators by greedy
local flips (sequentially, or in four per-class parallel substeps per
round), then recombine leaders and accumulators into an error estimate whose
syndrome matches the input exactly.

Throughout, a flip at a vertex of class ij contributes its column part to
C_hat[j] and its row part to R_hat[i], so
C_hat[0] + R_hat[0] + C_hat[1] + R_hat[1] + Z_hat == Z at every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Optional

import numpy as np

from .css import QuantumTannerCode
from .local_codes import BudgetExceeded, LocalCodePair, span
from .square_complex import CLASS_NAMES, V00, V01, V10, V11

ROLES = ("x", "z")


class ConsistencyViolation(RuntimeError):
    """An internal identity failed; indicates a bug, not a decoding failure."""


@dataclass
class FlipEvent:
    step: int
    vertex: int
    vertex_class: str
    weight: int
    gain: int
    norm_c: int
    norm_r: int
    minimal: bool
    round: Optional[int] = None

    def as_dict(self) -> dict:
        return {
            "step": self.step,
            "vertex_class": self.vertex_class,
            "vertex": self.vertex,
            "x_weight": self.weight,
            "gain": self.gain,
            "norm_c": self.norm_c,
            "norm_r": self.norm_r,
            "minimal": self.minimal,
            "round": self.round,
        }


@dataclass
class Mismatch:
    z: int
    leaders: dict[int, int]  # vertex id -> local leader word on its window

    @property
    def weight(self) -> int:
        return self.z.bit_count()


@dataclass
class DecompositionResult:
    success: bool
    c_acc: tuple[int, int]
    r_acc: tuple[int, int]
    flips: list[FlipEvent] = field(default_factory=list)
    steps: int = 0
    rounds: Optional[int] = None
    reason: Optional[str] = None


@dataclass
class DecodeResult:
    status: str  # "success" | "failure"
    e_hat: Optional[int]
    mismatch: Mismatch
    decomposition: DecompositionResult

    @property
    def success(self) -> bool:
        return self.status == "success"


class Decoder:
    """Prepared decoding context for one code and one role.

    The code object is immutable and shared read-only; a Decoder holds only
    precomputed lookup structures, so instances may be shared across threads
    for querying.  Sequential decoding is single-threaded; the parallel
    procedure's substeps touch disjoint windows within a class, which is what
    makes its batched flips well defined.
    """

    def __init__(
        self,
        code: QuantumTannerCode,
        role: str,
        search: str = "auto",
        bounded_norm: int = 2,
        decompose_budget: int = 16,
    ) -> None:
        if role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}, got {role!r}")
        self.code = code
        self.role = role
        self.bounded_norm = bounded_norm
        self.decompose_budget = decompose_budget
        pair = code.pair
        if role == "x":
            self.syndrome_matrix = code.h_z
            self.stabilizer_space = code.x_rowspace
            self.pre_vertices = code.v1
            self.rows_per_vertex = code.z_rows_per_vertex
            self.flip_pair = pair
            # e_hat = sum of V10 leaders + C0 + R1; V01 + C1 + R0 must agree
            self.post_primary = (V10, 0, 1)
            self.post_mirror = (V01, 1, 0)
        else:
            self.syndrome_matrix = code.h_x
            self.stabilizer_space = code.z_rowspace
            self.pre_vertices = code.v0
            self.rows_per_vertex = code.x_rows_per_vertex
            self.flip_pair = LocalCodePair(pair.par_a, pair.par_b)
            self.post_primary = (V00, 0, 0)
            self.post_mirror = (V11, 1, 1)
        self.side = role  # window syndrome side in LocalCodePair terms

        cx = code.complex
        self.delta = cx.delta
        self.windows = [cx.window(v) for v in range(cx.n_vertices)]
        self.window_masks = [
            sum(1 << q for q in win) for win in self.windows
        ]
        self.flip_dim = self.flip_pair.dual_tensor_dim()
        if search == "auto":
            search = "exhaustive" if self.flip_dim <= 20 and self.delta <= 8 else "bounded"
        if search == "exhaustive" and (self.flip_dim > 20 or self.delta > 8):
            raise ValueError(
                f"exhaustive search infeasible: flip dim {self.flip_dim}, delta {self.delta}"
            )
        self.search = search
        if search == "exhaustive":
            words = np.fromiter(
                span(self.flip_pair.basis("dual_tensor").rows),
                dtype=np.uint64,
                count=1 << self.flip_dim,
            )
            words = np.sort(words[words != 0])
            self._cw = words
            self._cw_weights = np.bitwise_count(words).astype(np.int64)
        else:
            self._cw = None
            self._cw_weights = None

    # -- elementary maps ---------------------------------------------------------

    def syndrome(self, e: int) -> int:
        """Packed syndrome of an error vector over Q."""
        if e < 0 or e >> self.code.n:
            raise ValueError("error vector has bits beyond the qubit count")
        return self.syndrome_matrix.mul_vec(e)

    def embed(self, v: int, local: int) -> int:
        """Lift a window word at vertex v into F2^Q."""
        win = self.windows[v]
        out = 0
        while local:
            lsb = local & -local
            out |= 1 << win[lsb.bit_length() - 1]
            local ^= lsb
        return out

    def local_view(self, vec: int, v: int) -> int:
        """Restrict a vector over Q to the window of v, in label order."""
        out = 0
        for i, q in enumerate(self.windows[v]):
            out |= ((vec >> q) & 1) << i
        return out

    # -- preprocessing --------------------------------------------------------------

    def preprocess(self, s: int) -> Mismatch:
        """Per-vertex coset leaders and their sum, the mismatch vector."""
        per = self.rows_per_vertex
        mask = (1 << per) - 1
        z = 0
        leaders: dict[int, int] = {}
        for idx, v in enumerate(self.pre_vertices):
            s_v = (s >> (idx * per)) & mask
            leader = self.code.pair.coset_leader(self.side, s_v)
            leaders[v] = leader
            if leader:
                z ^= self.embed(v, leader)
        return Mismatch(z=z, leaders=leaders)

    # -- local flip search -------------------------------------------------------------

    def find_flip(
        self, z_hat: int, v: int, criterion: str, epsilon: float = 0.25
    ) -> Optional[tuple[int, int, int]]:
        """Best admissible flip word on the window of v, or None.

        criterion "threshold": any nonzero flip codeword x with
        |Z| - |Z + x| >= (1 - epsilon)|x|, smallest packed word first.
        criterion "half_max": gain >= |x|/2, maximising |x|, ties to the
        smallest packed word.  Returns (local word, weight, gain); the gain
        equals the global weight drop because supp(x) stays inside Q(v).
        """
        zv = self.local_view(z_hat, v)
        if zv == 0:
            return None
        if self.search == "exhaustive":
            return self._find_flip_arrays(zv, criterion, epsilon)
        return self._find_flip_bounded(zv, criterion, epsilon)

    def _find_flip_arrays(self, zv, criterion, epsilon):
        ov = np.bitwise_count(self._cw & np.uint64(zv)).astype(np.int64)
        gains = 2 * ov - self._cw_weights
        if criterion == "threshold":
            ok = gains >= (1.0 - epsilon) * self._cw_weights
            if not ok.any():
                return None
            i = int(np.argmax(ok))
        elif criterion == "half_max":
            ok = 2 * gains >= self._cw_weights
            if not ok.any():
                return None
            idx = np.flatnonzero(ok)
            i = int(idx[np.argmax(self._cw_weights[idx])])
        else:
            raise ValueError(f"unknown criterion {criterion!r}")
        return int(self._cw[i]), int(self._cw_weights[i]), int(gains[i])

    def _bounded_candidates(self, zv: int) -> list[int]:
        """Flip words with few nonzero columns and rows, all touching zv.

        Heuristic fallback when the flip code is too large to enumerate: at
        most ``bounded_norm`` nonzero columns and rows, drawn only from lines
        where the local mismatch is nonzero.
        """
        fp = self.flip_pair
        cols = [ib for ib, m in enumerate(fp.col_masks) if zv & m]
        rows = [ia for ia, m in enumerate(fp.row_masks) if zv & m]
        col_codes = [w for w in span(fp.gen_a.rows) if w]
        row_codes = [w for w in span(fp.gen_b.rows) if w]
        c_words = {0}
        for size in range(1, self.bounded_norm + 1):
            for subset in combinations(cols, size):
                for choice in product(col_codes, repeat=size):
                    word = 0
                    for ib, u in zip(subset, choice):
                        word ^= fp._col_word(u, ib)
                    c_words.add(word)
        r_words = {0}
        for size in range(1, self.bounded_norm + 1):
            for subset in combinations(rows, size):
                for choice in product(row_codes, repeat=size):
                    word = 0
                    for ia, w in zip(subset, choice):
                        word ^= fp._row_word(ia, w)
                    r_words.add(word)
        out = {c ^ r for c in c_words for r in r_words}
        out.discard(0)
        return sorted(out)

    def _find_flip_bounded(self, zv, criterion, epsilon):
        best = None
        for x in self._bounded_candidates(zv):
            w = x.bit_count()
            gain = 2 * (x & zv).bit_count() - w
            if criterion == "threshold":
                if gain >= (1.0 - epsilon) * w:
                    return x, w, gain
            elif criterion == "half_max":
                if 2 * gain >= w and (best is None or w > best[1]):
                    best = (x, w, gain)
            else:
                raise ValueError(f"unknown criterion {criterion!r}")
        return best

    # -- decomposition procedures ------------------------------------------------------

    def _decompose_flip(self, x: int):
        try:
            dec = self.flip_pair.min_norm_decompose(x, budget=self.decompose_budget)
        except BudgetExceeded:
            c, r = self.flip_pair.decompose_any(x)
            fp = self.flip_pair
            return c, r, fp.col_norm(c), fp.row_norm(r), False
        return dec.c, dec.r, dec.norm_c, dec.norm_r, True

    def _apply(self, state, v, x, weight, gain, rnd=None):
        z_hat, c_acc, r_acc, flips = state
        c, r, nc, nr, minimal = self._decompose_flip(x)
        cls = self.code.complex.vertex_class(v)
        i, j = cls >> 1, cls & 1
        c_acc[j] ^= self.embed(v, c)
        r_acc[i] ^= self.embed(v, r)
        z_hat ^= self.embed(v, x)
        flips.append(
            FlipEvent(
                step=len(flips),
                vertex=v,
                vertex_class=CLASS_NAMES[cls],
                weight=weight,
                gain=gain,
                norm_c=nc,
                norm_r=nr,
                minimal=minimal,
                round=rnd,
            )
        )
        return z_hat

    def sequential_decompose(
        self, z: int, epsilon: float, step_limit: Optional[int] = None
    ) -> DecompositionResult:
        """Greedy flips scanning vertices round-robin until the mismatch dies.

        The scan resumes after the last successful vertex; a full silent pass
        means no admissible flip exists anywhere and the decoder reports
        failure.  A step-limit valve (4|Q| by default) bounds runaway runs.
        """
        if not 0.0 < epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
        limit = step_limit if step_limit is not None else 4 * self.code.n
        n_vertices = self.code.complex.n_vertices
        z_hat = z
        c_acc, r_acc = [0, 0], [0, 0]
        flips: list[FlipEvent] = []
        ptr = 0
        while z_hat:
            if len(flips) >= limit:
                return DecompositionResult(
                    False, tuple(c_acc), tuple(r_acc), flips, len(flips), None, "step_limit"
                )
            hit = None
            for offset in range(n_vertices):
                v = (ptr + offset) % n_vertices
                if z_hat & self.window_masks[v] == 0:
                    continue
                cand = self.find_flip(z_hat, v, "threshold", epsilon)
                if cand is not None:
                    hit = (v, cand, offset)
                    break
            if hit is None:
                return DecompositionResult(
                    False, tuple(c_acc), tuple(r_acc), flips, len(flips), None, "stalled"
                )
            v, (x, w, gain), offset = hit
            z_hat = self._apply((z_hat, c_acc, r_acc, flips), v, x, w, gain)
            ptr = (ptr + offset + 1) % n_vertices
        return DecompositionResult(True, tuple(c_acc), tuple(r_acc), flips, len(flips), None)

    def parallel_decompose(
        self,
        z: int,
        fixed_rounds: Optional[int] = None,
        round_limit: Optional[int] = None,
    ) -> DecompositionResult:
        """Rounds of four per-class substeps with batched half-max flips.

        Within a substep every vertex of the class evaluates the half-max
        criterion against the substep-start mismatch and all accepted flips
        are applied together; windows within a class are disjoint, so the
        batch equals any sequential order of the same flips.  Failure is a
        round that changes nothing; in fixed-round mode the procedure instead
        runs exactly ``fixed_rounds`` rounds and reports whatever is left.
        """
        if round_limit is None:
            round_limit = 64 * math.ceil(math.log2(1 + z.bit_count())) if z else 0
        z_hat = z
        c_acc, r_acc = [0, 0], [0, 0]
        flips: list[FlipEvent] = []
        rounds = 0
        while z_hat:
            if fixed_rounds is not None:
                if rounds >= fixed_rounds:
                    return DecompositionResult(
                        False, tuple(c_acc), tuple(r_acc), flips, len(flips), rounds,
                        "rounds_exhausted",
                    )
            elif rounds >= round_limit:
                return DecompositionResult(
                    False, tuple(c_acc), tuple(r_acc), flips, len(flips), rounds,
                    "round_limit",
                )
            temp = z_hat
            for cls in (V00, V01, V10, V11):
                snapshot = z_hat
                picks = []
                for v in self.code.complex.class_vertices(cls):
                    if snapshot & self.window_masks[v] == 0:
                        continue
                    cand = self.find_flip(snapshot, v, "half_max")
                    if cand is not None:
                        picks.append((v, cand))
                for v, (x, w, gain) in picks:
                    z_hat = self._apply((z_hat, c_acc, r_acc, flips), v, x, w, gain, rounds)
            rounds += 1
            if fixed_rounds is None and z_hat == temp:
                return DecompositionResult(
                    False, tuple(c_acc), tuple(r_acc), flips, len(flips), rounds, "stalled"
                )
        return DecompositionResult(True, tuple(c_acc), tuple(r_acc), flips, len(flips), rounds)

    # -- postprocessing -----------------------------------------------------------------

    def postprocess(self, mismatch: Mismatch, decomp: DecompositionResult) -> int:
        """Error estimate from leaders plus accumulators.

        The two per-class formulas must agree because their sum telescopes to
        (sum of all leaders) + (sum of all accumulators) = Z + Z = 0; a
        disagreement means corrupted state, not a failed decode.
        """
        cx = self.code.complex
        outs = []
        for cls, ci, ri in (self.post_primary, self.post_mirror):
            e = decomp.c_acc[ci] ^ decomp.r_acc[ri]
            for v in cx.class_vertices(cls):
                leader = mismatch.leaders.get(v, 0)
                if leader:
                    e ^= self.embed(v, leader)
            outs.append(e)
        if outs[0] != outs[1]:
            raise ConsistencyViolation("postprocess formulas disagree")
        return outs[0]

    # -- orchestration ---------------------------------------------------------------------

    def decode(
        self,
        s: Optional[int] = None,
        e: Optional[int] = None,
        method: str = "sequential",
        epsilon: float = 0.25,
        fixed_rounds: Optional[int] = None,
    ) -> DecodeResult:
        """Full pipeline from a syndrome (deployment) or raw error (simulation)."""
        if s is None:
            if e is None:
                raise ValueError("provide a syndrome or an error vector")
            s = self.syndrome(e)
        mismatch = self.preprocess(s)
        if e is not None and mismatch.weight > 4 * e.bit_count():
            raise ConsistencyViolation(
                f"mismatch weight {mismatch.weight} exceeds 4 x error weight"
            )
        if method == "sequential":
            decomp = self.sequential_decompose(mismatch.z, epsilon)
        elif method == "parallel":
            decomp = self.parallel_decompose(mismatch.z, fixed_rounds=fixed_rounds)
        else:
            raise ValueError(f"unknown method {method!r}")
        if not decomp.success:
            return DecodeResult("failure", None, mismatch, decomp)
        e_hat = self.postprocess(mismatch, decomp)
        if self.syndrome(e_hat) != s:
            raise ConsistencyViolation("estimate does not reproduce the syndrome")
        return DecodeResult("success", e_hat, mismatch, decomp)

    def is_valid_correction(self, e: int, e_hat: int) -> bool:
        """True iff the residual error is a stabilizer (simulation check)."""
        return self.stabilizer_space.contains(e ^ e_hat)
