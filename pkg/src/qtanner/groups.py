"""Finite groups with dense integer element ids, and symmetric generator sets.

Downstream code composes ``mul``/``inv`` only through the :class:`Group`
interface, so any finite group can be plugged in by exporting its
multiplication table.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class GeneratorSetError(ValueError):
    """Structural violation in a generator set."""


class SymmetryViolation(GeneratorSetError):
    pass


class DuplicateElement(GeneratorSetError):
    pass


class IdentityInSet(GeneratorSetError):
    pass


class GroupTableError(ValueError):
    """Explicit multiplication table fails a group axiom."""


class Group:
    """Finite group on element ids 0..order-1, with 0 the identity."""

    name: str
    order: int

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}, order={self.order})"


class CyclicGroup(Group):
    """Z_n with additive notation; mul(x, y) = x + y mod n."""

    def __init__(self, n: int) -> None:
        if n <= 0:
            raise ValueError(f"cyclic group order must be positive, got {n}")
        self.order = n
        self.name = f"Z{n}"

    def mul(self, a: int, b: int) -> int:
        return (a + b) % self.order

    def inv(self, a: int) -> int:
        return (-a) % self.order


class DihedralGroup(Group):
    """Dihedral group of order 2n; ids 0..n-1 are rotations, n..2n-1 reflections."""

    def __init__(self, n: int) -> None:
        if n <= 0:
            raise ValueError(f"dihedral parameter must be positive, got {n}")
        self.n = n
        self.order = 2 * n
        self.name = f"D{n}"

    def _split(self, x: int) -> tuple[int, int]:
        return divmod(x, self.n)[0], x % self.n

    def mul(self, a: int, b: int) -> int:
        fa, ra = self._split(a)
        fb, rb = self._split(b)
        # (s^fa r^ra)(s^fb r^rb) = s^(fa+fb) r^(rb + (-1)^fb ra)
        rot = (rb + (ra if fb == 0 else -ra)) % self.n
        return ((fa + fb) % 2) * self.n + rot

    def inv(self, a: int) -> int:
        fa, ra = self._split(a)
        if fa == 0:
            return (-ra) % self.n
        return self.n + ra  # reflections are involutions


class TableGroup(Group):
    """Group given by an explicit multiplication table, validated on build."""

    def __init__(self, table: Sequence[Sequence[int]], name: str = "table") -> None:
        n = len(table)
        if n == 0:
            raise GroupTableError("empty multiplication table")
        rows = [list(r) for r in table]
        for i, row in enumerate(rows):
            if len(row) != n:
                raise GroupTableError(f"row {i} has length {len(row)}, expected {n}")
            for x in row:
                if not 0 <= x < n:
                    raise GroupTableError(f"entry {x} in row {i} out of range [0, {n})")
        report = _axiom_report(rows)
        if report:
            raise GroupTableError("; ".join(report))
        self.order = n
        self.name = name
        self._table = rows
        self._inv = [0] * n
        for a in range(n):
            for b in range(n):
                if rows[a][b] == 0:
                    self._inv[a] = b
                    break

    def mul(self, a: int, b: int) -> int:
        return self._table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]


def _axiom_report(table: list[list[int]]) -> list[str]:
    n = len(table)
    findings = []
    for a in range(n):
        if table[0][a] != a or table[a][0] != a:
            findings.append(f"element 0 is not an identity at {a}")
            break
    for a in range(n):
        if 0 not in table[a]:
            findings.append(f"element {a} has no inverse")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    findings.append(f"associativity fails at ({a}, {b}, {c})")
                    return findings
    return findings


def build_group(spec: dict) -> Group:
    """Group from a parsed config object.

    Accepted forms: {"kind": "cyclic", "n": int}, {"kind": "dihedral", "n": int},
    {"kind": "table", "table": [[...]]}.
    """
    kind = spec.get("kind")
    if kind == "cyclic":
        return CyclicGroup(int(spec["n"]))
    if kind == "dihedral":
        return DihedralGroup(int(spec["n"]))
    if kind == "table":
        return TableGroup(spec["table"], name=spec.get("name", "table"))
    raise ValueError(f"unknown group kind {kind!r}")


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered, inverse-closed generator set acting on one side.

    side "A" acts by left multiplication, side "B" by right multiplication.
    Generator indices (positions in ``elements``) are what label rows and
    columns of the local windows downstream, so the order is significant.
    """

    elements: tuple[int, ...]
    side: str

    def __post_init__(self) -> None:
        if self.side not in ("A", "B"):
            raise ValueError(f"side must be 'A' or 'B', got {self.side!r}")

    @property
    def delta(self) -> int:
        return len(self.elements)

    def index_of(self, element: int) -> int:
        return self.elements.index(element)


@dataclass(frozen=True)
class GeneratorDiagnostics:
    delta: int
    symmetric: bool
    connected: bool
    bipartite: bool


def validate_generators(group: Group, gens: GeneratorSet) -> GeneratorDiagnostics:
    """Check a generator set and report Cayley-graph diagnostics.

    Raises for structural violations (duplicates, identity, missing inverses);
    connectivity and bipartiteness are reported, not enforced, because the
    complex is well defined either way.
    """
    elems = gens.elements
    for e in elems:
        if not 0 <= e < group.order:
            raise GeneratorSetError(f"element {e} out of range for {group.name}")
    if len(set(elems)) != len(elems):
        raise DuplicateElement(f"{gens.side} contains repeated elements")
    if group.identity in elems:
        raise IdentityInSet(
            f"{gens.side} contains the identity; it would create degenerate squares"
        )
    missing = [e for e in elems if group.inv(e) not in elems]
    if missing:
        raise SymmetryViolation(
            f"{gens.side} is not inverse-closed: missing inverses of {missing}"
        )
    connected, bipartite = _cayley_bfs(group, gens)
    return GeneratorDiagnostics(
        delta=len(elems), symmetric=True, connected=connected, bipartite=bipartite
    )


def _step(group: Group, gens: GeneratorSet, g: int, s: int) -> int:
    if gens.side == "A":
        return group.mul(s, g)
    return group.mul(g, s)


def _cayley_bfs(group: Group, gens: GeneratorSet) -> tuple[bool, bool]:
    """(reaches all of G from the identity, graph is 2-colorable)."""
    color = [-1] * group.order
    color[group.identity] = 0
    queue = deque([group.identity])
    seen = 1
    bipartite = True
    while queue:
        g = queue.popleft()
        for s in gens.elements:
            h = _step(group, gens, g, s)
            if color[h] == -1:
                color[h] = color[g] ^ 1
                seen += 1
                queue.append(h)
            elif color[h] == color[g]:
                bipartite = False
    return seen == group.order, bipartite


def check_axioms(group: Group, exhaustive_limit: int = 64, samples: int = 500,
                 seed: int = 0) -> None:
    """Assert group axioms; exhaustive up to the limit, sampled triples above."""
    from .rng import SplitMix64

    n = group.order
    e = group.identity
    for a in group.elements():
        if group.mul(e, a) != a or group.mul(a, e) != a:
            raise GroupTableError(f"identity law fails at {a}")
        if group.mul(group.inv(a), a) != e:
            raise GroupTableError(f"inverse law fails at {a}")
    if n <= exhaustive_limit:
        triples: Iterable[tuple[int, int, int]] = (
            (a, b, c) for a in range(n) for b in range(n) for c in range(n)
        )
    else:
        rng = SplitMix64(seed)
        triples = ((rng.below(n), rng.below(n), rng.below(n)) for _ in range(samples))
    for a, b, c in triples:
        if group.mul(group.mul(a, b), c) != group.mul(a, group.mul(b, c)):
            raise GroupTableError(f"associativity fails at ({a}, {b}, {c})")


def symmetric_closure(group: Group, elements: Iterable[int]) -> tuple[int, ...]:
    """Elements plus their inverses, first-seen order; identity rejected later."""
    out: list[int] = []
    for e in elements:
        for x in (e, group.inv(e)):
            if x not in out:
                out.append(x)
    return tuple(out)
