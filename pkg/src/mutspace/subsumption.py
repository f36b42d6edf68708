"""Kill matrices, dynamic mutant subsumption, minimal mutant sets.

A kill matrix records which tests kill which mutants (one bit per test and
mutant, relative to the original program).  Mutant ``x`` dynamically
subsumes mutant ``y`` when ``x`` is killed at least once and every test
killing ``x`` also kills ``y``; a subsumed mutant is redundant.  Grouping
killed mutants by identical kill columns and ordering the groups by strict
subsumption yields the dynamic mutant subsumption graph (DMSG), whose root
classes give a minimal mutant set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .behavior import (
    ROLE_ORIGINAL,
    AdequacyResult,
    BehaviorMatrix,
    TestVector,
    differentiate,
)
from .errors import RoleError
from .lattice import deviant
from .space import ProgramSpace, position


@dataclass(frozen=True)
class KillMatrix:
    """n-by-M bit matrix: rows are tests, columns are mutants."""

    tests: TestVector
    mutants: tuple[str, ...]
    bits: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "tests", TestVector.of(self.tests))
        object.__setattr__(self, "mutants", tuple(self.mutants))
        object.__setattr__(self, "bits", tuple(tuple(row) for row in self.bits))
        if len(set(self.mutants)) != len(self.mutants):
            raise ValueError("mutant identifiers must be unique")
        if len(self.bits) != len(self.tests):
            raise ValueError("one row per test required")
        for row in self.bits:
            if len(row) != len(self.mutants):
                raise ValueError("one column per mutant required")
            if any(b not in (0, 1) for b in row):
                raise ValueError("kill matrix cells must be 0 or 1")

    def column(self, mutant: str) -> tuple[int, ...]:
        j = self.mutants.index(mutant)
        return tuple(row[j] for row in self.bits)

    def killed_mutants(self) -> tuple[str, ...]:
        return tuple(m for m in self.mutants if any(self.column(m)))

    def to_csv(self) -> str:
        lines = ["test," + ",".join(self.mutants)]
        for t, row in zip(self.tests, self.bits):
            lines.append(t + "," + ",".join(str(b) for b in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "KillMatrix":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ValueError("empty kill matrix CSV")
        header = lines[0].split(",")
        if header[0] != "test":
            raise ValueError("kill matrix CSV must start with a 'test' header column")
        mutants = tuple(header[1:])
        tests = []
        rows = []
        for lineno, line in enumerate(lines[1:], start=2):
            fields = line.split(",")
            if len(fields) != len(header):
                raise ValueError(
                    f"line {lineno}: expected {len(header)} fields, got {len(fields)}"
                )
            tests.append(fields[0])
            try:
                row = tuple(int(v) for v in fields[1:])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: cells must be 0 or 1") from exc
            rows.append(row)
        return cls(TestVector(tuple(tests)), mutants, tuple(rows))


def kill_matrix(
    sp: ProgramSpace, mutants: Sequence[str], bm: BehaviorMatrix
) -> KillMatrix:
    """Kill bits of ``mutants`` against the space origin, which must carry
    the ``original`` role.  Columns equal the mutants' positions in ``sp``."""
    if bm.entry(sp.origin).role != ROLE_ORIGINAL:
        raise RoleError(
            f"kill matrices are defined against the original program; "
            f"{sp.origin!r} does not carry role 'original'"
        )
    rows = tuple(
        tuple(differentiate(sp.differentiator, t, sp.origin, m, bm) for m in mutants)
        for t in sp.tests
    )
    return KillMatrix(sp.tests, tuple(mutants), rows)


def dynamically_subsumes(km: KillMatrix, mx: str, my: str) -> bool:
    """True iff ``mx`` is killed at least once and every test killing ``mx``
    also kills ``my``.  A mutant never subsumes itself."""
    if mx == my:
        return False
    cx = km.column(mx)
    cy = km.column(my)
    if not any(cx):
        return False
    return all(b <= c for b, c in zip(cx, cy))


@dataclass(frozen=True)
class MutantClass:
    """Killed mutants sharing one kill column; the representative is the
    first member in column order."""

    members: tuple[str, ...]
    column: tuple[int, ...]

    @property
    def representative(self) -> str:
        return self.members[0]


@dataclass(frozen=True)
class SubsumptionGraph:
    """DMSG over kill-column classes.

    ``edges`` is the transitive reduction (what gets drawn); use
    :meth:`subsumes` for the full logical relation.  Never-killed mutants
    are excluded from the graph and listed in ``live``.
    """

    classes: tuple[MutantClass, ...]
    edges: tuple[tuple[int, int], ...]
    live: tuple[str, ...]

    def class_of(self, mutant: str) -> int:
        for i, cls in enumerate(self.classes):
            if mutant in cls.members:
                return i
        raise ValueError(f"{mutant!r} is not in any class (live or unknown)")

    def subsumes(self, i: int, j: int) -> bool:
        """Strict subsumption between classes, by their columns."""
        if i == j:
            return False
        ci = self.classes[i].column
        cj = self.classes[j].column
        return all(a <= b for a, b in zip(ci, cj))

    def roots(self) -> tuple[int, ...]:
        incoming = {j for _, j in self.edges}
        return tuple(i for i in range(len(self.classes)) if i not in incoming)


def build_dmsg(km: KillMatrix) -> SubsumptionGraph:
    """Group killed mutants by identical kill columns and order the groups
    by strict subsumption; the stored edge set is the transitive reduction."""
    by_column: dict[tuple[int, ...], list[str]] = {}
    order: list[tuple[int, ...]] = []
    live = []
    for m in km.mutants:
        col = km.column(m)
        if not any(col):
            live.append(m)
            continue
        if col not in by_column:
            by_column[col] = []
            order.append(col)
        by_column[col].append(m)
    classes = tuple(MutantClass(tuple(by_column[col]), col) for col in order)
    n = len(classes)

    def strict(i: int, j: int) -> bool:
        return i != j and all(
            a <= b for a, b in zip(classes[i].column, classes[j].column)
        )

    closure = {(i, j) for i in range(n) for j in range(n) if strict(i, j)}
    reduction = tuple(
        sorted(
            (i, j)
            for i, j in closure
            if not any((i, k) in closure and (k, j) in closure for k in range(n))
        )
    )
    return SubsumptionGraph(classes, reduction, tuple(live))


@dataclass(frozen=True)
class MinimalSetResult:
    """A subsumption-free set of representatives covering all killed mutants."""

    minimal: tuple[str, ...]
    roots: tuple[MutantClass, ...]
    live: tuple[str, ...]
    reduction_ratio: float


def minimal_mutant_set(km: KillMatrix) -> MinimalSetResult:
    """One representative per root class of the DMSG.

    Any test set that kills every mutant in the result kills every killed
    mutant; no ordered pair inside the result satisfies dynamic
    subsumption.  ``reduction_ratio`` is |minimal| / |killed mutants|
    (0.0 when nothing is killed).
    """
    graph = build_dmsg(km)
    root_classes = tuple(graph.classes[i] for i in graph.roots())
    minimal = tuple(cls.representative for cls in root_classes)
    killed = sum(len(cls.members) for cls in graph.classes)
    ratio = len(minimal) / killed if killed else 0.0
    return MinimalSetResult(minimal, root_classes, graph.live, ratio)


def max_minimal_size(n: int) -> int:
    """Largest possible minimal-set size for ``n`` tests: C(n, floor(n/2)),
    the width of the widest antichain layer of the n-cube.  Defined as 1
    for n = 0 (only the empty position exists)."""
    if n < 0:
        raise ValueError("test count must be nonnegative")
    if n == 0:
        return 1
    return math.comb(n, n // 2)


@dataclass(frozen=True)
class EquivalenceCheck:
    """Deviance-path reachability vs. dynamic subsumption for one pair.

    The two booleans coincide whenever the kill matrix is derived from the
    space; the record exists to make that theorem runnable.
    """

    deviance_path_holds: bool
    subsumes: bool

    def agree(self) -> bool:
        return self.deviance_path_holds == self.subsumes


def deviance_subsumption_equivalence(
    sp: ProgramSpace, km: KillMatrix, mx: str, my: str
) -> EquivalenceCheck:
    """Check, via two independent routes, whether ``mx`` subsumes ``my``.

    Route one walks positions: the origin must strictly precede ``mx`` in
    the deviance order and ``my`` must be deviant-from-or-equal to ``mx``.
    Route two scans the kill matrix rows directly.  The pair (m, m) is
    defined as (False, False).
    """
    if km.tests != sp.tests:
        raise ValueError("kill matrix tests do not match the space dimensions")
    if mx == my:
        return EquivalenceCheck(False, False)
    pos_x = position(sp, mx)
    pos_y = position(sp, my)
    origin_precedes = pos_x.distance() > 0
    x_to_y = pos_x.bits == pos_y.bits or deviant(sp, mx, my) is not None
    return EquivalenceCheck(
        deviance_path_holds=origin_precedes and x_to_y,
        subsumes=dynamically_subsumes(km, mx, my),
    )


def adequacy_from_kills(km: KillMatrix) -> AdequacyResult:
    """Adequacy over kill bits: every mutant column is nonzero.

    ``killers`` maps each killed mutant to the earliest killing test in
    row order.
    """
    live = []
    killers: dict[str, str] = {}
    for m in km.mutants:
        col = km.column(m)
        for t, bit in zip(km.tests, col):
            if bit:
                killers[m] = t
                break
        else:
            live.append(m)
    return AdequacyResult(adequate=not live, live=tuple(live), killers=killers)


def dmsg_to_dot(graph: SubsumptionGraph, name: str = "dmsg") -> str:
    """DOT rendering; class nodes list their member mutants."""
    lines = [f"digraph {name} {{"]
    for i, cls in enumerate(graph.classes):
        label = ",".join(cls.members)
        lines.append(f'  c{i} [label="{label}"];')
    for i, j in graph.edges:
        lines.append(f"  c{i} -> c{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
