"""Program spaces: positions of programs relative to an origin.

A space is identified by (tests, origin, differentiator); the behavior
matrix is carried along only as the data source.  Positions are computed
on demand from the matrix so they can never go stale.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .behavior import (
    BehaviorMatrix,
    Differentiator,
    TestVector,
    differentiate,
    diff_vector,
)
from .errors import UnknownIdError


@dataclass(frozen=True, eq=False)
class ProgramSpace:
    """Coordinate system over a test vector, anchored at an origin program.

    Two spaces are equal iff their (tests, origin, differentiator) triples
    are equal; the matrix is a data source, not part of the identity.
    """

    tests: TestVector
    origin: str
    differentiator: Differentiator
    matrix: BehaviorMatrix

    def __post_init__(self):
        object.__setattr__(self, "tests", TestVector.of(self.tests))
        if not self.matrix.has_program(self.origin):
            raise UnknownIdError(f"unknown program id {self.origin!r}")
        for t in self.tests:
            if t not in self.matrix.tests:
                raise UnknownIdError(f"unknown test id {t!r}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProgramSpace):
            return NotImplemented
        return (
            self.tests == other.tests
            and self.origin == other.origin
            and self.differentiator == other.differentiator
        )

    def __hash__(self) -> int:
        return hash((self.tests, self.origin, self.differentiator))

    def dimension(self) -> int:
        return len(self.tests)


@dataclass(frozen=True)
class Position:
    """A program's difference bits relative to the space origin, per test."""

    bits: tuple[int, ...]
    space: ProgramSpace
    subject: str

    def distance(self) -> int:
        return sum(self.bits)


def position(sp: ProgramSpace, p: str) -> Position:
    """Locate program ``p`` in the space; the origin sits at the zero vector."""
    v = diff_vector(sp.differentiator, sp.tests, sp.origin, p, sp.matrix)
    return Position(v.bits, sp, p)


def distance_from_origin(pos: Position) -> int:
    """Manhattan norm of the position bits.

    With a spec-row origin this measures the subject's incorrectness; with
    an original-row origin and a mutant subject, how easily it is killed.
    """
    return pos.distance()


def distinguishing_dimensions(sp: ProgramSpace, px: str, py: str) -> list[str]:
    """Tests where the two programs' positions disagree.

    Every returned test is guaranteed to differentiate ``px`` from ``py``
    directly: a positional difference in a dimension forces a behavioral
    difference for that dimension's test.
    """
    bx = position(sp, px).bits
    by = position(sp, py).bits
    return [t for t, a, b in zip(sp.tests, bx, by) if a != b]


def coincidence_counterexample(
    sp: ProgramSpace, px: str, py: str
) -> Optional[list[str]]:
    """Tests where the positions agree yet the programs behave differently.

    These witnesses show that sharing a position does not imply sharing
    behavior (it happens when both programs differ from the origin in
    distinct ways).  Returns ``None`` when no witness exists.
    """
    bx = position(sp, px).bits
    by = position(sp, py).bits
    found = [
        t
        for t, a, b in zip(sp.tests, bx, by)
        if a == b and differentiate(sp.differentiator, t, px, py, sp.matrix)
    ]
    return found or None
