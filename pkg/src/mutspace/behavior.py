"""Behavior storage and difference primitives.

A :class:`BehaviorMatrix` records one opaque :class:`BehaviorToken` per
(program, test) pair.  A :class:`Differentiator` turns pairs of tokens into
difference bits, and a :class:`DiffVector` collects those bits over an
ordered :class:`TestVector`.  Everything downstream (positions, lattices,
kill matrices, fault localization) reads behavior exclusively through these
types.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import SchemaError, UnknownIdError

STATUS_NORMAL = "normal"
STATUS_ERROR = "error"
STATUS_TIMEOUT = "timeout"
STATUSES = (STATUS_NORMAL, STATUS_ERROR, STATUS_TIMEOUT)

ROLE_SPEC = "spec"
ROLE_ORIGINAL = "original"
ROLE_MUTANT = "mutant"
ROLES = (ROLE_SPEC, ROLE_ORIGINAL, ROLE_MUTANT)

# (statement id, rendered state) pairs; statement ids may be ints or strings.
TraceEntry = tuple[Union[int, str], str]


@dataclass(frozen=True)
class BehaviorToken:
    """Immutable record of one test execution.

    ``output`` is the externally visible result, ``trace`` the optional
    ordered internal-state snapshots, ``status`` the termination kind.
    """

    output: str
    status: str = STATUS_NORMAL
    trace: Optional[tuple[TraceEntry, ...]] = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.trace is not None:
            normalized = tuple((sid, text) for sid, text in self.trace)
            object.__setattr__(self, "trace", normalized)


@dataclass(frozen=True)
class TestVector:
    """Ordered vector of unique test identifiers."""

    __test__ = False  # not a pytest class, despite the name

    tests: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tests", tuple(self.tests))
        if len(set(self.tests)) != len(self.tests):
            raise ValueError("test identifiers must be unique within a vector")

    @classmethod
    def of(cls, value: Union["TestVector", Iterable[str]]) -> "TestVector":
        if isinstance(value, TestVector):
            return value
        return cls(tuple(value))

    def __len__(self) -> int:
        return len(self.tests)

    def __iter__(self) -> Iterator[str]:
        return iter(self.tests)

    def __getitem__(self, i):
        return self.tests[i]

    def __contains__(self, test_id: str) -> bool:
        return test_id in self.tests

    def index(self, test_id: str) -> int:
        return self.tests.index(test_id)

    def prefix(self, k: int) -> "TestVector":
        return TestVector(self.tests[:k])


@dataclass(frozen=True)
class ProgramEntry:
    """A program row: id plus optional role (spec / original / mutant-of)."""

    id: str
    role: Optional[str] = None
    origin: Optional[str] = None

    def __post_init__(self):
        if self.role is not None and self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r} for program {self.id!r}")
        if self.origin is not None and self.role != ROLE_MUTANT:
            raise ValueError(f"origin only applies to mutants (program {self.id!r})")


class BehaviorMatrix:
    """Total map (program, test) -> token, with at most one spec and one
    original row.  Instances are value-like: construct once, never mutate."""

    def __init__(
        self,
        tests: Union[TestVector, Iterable[str]],
        programs: Sequence[Union[ProgramEntry, str]],
        cells: Mapping[str, Mapping[str, BehaviorToken]],
    ):
        self._tests = TestVector.of(tests)
        entries = tuple(
            p if isinstance(p, ProgramEntry) else ProgramEntry(p) for p in programs
        )
        ids = [p.id for p in entries]
        if len(set(ids)) != len(ids):
            raise ValueError("program identifiers must be unique")
        for role in (ROLE_SPEC, ROLE_ORIGINAL):
            if sum(1 for p in entries if p.role == role) > 1:
                raise ValueError(f"at most one program may carry role {role!r}")
        known = set(ids)
        for p in entries:
            if p.origin is not None and p.origin not in known:
                raise ValueError(f"mutant {p.id!r} references unknown origin {p.origin!r}")
        self._programs = entries
        self._cells: dict[str, dict[str, BehaviorToken]] = {}
        for p in entries:
            row = cells.get(p.id)
            if row is None:
                raise ValueError(f"missing cells for program {p.id!r}")
            copied: dict[str, BehaviorToken] = {}
            for t in self._tests:
                if t not in row:
                    raise ValueError(f"missing cell for ({p.id!r}, {t!r})")
                copied[t] = row[t]
            if len(row) != len(copied):
                extra = sorted(set(row) - set(copied))
                raise ValueError(f"program {p.id!r} has cells for unknown tests {extra}")
            self._cells[p.id] = copied
        if set(cells) - known:
            extra = sorted(set(cells) - known)
            raise ValueError(f"cells reference unknown programs {extra}")

    @property
    def tests(self) -> TestVector:
        return self._tests

    @property
    def programs(self) -> tuple[ProgramEntry, ...]:
        return self._programs

    def program_ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self._programs)

    def has_program(self, program_id: str) -> bool:
        return program_id in self._cells

    def entry(self, program_id: str) -> ProgramEntry:
        for p in self._programs:
            if p.id == program_id:
                return p
        raise UnknownIdError(f"unknown program id {program_id!r}")

    def role_holder(self, role: str) -> Optional[str]:
        for p in self._programs:
            if p.role == role:
                return p.id
        return None

    @property
    def spec_id(self) -> Optional[str]:
        return self.role_holder(ROLE_SPEC)

    @property
    def original_id(self) -> Optional[str]:
        return self.role_holder(ROLE_ORIGINAL)

    def mutant_ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self._programs if p.role == ROLE_MUTANT)

    def token(self, program_id: str, test_id: str) -> BehaviorToken:
        row = self._cells.get(program_id)
        if row is None:
            raise UnknownIdError(f"unknown program id {program_id!r}")
        tok = row.get(test_id)
        if tok is None:
            raise UnknownIdError(f"unknown test id {test_id!r}")
        return tok

    def __eq__(self, other) -> bool:
        if not isinstance(other, BehaviorMatrix):
            return NotImplemented
        return (
            self._tests == other._tests
            and self._programs == other._programs
            and self._cells == other._cells
        )

    def __repr__(self) -> str:
        return (
            f"BehaviorMatrix(tests={len(self._tests)}, programs={len(self._programs)})"
        )


def matrix_from_outputs(
    tests: Union[TestVector, Iterable[str]],
    outputs: Mapping[str, Sequence[str]],
    roles: Optional[Mapping[str, str]] = None,
    origins: Optional[Mapping[str, str]] = None,
) -> BehaviorMatrix:
    """Build a trace-less matrix from per-program output sequences."""
    tv = TestVector.of(tests)
    roles = roles or {}
    origins = origins or {}
    programs = [
        ProgramEntry(pid, roles.get(pid), origins.get(pid)) for pid in outputs
    ]
    cells = {}
    for pid, row in outputs.items():
        if len(row) != len(tv):
            raise ValueError(f"program {pid!r} has {len(row)} outputs for {len(tv)} tests")
        cells[pid] = {t: BehaviorToken(str(out)) for t, out in zip(tv, row)}
    return BehaviorMatrix(tv, programs, cells)


POLICY_EXACT = "exact"
POLICY_OUTPUT = "output"
POLICY_TRACE = "trace"
POLICY_NUMERIC = "numeric"
POLICIES = (POLICY_EXACT, POLICY_OUTPUT, POLICY_TRACE, POLICY_NUMERIC)


def _as_decimal(text: str) -> Optional[Decimal]:
    try:
        value = Decimal(text.strip())
    except (InvalidOperation, ValueError):
        return None
    return value if value.is_finite() else None


@dataclass(frozen=True)
class Differentiator:
    """Binary judgment of behavioral difference between two tokens.

    Policies:

    * ``exact``   - whole-record equality (output, status, trace).
    * ``output``  - externally visible result only: (output, status).
      This is the strong-mutation notion of difference.
    * ``trace``   - internal execution record: (trace, status).
      This is the weak-mutation notion of difference.
    * ``numeric`` - like ``output`` but outputs that both parse as finite
      decimals compare within ``tolerance``; anything else falls back to
      exact text equality.

    Every policy is symmetric with a zero diagonal; user-supplied policies
    are not accepted precisely because those two properties are relied on
    throughout the toolkit.
    """

    policy: str = POLICY_EXACT
    tolerance: Optional[float] = None
    id: str = ""

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ValueError(f"unknown differentiator policy {self.policy!r}")
        if self.policy == POLICY_NUMERIC:
            if self.tolerance is None or self.tolerance < 0:
                raise ValueError("numeric policy requires a nonnegative tolerance")
        elif self.tolerance is not None:
            raise ValueError(f"policy {self.policy!r} does not take a tolerance")
        if not self.id:
            name = self.policy
            if self.policy == POLICY_NUMERIC:
                name = f"numeric({self.tolerance})"
            object.__setattr__(self, "id", name)

    @classmethod
    def exact(cls) -> "Differentiator":
        return cls(POLICY_EXACT)

    @classmethod
    def output_only(cls) -> "Differentiator":
        return cls(POLICY_OUTPUT)

    @classmethod
    def trace_only(cls) -> "Differentiator":
        return cls(POLICY_TRACE)

    @classmethod
    def numeric(cls, tolerance: float) -> "Differentiator":
        return cls(POLICY_NUMERIC, tolerance)

    def differs(self, a: BehaviorToken, b: BehaviorToken) -> bool:
        if self.policy == POLICY_EXACT:
            return a != b
        if self.policy == POLICY_OUTPUT:
            return (a.output, a.status) != (b.output, b.status)
        if self.policy == POLICY_TRACE:
            return (a.trace, a.status) != (b.trace, b.status)
        # numeric
        if a.status != b.status:
            return True
        x, y = _as_decimal(a.output), _as_decimal(b.output)
        if x is not None and y is not None:
            return abs(x - y) > Decimal(str(self.tolerance))
        return a.output != b.output

    def bit(self, a: BehaviorToken, b: BehaviorToken) -> int:
        return 1 if self.differs(a, b) else 0


@dataclass(frozen=True)
class DiffVector:
    """Per-test difference bits between two programs, in test order."""

    bits: tuple[int, ...]
    tests: TestVector
    left: str
    right: str
    differentiator: str

    def __post_init__(self):
        if len(self.bits) != len(self.tests):
            raise ValueError("one bit per test required")

    def norm(self) -> int:
        return sum(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)


def differentiate(
    d: Differentiator, t: str, px: str, py: str, bm: BehaviorMatrix
) -> int:
    """Difference bit between programs ``px`` and ``py`` on test ``t``."""
    return d.bit(bm.token(px, t), bm.token(py, t))


def diff_vector(
    d: Differentiator,
    tv: Union[TestVector, Iterable[str]],
    px: str,
    py: str,
    bm: BehaviorMatrix,
) -> DiffVector:
    """Difference bits between ``px`` and ``py`` over the tests in ``tv``."""
    tv = TestVector.of(tv)
    bits = tuple(differentiate(d, t, px, py, bm) for t in tv)
    return DiffVector(bits, tv, px, py, d.id)


def manhattan_norm(v: Union[DiffVector, Iterable[int]]) -> int:
    """Sum of bits; equals the Hamming distance between the two behavior rows."""
    if isinstance(v, DiffVector):
        return v.norm()
    return sum(v)


def derived_oracle(
    d: Differentiator, ps: str, bm: BehaviorMatrix
) -> Callable[[str, str], bool]:
    """Pass/fail predicate obtained by differencing against the row ``ps``:
    o(t, p) holds iff p agrees with ps on t."""
    bm.entry(ps)
    def oracle(t: str, p: str) -> bool:
        return differentiate(d, t, p, ps, bm) == 0
    return oracle


@dataclass(frozen=True)
class AdequacyResult:
    """Outcome of an adequacy check: every mutant killed by some test."""

    adequate: bool
    live: tuple[str, ...]
    killers: Mapping[str, str] = field(default_factory=dict)


def mutation_adequacy(
    d: Differentiator,
    tv: Union[TestVector, Iterable[str]],
    po: str,
    mutants: Sequence[str],
    bm: BehaviorMatrix,
) -> AdequacyResult:
    """Check that every mutant differs from ``po`` on at least one test in ``tv``.

    ``killers`` maps each killed mutant to the earliest test (in ``tv``
    order) that kills it.  An empty mutant list is vacuously adequate.
    """
    tv = TestVector.of(tv)
    live = []
    killers: dict[str, str] = {}
    for m in mutants:
        for t in tv:
            if differentiate(d, t, po, m, bm):
                killers[m] = t
                break
        else:
            live.append(m)
    return AdequacyResult(adequate=not live, live=tuple(live), killers=killers)


# --- JSON interchange -------------------------------------------------------
#
# { "tests": [...],
#   "programs": [{"id": ..., "role": ...?, "origin": ...?}, ...],
#   "cells": {pid: {tid: {"output": ..., "status": ..., "trace": [...]?}}} }
#
# Round-trips are bit-exact: parsing our canonical text and re-serializing
# reproduces the bytes.


def _token_to_obj(tok: BehaviorToken) -> dict:
    obj: dict = {"output": tok.output, "status": tok.status}
    if tok.trace is not None:
        obj["trace"] = [[sid, text] for sid, text in tok.trace]
    return obj


def matrix_to_json_obj(bm: BehaviorMatrix) -> dict:
    programs = []
    for p in bm.programs:
        entry: dict = {"id": p.id}
        if p.role is not None:
            entry["role"] = p.role
        if p.origin is not None:
            entry["origin"] = p.origin
        programs.append(entry)
    cells = {
        p.id: {t: _token_to_obj(bm.token(p.id, t)) for t in bm.tests}
        for p in bm.programs
    }
    return {"tests": list(bm.tests), "programs": programs, "cells": cells}


def matrix_to_json_text(bm: BehaviorMatrix) -> str:
    return json.dumps(matrix_to_json_obj(bm), indent=2, ensure_ascii=False) + "\n"


def _expect(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise SchemaError(path, message)


def _token_from_obj(obj, path: str) -> BehaviorToken:
    _expect(isinstance(obj, dict), path, "cell must be an object")
    _expect("output" in obj, f"{path}/output", "missing required field")
    _expect(isinstance(obj["output"], str), f"{path}/output", "must be a string")
    status = obj.get("status", STATUS_NORMAL)
    _expect(
        isinstance(status, str) and status in STATUSES,
        f"{path}/status",
        f"must be one of {list(STATUSES)}",
    )
    trace = None
    if "trace" in obj:
        raw = obj["trace"]
        _expect(isinstance(raw, list), f"{path}/trace", "must be a list")
        entries = []
        for i, item in enumerate(raw):
            epath = f"{path}/trace/{i}"
            _expect(
                isinstance(item, list) and len(item) == 2,
                epath,
                "must be a [statement-id, state] pair",
            )
            sid, state = item
            _expect(isinstance(sid, (int, str)), f"{epath}/0", "must be an int or string")
            _expect(isinstance(state, str), f"{epath}/1", "must be a string")
            entries.append((sid, state))
        trace = tuple(entries)
    unknown = set(obj) - {"output", "status", "trace"}
    _expect(not unknown, f"{path}/{sorted(unknown)[0]}" if unknown else path, "unknown field")
    return BehaviorToken(obj["output"], status, trace)


def matrix_from_json_obj(obj) -> BehaviorMatrix:
    _expect(isinstance(obj, dict), "/", "document must be an object")
    for key in ("tests", "programs", "cells"):
        _expect(key in obj, f"/{key}", "missing required field")
    raw_tests = obj["tests"]
    _expect(isinstance(raw_tests, list), "/tests", "must be a list")
    for i, t in enumerate(raw_tests):
        _expect(isinstance(t, str), f"/tests/{i}", "must be a string")
    _expect(
        len(set(raw_tests)) == len(raw_tests), "/tests", "test ids must be unique"
    )
    raw_programs = obj["programs"]
    _expect(isinstance(raw_programs, list), "/programs", "must be a list")
    entries = []
    seen_roles: dict[str, str] = {}
    for i, p in enumerate(raw_programs):
        ppath = f"/programs/{i}"
        _expect(isinstance(p, dict), ppath, "must be an object")
        _expect("id" in p and isinstance(p["id"], str), f"{ppath}/id", "must be a string")
        role = p.get("role")
        if role is not None:
            _expect(role in ROLES, f"{ppath}/role", f"must be one of {list(ROLES)}")
            if role in (ROLE_SPEC, ROLE_ORIGINAL):
                _expect(
                    role not in seen_roles,
                    f"{ppath}/role",
                    f"role {role!r} already held by {seen_roles.get(role)!r}",
                )
                seen_roles[role] = p["id"]
        origin = p.get("origin")
        if origin is not None:
            _expect(isinstance(origin, str), f"{ppath}/origin", "must be a string")
            _expect(role == ROLE_MUTANT, f"{ppath}/origin", "origin requires role 'mutant'")
        unknown = set(p) - {"id", "role", "origin"}
        _expect(not unknown, f"{ppath}/{sorted(unknown)[0]}" if unknown else ppath, "unknown field")
        entries.append(ProgramEntry(p["id"], role, origin))
    ids = [e.id for e in entries]
    _expect(len(set(ids)) == len(ids), "/programs", "program ids must be unique")
    known = set(ids)
    for i, e in enumerate(entries):
        if e.origin is not None:
            _expect(e.origin in known, f"/programs/{i}/origin", "references unknown program")
    raw_cells = obj["cells"]
    _expect(isinstance(raw_cells, dict), "/cells", "must be an object")
    for pid in raw_cells:
        _expect(pid in known, f"/cells/{pid}", "unknown program id")
    cells: dict[str, dict[str, BehaviorToken]] = {}
    for e in entries:
        _expect(e.id in raw_cells, f"/cells/{e.id}", "missing row for program")
        row = raw_cells[e.id]
        _expect(isinstance(row, dict), f"/cells/{e.id}", "must be an object")
        parsed: dict[str, BehaviorToken] = {}
        for tid in row:
            _expect(tid in raw_tests, f"/cells/{e.id}/{tid}", "unknown test id")
        for tid in raw_tests:
            _expect(tid in row, f"/cells/{e.id}/{tid}", "missing cell for test")
            parsed[tid] = _token_from_obj(row[tid], f"/cells/{e.id}/{tid}")
        cells[e.id] = parsed
    return BehaviorMatrix(TestVector(tuple(raw_tests)), entries, cells)


def matrix_from_json_text(text: str) -> BehaviorMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("/", f"invalid JSON: {exc.msg}") from exc
    return matrix_from_json_obj(obj)
