"""Tree-walking interpreter producing behavior tokens.

Every abnormal outcome (division by zero, unbound variable, exhausted step
budget) is encoded in the returned token rather than raised, so
differentiators can observe it.  Execution is a pure function of
(program, test, budget, tracing): arithmetic is exact big-integer math;
division truncates toward zero and the remainder matches it, so
(a / b) * b + a % b == a.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from ..behavior import (
    ROLE_MUTANT,
    ROLE_ORIGINAL,
    ROLE_SPEC,
    STATUS_ERROR,
    STATUS_NORMAL,
    STATUS_TIMEOUT,
    BehaviorMatrix,
    BehaviorToken,
    ProgramEntry,
    TestVector,
)
from .syntax import Assign, BinOp, Expr, If, IntLit, Program, Return, UnaryOp, Var, While

DEFAULT_BUDGET = 100_000


@dataclass(frozen=True)
class TestCase:
    """A test is its input bindings; all reads of unbound names are errors."""

    __test__ = False  # not a pytest class, despite the name

    id: str
    inputs: Mapping[str, int]


class _Halt(Exception):
    """Abnormal termination; ``kind`` becomes the token output."""

    def __init__(self, kind: str):
        super().__init__(kind)
        self.kind = kind
        self.recorded = False


class _Timeout(Exception):
    pass


class _Return(Exception):
    def __init__(self, value: int):
        super().__init__(value)
        self.value = value


def _trunc_div(a: int, b: int) -> int:
    if b == 0:
        raise _Halt("division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _trunc_mod(a: int, b: int) -> int:
    if b == 0:
        raise _Halt("modulo by zero")
    return a - _trunc_div(a, b) * b


def _truthy(v: int) -> bool:
    return v != 0


def _eval(expr: Expr, env: dict[str, int]) -> int:
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, Var):
        if expr.name not in env:
            raise _Halt(f"unbound variable: {expr.name}")
        return env[expr.name]
    if isinstance(expr, UnaryOp):
        if expr.op == "-":
            return -_eval(expr.operand, env)
        return 0 if _truthy(_eval(expr.operand, env)) else 1
    if isinstance(expr, BinOp):
        op = expr.op
        if op == "&&":  # short-circuit, normalized to 0/1
            if not _truthy(_eval(expr.left, env)):
                return 0
            return 1 if _truthy(_eval(expr.right, env)) else 0
        if op == "||":
            if _truthy(_eval(expr.left, env)):
                return 1
            return 1 if _truthy(_eval(expr.right, env)) else 0
        a = _eval(expr.left, env)
        b = _eval(expr.right, env)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return _trunc_div(a, b)
        if op == "%":
            return _trunc_mod(a, b)
        if op == "<":
            return 1 if a < b else 0
        if op == "<=":
            return 1 if a <= b else 0
        if op == ">":
            return 1 if a > b else 0
        if op == ">=":
            return 1 if a >= b else 0
        if op == "==":
            return 1 if a == b else 0
        if op == "!=":
            return 1 if a != b else 0
    raise TypeError(f"cannot evaluate {type(expr).__name__}")


class _Run:
    def __init__(self, env: dict[str, int], budget: int, tracing: bool):
        self.env = env
        self.budget = budget
        self.steps = 0
        self.tracing = tracing
        self.trace: list[tuple[int, str]] = []

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise _Timeout()

    def store_text(self) -> str:
        return " ".join(f"{k}={v}" for k, v in sorted(self.env.items()))

    def record(self, sid: int, suffix: str = "") -> None:
        if self.tracing:
            text = self.store_text()
            if suffix:
                text = f"{text} {suffix}" if text else suffix
            self.trace.append((sid, text))

    def exec_block(self, stmts) -> None:
        for stmt in stmts:
            self.exec_stmt(stmt)

    def exec_stmt(self, stmt) -> None:
        self.tick()
        try:
            if isinstance(stmt, Assign):
                self.env[stmt.name] = _eval(stmt.value, self.env)
                self.record(stmt.sid)
            elif isinstance(stmt, Return):
                value = _eval(stmt.value, self.env)
                self.record(stmt.sid, f"-> {value}")
                raise _Return(value)
            elif isinstance(stmt, If):
                taken = _truthy(_eval(stmt.cond, self.env))
                self.record(stmt.sid)
                self.exec_block(stmt.then_body if taken else stmt.else_body)
            elif isinstance(stmt, While):
                while True:
                    live = _truthy(_eval(stmt.cond, self.env))
                    self.record(stmt.sid)
                    if not live:
                        break
                    self.exec_block(stmt.body)
                    self.tick()  # each further condition check costs a step
            else:
                raise TypeError(f"cannot execute {type(stmt).__name__}")
        except _Halt as halt:
            if self.tracing and not halt.recorded:
                self.trace.append((stmt.sid, f"! {halt.kind}"))
            halt.recorded = True
            raise


def execute(
    program: Program,
    test: TestCase,
    budget: int = DEFAULT_BUDGET,
    tracing: bool = False,
) -> BehaviorToken:
    """Run ``program`` on ``test`` and encode the outcome as a token.

    output: the returned value as text ("" when no return executes),
    or the error kind; trace: one (statement id, state) entry per executed
    statement when tracing is on, with return values and error kinds
    embedded so internal differences subsume output differences.
    """
    run = _Run(dict(test.inputs), budget, tracing)
    output = ""
    status = STATUS_NORMAL
    try:
        run.exec_block(program.statements)
    except _Return as ret:
        output = str(ret.value)
    except _Halt as halt:
        output = halt.kind
        status = STATUS_ERROR
    except _Timeout:
        status = STATUS_TIMEOUT
    trace = tuple(run.trace) if tracing else None
    return BehaviorToken(output, status, trace)


def behavior_matrix(
    original: Program,
    mutants: Sequence[tuple["MutantDescriptor", Program]],
    tests: Sequence[TestCase],
    tracing: bool = False,
    budget: int = DEFAULT_BUDGET,
    expected: Optional[Mapping[str, str]] = None,
    original_id: str = "original",
    spec_id: str = "spec",
) -> BehaviorMatrix:
    """Execute the original and every mutant against every test.

    ``expected`` (test id -> output text) adds a spec row of intended
    outputs; the spec need not be a runnable program.  Two calls with the
    same inputs produce equal matrices.
    """
    tv = TestVector(tuple(t.id for t in tests))
    entries = [ProgramEntry(original_id, ROLE_ORIGINAL)]
    cells: dict[str, dict[str, BehaviorToken]] = {
        original_id: {t.id: execute(original, t, budget, tracing) for t in tests}
    }
    for desc, prog in mutants:
        entries.append(ProgramEntry(desc.id, ROLE_MUTANT, origin=original_id))
        cells[desc.id] = {t.id: execute(prog, t, budget, tracing) for t in tests}
    if expected is not None:
        missing = [t.id for t in tests if t.id not in expected]
        if missing:
            raise ValueError(f"expected outputs missing for tests {missing}")
        entries.append(ProgramEntry(spec_id, ROLE_SPEC))
        cells[spec_id] = {t.id: BehaviorToken(str(expected[t.id])) for t in tests}
    return BehaviorMatrix(tv, entries, cells)
