"""Command-line pipeline: mutate -> run -> analyze -> report.

Stages communicate only through documented file formats (toy-language
sources, test-suite JSON, behavior-matrix JSON, kill-matrix CSV, report
JSON, DOT), so every stage can be replayed in isolation.

Exit codes: 0 success, 2 input error (parse or schema), 3 role error,
4 capacity (explicit lattice limit).
"""
from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import click

from . import __version__, lang
from .behavior import (
    Differentiator,
    TestVector,
    diff_vector,
    matrix_from_json_text,
    matrix_from_outputs,
    matrix_to_json_text,
)
from .errors import CapacityError, ParseError, RoleError, SchemaError, UnknownIdError
from .lattice import annotate, build_lattice, lattice_to_dot
from .mbfl import FaultLocalizationInput, rank_statements, report_to_json_text
from .space import ProgramSpace, coincidence_counterexample
from .subsumption import (
    KillMatrix,
    adequacy_from_kills,
    build_dmsg,
    dmsg_to_dot,
    minimal_mutant_set,
)

EXIT_INPUT = 2
EXIT_ROLE = 3
EXIT_CAPACITY = 4

BUDGET_ENV = "MUTSPACE_BUDGET"

POLICY_CHOICES = click.Choice(["exact", "output", "trace", "numeric"])


@dataclass(frozen=True)
class RunConfig:
    """Validated run settings; unknown policy names never get past here."""

    policy: str
    epsilon: Optional[float]
    tracing: bool
    budget: int

    def differentiator(self) -> Differentiator:
        if self.policy == "numeric":
            if self.epsilon is None:
                raise click.UsageError("--policy numeric requires --epsilon")
            return Differentiator.numeric(self.epsilon)
        return Differentiator(self.policy)


def _default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return lang.DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise click.UsageError(f"{BUDGET_ENV} must be an integer, got {raw!r}")


def _die(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        _die(EXIT_INPUT, f"cannot read {path}: {exc}")


def _parse_program(path: str) -> lang.Program:
    try:
        return lang.parse(_read_text(path))
    except ParseError as exc:
        _die(EXIT_INPUT, f"{path}: {exc}")


def _load_tests(path: str) -> list[lang.TestCase]:
    try:
        raw = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        _die(EXIT_INPUT, f"{path}: invalid JSON: {exc.msg}")
    if not isinstance(raw, list):
        _die(EXIT_INPUT, f"{path}: test suite must be a JSON list")
    tests = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict) or "id" not in item or "inputs" not in item:
            _die(EXIT_INPUT, f"{path}: /{i}: each test needs 'id' and 'inputs'")
        inputs = item["inputs"]
        if not isinstance(inputs, dict) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in inputs.values()
        ):
            _die(EXIT_INPUT, f"{path}: /{i}/inputs: must map variables to integers")
        tests.append(lang.TestCase(str(item["id"]), dict(inputs)))
    return tests


def _load_expected(path: str) -> dict[str, str]:
    try:
        raw = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        _die(EXIT_INPUT, f"{path}: invalid JSON: {exc.msg}")
    if not isinstance(raw, dict) or not all(isinstance(v, str) for v in raw.values()):
        _die(EXIT_INPUT, f"{path}: expected-output file must map test ids to strings")
    return dict(raw)


def _load_matrix(path: str):
    try:
        return matrix_from_json_text(_read_text(path))
    except SchemaError as exc:
        _die(EXIT_INPUT, f"{path}: {exc}")


def _load_kills(path: str) -> KillMatrix:
    try:
        return KillMatrix.from_csv(_read_text(path))
    except ValueError as exc:
        _die(EXIT_INPUT, f"{path}: {exc}")


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


@click.group()
@click.version_option(__version__, prog_name="mutspace")
def main():
    """Difference-based mutation analysis over behavior matrices."""


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--operators",
    default=",".join(lang.ALL_OPERATORS),
    show_default=True,
    help="comma-separated subset of AOR,ROR,LCR,CRP,SDL",
)
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False),
    default=None,
    help="write each mutant source to OUT_DIR/<id>.src",
)
def mutate(source, operators, out_dir):
    """List every applicable single-site mutant of SOURCE."""
    ops = tuple(op.strip() for op in operators.split(",") if op.strip())
    program = _parse_program(source)
    try:
        mutants = lang.mutate_all(program, ops)
    except ValueError as exc:
        _die(EXIT_INPUT, str(exc))
    if out_dir is not None:
        directory = Path(out_dir)
        directory.mkdir(parents=True, exist_ok=True)
        for desc, mutant in mutants:
            (directory / f"{desc.id}.src").write_text(
                lang.render(mutant), encoding="utf-8"
            )
    listing = [
        {
            "id": desc.id,
            "operator": desc.operator,
            "statement": desc.statement,
            "site": desc.site,
            "original": desc.original,
            "replacement": desc.replacement,
        }
        for desc, _ in mutants
    ]
    click.echo(_json_text(listing), nl=False)


@main.command()
@click.option("--program", "program_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--tests", "tests_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--expected", "expected_path", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--operators", default=",".join(lang.ALL_OPERATORS), show_default=True)
@click.option("--trace/--no-trace", "tracing", default=False, show_default=True)
@click.option("--budget", type=int, default=None, help=f"step budget (default {BUDGET_ENV} or {lang.DEFAULT_BUDGET})")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def run(program_path, tests_path, expected_path, operators, tracing, budget, out):
    """Mutate a program, execute everything, and emit a behavior matrix."""
    ops = tuple(op.strip() for op in operators.split(",") if op.strip())
    program = _parse_program(program_path)
    tests = _load_tests(tests_path)
    expected = _load_expected(expected_path) if expected_path else None
    try:
        mutants = lang.mutate_all(program, ops)
        matrix = lang.behavior_matrix(
            program,
            mutants,
            tests,
            tracing=tracing,
            budget=budget if budget is not None else _default_budget(),
            expected=expected,
        )
    except ValueError as exc:
        _die(EXIT_INPUT, str(exc))
    _emit(matrix_to_json_text(matrix), out)


@main.group()
def analyze():
    """Analyses over behavior matrices and kill matrices."""


@analyze.command()
@click.argument("kills", type=click.Path(exists=True, dir_okay=False))
def adequacy(kills):
    """Is every mutant of the kill matrix killed by some test?"""
    km = _load_kills(kills)
    result = adequacy_from_kills(km)
    click.echo(
        _json_text(
            {
                "adequate": result.adequate,
                "live": list(result.live),
                "killers": dict(result.killers),
            }
        ),
        nl=False,
    )


@analyze.command()
@click.argument("kills", type=click.Path(exists=True, dir_okay=False))
def minimize(kills):
    """Minimal mutant set of a kill matrix."""
    km = _load_kills(kills)
    result = minimal_mutant_set(km)
    click.echo(
        _json_text(
            {
                "minimal": list(result.minimal),
                "live": list(result.live),
                "reduction_ratio": round(result.reduction_ratio, 6),
            }
        ),
        nl=False,
    )


@analyze.command()
@click.argument("kills", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def dmsg(kills, out):
    """Dynamic mutant subsumption graph of a kill matrix, as DOT."""
    km = _load_kills(kills)
    _emit(dmsg_to_dot(build_dmsg(km)), out)


@analyze.command()
@click.option("--n", "dimension", required=True, type=int)
@click.option("--dot", "as_dot", is_flag=True, default=True, help="emit DOT (the only format)")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def pdl(dimension, as_dot, out):
    """Full position lattice of the given dimension, as DOT."""
    try:
        lattice = build_lattice(dimension)
    except CapacityError as exc:
        _die(EXIT_CAPACITY, str(exc))
    except ValueError as exc:
        _die(EXIT_INPUT, str(exc))
    _emit(lattice_to_dot(lattice), out)


@analyze.command()
@click.argument("matrix", type=click.Path(exists=True, dir_okay=False))
@click.option("--left", required=True, help="program id")
@click.option("--right", required=True, help="program id")
@click.option("--policy", type=POLICY_CHOICES, default="exact", show_default=True)
@click.option("--epsilon", type=float, default=None)
def dvector(matrix, left, right, policy, epsilon):
    """Difference vector between two programs of a behavior matrix."""
    config = RunConfig(policy, epsilon, False, 0)
    d = config.differentiator()
    bm = _load_matrix(matrix)
    try:
        v = diff_vector(d, bm.tests, left, right, bm)
    except UnknownIdError as exc:
        _die(EXIT_INPUT, str(exc))
    click.echo(
        _json_text({"tests": list(v.tests), "bits": list(v.bits), "norm": v.norm()}),
        nl=False,
    )


@main.command()
@click.option("--matrix", "matrix_path", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--statements", "statements_path", default=None, type=click.Path(exists=True, dir_okay=False),
              help="JSON map mutant-id -> statement-id (matrix mode)")
@click.option("--program", "program_path", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--tests", "tests_path", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--expected", "expected_path", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--operators", default=",".join(lang.ALL_OPERATORS), show_default=True)
@click.option("--method", type=click.Choice(["fix", "flt"]), default="fix", show_default=True)
@click.option("--metric", type=click.Choice(["ochiai", "jaccard"]), default="ochiai", show_default=True)
@click.option("--policy", type=POLICY_CHOICES, default="output", show_default=True)
@click.option("--epsilon", type=float, default=None)
@click.option("--budget", type=int, default=None)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def mbfl(matrix_path, statements_path, program_path, tests_path, expected_path,
         operators, method, metric, policy, epsilon, budget, out):
    """Rank statements by suspiciousness.

    Either --matrix (optionally with --statements), or --program with
    --tests and --expected to generate the matrix first.
    """
    config = RunConfig(policy, epsilon, False, 0)
    d = config.differentiator()
    statements: dict[str, object] = {}
    if matrix_path is not None:
        bm = _load_matrix(matrix_path)
        if statements_path is not None:
            try:
                raw = json.loads(_read_text(statements_path))
            except json.JSONDecodeError as exc:
                _die(EXIT_INPUT, f"{statements_path}: invalid JSON: {exc.msg}")
            if not isinstance(raw, dict):
                _die(EXIT_INPUT, f"{statements_path}: must map mutant ids to statements")
            statements = dict(raw)
        mutant_ids = bm.mutant_ids()
    elif program_path is not None:
        if tests_path is None or expected_path is None:
            raise click.UsageError("--program mode requires --tests and --expected")
        ops = tuple(op.strip() for op in operators.split(",") if op.strip())
        program = _parse_program(program_path)
        tests = _load_tests(tests_path)
        expected = _load_expected(expected_path)
        try:
            mutants = lang.mutate_all(program, ops)
            bm = lang.behavior_matrix(
                program,
                mutants,
                tests,
                budget=budget if budget is not None else _default_budget(),
                expected=expected,
            )
        except ValueError as exc:
            _die(EXIT_INPUT, str(exc))
        statements = {desc.id: desc.statement for desc, _ in mutants}
        mutant_ids = tuple(desc.id for desc, _ in mutants)
    else:
        raise click.UsageError("pass either --matrix or --program")
    try:
        inp = FaultLocalizationInput(
            matrix=bm,
            mutants=tuple((m, statements.get(m)) for m in mutant_ids),
            tests=bm.tests,
            differentiator=d,
        )
        report = rank_statements(inp, method, metric)
    except RoleError as exc:
        _die(EXIT_ROLE, str(exc))
    except ValueError as exc:
        _die(EXIT_INPUT, str(exc))
    _emit(report_to_json_text(report, statements), out)


def _demo_matrix():
    """Three programs over four tests whose behaviors pin down the core
    geometry: spec all-alpha, original drifting to beta, and a mutant that
    comes back to alpha on the last test."""
    return matrix_from_outputs(
        ["t1", "t2", "t3", "t4"],
        {
            "spec": ["alpha", "alpha", "alpha", "alpha"],
            "original": ["alpha", "beta", "beta", "beta"],
            "m": ["alpha", "beta", "gamma", "alpha"],
        },
        roles={"spec": "spec", "original": "original", "m": "mutant"},
        origins={"m": "original"},
    )


_DEMO_KILLS_CSV = """test,m1,m2,m3,m4
t1,1,0,1,1
t2,0,1,0,1
t3,0,1,1,1
"""


@main.command()
@click.option("--out", "out_dir", default=None, type=click.Path(file_okay=False),
              help="also write matrix JSON, kill CSV, and DOT files here")
def demo(out_dir):
    """Regenerate the worked examples the test suite is built around."""
    d = Differentiator.exact()
    bm = _demo_matrix()
    lines = ["== three-program example =="]
    for left, right in (("spec", "original"), ("original", "m"), ("spec", "m")):
        v = diff_vector(d, bm.tests, left, right, bm)
        lines.append(f"d({left}, {right}) = {list(v.bits)}  norm={v.norm()}")
    narrow = ProgramSpace(TestVector(("t3",)), "spec", d, bm)
    witness = coincidence_counterexample(narrow, "original", "m")
    lines.append(f"same position, different behavior on ['t3']: {witness}")

    km = KillMatrix.from_csv(_DEMO_KILLS_CSV)
    result = minimal_mutant_set(km)
    lines.append("")
    lines.append("== four-mutant kill example ==")
    lines.append(f"minimal mutant set: {list(result.minimal)}")
    lines.append(f"reduction ratio: {result.reduction_ratio:.6f}")
    graph = build_dmsg(km)
    dot = dmsg_to_dot(graph)
    lines.append("subsumption graph (transitive reduction):")
    lines.append(dot.rstrip("\n"))

    click.echo("\n".join(lines))
    if out_dir is not None:
        directory = Path(out_dir)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "example_matrix.json").write_text(
            matrix_to_json_text(bm), encoding="utf-8"
        )
        (directory / "kills.csv").write_text(_DEMO_KILLS_CSV, encoding="utf-8")
        (directory / "dmsg.dot").write_text(dot, encoding="utf-8")
        space = ProgramSpace(km.tests, "original", d, _demo_kill_matrix_source())
        lattice = annotate(build_lattice(3, km.tests), space, km.mutants)
        (directory / "lattice.dot").write_text(lattice_to_dot(lattice), encoding="utf-8")


def _demo_kill_matrix_source():
    """Behavior matrix that reproduces the demo kill bits under exact equality."""
    km = KillMatrix.from_csv(_DEMO_KILLS_CSV)
    outputs = {"original": ["same"] * len(km.tests)}
    for m in km.mutants:
        outputs[m] = [
            f"diff-{t}-{m}" if bit else "same"
            for t, bit in zip(km.tests, km.column(m))
        ]
    roles = {"original": "original"}
    roles.update({m: "mutant" for m in km.mutants})
    return matrix_from_outputs(
        km.tests, outputs, roles=roles, origins={m: "original" for m in km.mutants}
    )


if __name__ == "__main__":
    main()
