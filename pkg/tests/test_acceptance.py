"""Acceptance suite: one test per shipping criterion, exact tolerances.

Each test prints a PASS/FAIL line through the terminal-summary hook in
conftest.py.  Randomized criteria use fixed seeds, so every run checks the
same instances.
"""
import itertools
import json
import random
import time

import pytest
from click.testing import CliRunner

from mutspace import (
    Differentiator,
    KillMatrix,
    ProgramSpace,
    TestVector,
    build_lattice,
    coincidence_counterexample,
    compare_methods,
    deviance_subsumption_equivalence,
    diff_vector,
    differentiate,
    dynamically_subsumes,
    manhattan_norm,
    max_minimal_size,
    minimal_mutant_set,
    position,
)
from mutspace.cli import main as cli_main
from mutspace.mbfl import FaultLocalizationInput, fix_counts
from helpers import (
    FOUR_MUTANT_CSV,
    brute_force_subsumes,
    kill_space,
    matrix_from_kill_bits,
    matrix_from_outputs,
    max_antichain_by_enumeration,
    random_matrix,
    three_program_matrix,
)
from test_cli import FAULTY_EXPECTED, FAULTY_SRC, FAULTY_TESTS

EXACT = Differentiator.exact()


def test_01_kill_table_minimization_and_subsumption():
    """Ingest the four-mutant kill table; recover the minimal set and the
    exact subsumption pairs.  Budget: one second."""
    start = time.perf_counter()
    km = KillMatrix.from_csv(FOUR_MUTANT_CSV)
    assert set(minimal_mutant_set(km).minimal) == {"m1", "m2"}
    expected_pairs = {("m1", "m3"), ("m1", "m4"), ("m2", "m4"), ("m3", "m4")}
    found = {
        (mx, my)
        for mx, my in itertools.permutations(km.mutants, 2)
        if dynamically_subsumes(km, mx, my)
    }
    assert found == expected_pairs
    assert time.perf_counter() - start < 1.0


def test_02_running_example_vectors_norms_and_coincidence():
    """The three-program fixture reproduces its difference vectors, norms,
    and the single-dimension coincidence witness exactly."""
    bm = three_program_matrix()
    tv = bm.tests
    spec_orig = diff_vector(EXACT, tv, "ps", "po", bm)
    assert spec_orig.bits == (0, 1, 1, 1)
    assert manhattan_norm(spec_orig) == 3
    orig_mut = diff_vector(EXACT, tv, "po", "m", bm)
    assert orig_mut.bits == (0, 0, 1, 1)
    assert manhattan_norm(orig_mut) == 2
    assert diff_vector(EXACT, tv, "ps", "m", bm).bits == (0, 1, 1, 0)
    narrow = ProgramSpace(TestVector(("t3",)), "ps", EXACT, bm)
    assert coincidence_counterexample(narrow, "po", "m") == ["t3"]


@pytest.mark.parametrize("n", range(1, 11))
def test_03_hypercube_structure(n):
    """Dimension n lattice: 2^n nodes, n*2^(n-1) edges, degree n everywhere."""
    lattice = build_lattice(n)
    nodes = list(lattice.nodes())
    assert len(nodes) == 2 ** n
    degree = {node: 0 for node in nodes}
    edge_count = 0
    for u, v, _ in lattice.edges():
        edge_count += 1
        degree[u] += 1
        degree[v] += 1
    assert edge_count == n * 2 ** (n - 1)
    assert set(degree.values()) == {n}


def test_04_minimal_set_size_bound():
    """Exhaustive antichain maxima are 1, 2, 3, 6 for n = 1..4, equal to
    C(n, floor(n/2)); 10,000 random kill matrices with distinct columns
    never exceed the bound.  Budget: thirty seconds."""
    start = time.perf_counter()
    assert [max_antichain_by_enumeration(n) for n in (1, 2, 3, 4)] == [1, 2, 3, 6]
    for n in (1, 2, 3, 4):
        assert max_antichain_by_enumeration(n) == max_minimal_size(n)
    rng = random.Random(20240401)
    for _ in range(10_000):
        n = rng.randint(1, 4)
        m = rng.randint(1, 2 ** n)
        columns = rng.sample(range(2 ** n), m)
        tests = TestVector(tuple(f"t{i + 1}" for i in range(n)))
        mutants = tuple(f"m{j + 1}" for j in range(m))
        rows = tuple(
            tuple((value >> i) & 1 for value in columns) for i in range(n)
        )
        km = KillMatrix(tests, mutants, rows)
        assert len(minimal_mutant_set(km).minimal) <= max_minimal_size(n)
    assert time.perf_counter() - start < 30.0


def test_05_deviance_equals_subsumption_on_random_matrices():
    """On 10,000 random kill matrices (n <= 6, M <= 12), position-walk
    reachability and brute-force dynamic subsumption agree on every
    ordered mutant pair.  Budget: sixty seconds."""
    start = time.perf_counter()
    rng = random.Random(20240402)
    for _ in range(10_000):
        n = rng.randint(1, 6)
        m = rng.randint(1, 12)
        tests = TestVector(tuple(f"t{i + 1}" for i in range(n)))
        mutants = tuple(f"m{j + 1}" for j in range(m))
        rows = tuple(tuple(rng.randrange(2) for _ in mutants) for _ in tests)
        km = KillMatrix(tests, mutants, rows)
        bm = matrix_from_kill_bits(km)
        sp = kill_space(km, bm)
        for mx, my in itertools.permutations(km.mutants, 2):
            check = deviance_subsumption_equivalence(sp, km, mx, my)
            assert check.deviance_path_holds == check.subsumes
            assert check.subsumes == brute_force_subsumes(km, mx, my)
    assert time.perf_counter() - start < 60.0


def test_06_position_inequality_and_coincidence_witnesses():
    """Different positions force a nonzero pairwise difference vector on
    every sampled triple; with three tokens, a same-position
    different-behavior witness appears within every 1000 instances."""
    rng = random.Random(20240403)
    for _ in range(2000):
        bm = random_matrix(rng, rng.randint(1, 5), 3, 3)
        sp = ProgramSpace(bm.tests, "p0", EXACT, bm)
        for px, py in itertools.combinations(("p0", "p1", "p2"), 2):
            if position(sp, px).bits != position(sp, py).bits:
                assert diff_vector(EXACT, sp.tests, px, py, bm).norm() > 0
    for seed in (1, 2):
        batch_rng = random.Random(seed)
        witnesses = 0
        for _ in range(1000):
            bm = random_matrix(batch_rng, 3, 3, 3)
            sp = ProgramSpace(bm.tests, "p0", EXACT, bm)
            if position(sp, "p1").bits == position(sp, "p2").bits:
                if coincidence_counterexample(sp, "p1", "p2"):
                    witnesses += 1
        assert witnesses >= 1


def test_07_fix_counts_worked_instance():
    """A mutant whose spec-relative bits over the changed tests are
    (0, 1, 0, 0) yields three fail-to-pass flips and one pass-to-fail."""
    bm = matrix_from_outputs(
        ["t1", "t2", "t3", "t4", "t5"],
        {
            "ps": ["a", "a", "a", "a", "a"],
            "po": ["b", "a", "b", "b", "a"],
            "m": ["a", "c", "a", "a", "a"],
        },
        roles={"ps": "spec", "po": "original", "m": "mutant"},
        origins={"m": "po"},
    )
    inp = FaultLocalizationInput(bm, (("m", 1),), bm.tests, EXACT)
    bits = diff_vector(
        EXACT,
        tuple(t for t in bm.tests if t != "t5"),
        "ps",
        "m",
        bm,
    ).bits
    assert bits == (0, 1, 0, 0)
    counts = fix_counts(inp, "m")
    assert counts.fail_to_pass == 3
    assert counts.pass_to_fail == 1


def test_08_end_to_end_localization_ranks_the_fault_first(tmp_path):
    """Full pipeline on the seeded-fault program: one generated mutant
    matches the intended outputs everywhere, so its statement must land
    at rank 1 under the fix method.  Budget: five seconds."""
    start = time.perf_counter()
    program = tmp_path / "faulty.src"
    program.write_text(FAULTY_SRC)
    tests = tmp_path / "tests.json"
    tests.write_text(json.dumps(FAULTY_TESTS))
    expected = tmp_path / "expected.json"
    expected.write_text(json.dumps(FAULTY_EXPECTED))
    result = CliRunner().invoke(
        cli_main,
        ["mbfl", "--program", str(program), "--tests", str(tests),
         "--expected", str(expected), "--method", "fix"],
    )
    assert result.exit_code == 0
    report = json.loads(result.output)
    top = report["ranking"][0]
    assert top["statement"] == 2
    assert top["rank"] == 1.0
    # the rank-1 statement really carries a spec-equivalent mutant
    assert any(
        entry["score"] == 1.0 and entry["statement"] == 2
        for entry in report["mutants"]
    )
    assert time.perf_counter() - start < 5.0


def test_09_method_divergence_witnesses():
    """compare_methods reports exactly the pairwise-distinct tests, and on
    each the flt-agreement and fix-difference predicates hold."""
    bm = three_program_matrix()
    inp = FaultLocalizationInput(bm, (("m", 1),), bm.tests, EXACT)
    result = compare_methods(inp, "m")
    assert result.disagreement_tests == ("t3",)
    rng = random.Random(20240404)
    for _ in range(500):
        rows = {
            pid: [f"v{rng.randrange(3)}" for _ in range(4)]
            for pid in ("ps", "po", "m")
        }
        matrix = matrix_from_outputs(
            ["t1", "t2", "t3", "t4"],
            rows,
            roles={"ps": "spec", "po": "original", "m": "mutant"},
            origins={"m": "po"},
        )
        rand_inp = FaultLocalizationInput(matrix, (("m", 1),), matrix.tests, EXACT)
        comparison = compare_methods(rand_inp, "m")
        expected = tuple(
            t
            for t in matrix.tests
            if differentiate(EXACT, t, "ps", "po", matrix)
            and differentiate(EXACT, t, "po", "m", matrix)
            and differentiate(EXACT, t, "ps", "m", matrix)
        )
        assert comparison.disagreement_tests == expected
        for t in comparison.disagreement_tests:
            kill_bit = differentiate(EXACT, t, "po", "m", matrix)
            fail_bit = differentiate(EXACT, t, "ps", "po", matrix)
            assert kill_bit == fail_bit  # flt sees agreement
            assert differentiate(EXACT, t, "ps", "m", matrix) == 1  # fix sees difference


def test_10_weak_bit_dominates_strong_bit_with_strict_case():
    """Over all fixture (mutant, test) pairs the trace-policy bit is at
    least the output-policy bit, and at least one pair is strictly
    greater (internal change, same output)."""
    from mutspace.lang import TestCase, behavior_matrix, mutate_all, parse
    from helpers import SCRATCH_SRC

    program = parse(SCRATCH_SRC)
    mutants = mutate_all(program)
    tests = [
        TestCase("T1", {"a": 3, "b": 2}),
        TestCase("T2", {"a": 2, "b": 3}),
        TestCase("T3", {"a": 0, "b": 0}),
        TestCase("T4", {"a": 5, "b": 5}),
        TestCase("T5", {"a": 1, "b": 0}),
    ]
    bm = behavior_matrix(program, mutants, tests, tracing=True)
    strong = Differentiator.output_only()
    weak = Differentiator.trace_only()
    strict = 0
    for m in bm.mutant_ids():
        for t in bm.tests:
            weak_bit = weak.bit(bm.token("original", t), bm.token(m, t))
            strong_bit = strong.bit(bm.token("original", t), bm.token(m, t))
            assert weak_bit >= strong_bit
            if weak_bit > strong_bit:
                strict += 1
    assert strict >= 1
