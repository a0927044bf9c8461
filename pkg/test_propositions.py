#!/usr/bin/env python3
"""
Tests for the proposition suite over the catalog, random algebras and corrupted inputs
"""

import sys
from dataclasses import replace

from app.algebra import Algebra
from app.catalog import all_entries, dual_numbers, fuzz_target, matrix_algebra
from app.config import DEFAULT_FUZZ_COUNT, FUZZ_INNER_EVERY, FUZZ_MAX_DIM
from app.derivations import full_diff_algebra, inner_derivation, make_diff_algebra
from app.linalg import Subspace
from app.propositions import _check_sampled_polars, check_algebra, run_checks, run_pipeline


def test_catalog_suite():
    """Every catalog entry passes every check, including its record"""
    print("\n=== Test 1: Catalog Suite ===")

    for entry in all_entries():
        summary = check_algebra(f"catalog:{entry.name}", entry.algebra)
        failed = [r.proposition for r in summary.results if not r.passed]
        assert summary.passed, f"{entry.name} failed {failed}: {summary.error}"
        assert any(r.proposition == "catalog" for r in summary.results), f"{entry.name}: record not compared"
        print(f"  {entry.name}: {len(summary.results)} checks passed")

    print("SUCCESS: catalog passes the suite")


def test_random_suite():
    """Seeded random algebras pass every check, some with V generated by one inner derivation"""
    print("\n=== Test 2: Random Suite ===")

    inner = 0
    for seed in range(1, DEFAULT_FUZZ_COUNT + 1):
        label, alg, seed_spec = fuzz_target(seed)
        assert alg.dim == seed % FUZZ_MAX_DIM + 1, f"Seed {seed} has the wrong dimension"
        inner += seed_spec.startswith("inner:")
        summary = check_algebra(label, alg, seed_spec)
        failed = [r.proposition for r in summary.results if not r.passed]
        assert summary.passed, f"Seed {seed} ({seed_spec}) failed {failed}: {summary.error}"

    assert inner == DEFAULT_FUZZ_COUNT // FUZZ_INNER_EVERY, f"Expected inner seeds every {FUZZ_INNER_EVERY}, got {inner}"

    print(f"SUCCESS: {DEFAULT_FUZZ_COUNT} random algebras pass")


def test_corrupted_z_action():
    """A tampered Z-action table is reported, not silently used"""
    print("\n=== Test 3: Corrupted Z-action ===")

    da = full_diff_algebra(dual_numbers())
    table = [list(row) for row in da.z_action_table]
    table[1][0] = (1,)
    corrupted = replace(da, z_action_table=tuple(tuple(row) for row in table))

    results = run_checks(corrupted)
    failures = [r for r in results if not r["passed"]]
    assert failures, "Corruption must be detected"
    assert failures[0]["proposition"] == "bimodule", f"Expected the bimodule check to fail, got {failures[0]['proposition']}"
    assert failures[0]["witness"]["check"] == "Z-action table", f"Unexpected witness {failures[0]['witness']}"
    assert failures[0]["witness"]["center_index"] == 1, "The eps row was corrupted"

    assert all(r["passed"] for r in run_checks(da)), "The untouched table passes"

    print("SUCCESS: corrupted Z-action detected")


def test_non_free_candidate():
    """Reflexive V whose dimension is not a multiple of dim Z is flagged"""
    print("\n=== Test 4: Non-free Reflexive Candidate ===")

    pr = run_pipeline(full_diff_algebra(dual_numbers()))
    assert pr.complete and pr.passed, "Dual numbers pipeline passes"
    assert pr.reflexivity.is_reflexive, "Dual numbers are reflexive"
    assert pr.non_free_candidate, "dim V = 1 is not a multiple of dim Z = 2"

    pr = run_pipeline(full_diff_algebra(matrix_algebra(2)))
    assert not pr.non_free_candidate, "M2 is free over Z = Q"

    print("SUCCESS: non-free candidates flagged")


def test_free_basis_check():
    """A supplied free basis is recorded as its own check"""
    print("\n=== Test 5: Free Basis Check ===")

    m2 = matrix_algebra(2)
    basis = [
        inner_derivation(m2.basis_element(1)),
        inner_derivation(m2.basis_element(2)),
        inner_derivation(m2.element([1, 0, 0, -1])),
    ]
    pr = run_pipeline(full_diff_algebra(m2), basis)
    free = [r for r in pr.results if r["proposition"] == "free-basis"]
    assert len(free) == 1 and free[0]["passed"], f"Free basis check should pass, got {free}"

    da = full_diff_algebra(dual_numbers())
    pr = run_pipeline(da, list(da.vectors))
    free = [r for r in pr.results if r["proposition"] == "free-basis"]
    assert len(free) == 1 and not free[0]["passed"], "Dual numbers have no free basis"
    assert free[0]["witness"]["witness"]["relation"] == [["0", "1"]], f"Unexpected witness {free[0]['witness']}"

    print("SUCCESS: free basis results recorded")


def test_invalid_algebra():
    """Invalid algebras stop before the pipeline"""
    print("\n=== Test 6: Invalid Algebra ===")

    m2 = matrix_algebra(2)
    table = [[list(cell) for cell in row] for row in m2.structure_constants]
    table[0][0][0] = 2
    bad = Algebra.from_table(m2.basis_names, table, m2.unit)
    summary = check_algebra("perturbed", bad)
    assert not summary.passed, "Perturbed M2 must fail"
    assert summary.results[0].proposition == "validate", "Failure comes from validation"
    assert summary.results[0].witness["triple"] == [0, 0, 1], "First failing triple"

    print("SUCCESS: invalid algebras rejected")


def test_sampled_polars():
    """Random S in A and W in Der A satisfy the Galois identities"""
    print("\n=== Test 7: Sampled Polars ===")

    for entry in all_entries():
        witness = _check_sampled_polars(entry.algebra)
        assert witness is None, f"{entry.name}: {witness}"

    for seed in range(1, 21):
        _, alg, _ = fuzz_target(seed)
        assert _check_sampled_polars(alg) is None, f"Random seed {seed} fails the sampled polars"

    m2 = matrix_algebra(2)
    da = make_diff_algebra(m2, Subspace.span([inner_derivation(m2.basis_element(1)).flat()], 16))
    pr = run_pipeline(da)
    polars = [r for r in pr.results if r["proposition"] == "polars"]
    assert polars and polars[0]["passed"], f"Polars fail for V = span(ad E12): {polars}"

    print("SUCCESS: sampled polars pass")


def main():
    """Run all tests"""
    print("=" * 80)
    print("PROPOSITION SUITE TESTS")
    print("=" * 80)

    try:
        test_catalog_suite()
        test_random_suite()
        test_corrupted_z_action()
        test_non_free_candidate()
        test_free_basis_check()
        test_invalid_algebra()
        test_sampled_polars()

        print("\n" + "=" * 80)
        print("ALL TESTS PASSED!")
        print("=" * 80)

    except AssertionError as e:
        print(f"\nTEST FAILED: {str(e)}")
        import traceback
        traceback.print_exc()
        sys.exit(1)


if __name__ == "__main__":
    main()
