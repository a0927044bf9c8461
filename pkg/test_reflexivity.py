#!/usr/bin/env python3
"""
Tests for regular covectors, the restriction map beta, reflexivity verdicts and free bases
"""

import sys

from app.catalog import dual_numbers, matrix_algebra, upper_triangular
from app.derivations import full_diff_algebra, inner_derivation
from app.duality import build_double_dual, build_vplus
from app.reflexivity import (
    build_r_plus,
    check_free_basis,
    factor_beta,
    reflexivity_report,
    regular_covectors,
    retraction,
)


def _inner_basis(alg, n):
    """ad of the off-diagonal units and of E_pp - E_(p+1)(p+1)"""
    basis = []
    for p in range(n):
        for q in range(n):
            if p != q:
                basis.append(inner_derivation(alg.basis_element(p * n + q)))
    for p in range(n - 1):
        coords = [0] * (n * n)
        coords[p * n + p] = 1
        coords[(p + 1) * n + p + 1] = -1
        basis.append(inner_derivation(alg.element(coords)))
    return basis


def test_regular_covectors():
    """R = V+ when N = 0"""
    print("\n=== Test 1: Regular Covectors ===")

    for alg in (matrix_algebra(2), dual_numbers(), upper_triangular(2)):
        dd = build_double_dual(build_vplus(full_diff_algebra(alg)))
        r = regular_covectors(dd)
        assert r.is_full(), f"R should be all of V+ for {alg.basis_names}"

    print("SUCCESS: regular covectors computed")


def test_beta_factorisation():
    """beta = i o rho with Ker beta = N and the retraction identity"""
    print("\n=== Test 2: Beta Factorisation ===")

    da = full_diff_algebra(upper_triangular(2))
    dd = build_double_dual(build_vplus(da))
    rd = build_r_plus(dd, regular_covectors(dd))
    rho, i_mono = factor_beta(dd, rd)
    assert rho.rows == dd.dim - dd.n_space.dim, "rho maps onto V^x / N"
    assert i_mono.rank() == i_mono.cols, "i is injective"
    assert (i_mono @ rho) == rd.beta, "beta = i o rho"

    pi_r = retraction(dd, rd)
    assert (pi_r @ i_mono @ rho @ dd.j_matrix).is_identity(), "pi_R o i o rho o j = 1"

    print("SUCCESS: beta factorises")


def test_reflexivity_report():
    """Verdicts for a semisimple and a non-semisimple algebra"""
    print("\n=== Test 3: Reflexivity Report ===")

    report = reflexivity_report(full_diff_algebra(matrix_algebra(2)))
    assert report.is_reflexive, "M2 is reflexive"
    assert report.semisimple_hint, "M2 is semisimple"
    assert report.witnesses is None, "No witness for a reflexive V"
    assert report.beta_kernel.is_zero(), "Ker beta = N = 0"
    assert report.r_plus_dim == 3, f"R+ = V^x for M2, got {report.r_plus_dim}"
    assert report.beta_surjective, "beta is onto when R = V+"

    report = reflexivity_report(full_diff_algebra(dual_numbers()))
    assert report.is_reflexive, "Dual numbers are reflexive"
    assert not report.semisimple_hint, "Dual numbers are not semisimple"

    print("SUCCESS: reflexivity reports are correct")


def test_free_basis_m2():
    """Inner derivations form a free basis of Der M2"""
    print("\n=== Test 4: Free Basis of Der M2 ===")

    m2 = matrix_algebra(2)
    da = full_diff_algebra(m2)
    verdict = check_free_basis(da, _inner_basis(m2, 2))
    assert verdict["free"] and verdict["success"], f"Expected a free basis, got {verdict}"
    assert len(verdict["dual_basis"]) == 3, "One dual covector per basis element"
    assert verdict["j_isomorphism"], "j is an isomorphism for a free V"

    print("SUCCESS: free basis of Der M2 verified")


def test_free_basis_m3():
    """Inner derivations form a free basis of Der M3"""
    print("\n=== Test 5: Free Basis of Der M3 ===")

    m3 = matrix_algebra(3)
    verdict = check_free_basis(full_diff_algebra(m3), _inner_basis(m3, 3))
    assert verdict["success"], f"Expected a free basis, got {verdict.get('error')}"
    assert len(verdict["dual_basis"]) == 8, "Eight dual covectors"

    print("SUCCESS: free basis of Der M3 verified")


def test_not_free():
    """Claimed bases that fail come back with a witness"""
    print("\n=== Test 6: Not Free ===")

    d = dual_numbers()
    da = full_diff_algebra(d)
    verdict = check_free_basis(da, list(da.vectors))
    assert not verdict["free"], "V is not free over the dual numbers"
    assert verdict["witness"]["relation"] == [["0", "1"]], f"Relation should be eps, got {verdict['witness']}"

    verdict = check_free_basis(da, [(1, 0, 0, 0)])
    assert not verdict["success"], "A map outside V cannot be a basis element"
    assert verdict["witness"] == {"basis_index": 0}, f"Unexpected witness {verdict['witness']}"

    verdict = check_free_basis(da, [])
    assert not verdict["success"], "The empty family does not span a nonzero V"

    m1 = full_diff_algebra(matrix_algebra(1))
    verdict = check_free_basis(m1, [])
    assert verdict["free"] and verdict["success"], "Empty family is a free basis of V = 0"

    print("SUCCESS: non-free families rejected")


def main():
    """Run all tests"""
    print("=" * 80)
    print("REFLEXIVITY TESTS")
    print("=" * 80)

    try:
        test_regular_covectors()
        test_beta_factorisation()
        test_reflexivity_report()
        test_free_basis_m2()
        test_free_basis_m3()
        test_not_free()

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
