#!/usr/bin/env python3
"""
Tests for derivation spaces, polars and differential algebras
"""

import random
import sys

from app.algebra import is_subalgebra
from app.catalog import dual_numbers, matrix_algebra, truncated_poly, upper_triangular, group_algebra
from app.derivations import (
    Derivation,
    LinearEndo,
    bracket,
    der_basis,
    element_action,
    from_constants,
    full_diff_algebra,
    inner_derivation,
    make_diff_algebra,
    polar_of_derivations,
    polar_of_elements,
)
from app.errors import NotADerivation
from app.linalg import Matrix, Subspace, contains, equals


def test_der_dimensions():
    """Der A for the catalog building blocks"""
    print("\n=== Test 1: Derivation Dimensions ===")

    expected = [
        (matrix_algebra(1), 0),
        (matrix_algebra(2), 3),
        (dual_numbers(), 1),
        (truncated_poly(3), 2),
        (upper_triangular(2), 2),
        (group_algebra("C3"), 0),
    ]
    for alg, dim in expected:
        got = der_basis(alg).dim
        assert got == dim, f"Der of {alg.basis_names}: expected {dim}, got {got}"
        for v in der_basis(alg).vectors():
            assert LinearEndo.from_flat(alg, v).is_derivation(), "Basis element fails Leibniz"

    print("SUCCESS: derivation dimensions match")


def test_leibniz_rule():
    """Derivation checks the Leibniz rule at construction"""
    print("\n=== Test 2: Leibniz Rule ===")

    d = dual_numbers()
    # eps -> eps is the only derivation up to scale
    Derivation(d, Matrix.from_rows([[0, 0], [0, 1]]))
    try:
        Derivation(d, Matrix.from_rows([[1, 0], [0, 0]]))
        assert False, "1 -> 1 is not a derivation"
    except NotADerivation as e:
        assert e.pair == (0, 0), f"Expected the pair (1, 1), got {e.pair}"

    m2 = matrix_algebra(2)
    ad = inner_derivation(m2.basis_element(1))
    assert ad(m2.basis_element(2)) == m2.basis_element(0) - m2.basis_element(3), "[E12, E21] = E11 - E22"
    assert ad(m2.one).is_zero(), "Derivations kill the unit"

    print("SUCCESS: Leibniz rule is enforced")


def test_bracket_and_action():
    """Lie bracket of derivations and the action of central elements"""
    print("\n=== Test 3: Bracket and Central Action ===")

    m2 = matrix_algebra(2)
    e11, e12, e21 = m2.basis_element(0), m2.basis_element(1), m2.basis_element(2)
    lhs = bracket(inner_derivation(e12), inner_derivation(e21))
    rhs = inner_derivation(e12 * e21 - e21 * e12)
    assert lhs.matrix == rhs.matrix, "[ad x, ad y] = ad [x, y]"

    t3 = truncated_poly(3)
    v = LinearEndo.from_flat(t3, der_basis(t3).vectors()[0])
    x = t3.basis_element(1)
    assert element_action(x, v).is_derivation(), "Central multiples of derivations are derivations"

    not_central = element_action(e11, inner_derivation(e12))
    assert not not_central.is_derivation(), "E11 * ad(E12) is not a derivation"

    print("SUCCESS: bracket and central action work correctly")


def test_polars():
    """Galois connection between subsets of A and of Der A"""
    print("\n=== Test 4: Polars ===")

    m2 = matrix_algebra(2)
    n = m2.dim
    for i in range(n):
        s = Subspace.span([m2.basis_vector(i)], n)
        sc = polar_of_elements(m2, s)
        sccc = polar_of_elements(m2, polar_of_derivations(m2, sc))
        assert equals(sc, sccc), f"S^ccc != S^c for basis element {i}"
        assert contains(polar_of_derivations(m2, sc), s), "S is inside S^cc"

    assert equals(polar_of_elements(m2, Subspace.zero(n)), der_basis(m2)), "Empty set is killed by all of Der"
    assert polar_of_elements(m2, Subspace.full(n)).is_zero(), "Only 0 kills all of A"
    assert polar_of_derivations(m2, der_basis(m2)).dim == 1, "Constants of Der M2 are the scalars"

    print("SUCCESS: polars form a Galois connection")


def test_diff_algebra():
    """Seeds close to V = V^cc with the right constants"""
    print("\n=== Test 5: Differential Algebras ===")

    m2 = matrix_algebra(2)
    full = full_diff_algebra(m2)
    assert full.dim == 3 and full.constants.dim == 1 and full.center.dim == 1, "Full M2 pair"

    seed = Subspace.span([inner_derivation(m2.basis_element(0)).flat()], 16)
    da = make_diff_algebra(m2, seed)
    assert da.dim == 1, f"ad E11 closes to a 1-dim V, got {da.dim}"
    assert da.constants.dim == 2, f"Constants are the diagonal, got {da.constants.dim}"

    again = from_constants(m2, da.constants)
    assert equals(again.vspace, da.vspace), "C^c recovers V"

    d = full_diff_algebra(dual_numbers())
    assert len(d.z_action_table) == 2, "Z(dual numbers) is 2-dimensional"
    assert d.z_action_table[1][0] == (0,), "eps times the derivation eps -> eps is zero on V"

    try:
        make_diff_algebra(dual_numbers(), Subspace.span([[1, 0, 0, 0]], 4))
        assert False, "A non-derivation seed should raise"
    except NotADerivation:
        pass

    print("SUCCESS: differential algebras close correctly")


def test_polars_of_unclosed_sets():
    """Galois identities on sets that are not polars themselves"""
    print("\n=== Test 6: Polars of Unclosed Sets ===")

    m2 = matrix_algebra(2)
    w = Subspace.span([inner_derivation(m2.basis_element(1)).flat(),
                       inner_derivation(m2.basis_element(2)).flat()], 16)
    wc = polar_of_derivations(m2, w)
    assert wc.dim == 1, f"ad E12 and ad E21 only kill the scalars, got {wc.dim}"
    wcc = polar_of_elements(m2, wc)
    assert wcc.dim == 3 and contains(wcc, w), "W^cc is all of Der M2 and contains W"
    assert equals(polar_of_derivations(m2, wcc), wc), "W^ccc = W^c"
    assert is_subalgebra(m2, wc), "W^c is a subalgebra"

    s = Subspace.span([m2.basis_vector(1)], 4)
    sc = polar_of_elements(m2, s)
    assert sc.dim == 1, f"Only ad E12 kills E12 up to scale, got {sc.dim}"
    scc = polar_of_derivations(m2, sc)
    assert scc.dim == 2 and contains(scc, s), "S^cc = span(1, E12) contains S"
    assert equals(polar_of_elements(m2, scc), sc), "S^ccc = S^c"

    rng = random.Random(5)
    t3 = truncated_poly(3)
    der = der_basis(t3)
    for _ in range(10):
        coeffs = [rng.randint(-2, 2) for _ in range(der.dim)]
        w = Subspace.span([der.combine(coeffs)], 9)
        wc = polar_of_derivations(t3, w)
        assert equals(polar_of_derivations(t3, polar_of_elements(t3, wc)), wc), f"W^ccc != W^c for {coeffs}"
        assert is_subalgebra(t3, wc), f"W^c not a subalgebra for {coeffs}"

    print("SUCCESS: polars of unclosed sets satisfy the Galois identities")


def test_jacobi_identity():
    """[u, [v, w]] + [v, [w, u]] + [w, [u, v]] = 0 on random derivations of M2"""
    print("\n=== Test 7: Jacobi Identity ===")

    m2 = matrix_algebra(2)
    der = der_basis(m2)
    rng = random.Random(13)

    def random_derivation():
        return Derivation.from_flat(m2, der.combine([rng.randint(-3, 3) for _ in range(der.dim)]))

    for _ in range(20):
        u, v, w = random_derivation(), random_derivation(), random_derivation()
        total = bracket(u, bracket(v, w)).matrix + bracket(v, bracket(w, u)).matrix + bracket(w, bracket(u, v)).matrix
        assert total.is_zero(), "Jacobi identity fails"

    print("SUCCESS: the bracket satisfies Jacobi")


def main():
    """Run all tests"""
    print("=" * 80)
    print("DERIVATION SPACE TESTS")
    print("=" * 80)

    try:
        test_der_dimensions()
        test_leibniz_rule()
        test_bracket_and_action()
        test_polars()
        test_diff_algebra()
        test_polars_of_unclosed_sets()
        test_jacobi_identity()

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
