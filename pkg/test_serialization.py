#!/usr/bin/env python3
"""
Tests for algebra files, seed files and seed specs
"""

import json
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from app.catalog import matrix_algebra
from app.errors import AlgebraFileError, CatalogError, NotADerivation
from app.models import AlgebraFile, SeedFile, parse_rational
from app.serialization import (
    algebra_to_document,
    build_diff_algebra,
    dumps_algebra,
    load_algebra,
    load_seed_file,
    loads_algebra,
    resolve_target,
    save_algebra,
)


def _m2_document() -> dict:
    return json.loads(dumps_algebra(matrix_algebra(2)))


def test_rationals():
    """Exact rational strings in, canonical strings out"""
    print("\n=== Test 1: Rationals ===")

    assert parse_rational(" -3/4 ") == Fraction(-3, 4), "Signed fraction with spaces"
    assert parse_rational("7") == 7, "Integers are rationals"
    for bad in ("0.5", "1/0", "x", "1e3"):
        try:
            parse_rational(bad)
            assert False, f"{bad!r} should be refused"
        except ValueError:
            pass

    doc = _m2_document()
    doc["unit"] = ["2/2", "0", "0", "3/3"]
    assert AlgebraFile.model_validate(doc).unit == ["1", "0", "0", "1"], "Rationals are canonicalised"

    print("SUCCESS: rationals parse exactly")


def test_files():
    """Writing then reading a file gives back the same algebra"""
    print("\n=== Test 2: Algebra Files ===")

    m2 = matrix_algebra(2)
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "m2.json"
        save_algebra(m2, path)
        assert load_algebra(path) == m2, "File does not reproduce M2"
        label, alg = resolve_target(str(path))
        assert label == str(path) and alg == m2, "File targets resolve to their algebra"

    assert algebra_to_document(m2).basis_names == ["E11", "E12", "E21", "E22"], "Basis names kept"
    assert dumps_algebra(m2) == dumps_algebra(m2), "Serialisation is deterministic"

    print("SUCCESS: algebra files work correctly")


def test_parse_errors():
    """Errors carry a location"""
    print("\n=== Test 3: Parse Errors ===")

    try:
        loads_algebra('{"dim": 2,\n  "basis_names": }')
        assert False, "Broken JSON should raise"
    except AlgebraFileError as e:
        assert e.location.startswith("line 2"), f"Expected a line number, got {e.location}"

    doc = _m2_document()
    doc["structure_constants"][0][1][2] = "0.5"
    try:
        loads_algebra(json.dumps(doc))
        assert False, "Float entry should raise"
    except AlgebraFileError as e:
        assert e.location == "structure_constants.0.1.2", f"Unexpected location {e.location}"

    doc = _m2_document()
    doc["dim"] = 3
    try:
        loads_algebra(json.dumps(doc))
        assert False, "Shape mismatch should raise"
    except AlgebraFileError as e:
        assert "expected 3" in str(e), f"Unexpected message {e}"

    doc = _m2_document()
    doc["colour"] = "blue"
    try:
        loads_algebra(json.dumps(doc))
        assert False, "Unknown fields should raise"
    except AlgebraFileError as e:
        assert e.location == "colour", f"Unexpected location {e.location}"

    try:
        load_algebra("/nonexistent/algebra.json")
        assert False, "Missing file should raise"
    except AlgebraFileError:
        pass

    try:
        resolve_target("catalog:nope")
        assert False, "Unknown catalog name should raise"
    except CatalogError:
        pass

    print("SUCCESS: parse errors are located")


def test_seed_specs():
    """full-der, inner, derivations and constants seeds"""
    print("\n=== Test 4: Seed Specs ===")

    m2 = matrix_algebra(2)
    assert build_diff_algebra(m2, "full-der").dim == 3, "full-der gives Der M2"

    da = build_diff_algebra(m2, "inner:E11")
    assert da.dim == 1 and da.constants.dim == 2, f"inner:E11 gives V 1, C 2; got {da.dim}, {da.constants.dim}"

    seed = SeedFile(constants=[["1", "0", "0", "1"]])
    assert build_diff_algebra(m2, "constants", seed).dim == 3, "Constants Q give all of Der"

    # column i holds ad E12 (e_i)
    ad_e12 = [["0", "0", "1", "0"], ["-1", "0", "0", "1"], ["0", "0", "0", "0"], ["0", "0", "-1", "0"]]
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "seed.json"
        path.write_text(json.dumps({"derivations": [ad_e12]}), encoding="utf-8")
        assert load_seed_file(path).derivations is not None, "Seed file parses"
        da = build_diff_algebra(m2, f"derivations:{path}")
        assert da.dim == 1 and da.constants.dim == 2, "ad E12 closes to itself with constants Q + Q E12"

    bad = SeedFile(derivations=[[["1", "0", "0", "0"]] + [["0"] * 4] * 3])
    try:
        build_diff_algebra(m2, "derivations", bad)
        assert False, "Non-derivation seed should raise"
    except NotADerivation as e:
        assert "seed derivation 0" in str(e), f"Seed index missing from {e}"

    for spec in ("inner:E99", "everything", "constants"):
        try:
            build_diff_algebra(m2, spec)
            assert False, f"{spec!r} should raise"
        except AlgebraFileError:
            pass

    try:
        SeedFile.model_validate({"derivations": [], "constants": []})
        assert False, "Both seed kinds at once should raise"
    except ValueError:
        pass

    print("SUCCESS: seed specs work correctly")


def main():
    """Run all tests"""
    print("=" * 80)
    print("SERIALIZATION TESTS")
    print("=" * 80)

    try:
        test_rationals()
        test_files()
        test_parse_errors()
        test_seed_specs()

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
