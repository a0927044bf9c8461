#!/usr/bin/env python3
"""
Tests for the diffalg command line: exit codes, reports and checks
"""

import io
import json
import sys
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

from app.cli import main as cli_main


def run(*argv):
    """Run the CLI and return (exit code, stdout, stderr)"""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli_main(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_export_and_validate():
    """Exported catalog algebras validate; perturbed ones name the failing triple"""
    print("\n=== Test 1: Export and Validate ===")

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "m2.json"
        code, out, _ = run("export", "catalog:m2", str(path))
        assert code == 0, f"export failed with {code}"

        code, out, _ = run("validate", str(path))
        assert code == 0, f"M2 should validate, got {code}: {out}"
        assert "valid algebra of dimension 4" in out, f"Unexpected output {out}"

        doc = json.loads(path.read_text(encoding="utf-8"))
        doc["structure_constants"][0][0][0] = "2"
        path.write_text(json.dumps(doc), encoding="utf-8")
        code, out, _ = run("validate", str(path))
        assert code == 1, f"Perturbed M2 should exit 1, got {code}"
        assert "(E11, E11, E12)" in out, f"Failing triple not named: {out}"

        path.write_text('{"dim": 1, "unit": ["1/0"], "basis_names": ["1"], "structure_constants": [[["1"]]]}',
                        encoding="utf-8")
        code, _, err = run("validate", str(path))
        assert code == 2, f"Zero denominator is a parse error, got {code}"
        assert "unit.0" in err, f"Location missing from {err}"

    print("SUCCESS: export and validate work correctly")


def test_report():
    """Reports carry the frozen dimensions and are byte-identical across runs"""
    print("\n=== Test 2: Report ===")

    code, out, _ = run("report", "catalog:m2", "--json")
    assert code == 0, f"report failed with {code}"
    report = json.loads(out)
    assert report["duality"]["vplus"] == 12, "V+ of M2"
    assert report["duality"]["double_dual"] == 3, "V^x of M2"
    assert report["duality"]["n"] == 0, "N of M2"
    assert report["reflexivity"]["reflexive"], "M2 is reflexive"

    code, again, _ = run("report", "catalog:m2", "--json")
    assert again == out, "Reports must be deterministic"

    code, out, _ = run("report", "catalog:dual-numbers")
    report = json.loads(out)
    d = report["duality"]
    assert (d["vplus"], d["double_dual"], d["vstar"], d["vstar_star"], d["canonical_rank"]) == (1, 1, 1, 1, 1), \
        f"Dual numbers duals should all be 1-dim, got {d}"
    assert report["reflexivity"]["non_free_reflexive_candidate"], "Dual numbers are a non-free candidate"

    code, out, _ = run("report", "catalog:m2", "--seed-spec", "inner:E11", "--json")
    report = json.loads(out)
    assert report["algebra"]["v_dim"] == 1 and report["algebra"]["constants_dim"] == 2, "inner:E11 seed"

    code, out, _ = run("report", "catalog:upper2", "--text")
    assert code == 0 and "Reflexive: yes" in out, f"Unexpected text report {out}"

    print("SUCCESS: reports are correct")


def test_check():
    """Check exit codes and the free-basis option"""
    print("\n=== Test 3: Check ===")

    code, out, _ = run("check", "catalog:m2", "catalog:dual-numbers")
    assert code == 0, f"Catalog checks should pass: {out}"
    assert "2/2 targets passed" in out, f"Unexpected summary {out}"

    code, out, _ = run("check", "--fuzz", "5")
    assert code == 0 and "5/5 targets passed" in out, f"Fuzz run failed: {out}"

    with tempfile.TemporaryDirectory() as tmp:
        seed = Path(tmp) / "basis.json"
        seed.write_text(json.dumps({"derivations": [[["0", "0"], ["0", "1"]]]}), encoding="utf-8")
        code, out, _ = run("check", "catalog:dual-numbers", "--free-basis", str(seed))
        assert code == 1, f"Dual numbers have no free basis, got {code}"
        assert "[free-basis]" in out, f"Free basis failure not reported: {out}"

        code, _, err = run("check", "catalog:m2", "catalog:m1", "--free-basis", str(seed))
        assert code == 2, "--free-basis needs exactly one target"

    print("SUCCESS: check works correctly")


def test_usage_errors():
    """Usage and lookup errors exit 2"""
    print("\n=== Test 4: Usage Errors ===")

    assert run()[0] == 2, "No command is a usage error"
    assert run("report", "catalog:nope")[0] == 2, "Unknown catalog name"
    assert run("report", "catalog:m2", "--seed-spec", "inner:E99")[0] == 2, "Unknown basis name"
    assert run("check")[0] == 2, "Nothing to check"
    assert run("export", "nope", "/tmp/never-written.json")[0] == 2, "Unknown export name"

    print("SUCCESS: usage errors exit 2")


def test_check_usage_errors():
    """check exits 2 on parse and lookup errors, like validate and report"""
    print("\n=== Test 5: Check Usage Errors ===")

    with tempfile.TemporaryDirectory() as tmp:
        bad = Path(tmp) / "bad.json"
        bad.write_text('{"dim": 1, "unit": ["1/0"], "basis_names": ["1"], "structure_constants": [[["1"]]]}',
                       encoding="utf-8")
        assert run("validate", str(bad))[0] == 2, "validate: parse error"
        assert run("report", str(bad))[0] == 2, "report: parse error"
        code, _, err = run("check", str(bad))
        assert code == 2, f"check: parse error should exit 2, got {code}"
        assert "unit.0" in err, f"Location missing from {err}"

        assert run("check", "catalog:nope")[0] == 2, "check: unknown catalog name"
        assert run("check", "catalog:m2", str(bad))[0] == 2, "One bad target spoils the run"

        seed = Path(tmp) / "seed.json"
        seed.write_text("{not json", encoding="utf-8")
        assert run("check", "catalog:dual-numbers", "--free-basis", str(seed))[0] == 2, "Unparsable seed file"

    code, out, _ = run("check", "catalog:m2", "--seed-spec", "inner:E99")
    assert code == 2, f"Unknown basis name in the seed spec should exit 2, got {code}"
    assert "FAIL catalog:m2" in out, f"Target not reported: {out}"

    print("SUCCESS: check usage errors exit 2")


def main():
    """Run all tests"""
    print("=" * 80)
    print("CLI TESTS")
    print("=" * 80)

    try:
        test_export_and_validate()
        test_report()
        test_check()
        test_usage_errors()
        test_check_usage_errors()

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
