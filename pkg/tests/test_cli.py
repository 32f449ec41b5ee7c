"""Command-line interface: golden outputs, exit codes, format stability."""
from __future__ import annotations

import json
import os
import subprocess
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN = os.path.join(HERE, "golden")
DATA = os.path.join(HERE, "data")

GOLDEN_INVOCATIONS = [
    ("range_torus3.json",
     ["range", "A^0 * Gm^3", "--smooth", "--i", "0", "--format", "json"]),
    ("cokernel_p2gm3.json",
     ["cokernel", "P^2 @O(3) * Gm^3", "--i", "2", "--j0", "2",
      "--format", "json"]),
    ("venn_generic3.json",
     ["venn", "3", "--file", os.path.join(DATA, "generic3.json"),
      "--format", "json"]),
]


def run_cli(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "wittlinear", *args],
        capture_output=True, text=True,
    )


class TestGolden:
    def test_golden_outputs_bit_for_bit(self):
        for name, argv in GOLDEN_INVOCATIONS:
            with open(os.path.join(GOLDEN, name)) as fh:
                expected = fh.read()
            proc = run_cli(*argv)
            assert proc.returncode == 0, proc.stderr
            assert proc.stdout == expected, name

    def test_json_is_stable_under_reserialization(self):
        for name, _ in GOLDEN_INVOCATIONS:
            with open(os.path.join(GOLDEN, name)) as fh:
                text = fh.read()
            payload = json.loads(text)
            assert json.dumps(payload, indent=2, sort_keys=True) + "\n" == text

    def test_schema_version_present(self):
        for name, _ in GOLDEN_INVOCATIONS:
            with open(os.path.join(GOLDEN, name)) as fh:
                assert json.load(fh)["schema_version"] == 1


class TestRangeCommand:
    def test_text_report(self):
        proc = run_cli("range", "A^0 * Gm^3", "--smooth", "--i", "0")
        assert proc.returncode == 0
        assert "ISO for j >= 3; INJECTIVE at j = 2" in proc.stdout
        assert "smooth (asserted)" in proc.stdout
        assert "leaf-torus-cell" in proc.stdout

    def test_injectivity_line_subsumed_by_cap(self):
        # for affine space the injectivity diagonal j = i - 1 lies below
        # the iso threshold only; here iso_from == i so it is reported
        proc = run_cli("range", "A^2", "--i", "1", "--format", "json")
        payload = json.loads(proc.stdout)
        assert payload["iso_for_j_at_least"] == 1
        assert payload["injective_at_j"] == 0

    def test_smoothness_is_required(self):
        proc = run_cli("range", "closed(A^0, A^1)", "--i", "0")
        assert proc.returncode == 3
        assert "smooth" in proc.stderr

    def test_finite_field_refused(self):
        proc = run_cli("range", "A^1", "--i", "0", "--field", "Fq")
        assert proc.returncode == 3
        assert "error:" in proc.stderr

    def test_parse_error_exits_2(self):
        proc = run_cli("range", "A^", "--i", "0")
        assert proc.returncode == 2
        assert "error:" in proc.stderr


class TestLinlevelCommand:
    def test_stratified_example(self):
        proc = run_cli("linlevel", "strat(A^0, A^1; 0<1)", "--format", "json")
        payload = json.loads(proc.stdout)
        assert payload["j_linear_level"] == 2
        assert payload["range_level"] == 0
        assert payload["dim"] == 1
        rules = [r["rule"] for r in payload["provenance"]["range"]]
        assert rules == ["leaf-affine", "leaf-affine", "stratified-refinement"]

    def test_text_mode(self):
        proc = run_cli("linlevel", "open(A^1, A^0)")
        assert proc.returncode == 0
        assert "j-linear level: 1" in proc.stdout
        assert "range level: 1" in proc.stdout


class TestCohomologyCommand:
    def test_torus_cell(self):
        proc = run_cli("cohomology", "A^0 * Gm^3", "--format", "json")
        payload = json.loads(proc.stdout)
        assert payload["model"] == "torus-cell"
        assert payload["degree"] == 0
        assert payload["rank"] == 8
        assert payload["summands"] == [[0, 1], [1, 3], [2, 3], [3, 1]]

    def test_evaluation_at_a_level(self):
        proc = run_cli("cohomology", "Gm", "--j", "0", "--format", "json")
        payload = json.loads(proc.stdout)
        assert payload["at_j"]["group"] == "Z (+) Z"
        assert payload["at_j"]["step"] == "INJECTIVE_NOT_SURJECTIVE"
        assert payload["at_j"]["step_cokernel"] == "Z/2"

    def test_proj_times_torus(self):
        proc = run_cli("cohomology", "P^2 @O(3) * Gm^3", "--format", "json")
        payload = json.loads(proc.stdout)
        assert payload["model"] == "proj-times-torus"
        assert payload["degree"] == 2
        assert payload["summands"] == [[2, 1], [3, 3], [4, 3], [5, 1]]

    def test_unsupported_tree_exits_4(self):
        proc = run_cli("cohomology", "open(A^1, A^0)")
        assert proc.returncode == 4

    def test_unsupported_twist_exits_4(self):
        proc = run_cli("cohomology", "P^2 @O(1) * Gm")
        assert proc.returncode == 4
        assert "O(3)" in proc.stderr


class TestRccmCommand:
    def test_torus_cell_report(self):
        proc = run_cli("rccm", "Gm^3", "--i", "0", "--format", "json")
        payload = json.loads(proc.stdout)
        assert payload["iso_for_j_at_least"] == 3
        entries = {e["j"]: e for e in payload["entries"]}
        assert entries[-2]["case"] == "IMAGE_EQUALS"
        assert entries[-2]["image_contains_power"] == 5
        assert entries[-2]["image_equals_power"] == 2
        assert entries[2]["case"] == "INJECTIVE"
        assert entries[2]["image_contains_power"] == 1
        assert entries[3]["case"] == "ISO"
        assert entries[4]["case"] == "ISO"
        assert "valid for every line-bundle twist" in payload["assumptions"]

    def test_needs_smoothness(self):
        proc = run_cli("rccm", "closed(A^0, A^1)", "--i", "0")
        assert proc.returncode == 3


class TestCokernelCommand:
    def test_wrong_degree_exits_4(self):
        proc = run_cli("cokernel", "P^2 @O(3) * Gm^3", "--i", "0", "--j0", "2")
        assert proc.returncode == 4
        assert "degree 2" in proc.stderr

    def test_explicit_target_level(self):
        proc = run_cli("cokernel", "Gm^2", "--i", "0", "--j0", "0",
                       "--j1", "1", "--format", "json")
        payload = json.loads(proc.stdout)
        assert payload["j1"] == 1
        # one step only: every positively shifted summand contributes Z/2
        assert payload["cokernel"]["torsion_orders"] == [2, 2, 2]
        assert payload["stable_exponent"] == 4

    def test_bad_level_order_exits_2(self):
        proc = run_cli("cokernel", "Gm", "--i", "0", "--j0", "3", "--j1", "1")
        assert proc.returncode == 2


class TestStratifyCommand:
    def test_expression_mode(self):
        proc = run_cli("stratify", "strat(A^0, A^1; 0<1)", "--format", "json")
        payload = json.loads(proc.stdout)
        assert payload["split_order"] == [0, 1]
        assert payload["glue_tree"] == "closed(A^0, A^1)"
        assert payload["j_linear_level"] == 1
        assert payload["range_level"] == 0

    def test_file_mode_replays(self, tmp_path):
        realization = {
            "schema_version": 1,
            "ground": ["p", "u1", "u2"],
            "pieces": [["p"], ["u1", "u2"]],
            "closure": [[0], [0, 1]],
        }
        path = tmp_path / "line.json"
        path.write_text(json.dumps(realization))
        proc = run_cli("stratify", "--file", str(path), "--format", "json")
        payload = json.loads(proc.stdout)
        assert payload["replay_check"] == "PASS"
        assert payload["split_order"] == [0, 1]

    def test_requires_exactly_one_input(self):
        assert run_cli("stratify").returncode == 4
        proc = run_cli("stratify", "strat(A^0; )", "--file", "x.json")
        assert proc.returncode == 4

    def test_non_stratified_expression_exits_4(self):
        assert run_cli("stratify", "A^1").returncode == 4

    def test_missing_file_exits_2(self):
        assert run_cli("stratify", "--file", "/nonexistent.json").returncode == 2


class TestVennCommand:
    def test_wrong_set_count_exits_2(self):
        proc = run_cli("venn", "2", "--file",
                       os.path.join(DATA, "generic3.json"))
        assert proc.returncode == 2
        assert "expected 2 sets" in proc.stderr

    def test_text_mode_lists_strata(self):
        proc = run_cli("venn", "3", "--file",
                       os.path.join(DATA, "generic3.json"))
        assert proc.returncode == 0
        assert "nonempty strata: 7 of 7 candidates" in proc.stdout
        assert "partition check: PASS" in proc.stdout
        assert "boundary check: PASS" in proc.stdout


class TestDiagnostics:
    def test_version_flag(self):
        proc = run_cli("--version")
        assert proc.returncode == 0
        assert proc.stdout.strip()

    def test_opaque_twist_warns_on_stderr(self):
        proc = run_cli("linlevel", "P^2 @L")
        assert proc.returncode == 0
        assert "warning:" in proc.stderr
        assert "opaque label" in proc.stderr

    def test_errors_go_to_stderr_not_stdout(self):
        proc = run_cli("range", "A^", "--i", "0")
        assert proc.stdout == ""
        assert proc.stderr.startswith("error:")
