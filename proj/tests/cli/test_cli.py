"""End-to-end checks of the apdep command line.

Usage: test_cli.py APDEP_BINARY SAMPLES_DIR SCHEMAS_DIR
"""

import json
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

BIN, SAMPLES, SCHEMAS = (Path(p) for p in sys.argv[1:4])
del sys.argv[1:4]


def load_registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(resources)


REGISTRY = load_registry()


def validate(doc, name):
    schema = REGISTRY.contents(f"urn:apdep:{name}")
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def run(*args):
    proc = subprocess.run([str(BIN), *map(str, args)], capture_output=True, text=True, timeout=120)
    return proc.returncode, proc.stdout, proc.stderr


def sample(name):
    return SAMPLES / name


class Schemas(unittest.TestCase):
    def test_rejects_malformed_documents(self):
        with self.assertRaises(jsonschema.ValidationError):
            validate({"steps": [{"id": 1, "rule": "A9", "atom": "dep[1](x ; y)"}]}, "proof")
        with self.assertRaises(jsonschema.ValidationError):
            validate({"results": [{"lhs": [], "rhs": "z", "deletions": 1, "error": 0.25}]}, "mine")


class Check(unittest.TestCase):
    def test_squares_quarter(self):
        rc, out, _ = run("check", sample("squares.csv"), "dep[1/4](x ; y)")
        self.assertEqual(rc, 0)
        self.assertIn("satisfied: dep[1/4](x ; y)", out)
        self.assertIn("minimal error: 1/4", out)
        self.assertIn("witness rows: 4", out)

    def test_squares_json(self):
        rc, out, _ = run("check", sample("squares.csv"), "dep[1/4](x ; y)", "--json")
        self.assertEqual(rc, 0)
        doc = json.loads(out)
        validate(doc, "check")
        self.assertEqual(doc["witnessRows"], [4])
        self.assertEqual(doc["minimalError"], "1/4")

    def test_salaries_exact_fails(self):
        rc, out, _ = run("check", sample("salaries.csv"), "dep[0](Department ; Salary)")
        self.assertEqual(rc, 1)
        self.assertIn("violated", out)
        self.assertIn("minimal error: 1/6", out)

    def test_empty_body(self):
        rc, out, _ = run("check", sample("header_only.csv"), "dep[0](x ; y)")
        self.assertEqual(rc, 0)
        self.assertIn("minimal error: 0/1", out)

    def test_set_semantics_reports_drops(self):
        with tempfile.TemporaryDirectory() as d:
            path = Path(d) / "dup.csv"
            path.write_text("x,y\n0,0\n0,0\n0,1\n")
            rc, out, err = run("check", path, "dep[1/3](x ; y)")
            self.assertEqual(rc, 0)
            rc, out, err = run("check", path, "dep[1/3](x ; y)", "--set-semantics")
            self.assertEqual(rc, 1)
            self.assertIn("dropped 1 duplicate", err)
            self.assertIn("collapsed duplicates: 1", out)

    def test_decimal_weight(self):
        rc, out, _ = run("check", sample("squares.csv"), "dep[0.25](x ; y)", "--json")
        self.assertEqual(rc, 0)
        self.assertEqual(json.loads(out)["atom"], "dep[1/4](x ; y)")

    def test_errors_exit_2(self):
        self.assertEqual(run("check", sample("squares.csv"), "dep[5/4](x ; y)")[0], 2)
        self.assertEqual(run("check", sample("squares.csv"), "dep[1](w ; y)")[0], 2)
        self.assertEqual(run("check", sample("missing.csv"), "dep[1](x ; y)")[0], 2)
        self.assertEqual(run("check")[0], 2)
        self.assertEqual(run("frobnicate")[0], 2)
        rc, _, err = run("check", sample("squares.csv"), "dep[1/4](x y)")
        self.assertEqual(rc, 2)
        self.assertIn("column", err)


class Entail(unittest.TestCase):
    def test_transitivity(self):
        rc, out, _ = run("entail", sample("transitivity.sigma"), "dep[3/4](x ; z)")
        self.assertEqual(rc, 0)
        self.assertIn("derivable", out)
        self.assertIn("minimal weight: 3/4", out)

    def test_reflexivity(self):
        rc, out, _ = run("entail", sample("empty.sigma"), "dep[0](x y ; x)", "--json")
        self.assertEqual(rc, 0)
        doc = json.loads(out)
        validate(doc, "entail")
        self.assertTrue(doc["derivable"])
        self.assertEqual(doc["minimalWeight"], "0/1")

    def test_not_derivable(self):
        rc, out, _ = run("entail", sample("empty.sigma"), "dep[1/2](x ; y)", "--json", "--oracle")
        self.assertEqual(rc, 1)
        doc = json.loads(out)
        validate(doc, "entail")
        self.assertFalse(doc["derivable"])
        self.assertEqual(doc["minimalWeight"], "1/1")
        self.assertFalse(doc["oracle"]["entailed"])

    def test_oracle_budget_is_an_error(self):
        rc, _, err = run("entail", sample("transitivity.sigma"), "dep[0](x ; z)", "--oracle",
                         "--max-rows", "12", "--domain-size", "9")
        self.assertEqual(rc, 2)
        self.assertIn("budget", err)


class Prove(unittest.TestCase):
    def test_proof_json_validates_and_rechecks(self):
        rc, out, _ = run("prove", sample("transitivity.sigma"), "dep[3/4](x ; z)", "--json")
        self.assertEqual(rc, 0)
        doc = json.loads(out)
        validate(doc, "entail")
        validate(doc["proof"], "proof")
        self.assertEqual(doc["proof"]["steps"][-1]["atom"], "dep[3/4](x ; z)")

    def test_proof_file(self):
        with tempfile.TemporaryDirectory() as d:
            path = Path(d) / "proof.json"
            rc, _, _ = run("prove", sample("transitivity.sigma"), "dep[1](x ; z)", "-o", path)
            self.assertEqual(rc, 0)
            validate(json.loads(path.read_text()), "proof")


class Countermodel(unittest.TestCase):
    def test_five_row_team(self):
        rc, out, _ = run("countermodel", sample("empty.sigma"), "dep[1/2](x ; y)")
        self.assertEqual(rc, 0)
        self.assertIn("countermodel (x-tau, 5 rows)", out)
        self.assertIn("x,y\n0,0\n0,1\n0,2\n0,3\n0,4\n", out)

    def test_files_and_json(self):
        with tempfile.TemporaryDirectory() as d:
            team = Path(d) / "team.csv"
            report = Path(d) / "report.json"
            rc, out, _ = run("countermodel", sample("transitivity.sigma"), "dep[1/2](x ; z)",
                             "-o", team, "--report", report, "--json")
            self.assertEqual(rc, 0)
            validate(json.loads(out), "countermodel")
            rep = json.loads(report.read_text())
            validate(rep, "report")
            self.assertEqual(len(rep["sigmaChecks"]), 2)
            # The exported team is itself a valid input to check.
            rc, _, _ = run("check", team, "dep[1/2](x ; z)")
            self.assertEqual(rc, 1)
            rc, _, _ = run("check", team, "dep[1/4](x ; y)")
            self.assertEqual(rc, 0)

    def test_inline_team_json(self):
        rc, out, _ = run("countermodel", sample("empty.sigma"), "dep[0](x ; y)", "--json")
        self.assertEqual(rc, 0)
        doc = json.loads(out)
        validate(doc, "countermodel")
        validate(doc["team"], "team")

    def test_derivable_cases(self):
        rc, out, _ = run("countermodel", sample("empty.sigma"), "dep[1](x ; y)")
        self.assertEqual(rc, 1)
        self.assertIn("derivable; no countermodel", out)
        rc, out, _ = run("countermodel", sample("exact.sigma"), "dep[0](x ; y)", "--json")
        self.assertEqual(rc, 1)
        doc = json.loads(out)
        validate(doc, "countermodel")
        self.assertTrue(doc["derivable"])


class Mine(unittest.TestCase):
    def test_salaries(self):
        rc, out, _ = run("mine", sample("salaries.csv"), "--max-lhs", "1", "--threshold", "1/6")
        self.assertEqual(rc, 0)
        self.assertIn("Department → Salary 1 1/6", out.splitlines())

    def test_squares_constant(self):
        rc, out, _ = run("mine", sample("squares.csv"), "--max-lhs", "0", "--threshold", "1/4")
        self.assertEqual(rc, 0)
        self.assertIn("∅ → z 1 1/4", out.splitlines())

    def test_threshold_zero_lists_constant_columns(self):
        with tempfile.TemporaryDirectory() as d:
            path = Path(d) / "t.csv"
            path.write_text("k,v,w\n1,1,a\n1,2,a\n1,3,a\n")
            rc, out, _ = run("mine", path, "--max-lhs", "0", "--threshold", "0")
            self.assertEqual(rc, 0)
            self.assertEqual(out.splitlines(), ["∅ → k 0 0/1", "∅ → w 0 0/1"])

    def test_json_and_csv(self):
        rc, out, _ = run("mine", sample("salaries.csv"), "--max-lhs", "1", "--threshold", "0.2", "--json")
        self.assertEqual(rc, 0)
        validate(json.loads(out), "mine")
        rc, out, _ = run("mine", sample("salaries.csv"), "--max-lhs", "1", "--threshold", "1/6", "--csv")
        self.assertEqual(rc, 0)
        self.assertTrue(out.startswith("lhs,rhs,deletions,error\n"))
        self.assertIn("Department,Salary,1,1/6", out)

    def test_bad_threshold(self):
        self.assertEqual(run("mine", sample("salaries.csv"), "--threshold", "3/2")[0], 2)
        self.assertEqual(run("mine", sample("salaries.csv"), "--json", "--csv")[0], 2)


if __name__ == "__main__":
    unittest.main(verbosity=2)
