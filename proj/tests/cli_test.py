"""End-to-end checks of the tdpkit command line: exit codes, report schemas,
diagnostic positions and byte-stable output."""

import json
import pathlib
import subprocess
import sys
import tempfile
import unittest

import jsonschema

TOOL = pathlib.Path(sys.argv[1])
SCHEMAS = pathlib.Path(sys.argv[2])
DATA = pathlib.Path(sys.argv[3])


def run(*args):
    p = subprocess.run([str(TOOL), *map(str, args)], capture_output=True, text=True, timeout=300)
    return p.returncode, p.stdout, p.stderr


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def position(path, needle, occurrence=0):
    lines = path.read_text().splitlines()
    seen = 0
    for n, line in enumerate(lines, 1):
        col = line.find(needle)
        while col >= 0:
            if seen == occurrence:
                return n, col + 1
            seen += 1
            col = line.find(needle, col + 1)
    raise AssertionError(f"{needle} not in {path}")


class Reports(unittest.TestCase):
    def report(self, command, *args, expect):
        rc, out, err = run(command, *args)
        self.assertEqual(rc, expect, err)
        rep = json.loads(out)
        jsonschema.validate(rep, schema(command))
        return rep

    def test_check_worked_pair(self):
        rep = self.report("check", DATA / "d1_pair.json", expect=0)
        self.assertEqual(set(rep["report"]["conditions"].values()), {"pass"})
        self.assertEqual(rep["report"]["shape"], [1, 1])
        self.assertEqual(len(rep["standard_orderings"]), 4)

    def test_check_identity_pair_is_reducible(self):
        rep = self.report("check", DATA / "identity_pair.json", expect=1)
        self.assertEqual(rep["report"]["conditions"]["i"], "pass")
        self.assertIn("fail", rep["report"]["conditions"].values())

    def test_check_reducible_diagonal_pair(self):
        with tempfile.TemporaryDirectory() as tmp:
            f = pathlib.Path(tmp) / "diag.json"
            f.write_text(json.dumps({"A": [["1", "0"], ["0", "2"]], "Astar": [["1", "0"], ["0", "2"]]}))
            rep = self.report("check", f, expect=1)
        self.assertEqual(rep["report"]["conditions"]["iv"], "fail")
        self.assertIn("iv", rep["report"]["witnesses"])

    def test_generate_degenerate(self):
        rep = self.report("generate", DATA / "degenerate_qracah.json", expect=1)
        self.assertEqual(rep["error"], "DegenerateSpectrum")
        self.assertEqual(rep["sequences"]["degenerate"], {"sequence": "theta", "i": 0, "j": 2})

    def test_generate_then_fit(self):
        gen = self.report("generate", DATA / "qracah_d3.json", expect=0)
        with tempfile.TemporaryDirectory() as tmp:
            f = pathlib.Path(tmp) / "seq.json"
            f.write_text(json.dumps(gen["sequences"] | {"field": {"kind": "rational"}}))
            rep = self.report("qracah-fit", f, expect=0)
        self.assertEqual(rep["fit"]["status"], "fitted")
        self.assertEqual(rep["fit"]["beta"], gen["parameters"]["beta"])
        wanted = {k: gen["parameters"][k] for k in ("q", "a", "b", "c", "a_star", "b_star", "c_star")}
        found = [{k: s[k] for k in wanted} for s in rep["fit"]["solutions"]]
        self.assertIn(wanted, found)

    def test_construct_params_and_mu(self):
        rep = self.report("construct", DATA / "construct_d3.json", expect=0)
        self.assertEqual(rep["parameters"]["zeta"], ["1 mod 13", "3 mod 13", "12 mod 13", "10 mod 13"])
        with tempfile.TemporaryDirectory() as tmp:
            f = pathlib.Path(tmp) / "pair.json"
            pair = {"field": rep["field"], "A": rep["A"], "Astar": rep["Astar"]}
            jsonschema.validate(pair, schema("pair-input"))
            f.write_text(json.dumps(pair))
            params = self.report("params", f, expect=0)
            self.assertTrue(params["conditions"]["passed"])
            pair["polynomials"] = ["x1*x2 - x2*x1", "3*x1^2*x2 - 1/2*x3", "1"]
            f.write_text(json.dumps(pair))
            mu = self.report("mu-test", f, expect=0)
        self.assertTrue(mu["all_verified"])
        self.assertEqual(mu["results"][0]["scalar"], "0 mod 13")
        self.assertEqual(mu["zeta"], params["parameters"]["zeta"])

    def test_mu_default_polynomials(self):
        rep = self.report("mu-test", DATA / "d1_pair.json", expect=0)
        self.assertEqual([r["polynomial"] for r in rep["results"]], ["1", "x1", "x1^2", "x1^3"])
        self.assertEqual(rep["xi"], ["-1"])

    def test_reports_are_byte_identical(self):
        with tempfile.TemporaryDirectory() as tmp:
            a, b = pathlib.Path(tmp) / "a.json", pathlib.Path(tmp) / "b.json"
            for out in (a, b):
                rc, _, err = run("construct", DATA / "construct_d3.json", "--seed", 7, "--out", out)
                self.assertEqual(rc, 0, err)
            self.assertEqual(a.read_bytes(), b.read_bytes())
            self.assertEqual(json.loads(a.read_text())["seed"], 7)


class InputErrors(unittest.TestCase):
    def diagnostic(self, *args):
        rc, out, err = run(*args)
        self.assertEqual(rc, 2)
        self.assertEqual(out, "")
        return err

    def test_bad_scalar_position(self):
        f = DATA / "bad_scalar.json"
        line, col = position(f, '"1/0"')
        self.assertIn(f"{f}:{line}:{col}:", self.diagnostic("check", f))

    def test_bad_polynomial_position(self):
        f = DATA / "bad_polynomial.json"
        line, col = position(f, '"x1 + "')
        self.assertIn(f"{f}:{line}:{col + 6}:", self.diagnostic("mu-test", f))

    def test_malformed_json_position(self):
        f = DATA / "malformed.json"
        self.assertIn(f"{f}:3:", self.diagnostic("check", f))

    def test_missing_key_and_field_conflict(self):
        with tempfile.TemporaryDirectory() as tmp:
            f = pathlib.Path(tmp) / "x.json"
            f.write_text('{"A": [["0"]]}')
            self.assertIn("missing required key \"Astar\"", self.diagnostic("check", f))
        self.assertIn("disagrees", self.diagnostic("check", DATA / "d1_pair.json", "--field", "gf:13"))

    def test_usage_errors(self):
        self.diagnostic()
        self.diagnostic("frobnicate")
        self.diagnostic("check", DATA / "does_not_exist.json")
        self.diagnostic("corpus", "--out", "/nonexistent/dir", "--max-instances", "3")


class Corpus(unittest.TestCase):
    def test_deterministic_manifest(self):
        with tempfile.TemporaryDirectory() as tmp:
            dirs = [pathlib.Path(tmp) / n for n in ("a", "b")]
            for d in dirs:
                rc, out, err = run("corpus", "--out", d, "--seed", 11)
                self.assertEqual(rc, 0, err)
                jsonschema.validate(json.loads(out), schema("corpus"))
            ma, mb = (d / "manifest.json" for d in dirs)
            self.assertEqual(ma.read_bytes(), mb.read_bytes())
            manifest = json.loads(ma.read_text())
            jsonschema.validate(manifest, schema("manifest"))
            keys = [i["key"] for i in manifest["instances"]]
            self.assertEqual(keys, sorted(keys))
            inst_schema = schema("instance")
            for entry in manifest["instances"]:
                jsonschema.validate(json.loads((dirs[0] / entry["file"]).read_text()), inst_schema)

    def test_empty_grid_and_cap(self):
        with tempfile.TemporaryDirectory() as tmp:
            rc, _, err = run("corpus", DATA / "empty_grid.json", "--out", tmp)
            self.assertEqual(rc, 0, err)
            self.assertEqual(json.loads((pathlib.Path(tmp) / "manifest.json").read_text())["instances"], [])
            rc, _, err = run("corpus", "--out", tmp, "--max-instances", 5)
            self.assertEqual(rc, 2)
            self.assertIn("CapExceeded", err)


if __name__ == "__main__":
    unittest.main(argv=[sys.argv[0], "-v"])
