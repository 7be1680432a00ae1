"""End-to-end checks of the smallball command line.

Usage: cli_test.py <smallball binary> <report schema>
"""

import csv
import io
import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BINARY = None
SCHEMA = None

# One representative invocation per subcommand.
SAMPLES = {
    "dist": ["--entries", "1,2,3"],
    "rho": ["--entries", "1,1,1,1"],
    "ball": ["--entries", "1,1,1,1,1", "--radius", "3/2"],
    "ball2d": ["--entries", "1;0,0;1,1;1", "--radius", "1"],
    "flat": ["--entries", "1;0,2;0,0;1"],
    "stanley": ["--n", "3,5,7"],
    "esseen": ["--entries", "1,2,3,4", "--beta", "1"],
    "fp-bound": ["--entries", "1,2,3"],
    "levels": ["--entries", "1,2,3", "--p", "101", "--mode", "illustrative"],
    "rl": ["--entries", "1,2,3,4"],
    "lcd": ["--entries", "1,2,3"],
    "rv-bound": ["--entries", "1,1,1,1,1,1,1,1", "--scale", "2", "--beta", "1"],
    "recurrence": ["--entries", "1,2,3", "--t", "0.1"],
    "gap-fit": ["--entries", "1,2,3,1001,1002"],
    "gap-forward": ["--generators", "1,37", "--bounds", "3,2", "--n", "12", "--seed", "4"],
    "census": ["--n", "4", "--m", "3"],
    "geo-rho": ["--x", "1/2", "--n", "6"],
    "quad-rho": ["--matrix", "all-ones:4"],
    "decouple": ["--matrix", "all-ones:4", "--first", "1,2"],
    "quad-gen": ["--kind", "lowrank", "--n", "8"],
    "multi-rho": ["--poly", "1: 1 2; 1: 3 4", "--x", "1"],
    "parity-cor": ["--poly", "1: 1", "--n", "6"],
    "singularity": ["--n", "6", "--trials", "500", "--seed", "3"],
    "universal": ["--d", "6", "--n", "8", "--k", "1", "--trials", "500"],
    "lsv": ["--n", "10", "--trials", "50", "--seed", "2"],
    "edelman": [],
    "common-roots": ["--n", "7", "--trials", "2000", "--seed", "1"],
}

# Commands whose output depends on the worker count if scheduling leaks.
PARALLEL = {
    "singularity": ["--n", "7", "--trials", "3000", "--seed", "11"],
    "universal": ["--d", "12", "--n", "10", "--k", "2", "--trials", "3000", "--seed", "5"],
    "lsv": ["--n", "12", "--trials", "200", "--seed", "9", "--format", "csv"],
    "common-roots": ["--n", "9", "--trials", "5000", "--seed", "2"],
    "census": ["--n", "5", "--m", "5"],
    "quad-rho": ["--matrix", "random:12", "--seed", "7"],
    "parity-cor": ["--poly", "1: 1 2; 2: 3; -1: 4 5 6", "--n", "14"],
    "fp-bound": ["--entries", "3,5,7,11"],
}


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("SMALLBALL_WORKERS", None)
    if env:
        full_env.update(env)
    return subprocess.run([BINARY, *args], capture_output=True, text=True, env=full_env)


def report(*args):
    proc = run(*args)
    if proc.returncode != 0:
        raise AssertionError(f"{args} exited {proc.returncode}: {proc.stderr}")
    data = json.loads(proc.stdout)
    jsonschema.validate(data, SCHEMA)
    return data


def rows(text):
    return list(csv.reader(io.StringIO(text)))


class Reports(unittest.TestCase):
    def test_every_subcommand_validates(self):
        for name, args in SAMPLES.items():
            with self.subTest(name=name):
                data = report(name, *args)
                self.assertEqual(data["subcommand"], name)
                self.assertEqual(data["status"], "ok")
                self.assertNotIn("wall_clock", data)

    def test_rho_example(self):
        self.assertEqual(report("rho", "--entries", "1,1,1,1")["result"]["rho"], "3/8")

    def test_singularity_exact_example(self):
        data = report("singularity", "--n", "2", "--mode", "exact")
        self.assertEqual(data["result"]["exact"], "1/2")
        self.assertEqual(data["result"]["trials"], 16)

    def test_inputs_seed_and_version(self):
        data = report("singularity", "--n", "4", "--trials", "100", "--seed", "123")
        self.assertEqual(data["seed"], 123)
        self.assertEqual(data["inputs"]["n"], "4")
        self.assertEqual(data["schema_version"], "1.0.0")
        self.assertIsNone(report("rho", "--entries", "1")["seed"])

    def test_timing_is_opt_in(self):
        data = report("rho", "--entries", "1,2", "--timing")
        self.assertGreaterEqual(data["wall_clock"], 0)

    def test_sweep_json_validates(self):
        data = report("sweep", "--command", "rho", "--grid", "entries=1,1|1,2", "--format", "json")
        self.assertEqual(data["result"]["cells"], 2)


class ExitCodes(unittest.TestCase):
    def test_empty_multiset_is_a_validation_error(self):
        self.assertEqual(run("rho", "--entries", "").returncode, 2)

    def test_malformed_values(self):
        self.assertEqual(run("ball", "--entries", "1,2", "--radius", "abc").returncode, 2)
        self.assertEqual(run("singularity", "--n", "x").returncode, 2)
        self.assertEqual(run("rho", "--bogus", "1").returncode, 2)
        self.assertEqual(run("nosuch").returncode, 2)
        self.assertEqual(run().returncode, 2)

    def test_budget_errors(self):
        proc = run("singularity", "--n", "9", "--mode", "exact")
        self.assertEqual(proc.returncode, 3)
        self.assertIn("2^26", proc.stderr)
        self.assertEqual(run("quad-rho", "--matrix", "all-ones:30").returncode, 3)

    def test_soundness_failure_writes_report_and_exits_4(self):
        proc = run("multi-rho", "--poly", "1: 1 2; 1: 3 4", "--x", "1", "--c", "0.01")
        self.assertEqual(proc.returncode, 4)
        data = json.loads(proc.stdout)
        jsonschema.validate(data, SCHEMA)
        self.assertEqual(data["status"], "soundness_failure")
        self.assertIn("message", data)

    def test_version(self):
        proc = run("--version")
        self.assertEqual(proc.returncode, 0)
        self.assertIn("1.0.0", proc.stdout)


class Config(unittest.TestCase):
    def write(self, text):
        f = tempfile.NamedTemporaryFile("w", suffix=".conf", delete=False)
        f.write(text)
        f.close()
        self.addCleanup(os.unlink, f.name)
        return f.name

    def test_file_fills_and_flags_win(self):
        path = self.write("# comment\nentries = 1,1\nxi = lazy:1/2\n")
        data = report("rho", "--config", path)
        self.assertEqual(data["inputs"]["entries"], "1,1")
        self.assertEqual(data["result"]["rho"], "3/8")
        data = report("rho", "--config", path, "--entries", "1,2,4")
        self.assertEqual(data["inputs"]["entries"], "1,2,4")
        self.assertEqual(data["inputs"]["xi"], "lazy:1/2")
        self.assertEqual(data["inputs"]["atom-budget"], "10000000")

    def test_unknown_key_rejected(self):
        path = self.write("entries = 1\ncolour = blue\n")
        proc = run("rho", "--config", path)
        self.assertEqual(proc.returncode, 2)
        self.assertIn("colour", proc.stderr)

    def test_global_keys_in_file(self):
        path = self.write("entries = 1,2\nformat = csv\n")
        proc = run("rho", "--config", path)
        self.assertEqual(proc.returncode, 0)
        self.assertEqual(rows(proc.stdout)[0], ["key", "value"])
        proc = run("rho", "--config", path, "--format", "json")
        json.loads(proc.stdout)

    def test_output_file(self):
        out = tempfile.NamedTemporaryFile(suffix=".json", delete=False)
        out.close()
        self.addCleanup(os.unlink, out.name)
        proc = run("rho", "--entries", "1,1", "--output", out.name)
        self.assertEqual(proc.returncode, 0)
        self.assertEqual(proc.stdout, "")
        with open(out.name) as f:
            self.assertEqual(json.load(f)["result"]["rho"], "1/2")


class Determinism(unittest.TestCase):
    def test_byte_identical_across_workers_and_runs(self):
        for name, args in PARALLEL.items():
            with self.subTest(name=name):
                one = run(name, *args, "--workers", "1")
                three = run(name, *args, "--workers", "3")
                again = run(name, *args, env={"SMALLBALL_WORKERS": "2"})
                self.assertEqual(one.returncode, 0, one.stderr)
                self.assertEqual(one.stdout, three.stdout)
                self.assertEqual(one.stdout, again.stdout)

    def test_seed_changes_mc_output(self):
        a = report("singularity", "--n", "6", "--trials", "2000", "--seed", "1")
        b = report("singularity", "--n", "6", "--trials", "2000", "--seed", "2")
        self.assertNotEqual(a["result"]["successes"], b["result"]["successes"])


class Csv(unittest.TestCase):
    def test_headers(self):
        cases = {
            "dist": (SAMPLES["dist"], ["value", "numerator", "denominator"]),
            "lsv": (SAMPLES["lsv"], ["trial", "sigma_min_scaled"]),
            "census": (SAMPLES["census"], ["rho0", "count", "bound_shape"]),
            "esseen": (SAMPLES["esseen"], ["bound", "exact", "ratio"]),
            "fp-bound": (SAMPLES["fp-bound"], ["bound", "exact", "ratio"]),
        }
        for name, (args, header) in cases.items():
            with self.subTest(name=name):
                proc = run(name, *args, "--format", "csv")
                self.assertEqual(proc.returncode, 0, proc.stderr)
                self.assertEqual(rows(proc.stdout)[0], header)

    def test_dist_rows(self):
        proc = run("dist", "--entries", "1,1", "--format", "csv")
        self.assertEqual(rows(proc.stdout)[1:], [["-2", "1", "4"], ["0", "1", "2"], ["2", "1", "4"]])

    def test_lsv_has_one_row_per_trial(self):
        proc = run("lsv", "--n", "5", "--trials", "17", "--format", "csv")
        self.assertEqual(len(rows(proc.stdout)), 18)


class Sweep(unittest.TestCase):
    def test_stanley_scan(self):
        proc = run("sweep", "--command", "stanley", "--grid", "n=3:101:2")
        self.assertEqual(proc.returncode, 0, proc.stderr)
        table = rows(proc.stdout)
        self.assertEqual(len(table) - 1, 50)
        header = table[0]
        self.assertEqual(header[:3], ["n", "status", "message"])
        ns = [int(r[0]) for r in table[1:]]
        self.assertEqual(ns, list(range(3, 102, 2)))
        self.assertTrue(all(r[1] == "ok" for r in table[1:]))

    def test_empty_grid(self):
        proc = run("sweep", "--command", "stanley")
        self.assertEqual(proc.returncode, 0)
        self.assertEqual(proc.stdout, "status,message\n")
        proc = run("sweep", "--command", "stanley", "--grid", "n=")
        self.assertEqual(proc.stdout, "n,status,message\n")

    def test_census_rows_are_monotone(self):
        proc = run("sweep", "--command", "census", "--grid", "n=3,4,5", "--set", "m=6")
        table = rows(proc.stdout)
        header = table[0]
        count_cols = [i for i, h in enumerate(header) if h.startswith("rows.") and h.endswith(".count")]
        rho_cols = [i for i, h in enumerate(header) if h.startswith("rows.") and h.endswith(".rho0")]
        self.assertEqual(len(table), 4)
        for r in table[1:]:
            self.assertEqual(r[1], "ok")
            from fractions import Fraction

            pairs = sorted((Fraction(r[i]), int(r[j])) for i, j in zip(rho_cols, count_cols))
            counts = [c for _, c in pairs]
            self.assertEqual(counts, sorted(counts, reverse=True))

    def test_partial_failures_are_flagged(self):
        proc = run("sweep", "--command", "singularity", "--grid", "n=2,9", "--set", "mode=exact")
        self.assertEqual(proc.returncode, 0)
        table = rows(proc.stdout)
        self.assertEqual([r[1] for r in table[1:]], ["ok", "budget_error"])
        self.assertIn("2^26", table[2][2])

    def test_cartesian_order_and_unknown_keys(self):
        proc = run("sweep", "--command", "rho", "--grid", "entries=1|1,2", "--grid", "xi=bernoulli|boolean")
        table = rows(proc.stdout)
        self.assertEqual([r[:2] for r in table[1:]],
                         [["1", "bernoulli"], ["1", "boolean"], ["1,2", "bernoulli"], ["1,2", "boolean"]])
        self.assertEqual(run("sweep", "--command", "rho", "--grid", "nope=1,2").returncode, 2)
        self.assertEqual(run("sweep", "--command", "nosuch").returncode, 2)

    def test_grid_cap(self):
        proc = run("sweep", "--command", "rho", "--grid", "entries=1:200", "--grid", "atom-budget=1:100")
        self.assertEqual(proc.returncode, 3)


if __name__ == "__main__":
    BINARY = sys.argv[1]
    with open(sys.argv[2]) as f:
        SCHEMA = json.load(f)
    unittest.main(argv=[sys.argv[0], "-v"])
