import csv
import json
import unittest

import numpy as np

from hyperball.cli import main, EXIT_OK, EXIT_FAILED, EXIT_CONFIG
from hyperball.hermitian_core import boost, random_group_element
from hyperball.parsers import dump_matrix
from hyperball.series import example_series
from hyperball.spectral import hyperbolic_element, normal_form
from tests import TEST_OUTPUT_DIR


def write_json(name, obj):
    path = TEST_OUTPUT_DIR.joinpath(name)
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


def read_output(name):
    return TEST_OUTPUT_DIR.joinpath(name).read_text(encoding="utf-8")


class TestMatrixCommands(unittest.TestCase):
    def test_validate(self):
        identity = write_json("identity.json", dump_matrix(np.eye(3)))
        self.assertEqual(main(["--output", str(TEST_OUTPUT_DIR.joinpath("validate.json")), "validate",
                               "--matrix", identity]), EXIT_OK)
        self.assertTrue(json.loads(read_output("validate.json"))["valid"])
        scaled = write_json("scaled.json", dump_matrix(2.0 * np.eye(3)))
        self.assertEqual(main(["--output", str(TEST_OUTPUT_DIR.joinpath("validate.json")), "validate",
                               "--matrix", scaled]), EXIT_FAILED)
        self.assertFalse(json.loads(read_output("validate.json"))["valid"])

    def test_validate_envelope(self):
        path = write_json("boost.json", boost(2, 0.4).to_dict())
        self.assertEqual(main(["--output", str(TEST_OUTPUT_DIR.joinpath("envelope.json")), "validate",
                               "--matrix", path]), EXIT_OK)

    def test_classify(self):
        path = write_json("normal.json", dump_matrix(normal_form(2.0).matrix))
        out = TEST_OUTPUT_DIR.joinpath("classify.json")
        self.assertEqual(main(["--output", str(out), "classify", "--matrix", path]), EXIT_OK)
        report = json.loads(read_output("classify.json"))
        self.assertEqual(report["kind"], "Hyperbolic")
        self.assertAlmostEqual(report["lambda"], 2.0)

    def test_positional_matrix(self):
        identity = write_json("identity_positional.json", dump_matrix(np.eye(3)))
        out = str(TEST_OUTPUT_DIR.joinpath("positional.json"))
        self.assertEqual(main(["--output", out, "validate", identity]), EXIT_OK)
        self.assertTrue(json.loads(read_output("positional.json"))["valid"])
        normal = write_json("normal_positional.json", dump_matrix(normal_form(3.0).matrix))
        self.assertEqual(main(["--output", out, "classify", normal]), EXIT_OK)
        self.assertAlmostEqual(json.loads(read_output("positional.json"))["lambda"], 3.0)
        self.assertEqual(main(["--output", out, "classify", normal, "--matrix", normal]), EXIT_OK)
        self.assertEqual(main(["classify", normal, "--matrix", identity]), EXIT_CONFIG)
        self.assertEqual(main(["validate"]), EXIT_CONFIG)

    def test_bad_input(self):
        missing = str(TEST_OUTPUT_DIR.joinpath("does_not_exist.json"))
        self.assertEqual(main(["classify", "--matrix", missing]), EXIT_CONFIG)
        not_square = write_json("not_square.json", [[[1, 0], [0, 0]]])
        self.assertEqual(main(["classify", "--matrix", not_square]), EXIT_CONFIG)
        scaled = write_json("scaled_classify.json", dump_matrix(2.0 * np.eye(3)))
        self.assertEqual(main(["classify", "--matrix", scaled]), EXIT_CONFIG)


class TestGeometryCommands(unittest.TestCase):
    def test_bs_check(self):
        out = TEST_OUTPUT_DIR.joinpath("bs.json")
        self.assertEqual(main(["--output", str(out), "bs-check", "--k", "1", "--l", "2"]), EXIT_OK)
        report = json.loads(read_output("bs.json"))
        self.assertEqual(report["expected_theta_loop_1"], -6)

    def test_bs_check_normal_form(self):
        out = TEST_OUTPUT_DIR.joinpath("bs_normal.json")
        self.assertEqual(main(["--output", str(out), "bs-check", "--k", "1", "--l", "1", "--lambda", "2"]), EXIT_OK)
        report = json.loads(read_output("bs_normal.json"))
        self.assertLess(report["legendrian_residual"], 1e-8)
        self.assertAlmostEqual(report["bs"]["theta_loop_1"], -3.0, places=6)
        self.assertAlmostEqual(report["lambda"], 2.0)

    def test_bs_check_matrix(self):
        rng = np.random.default_rng(22)
        g = hyperbolic_element(2.5, random_group_element(rng, max_boost=0.8))
        path = write_json("conjugated.json", dump_matrix(g.matrix))
        out = TEST_OUTPUT_DIR.joinpath("bs_matrix.json")
        self.assertEqual(main(["--output", str(out), "bs-check", "--k", "1", "--l", "2", "--matrix", path]), EXIT_OK)
        report = json.loads(read_output("bs_matrix.json"))
        self.assertAlmostEqual(report["lambda"], 2.5)
        self.assertAlmostEqual(report["bs"]["theta_loop_1"], -6.0, places=6)
        identity = write_json("identity_bs.json", dump_matrix(np.eye(3)))
        self.assertEqual(main(["bs-check", "--matrix", identity]), EXIT_CONFIG)

    def test_kernel_check(self):
        out = TEST_OUTPUT_DIR.joinpath("kernel.json")
        self.assertEqual(main(["--output", str(out), "kernel-check", "--k", "1", "--quad-rad", "48",
                               "--quad-ang", "32"]), EXIT_OK)
        report = json.loads(read_output("kernel.json"))
        self.assertLess(report["kernel_series_rel_error"], 1e-8)
        self.assertEqual(sorted(report["reproducing_residual"]), ["F_0,0,1", "F_1,1,1"])

    def test_constants(self):
        out = TEST_OUTPUT_DIR.joinpath("constants.json")
        self.assertEqual(main(["--output", str(out), "constants", "--no-empirical"]), EXIT_OK)
        report = json.loads(read_output("constants.json"))
        self.assertEqual(report["c1_sum"], "-1/630")
        self.assertEqual(report["c1_residue"], "-1/140")
        self.assertEqual(report["c1_closed_form"], "-1/140")
        self.assertNotIn("C_empirical", report)
        self.assertEqual(len(report["C_beta"]), 2)


class TestSeriesCommands(unittest.TestCase):
    def test_series_csv(self):
        out = TEST_OUTPUT_DIR.joinpath("series.csv")
        self.assertEqual(main(["--output", str(out), "--format", "csv", "series", "--shells", "3"]), EXIT_OK)
        with out.open("r", encoding="utf-8") as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 4)
        self.assertIn("cauchy_gap", rows[0])
        self.assertEqual(rows[-1]["shell"], "3")

    def test_series_from_file(self):
        path = write_json("series_spec.json", example_series(1, 2, "cyclic", max_word_length=2).to_dict())
        out = TEST_OUTPUT_DIR.joinpath("series_file.json")
        self.assertEqual(main(["--output", str(out), "series", "--spec", path]), EXIT_OK)
        self.assertEqual(len(json.loads(read_output("series_file.json"))), 1)

    def test_bad_series(self):
        config = example_series(1, 1, "cyclic", max_word_length=2).to_dict()["obj"]
        config["gamma0"] = dump_matrix(-normal_form(2.0).matrix)
        path = write_json("bad_series.json", config)
        self.assertEqual(main(["series", "--spec", path]), EXIT_CONFIG)
        self.assertEqual(main(["series", "--spec", write_json("no_lattice.json", {"k": 1})]), EXIT_CONFIG)

    def test_probe(self):
        out = TEST_OUTPUT_DIR.joinpath("probe.json")
        self.assertEqual(main(["--output", str(out), "probe", "--shells", "2", "--k-max", "2", "--samples", "2"]),
                         EXIT_OK)
        rows = json.loads(read_output("probe.json"))
        self.assertEqual(len(rows), 4)
        self.assertEqual(sorted(rows[0].keys()), ["abs_theta", "cauchy_gap", "k", "point_id"])


class TestSuiteCommand(unittest.TestCase):
    def test_quick_suite_is_independent_of_threads(self):
        outputs = []
        for threads in ("1", "4"):
            out = TEST_OUTPUT_DIR.joinpath(f"suite_{threads}.json")
            self.assertEqual(main(["--output", str(out), "--threads", threads, "suite", "--seed", "7", "--quick"]),
                             EXIT_OK)
            outputs.append(out.read_bytes())
        self.assertEqual(outputs[0], outputs[1])
        rows = json.loads(outputs[0])
        self.assertTrue(all(r["passed"] for r in rows))
        self.assertIn("curvature_of_theta", [r["key"] for r in rows])
        self.assertNotIn("orthonormal_basis", [r["key"] for r in rows])


if __name__ == '__main__':
    unittest.main()
