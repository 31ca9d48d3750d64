import contextlib
import io
import json
import os
import tempfile
import unittest

import numpy as np
import pandas as pd

from segcertify import cli, smoothing
from segcertify import io as segcert_io


def run(argv):
    """Run the command-line interface and capture its output."""
    output = io.StringIO()
    with contextlib.redirect_stdout(output), contextlib.redirect_stderr(
        io.StringIO()
    ):
        exit_code = cli.main(argv)
    return exit_code, output.getvalue()


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.directory.cleanup()

    def path(self, filename):
        return os.path.join(self.directory.name, filename)

    def write(self, filename, contents):
        with open(self.path(filename), "w", encoding="ascii") as file:
            file.write(contents)
        return self.path(filename)

    def read(self, filename):
        with open(self.path(filename), "rb") as file:
            return file.read()


class TestMain(CliTestCase):
    def test_without_arguments_returns_usage_error(self):
        self.assertEqual(cli.EXIT_USAGE, run([])[0])

    def test_unknown_command_returns_usage_error(self):
        self.assertEqual(cli.EXIT_USAGE, run(["plot"])[0])

    def test_version(self):
        exit_code, output = run(["--version"])
        self.assertEqual(cli.EXIT_OK, exit_code)
        self.assertTrue(output.strip())


class TestCertify(CliTestCase):
    def setUp(self):
        super().setUp()
        counts0 = np.zeros((10, 2), dtype=int)
        counts0[:, 0] = 10
        hits = np.array([100, 100, 100, 100, 100, 98, 97, 60, 50, 100])
        counts = np.column_stack([hits, 100 - hits])
        self.counts = self.path("counts.txt")
        segcert_io.write_counts_file(
            self.counts,
            smoothing.CountsMatrix(counts0, draws=10),
            smoothing.CountsMatrix(counts, draws=100),
        )

    def certify(self, *arguments):
        return run(["certify", "--counts", self.counts, *arguments])

    def test_prints_summary(self):
        exit_code, output = self.certify(
            "--sigma", "0.25", "--tau", "0.75", "--alpha", "0.001"
        )
        self.assertEqual(cli.EXIT_OK, exit_code)
        self.assertIn("R = 0.1686", output)
        self.assertIn("components = 10", output)
        self.assertIn("certified = 0.8000", output)
        self.assertIn("t = ", output)

    def test_writes_decisions_and_manifest(self):
        self.certify()
        decisions = pd.read_csv(
            f"{self.counts}.decisions.csv", dtype={"label": str}
        )
        self.assertEqual(10, len(decisions))
        self.assertEqual("~", decisions["label"][8])
        with open(
            segcert_io.manifest_path(f"{self.counts}.decisions.csv"),
            encoding="utf-8",
        ) as file:
            manifest = json.load(file)
        self.assertEqual("certify", manifest["command"])
        self.assertEqual(10, manifest["config"]["n0"])
        self.assertEqual(100, manifest["config"]["n"])

    def test_writes_labels(self):
        labels = self.path("labels.txt")
        self.certify("--labels-out", labels)
        with open(labels, encoding="ascii") as file:
            tokens = file.read().split()
        self.assertEqual(["0", "~", "~", "0"], tokens[6:])

    def test_zero_budget_equals_holm(self):
        holm = self.path("holm.csv")
        kfwer = self.path("kfwer.csv")
        self.certify("--out", holm)
        self.certify("--correction", "kfwer", "--budget", "0", "--out", kfwer)
        self.assertEqual(self.read("holm.csv"), self.read("kfwer.csv"))

    def test_budget_prints_note(self):
        _, output = self.certify("--correction", "kfwer", "--budget", "2")
        self.assertIn("up to 2 certified components may be wrong", output)

    def test_individual_certification(self):
        exit_code, output = self.certify("--algorithm", "indiv_class")
        self.assertEqual(cli.EXIT_OK, exit_code)
        self.assertIn("certified = 0.0000", output)

    def test_with_ground_truth_prints_metrics(self):
        truth = self.write("truth.txt", "0\n" * 9 + "*\n")
        _, output = self.certify("--truth", truth)
        self.assertIn("accuracy = 0.7778", output)
        self.assertIn("abstain_rate = 0.2222", output)
        self.assertIn("mean_iou = 0.7778", output)

    def test_invalid_threshold_returns_usage_error(self):
        self.assertEqual(cli.EXIT_USAGE, self.certify("--tau", "0.4")[0])

    def test_unknown_correction_returns_usage_error(self):
        exit_code = self.certify("--correction", "sidak")[0]
        self.assertEqual(cli.EXIT_USAGE, exit_code)

    def test_malformed_counts_return_data_error(self):
        counts = self.write(
            "bad.txt", "segcert-counts 1\nN=1 C=2 n0=1 n=2\n1 0 | 1 0\n"
        )
        exit_code = run(["certify", "--counts", counts])[0]
        self.assertEqual(cli.EXIT_DATA, exit_code)

    def test_missing_counts_return_data_error(self):
        exit_code = run(["certify", "--counts", self.path("none.txt")])[0]
        self.assertEqual(cli.EXIT_DATA, exit_code)


class TestToy(CliTestCase):
    def test_without_errors_everything_certifies(self):
        out = self.path("toy.csv")
        exit_code, _ = run(
            ["toy", "--preset", "custom", "--gamma", "0", "--reps", "3"]
            + ["--out", out]
        )
        self.assertEqual(cli.EXIT_OK, exit_code)
        frame = pd.read_csv(out)
        self.assertEqual(
            ["axis", "algorithm", "raw_rate", "smoothed_rate"],
            list(frame.columns),
        )
        self.assertEqual(4, len(frame))
        self.assertTrue((frame["raw_rate"] == 1.0).all())
        self.assertTrue(os.path.exists(segcert_io.manifest_path(out)))

    def test_writes_to_stdout(self):
        exit_code, output = run(
            ["toy", "--preset", "custom", "--reps", "2"]
            + ["--algorithms", "seg_certify_holm"]
        )
        self.assertEqual(cli.EXIT_OK, exit_code)
        self.assertTrue(output.startswith("axis,algorithm,"))

    def test_output_does_not_depend_on_threads(self):
        arguments = ["toy", "--preset", "fig3a"]
        arguments += ["--gamma", "0:0.04:0.01", "--reps", "3", "--seed", "5"]
        run(arguments + ["--threads", "1", "--out", self.path("one.csv")])
        run(arguments + ["--threads", "4", "--out", self.path("four.csv")])
        run(arguments + ["--threads", "1", "--out", self.path("again.csv")])
        self.assertEqual(self.read("one.csv"), self.read("four.csv"))
        self.assertEqual(self.read("one.csv"), self.read("again.csv"))

    def test_component_grid_for_error_rate_preset_returns_usage_error(self):
        exit_code, _ = run(
            ["toy", "--preset", "fig3a", "--N-grid", "1e1:1e2"]
            + ["--reps", "1"]
        )
        self.assertEqual(cli.EXIT_USAGE, exit_code)

    def test_error_rate_presets(self):
        for preset in ("fig3a", "fig3b"):
            out = self.path(f"{preset}.csv")
            exit_code, _ = run(
                ["toy", "--preset", preset, "--gamma", "0,0.02"]
                + ["--reps", "1", "--out", out]
            )
            self.assertEqual(cli.EXIT_OK, exit_code)
            frame = pd.read_csv(out)
            self.assertEqual(8, len(frame))
            self.assertEqual({0.0, 0.02}, set(frame["axis"]))

    def test_component_preset(self):
        out = self.path("fig3c.csv")
        exit_code, _ = run(
            ["toy", "--preset", "fig3c", "--N-grid", "1e1:1e2"]
            + ["--reps", "1", "--out", out]
        )
        self.assertEqual(cli.EXIT_OK, exit_code)
        frame = pd.read_csv(out)
        self.assertEqual([10, 10, 100, 100], list(frame["axis"]))

    def test_descriptive_preset_name_gives_same_output(self):
        arguments = ["toy", "--gamma", "0:0.02:0.01", "--reps", "2"]
        run(arguments + ["--preset", "fig3a", "--out", self.path("a.csv")])
        run(
            arguments
            + ["--preset", "noise-rate", "--out", self.path("b.csv")]
        )
        self.assertEqual(self.read("a.csv"), self.read("b.csv"))

    def test_unknown_preset_returns_usage_error(self):
        exit_code = run(["toy", "--preset", "unknown"])[0]
        self.assertEqual(cli.EXIT_USAGE, exit_code)


class TestKfwer(CliTestCase):
    def test_writes_rates_per_budget(self):
        out = self.path("kfwer.csv")
        exit_code, _ = run(
            ["kfwer", "--budgets", "0,1", "--alpha", "0.1"]
            + ["--N-grid", "1e2:1e3", "--reps", "2", "--out", out]
        )
        self.assertEqual(cli.EXIT_OK, exit_code)
        frame = pd.read_csv(out)
        self.assertEqual(
            ["N", "budget", "alpha", "rate"], list(frame.columns)
        )
        self.assertEqual(4, len(frame))
        self.assertEqual([100, 1000, 100, 1000], list(frame["N"]))

    def test_zero_budget_matches_holm_sweep(self):
        common = ["--N-grid", "1e1:1e2", "--reps", "3", "--seed", "4"]
        run(
            ["kfwer", "--budgets", "0", "--alpha", "0.1", "--num-noisy", "0"]
            + common
            + ["--out", self.path("kfwer.csv")]
        )
        run(
            ["toy", "--preset", "fig3c", "--algorithms", "seg_certify_holm"]
            + common
            + ["--out", self.path("toy.csv")]
        )
        kfwer = pd.read_csv(self.path("kfwer.csv"))
        toy = pd.read_csv(self.path("toy.csv"))
        self.assertEqual(list(toy["axis"]), list(kfwer["N"]))
        self.assertEqual(list(toy["raw_rate"]), list(kfwer["rate"]))

    def test_empty_budgets_return_usage_error(self):
        exit_code, _ = run(["kfwer", "--budgets", "", "--reps", "1"])
        self.assertEqual(cli.EXIT_USAGE, exit_code)


class TestMetrics(CliTestCase):
    def test_prints_metrics(self):
        pred = self.write("pred.txt", "0\n~\n1\n2\n")
        truth = self.write("truth.txt", "0\n0\n1\n*\n")
        exit_code, output = run(
            ["metrics", "--pred", pred, "--truth", truth]
            + ["--num-classes", "3"]
        )
        self.assertEqual(cli.EXIT_OK, exit_code)
        self.assertEqual(
            "0.6666666666666666,0.75,0.3333333333333333", output.strip()
        )

    def test_all_ignored_returns_data_error(self):
        pred = self.write("pred.txt", "0\n1\n")
        truth = self.write("truth.txt", "*\n*\n")
        exit_code, _ = run(
            ["metrics", "--pred", pred, "--truth", truth]
            + ["--num-classes", "2"]
        )
        self.assertEqual(cli.EXIT_DATA, exit_code)

    def test_different_file_numbers_return_data_error(self):
        pred = self.write("pred.txt", "0\n")
        exit_code, _ = run(
            ["metrics", "--pred", pred, pred, "--truth", pred]
            + ["--num-classes", "2"]
        )
        self.assertEqual(cli.EXIT_DATA, exit_code)


class TestSample(CliTestCase):
    def test_sampled_counts_can_be_certified(self):
        counts = self.path("counts.txt")
        truth = self.path("truth.txt")
        exit_code, _ = run(
            ["sample", "--out", counts, "--truth-out", truth]
            + ["--num-components", "20", "--num-classes", "3"]
        )
        self.assertEqual(cli.EXIT_OK, exit_code)
        counts0, _ = segcert_io.parse_counts_file(counts)
        self.assertEqual((20, 3), counts0.counts.shape)
        exit_code, output = run(
            ["certify", "--counts", counts, "--truth", truth]
        )
        self.assertEqual(cli.EXIT_OK, exit_code)
        self.assertIn("accuracy = 1.0000", output)

    def test_same_seed_gives_same_file(self):
        for filename in ("first.txt", "second.txt"):
            run(["sample", "--out", self.path(filename), "--gamma", "0.1"])
        self.assertEqual(self.read("first.txt"), self.read("second.txt"))


if __name__ == "__main__":
    unittest.main()
