import math
import unittest
from typing import override

from common.Errors import DimensionError
from common.QState import haar_random_pure, make_pure
from common.StateCatalog import ghz3, ghz4, w3
from measures.MeasureSets import bipartite_set, measure_set, tripartite_set
from separability.ConvexRoof import RoofOptions


class TestMeasureSets(unittest.TestCase):
    opts: RoofOptions = RoofOptions(restarts=2, seed=3)

    @override
    def setUp(self):
        self.opts = RoofOptions(restarts=2, seed=3)

    def test_bipartite_bell_pair(self):
        bell = make_pure([2, 2], [1, 0, 0, 1])
        values = bipartite_set(bell).values()
        self.assertAlmostEqual(values["tau_AB"], 1.0, places=12)
        self.assertAlmostEqual(values["purity_A"], 0.5, places=12)
        self.assertAlmostEqual(values["concurrence"], 1.0, places=12)

    def test_bipartite_qutrits_skip_concurrence(self):
        values = bipartite_set(haar_random_pure([3, 3], 1)).values()
        self.assertNotIn("concurrence", values)
        expected = 2 * (1 - values["purity_A"])
        self.assertAlmostEqual(values["tau_AB"], expected, places=12)

    def test_tripartite_w(self):
        values = tripartite_set(w3()).values()
        self.assertAlmostEqual(values["i5"], 2 / 9, places=12)
        self.assertAlmostEqual(values["phi_ABC"], 136 / 3, places=9)
        self.assertAlmostEqual(values["tau_ABC"], 0.0, places=12)
        for key in ("tau_AB", "tau_AC", "tau_BC"):
            self.assertAlmostEqual(values[key], 4 / 9, places=6)

    def test_tripartite_ghz(self):
        values = tripartite_set(ghz3()).values()
        self.assertAlmostEqual(values["i5"], 1 / 4, places=12)
        self.assertAlmostEqual(values["phi_ABC"], 99 / 2, places=9)
        self.assertAlmostEqual(values["tau_ABC"], 1.0, places=12)

    def test_tripartite_mixed_dims_report_i5_only(self):
        values = tripartite_set(haar_random_pure([2, 3, 2], 4)).values()
        self.assertEqual(list(values), ["i5"])

    def test_quadripartite_ghz(self):
        report = measure_set(ghz4(), "all", self.opts)
        values = report.values()
        self.assertEqual(len(values), 18)
        self.assertNotIn("w_root", values)
        self.assertAlmostEqual(values["fourtangle"], 1.0, places=12)
        self.assertAlmostEqual(values["tau_AB"], 0.0, places=6)
        self.assertEqual(report.entries["phi_ABC"].provenance, "optimizer")
        self.assertTrue(math.isfinite(report.extras["w_root"]))

    def test_all_picks_by_site_count(self):
        report = measure_set(w3(), "all")
        self.assertIn("phi_ABC", report.entries)

    def test_mismatched_sets(self):
        with self.assertRaises(DimensionError):
            _ = measure_set(w3(), "bipartite")
        with self.assertRaises(DimensionError):
            _ = measure_set(ghz3(), "quadripartite")
        with self.assertRaises(DimensionError):
            _ = measure_set(haar_random_pure([2] * 5, 2), "all")


if __name__ == "__main__":
    _ = unittest.main()
