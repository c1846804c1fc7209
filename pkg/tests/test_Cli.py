import math
import tempfile
import unittest
from pathlib import Path
from typing import Any, override

import orjson
from typer.testing import CliRunner

from cft.TwistNegativity import LN_THREE_QUARTERS
from common.StateCatalog import ghz3, ghz4, w3
from common.EnvManager import DEFAULTS
from main import _roof_options, _settings, app
from utils.statefile import load_state, write_state


class TestCli(unittest.TestCase):
    runner: CliRunner = CliRunner(mix_stderr=False)

    @override
    def setUp(self):
        self.runner = CliRunner(mix_stderr=False)
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def _invoke_json(self, args: list[str], code: int = 0) -> dict[str, Any]:
        result = self.runner.invoke(app, args)
        self.assertEqual(result.exit_code, code, result.stdout)
        return orjson.loads(result.stdout)

    def test_state_prints_state_file(self):
        result = self.runner.invoke(app, ["state", "ghz3"])
        self.assertEqual(result.exit_code, 0)
        psi = load_state(result.stdout)
        self.assertEqual(psi.dims, (2, 2, 2))
        self.assertAlmostEqual(abs(psi.amps[7]), 1 / math.sqrt(2), places=14)

    def test_state_rejects_unknown_family(self):
        result = self.runner.invoke(app, ["state", "nonsense"])
        self.assertEqual(result.exit_code, 2)

    def test_state_writes_file(self):
        path = self.dir / "g2.json"
        result = self.runner.invoke(
            app, ["state", "g2", "--params", "a=1,b=0.5,c=0.2", "--out", str(path)]
        )
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(load_state(path.read_bytes()).dims, (2, 2, 2, 2))

    def test_measure_tripartite(self):
        path = self.dir / "w3.json"
        write_state(w3(), path)
        payload = self._invoke_json(["measure", str(path), "--set", "tripartite"])
        self.assertTrue(payload["success"])
        entries = payload["data"]["entries"]
        self.assertAlmostEqual(entries["i5"]["value"], 2 / 9, places=12)
        self.assertAlmostEqual(entries["phi_ABC"]["value"], 136 / 3, places=9)

    def test_measure_csv(self):
        path = self.dir / "w3.json"
        write_state(w3(), path)
        result = self.runner.invoke(app, ["measure", str(path), "--format", "csv"])
        self.assertEqual(result.exit_code, 0)
        self.assertTrue(result.stdout.startswith("measure,value"))

    def test_measure_malformed_file(self):
        path = self.dir / "bad.json"
        _ = path.write_text("{not json")
        result = self.runner.invoke(app, ["measure", str(path)])
        self.assertEqual(result.exit_code, 2)

    def test_replica(self):
        path = self.dir / "ghz3.json"
        write_state(ghz3(), path)
        payload = self._invoke_json(["replica", str(path), "id;(123);(132)"])
        self.assertAlmostEqual(payload["data"]["real"], 0.25, places=12)
        self.assertAlmostEqual(payload["data"]["deficit"], 0.75, places=12)

    def test_replica_tol_sets_product_verdict(self):
        path = self.dir / "ghz3.json"
        write_state(ghz3(), path)
        payload = self._invoke_json(["replica", str(path), "id;(123);(132)"])
        self.assertFalse(payload["data"]["product"])
        args = ["replica", str(path), "id;(123);(132)", "--tol", "0.8"]
        self.assertTrue(self._invoke_json(args)["data"]["product"])

    def test_tol_must_be_positive(self):
        path = self.dir / "ghz3.json"
        write_state(ghz3(), path)
        result = self.runner.invoke(app, ["replica", str(path), "id", "--tol", "0"])
        self.assertEqual(result.exit_code, 2)

    def test_replica_bad_permutation(self):
        path = self.dir / "ghz3.json"
        write_state(ghz3(), path)
        result = self.runner.invoke(app, ["replica", str(path), "id;;(12)"])
        self.assertEqual(result.exit_code, 2)

    def test_verify_cft(self):
        payload = self._invoke_json(["verify", "cft"])
        self.assertTrue(payload["success"])
        self.assertEqual(payload["data"][0]["suite"], "cft")

    def test_readme_quick_start(self):
        path = self.dir / "w4.json"
        result = self.runner.invoke(app, ["state", "w4", "--out", str(path)])
        self.assertEqual(result.exit_code, 0)
        result = self.runner.invoke(app, ["measure", str(path), "--format", "table"])
        self.assertEqual(result.exit_code, 0, result.stderr)
        self.assertIn("tau_AB", result.stdout)
        args = ["verify", "all", "--n-jobs", "2", "--samples", "3", "--restarts", "4"]
        payload = self._invoke_json(args)
        self.assertTrue(payload["success"])
        suites = [report["suite"] for report in payload["data"]]
        self.assertEqual(
            suites,
            [
                "identities",
                "bounds",
                "table2",
                "propositions",
                "gour",
                "cft",
                "named",
            ],
        )

    def test_measure_quadripartite_has_eighteen_entries(self):
        path = self.dir / "ghz4.json"
        write_state(ghz4(), path)
        args = ["measure", str(path), "--set", "quadripartite", "--restarts", "2"]
        data = self._invoke_json(args + ["--tol", "1e-10"])["data"]
        self.assertEqual(len(data["entries"]), 18)
        self.assertIn("w_root", data["extras"])

    def test_restarts_and_tol_fall_back_to_settings(self):
        settings = _settings(None, None)
        opts = _roof_options(settings, None, None)
        self.assertEqual(opts.restarts, DEFAULTS.roof_restarts)
        self.assertEqual(opts.tol, DEFAULTS.roof_tol)
        tightened = _settings(None, 1e-6)
        self.assertEqual(tightened.criterion_tol, 1e-6)
        self.assertEqual(_roof_options(tightened, 3, 5).tol, 1e-6)
        self.assertEqual(_roof_options(tightened, 3, 5).restarts, 5)

    def test_cft_breakdown(self):
        payload = self._invoke_json(["cft", "--c", "1"])
        expected = -math.log(4) / 9 + LN_THREE_QUARTERS / 3
        self.assertAlmostEqual(payload["data"]["ln_tr_neg3"], expected, places=12)

    def test_cft_rejects_coincident_points(self):
        result = self.runner.invoke(app, ["cft", "--z1", "1", "--z2", "1"])
        self.assertEqual(result.exit_code, 2)

    def test_cft_sweep(self):
        result = self.runner.invoke(app, ["cft", "--sweep", "--cs", "1,12"])
        self.assertEqual(result.exit_code, 0)
        lines = result.stdout.strip().splitlines()
        self.assertEqual(len(lines), 5)
        self.assertIn("ln_tr_neg3", lines[0])

    def test_roof_of_pure_reduction(self):
        path = self.dir / "w3.json"
        write_state(w3(), path)
        payload = self._invoke_json(["roof", str(path), "--keep", "0,1,2"])
        self.assertEqual(payload["data"]["provenance"], "closed-form")
        self.assertAlmostEqual(payload["data"]["value"], 136 / 3, places=9)

    def test_rigidity(self):
        path = self.dir / "ghz4.json"
        write_state(ghz4(0.6, 0.8), path)
        payload = self._invoke_json(["rigidity", str(path)])
        self.assertEqual(payload["data"]["outcome"], "detected")
        self.assertEqual(payload["data"]["rank"], 2)


if __name__ == "__main__":
    _ = unittest.main()
