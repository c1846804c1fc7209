import tempfile
import unittest
from pathlib import Path
from typing import override

from common.EnvManager import DEFAULTS, getenv


class TestEnvManager(unittest.TestCase):
    dir: Path = Path()

    @override
    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.dir = Path(tmp.name)

    def _config(self, text: str) -> Path:
        path = self.dir / "settings.env"
        _ = path.write_text(text)
        return path

    def test_defaults(self):
        settings = getenv()
        self.assertEqual(settings.seed, 0xC0FFEE)
        self.assertEqual(settings.max_total_dim, 4096)
        self.assertEqual(settings.replica_work_limit, 2**20)
        self.assertEqual(settings.eig_method, "lapack")

    def test_overrides(self):
        settings = getenv(self._config("SEED=7\nROOF_RESTARTS=4\nEIG_METHOD=jacobi\n"))
        self.assertEqual(settings.seed, 7)
        self.assertEqual(settings.roof_restarts, 4)
        self.assertEqual(settings.eig_method, "jacobi")
        self.assertEqual(settings.tol_norm, DEFAULTS.tol_norm)

    def test_unknown_key(self):
        with self.assertRaises(ValueError):
            _ = getenv(self._config("NOT_A_SETTING=1\n"))

    def test_invalid_value(self):
        with self.assertRaises(ValueError):
            _ = getenv(self._config("EIG_METHOD=qr\n"))

    def test_missing_file(self):
        with self.assertRaises(ValueError):
            _ = getenv(self.dir / "absent.env")


if __name__ == "__main__":
    _ = unittest.main()
