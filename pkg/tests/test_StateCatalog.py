import math
import unittest
from typing import override

import numpy as np
from pydantic import ValidationError

from common.Errors import DomainError
from common.StateCatalog import (
    StateSpec,
    acin,
    double_bell,
    g_family,
    generalized_ghz,
    make_named,
    parse_params,
)


class TestStateCatalog(unittest.TestCase):
    spec: StateSpec = StateSpec(family="w4")

    @override
    def setUp(self):
        self.spec = StateSpec(family="g3", params={"a": 2.0, "b": 0.5})

    def test_named_states_are_normalized(self):
        for family in ("ghz3", "ghz4", "w3", "w4", "cluster", "dicke42", "double_bell"):
            psi = make_named(StateSpec(family=family))
            self.assertAlmostEqual(float(np.linalg.norm(psi.amps)), 1.0, places=14)

    def test_ket_ordering(self):
        psi = make_named(StateSpec(family="cluster"))
        self.assertAlmostEqual(psi.amps[0b0011].real, 0.5)
        self.assertAlmostEqual(psi.amps[0b1111].real, -0.5)

    def test_raw_and_normalized_families(self):
        raw = make_named(self.spec, normalized=False)
        self.assertFalse(raw.normalized)
        self.assertEqual(raw.amps[0], 2.0)
        self.assertEqual(raw.amps[0b0110], 1.0)
        unit = make_named(self.spec)
        self.assertAlmostEqual(float(np.linalg.norm(unit.amps)), 1.0, places=14)

    def test_all_families_build(self):
        for k in range(1, 10):
            psi = g_family(k, 0.3, 0.7, 1.1, -0.4)
            self.assertEqual(psi.dims, (2, 2, 2, 2))
        with self.assertRaises(DomainError):
            _ = g_family(10)

    def test_g5_phases(self):
        psi = g_family(5, a=1.0)
        self.assertEqual(psi.amps[0b0001], 1j)
        self.assertEqual(psi.amps[0b1011], -1j)

    def test_double_bell_domain(self):
        with self.assertRaises(DomainError):
            _ = double_bell(1.0, 1.0, 1.0, 0.0)
        psi = double_bell(0.6, 0.8, 1.0, 0.0)
        self.assertAlmostEqual(psi.amps[0b0000].real, 0.6)

    def test_generalized_ghz(self):
        psi = make_named(StateSpec(family="ghz", params={"q": 3, "d": 3, "r": 2}))
        self.assertEqual(psi.dims, (3, 3, 3))
        self.assertAlmostEqual(abs(psi.amps[13]), 1 / math.sqrt(2))
        with self.assertRaises(DomainError):
            _ = generalized_ghz(3, 2, [1, 1, 1])
        with self.assertRaises(DomainError):
            _ = generalized_ghz(1, 2, [1])

    def test_acin(self):
        psi = acin([1 / math.sqrt(2), 0, 0, 0, 1 / math.sqrt(2)])
        self.assertAlmostEqual(abs(psi.amps[7]), 1 / math.sqrt(2))
        with self.assertRaises(ValidationError):
            _ = acin([1.0, 1.0, 0, 0, 0])

    def test_spec_validation(self):
        with self.assertRaises(ValidationError):
            _ = StateSpec(family="w4", params={"a": 1.0})
        with self.assertRaises(ValidationError):
            _ = StateSpec.model_validate({"family": "bogus"})
        spec = StateSpec(family="ghz", params={"q": 4, "l0": 0.6, "l1": 0.8})
        self.assertEqual(make_named(spec).dims, (2, 2, 2, 2))

    def test_parse_params(self):
        self.assertEqual(parse_params("a=1, b=-0.5"), {"a": 1.0, "b": -0.5})
        self.assertEqual(parse_params(""), {})
        for text in ("a", "=1", "a=x"):
            with self.assertRaises(DomainError):
                _ = parse_params(text)


if __name__ == "__main__":
    _ = unittest.main()
