import math
import unittest
from typing import override

import numpy as np
from pydantic import ValidationError

from common.Errors import DimensionError, DomainError
from common.QState import haar_random_pure, random_product_pure
from common.StateCatalog import ghz3, w3
from measures.Tangle3 import (
    I5_MINIMUM,
    PHI_MAXIMUM,
    PHI_REDUCED_MAXIMUM,
    AcinParams,
    SimplexPoint,
    acin_state,
    i5_amplitudes,
    i5_closed_form,
    i5_pt,
    i5_reduced_objective,
    i5_replica,
    phi_amplitudes,
    phi_closed_form,
    phi_decomposed,
    phi_direct,
    phi_reduced_objective,
    three_tangle,
    three_tangle_amplitudes,
    three_tangle_ckw,
    verify_bounds,
)


class TestTangle3(unittest.TestCase):
    rng: np.random.Generator = np.random.default_rng(0)

    @override
    def setUp(self):
        self.rng = np.random.default_rng(3)

    def test_named_values(self):
        self.assertAlmostEqual(i5_pt(ghz3()), 0.25, places=13)
        self.assertAlmostEqual(phi_direct(ghz3()), 99 / 2, places=11)
        self.assertAlmostEqual(three_tangle(ghz3()), 1.0, places=13)
        self.assertAlmostEqual(i5_pt(w3()), 2 / 9, places=13)
        self.assertAlmostEqual(phi_direct(w3()), 136 / 3, places=11)
        self.assertAlmostEqual(three_tangle(w3()), 0.0, places=13)

    def test_product_state_values(self):
        psi = random_product_pure([2, 2, 2], self.rng)
        self.assertAlmostEqual(i5_pt(psi), 1.0, places=12)
        self.assertAlmostEqual(phi_direct(psi), 0.0, places=10)

    def test_routes_agree(self):
        for _ in range(30):
            psi = haar_random_pure([2, 2, 2], self.rng)
            self.assertAlmostEqual(i5_pt(psi), i5_replica(psi), places=10)
            self.assertAlmostEqual(i5_pt(psi, 1), i5_pt(psi, 2), places=12)
            self.assertAlmostEqual(phi_direct(psi), phi_decomposed(psi), delta=1e-6)
            self.assertAlmostEqual(three_tangle(psi), three_tangle_ckw(psi), delta=1e-6)

    def test_vectorized_evaluators(self):
        states = [haar_random_pure([2, 2, 2], self.rng) for _ in range(5)]
        batch = np.stack([psi.unit_amps for psi in states])
        for k, psi in enumerate(states):
            i5 = i5_amplitudes(batch, (2, 2, 2))[k]
            self.assertAlmostEqual(i5, i5_pt(psi, 0), places=12)
            self.assertAlmostEqual(phi_amplitudes(batch)[k], phi_direct(psi), places=10)
            tau = three_tangle_amplitudes(batch)[k]
            self.assertAlmostEqual(tau, three_tangle(psi), places=12)

    def test_qutrit_i5(self):
        psi = haar_random_pure([3, 2, 3], self.rng)
        self.assertAlmostEqual(i5_pt(psi), i5_replica(psi), places=10)
        with self.assertRaises(DimensionError):
            _ = phi_direct(psi)

    def test_closed_forms_match_states(self):
        for _ in range(20):
            a, b, c, d, e = self.rng.dirichlet(np.ones(5))
            pt = SimplexPoint(a=a, b=b, c=c, d=d, e=1 - a - b - c - d)
            phi = float(self.rng.uniform(0, math.pi))
            psi = acin_state(pt.acin(phi))
            self.assertAlmostEqual(i5_closed_form(pt, phi), i5_pt(psi), places=10)
            self.assertAlmostEqual(phi_closed_form(pt, phi), phi_direct(psi), places=9)

    def test_saturating_points(self):
        self.assertAlmostEqual(
            i5_reduced_objective(1 / 3, 0.0, 2 / 3, 1 / 3), I5_MINIMUM, places=14
        )
        self.assertAlmostEqual(
            phi_reduced_objective(0.5, 0.0, 0.0), PHI_REDUCED_MAXIMUM, places=14
        )
        self.assertAlmostEqual(18 * PHI_REDUCED_MAXIMUM, PHI_MAXIMUM)

    def test_parameter_validation(self):
        with self.assertRaises(ValidationError):
            _ = AcinParams(lambdas=(1.0, 0.0, 0.0, 0.0, 0.5))
        with self.assertRaises(ValidationError):
            _ = AcinParams(lambdas=(1.0, 0.0, 0.0, 0.0, 0.0), phi=math.pi)
        with self.assertRaises(ValidationError):
            _ = SimplexPoint(a=0.5, b=0.5, c=0.5, d=0.0, e=-0.5)

    def test_verify_bounds(self):
        i5_min, phi_max = verify_bounds(2000, 0xC0FFEE)
        self.assertAlmostEqual(i5_min["extremum"], I5_MINIMUM, places=12)
        self.assertAlmostEqual(phi_max["extremum"], PHI_REDUCED_MAXIMUM, places=12)
        self.assertGreaterEqual(i5_min["full_form_extremum"], I5_MINIMUM - 1e-9)
        self.assertLessEqual(phi_max["full_form_extremum"], PHI_REDUCED_MAXIMUM + 1e-9)
        self.assertAlmostEqual(i5_min["argument"]["a"], 1 / 3, places=12)
        with self.assertRaises(DomainError):
            _ = verify_bounds(0, 1)

    def test_verify_bounds_ignores_worker_count(self):
        serial = verify_bounds(60_000, 5, n_jobs=1)
        pooled = verify_bounds(60_000, 5, n_jobs=2)
        self.assertEqual(serial, pooled)


if __name__ == "__main__":
    _ = unittest.main()
