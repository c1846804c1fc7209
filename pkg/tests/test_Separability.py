import math
import tempfile
import unittest
from pathlib import Path
from typing import override

import numpy as np
import pandas as pd
from numpy.testing import assert_allclose

from common.Errors import DimensionError, DomainError, SiteError
from common.QState import (
    apply_local_unitaries,
    haar_random_pure,
    haar_unitary,
    make_density,
    partial_trace,
    pure_density,
    random_density,
)
from common.StateCatalog import generalized_ghz, ghz3, ghz4, w3, w4
from measures.Replica import i5_spec
from measures.Tangle2 import wootters_mixed
from separability.Certificates import (
    coherence_state,
    five_conditions_scan,
    ghz_rigidity_detect,
    ppt_check,
    product_terms_matrix,
    rank2_coherence_sep,
    reduction_product_decomposition,
)
from separability.ConvexRoof import (
    DecompositionAnsatz,
    RoofOptions,
    convex_roof,
    isometry_defect,
    rank_and_spectrum,
    roof_weights_check,
    write_trace_csv,
)

BELL = np.array([1, 0, 0, 1]) / math.sqrt(2)


class TestConvexRoof(unittest.TestCase):
    opts: RoofOptions = RoofOptions(restarts=4, seed=1)

    @override
    def setUp(self):
        self.opts = RoofOptions(restarts=4, seed=1)

    def test_ansatz_reproduces_rho(self):
        rng = np.random.default_rng(5)
        rho = random_density([2, 2, 2], 3, rng)
        mu, vecs = rank_and_spectrum(rho)
        x = rng.standard_normal(2 * 6 * 3)
        ansatz = DecompositionAnsatz.from_parameters(x, 6, 3)
        self.assertLess(isometry_defect(ansatz), 1e-12)
        self.assertLess(roof_weights_check(ansatz, mu, vecs), 1e-12)
        p, _ = ansatz.ensemble(mu, vecs)
        self.assertAlmostEqual(float(p.sum()), 1.0, places=12)

    def test_pure_input_is_closed_form(self):
        est = convex_roof(pure_density(ghz3()), "phi", self.opts)
        self.assertEqual(est.provenance, "closed-form")
        self.assertAlmostEqual(est.value, 99 / 2, places=10)

    def test_separable_mixture_vanishes(self):
        rho = np.zeros((8, 8))
        rho[0, 0] = rho[7, 7] = 0.5
        est = convex_roof(make_density([2, 2, 2], rho), "phi", self.opts)
        self.assertEqual(est.rank, 2)
        self.assertLess(est.value, 1e-6)

    def test_wootters_oracle(self):
        rng = np.random.default_rng(9)
        for _ in range(3):
            rho = random_density([2, 2], 2, rng)
            est = convex_roof(rho, "two_tangle", self.opts)
            self.assertGreaterEqual(est.value, wootters_mixed(rho) - 1e-6)
            self.assertAlmostEqual(est.value, wootters_mixed(rho), delta=2e-3)

    def test_three_tangle_roof_of_w4_reduction(self):
        est = convex_roof(partial_trace(w4(), [0, 1, 2]), "three_tangle", self.opts)
        self.assertLess(est.value, 1e-6)

    def test_replica_roof(self):
        opts = RoofOptions(restarts=2, seed=3, replica=i5_spec())
        est = convex_roof(pure_density(w3()), "one_minus_absZ", opts)
        self.assertAlmostEqual(est.value, (1 - 2 / 9) ** (2 / 3), places=10)
        with self.assertRaises(DomainError):
            _ = convex_roof(pure_density(w3()), "one_minus_absZ", self.opts)

    def test_seeded_runs_repeat(self):
        rho = partial_trace(w4(), [0, 1, 2])
        first = convex_roof(rho, "phi", self.opts)
        second = convex_roof(rho, "phi", self.opts)
        self.assertEqual(first.value, second.value)
        self.assertAlmostEqual(first.value, 207 / 8, delta=1e-3)
        trace = [value for *_, value in first.trace]
        self.assertGreaterEqual(min(trace), first.value - 1e-12)

    def test_guards(self):
        rho = random_density([2, 2, 2], 3, 1)
        with self.assertRaises(DomainError):
            _ = convex_roof(rho, "phi", RoofOptions(max_rank=2))
        with self.assertRaises(DomainError):
            _ = convex_roof(rho, "phi", RoofOptions(ensemble_sizes=(2,)))
        with self.assertRaises(DimensionError):
            _ = convex_roof(random_density([2, 3], 2, 1), "two_tangle", self.opts)

    def test_trace_csv(self):
        rho = random_density([2, 2], 2, 4)
        est = convex_roof(rho, "two_tangle", RoofOptions(restarts=2, seed=2))
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "trace.csv"
            write_trace_csv(est, path)
            frame = pd.read_csv(path)
        self.assertEqual(
            list(frame.columns), ["ensemble_size", "restart", "iteration", "objective"]
        )
        self.assertEqual(set(frame["restart"]), {0, 1})
        self.assertEqual(set(frame["ensemble_size"]), {2, 3, 4})

    def test_ensemble_sizes_sweep_rank_to_twice_rank(self):
        rho = random_density([2, 2], 2, 6)
        est = convex_roof(rho, "two_tangle", RoofOptions(restarts=3, seed=4))
        labels = {(m, restart) for m, restart, _, _ in est.trace}
        self.assertEqual(labels, {(m, k) for m in (2, 3, 4) for k in range(3)})
        self.assertEqual(est.ensemble_cap, 4)
        self.assertIn(est.ensemble_size, (2, 3, 4))
        fixed = convex_roof(
            rho, "two_tangle", RoofOptions(restarts=3, seed=4, ensemble_sizes=(3,))
        )
        self.assertEqual({m for m, *_ in fixed.trace}, {3})
        self.assertEqual(fixed.ensemble_cap, 3)
        self.assertGreaterEqual(fixed.value, est.value - 1e-12)


class TestCertificates(unittest.TestCase):
    rng: np.random.Generator = np.random.default_rng(0)

    @override
    def setUp(self):
        self.rng = np.random.default_rng(31)

    def test_ppt(self):
        bell = make_density([2, 2], np.outer(BELL, BELL))
        result = ppt_check(bell, [0])
        self.assertFalse(result["is_ppt"])
        self.assertAlmostEqual(result["min_eigenvalue"], -0.5, places=12)
        self.assertTrue(result["decisive"])
        mixed = make_density([2, 2], np.eye(4) / 4)
        self.assertTrue(ppt_check(mixed, [1])["is_ppt"])
        self.assertFalse(ppt_check(partial_trace(ghz4(), [0, 1, 2]), [0])["decisive"])
        with self.assertRaises(SiteError):
            _ = ppt_check(mixed, [0, 1])

    def test_coherence_lemma(self):
        pt_vals = np.linalg.eigvalsh(
            np.asarray(coherence_state(0.3, 0.7, 0.2j)).reshape(2, 2, 2, 2)
            .transpose(0, 3, 2, 1).reshape(4, 4)
        )
        assert_allclose(sorted(pt_vals), [-0.2, 0.2, 0.3, 0.7], atol=1e-14)
        self.assertTrue(rank2_coherence_sep(0.5, 0.5, 0))
        self.assertFalse(rank2_coherence_sep(0.5, 0.5, 0.5))
        self.assertFalse(rank2_coherence_sep(0.9, 0.1, 1e-3))
        with self.assertRaises(DomainError):
            _ = coherence_state(-0.1, 1.1, 0)

    def test_rigidity_recovers_ghz_forms(self):
        for q, d in ((4, 2), (3, 3), (2, 3)):
            weights = np.array([0.8, 0.5, 0.3][:d])
            base = generalized_ghz(q, d, weights / np.linalg.norm(weights))
            unitaries = [haar_unitary(d, self.rng) for _ in range(q)]
            psi = apply_local_unitaries(base, unitaries)
            result = ghz_rigidity_detect(psi, seed=self.rng)
            self.assertEqual(result.outcome, "detected")
            assert result.form is not None
            self.assertEqual(result.form.rank, d)
            self.assertLess(result.fidelity_deficit, 1e-8)
            recovered = sorted(abs(w) for w in result.form.weights)
            expected = sorted(weights / np.linalg.norm(weights))
            assert_allclose(recovered, expected, atol=1e-8)

    def test_rigidity_rejects_haar_states(self):
        for _ in range(5):
            psi = haar_random_pure([2, 2, 2, 2], self.rng)
            outcome = ghz_rigidity_detect(psi, seed=self.rng).outcome
            self.assertNotEqual(outcome, "detected")
        self.assertNotEqual(ghz_rigidity_detect(w3(), seed=1).outcome, "detected")

    def test_reduction_is_fully_product(self):
        psi = apply_local_unitaries(
            ghz4(0.6, 0.8), [haar_unitary(2, self.rng) for _ in range(4)]
        )
        result = ghz_rigidity_detect(psi, seed=self.rng)
        assert result.form is not None
        terms = reduction_product_decomposition(result.form, 3)
        self.assertEqual(len(terms), 2)
        assert_allclose(
            product_terms_matrix(terms), partial_trace(psi, [0, 1, 2]).mat, atol=1e-8
        )

    def test_five_conditions(self):
        opts = RoofOptions(restarts=2, seed=4)
        for psi in (ghz4(), w4(), haar_random_pure([2, 2, 2, 2], self.rng)):
            report = five_conditions_scan(psi, opts, short_circuit=True)
            self.assertFalse(report.all_hold)
        report = five_conditions_scan(w4(), opts)
        self.assertEqual(report.conditions["i"].method, "ppt")
        self.assertFalse(report.conditions["i"].holds)
        self.assertTrue(report.conditions["iv"].holds)
        self.assertTrue(report.conditions["v"].holds)
        with self.assertRaises(DimensionError):
            _ = five_conditions_scan(ghz3(), opts)


if __name__ == "__main__":
    _ = unittest.main()
