import math
import unittest
from typing import override

import numpy as np

from common.Errors import DimensionError, PermutationError, SizeGuardError
from common.QState import (
    haar_random_pure,
    make_pure,
    partial_trace,
    random_product_pure,
    trace_power,
)
from common.StateCatalog import ghz3
from measures.Replica import (
    Permutation,
    ReplicaSpec,
    flattening_rank_one,
    hypercube_spec,
    i5_spec,
    multi_entropy2,
    multi_invariant,
    parse_cycles,
    parse_spec,
    product_criterion,
    renyi_trace,
    replica_count_lower_bound,
)

BELL = np.array([1, 0, 0, 1]) / math.sqrt(2)


class TestPermutation(unittest.TestCase):
    def test_parse_and_print(self):
        perm = parse_cycles("(132)")
        self.assertEqual(perm.image, (2, 0, 1))
        self.assertEqual(perm.to_cycles(), "(132)")
        self.assertEqual(parse_cycles("(12)(3)").to_cycles(), "(12)")
        self.assertEqual(parse_cycles("id", 4).to_cycles(), "id")
        self.assertEqual(parse_cycles("(1 2 10)").n, 10)

    def test_parse_errors(self):
        for text in ("(112)", "(12", "x", "(1)(1)", ""):
            with self.assertRaises(PermutationError):
                _ = parse_cycles(text)
        with self.assertRaises(PermutationError):
            _ = parse_cycles("(14)", 3)

    def test_group_operations(self):
        c = Permutation.cycle(3)
        self.assertEqual(c.compose(c.inverse()), Permutation.identity(3))
        self.assertEqual(c.compose(c).compose(c), Permutation.identity(3))
        with self.assertRaises(PermutationError):
            _ = c.compose(Permutation.identity(2))
        with self.assertRaises(PermutationError):
            _ = Permutation((0, 0, 1))

    def test_parse_spec(self):
        spec = parse_spec("id;(123);(132)")
        self.assertEqual(spec, i5_spec())
        self.assertTrue(spec.pairwise_distinct())
        self.assertEqual(parse_spec("id;id").n_replicas, 1)
        with self.assertRaises(PermutationError):
            _ = parse_spec("id;;(12)")

    def test_replica_count_lower_bound(self):
        self.assertEqual(replica_count_lower_bound(2), 2)
        self.assertEqual(replica_count_lower_bound(3), 3)
        self.assertEqual(replica_count_lower_bound(6), 3)
        self.assertEqual(replica_count_lower_bound(7), 4)


class TestMultiInvariant(unittest.TestCase):
    rng: np.random.Generator = np.random.default_rng(0)

    @override
    def setUp(self):
        self.rng = np.random.default_rng(17)

    def test_named_values(self):
        bell = make_pure([2, 2], BELL)
        self.assertAlmostEqual(multi_invariant(bell, parse_spec("id;(12)")).real, 0.5)
        z = multi_invariant(ghz3(), parse_spec("id;(123);(132)"))
        self.assertAlmostEqual(z.real, 0.25, places=14)
        self.assertAlmostEqual(z.imag, 0.0, places=14)

    def test_renyi_traces(self):
        psi = haar_random_pure([2, 3, 2], self.rng)
        for n in (2, 3, 4):
            exact = trace_power(partial_trace(psi, [1]).mat, n).real
            self.assertAlmostEqual(renyi_trace(psi, [1], n), exact, places=12)

    def test_multi_entropy_reduces_to_purity(self):
        psi = haar_random_pure([3, 3], self.rng)
        exact = trace_power(partial_trace(psi, [0]).mat, 2).real
        self.assertAlmostEqual(multi_entropy2(psi), exact, places=12)
        self.assertEqual(hypercube_spec(4).n_replicas, 8)

    def test_gauge_invariance(self):
        psi = haar_random_pure([2, 2, 2], self.rng)
        spec = i5_spec()
        z = multi_invariant(psi, spec)
        for omega in (Permutation((1, 0, 2)), Permutation.cycle(3)):
            moved = multi_invariant(psi, spec.left_multiply(omega))
            self.assertAlmostEqual(abs(moved - z), 0.0, places=12)

    def test_guards(self):
        psi = haar_random_pure([2, 2, 2, 2], self.rng)
        with self.assertRaises(SizeGuardError):
            _ = multi_invariant(psi, parse_spec("id;(12);(123456);(13)"))
        with self.assertRaises(DimensionError):
            _ = multi_invariant(psi, i5_spec())

    def test_product_criterion(self):
        for _ in range(20):
            product = random_product_pure([2, 3, 2], self.rng)
            is_product, deficit = product_criterion(product, i5_spec())
            self.assertTrue(is_product)
            self.assertLess(abs(deficit), 1e-12)
            self.assertTrue(flattening_rank_one(product))
            entangled = haar_random_pure([2, 3, 2], self.rng)
            is_product, deficit = product_criterion(entangled, i5_spec())
            self.assertFalse(is_product)
            self.assertGreater(deficit, 1e-6)
            self.assertFalse(flattening_rank_one(entangled))

    def test_product_criterion_needs_distinct_permutations(self):
        spec = ReplicaSpec(2, (Permutation.identity(2),) * 3)
        with self.assertRaises(PermutationError):
            _ = product_criterion(ghz3(), spec)


if __name__ == "__main__":
    _ = unittest.main()
