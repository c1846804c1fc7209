import math
import unittest
from typing import override

from pydantic import ValidationError

from cft.TwistNegativity import (
    LN_THREE_QUARTERS,
    CFTConfig,
    breakdown,
    ln_tr_neg3,
    ope_coeff_log,
    ope_coeff_log_terms,
    sweep,
    three_point_log,
    twist_dimension,
)
from common.Errors import DomainError


class TestTwistNegativity(unittest.TestCase):
    cfg: CFTConfig = CFTConfig(c=1.0)

    @override
    def setUp(self):
        self.cfg = CFTConfig(c=1.0, z1=0.0, z2=1.0, z3=2.0, eps=1.0)

    def test_twist_dimension(self):
        self.assertAlmostEqual(twist_dimension(9.0), 2.0, places=14)
        with self.assertRaises(DomainError):
            _ = twist_dimension(0.0)

    def test_equal_dimension_collapse(self):
        for c in (1.0, 12.0, 100.0):
            delta = twist_dimension(c)
            self.assertAlmostEqual(
                ope_coeff_log(delta, delta, delta), c / 3 * LN_THREE_QUARTERS, places=12
            )

    def test_term_by_term_agrees(self):
        for dims in ((2.0, 2.0, 3.0), (1.0, 1.5, 2.0), (5.0, 4.0, 3.0)):
            terms = ope_coeff_log_terms(*dims)
            self.assertAlmostEqual(terms["total"], ope_coeff_log(*dims), places=12)

    def test_triangle_violations(self):
        for dims in ((1.0, 1.0, 3.0), (1.0, 1.0, 2.0), (0.0, 1.0, 1.0)):
            with self.assertRaises(DomainError):
                _ = ope_coeff_log(*dims)

    def test_reference_value(self):
        expected = -math.log(4) / 9 + LN_THREE_QUARTERS / 3
        self.assertAlmostEqual(ln_tr_neg3(self.cfg), expected, places=14)

    def test_assembly_from_three_point_function(self):
        delta = twist_dimension(self.cfg.c)
        self.assertAlmostEqual(
            three_point_log(self.cfg, delta, delta, delta),
            ln_tr_neg3(self.cfg),
            places=12,
        )

    def test_covariances(self):
        c = 9.0
        base = ln_tr_neg3(CFTConfig(c=c, z1=0.0, z2=1.0, z3=3.0))
        shifted = ln_tr_neg3(CFTConfig(c=c, z1=5.0, z2=6.0, z3=8.0))
        self.assertEqual(base, shifted)
        dilated = ln_tr_neg3(CFTConfig(c=c, z1=0.0, z2=2.0, z3=6.0))
        self.assertAlmostEqual(dilated - base, -(2 * c / 3) * math.log(2), places=12)
        finer = ln_tr_neg3(CFTConfig(c=c, z1=0.0, z2=1.0, z3=3.0, eps=0.1))
        self.assertAlmostEqual(finer - base, -6 * math.log(10), places=12)

    def test_config_validation(self):
        with self.assertRaises(ValidationError):
            _ = CFTConfig(c=1.0, z1=0.0, z2=0.0, z3=1.0)
        with self.assertRaises(ValidationError):
            _ = CFTConfig(c=-1.0)
        with self.assertRaises(ValidationError):
            _ = CFTConfig(c=1.0, eps=0.0)

    def test_breakdown(self):
        parts = breakdown(self.cfg)
        self.assertAlmostEqual(parts["twist_dimension"], 2 / 9, places=15)
        self.assertAlmostEqual(parts["ln_ope"], LN_THREE_QUARTERS / 3, places=12)
        self.assertAlmostEqual(parts["ln_distance"], math.log(4), places=14)

    def test_sweep(self):
        frame = sweep([1.0, 12.0], [1.0, 0.1])
        self.assertEqual(len(frame), 4)
        self.assertIn("ln_tr_neg3", frame.columns)
        first = float(frame["ln_tr_neg3"].iloc[0])
        self.assertAlmostEqual(first, ln_tr_neg3(self.cfg), places=14)


if __name__ == "__main__":
    _ = unittest.main()
