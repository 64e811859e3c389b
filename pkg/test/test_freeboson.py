import unittest
import itertools
import numpy as np
from fractions import Fraction

from gerbecalc.freeboson.branes import D0Brane, D1Brane, FreeBosonBiBrane, fuse_defect_d0, fuse_defect_d1, \
    fuse_defects, correspondence_d0, correspondence_d1, correspondence_bibrane


class TestBranes(unittest.TestCase):

    def test_reduce(self):
        self.assertEqual(D0Brane(1.0, Fraction(5, 4)).u, Fraction(1, 4))
        self.assertEqual(D1Brane(1.0, -Fraction(1, 3)).a, Fraction(2, 3))
        self.assertTrue(abs(D0Brane(1.0, 1.25).u - 0.25) < 1e-12)
        self.assertEqual(D0Brane(1.0, 1.0).u, 0.0)

    def test_lengths(self):
        radius = 0.7
        brane = D0Brane.at(radius, 1.1)
        self.assertTrue(abs(brane.x - 1.1) < 1e-12)
        line = D1Brane.with_wilson_line(radius, 0.1)
        self.assertTrue(abs(line.alpha - 0.1) < 1e-12)
        self.assertTrue(abs(FreeBosonBiBrane(radius, Fraction(1, 2)).x - np.pi * radius) < 1e-12)

    def test_invalid(self):
        self.assertRaises(ValueError, D0Brane, 0.0, 0)
        self.assertRaises(ValueError, fuse_defects, FreeBosonBiBrane(1.0), FreeBosonBiBrane(2.0))
        self.assertRaises(ValueError, fuse_defect_d0, FreeBosonBiBrane(1.0), D0Brane(1.5, 0))

    def test_equality(self):
        branes = {FreeBosonBiBrane(1.0, Fraction(1, 3), Fraction(1, 2)),
                  FreeBosonBiBrane(1.0, Fraction(4, 3), Fraction(-1, 2))}
        self.assertEqual(len(branes), 1)
        self.assertNotEqual(D0Brane(1.0, 0), D1Brane(1.0, 0))

    def test_records(self):
        bibrane = FreeBosonBiBrane(0.5, Fraction(1, 4), Fraction(1, 3))
        record = bibrane.record()
        self.assertEqual(record.rank, 1)
        self.assertTrue(record.world_volume.contains([0.2, bibrane.fiber(0.2)]))
        self.assertFalse(record.world_volume.contains([0.2, 0.2]))
        self.assertTrue(D0Brane(0.5, Fraction(1, 2)).record().world_volume.contains([np.pi * 0.5]))
        self.assertEqual(D1Brane(0.5, 0).record().rank, 1)


class TestFusion(unittest.TestCase):

    def test_laws(self):
        radius = 1.3
        grid = [Fraction(i, 6) for i in range(6)]
        for u1, a1, u2, a2 in itertools.product(grid, repeat=4):
            b1, b2 = FreeBosonBiBrane(radius, u1, a1), FreeBosonBiBrane(radius, u2, a2)
            fused = fuse_defects(b1, b2)
            self.assertEqual(fused, fuse_defects(b2, b1))
            self.assertEqual((fused.u, fused.a), ((u1 + u2) % 1, (a1 + a2) % 1))

    def test_associative(self):
        b = [FreeBosonBiBrane(1.0, Fraction(1, 3), Fraction(2, 5)), FreeBosonBiBrane(1.0, Fraction(3, 4)),
             FreeBosonBiBrane(1.0, 0, Fraction(4, 5))]
        self.assertEqual(fuse_defects(fuse_defects(b[0], b[1]), b[2]), fuse_defects(b[0], fuse_defects(b[1], b[2])))

    def test_branes(self):
        bibrane = FreeBosonBiBrane(2.0, Fraction(2, 3), Fraction(1, 2))
        self.assertEqual(fuse_defect_d0(bibrane, D0Brane(2.0, Fraction(2, 3))).u, Fraction(1, 3))
        self.assertEqual(fuse_defect_d1(bibrane, D1Brane(2.0, Fraction(3, 4))).a, Fraction(1, 4))
        invisible = FreeBosonBiBrane(2.0)
        self.assertEqual(fuse_defect_d0(invisible, D0Brane(2.0, Fraction(1, 5))), D0Brane(2.0, Fraction(1, 5)))


class TestCorrespondence(unittest.TestCase):

    def test_d0(self):
        for radius in [0.3, 1.0, 2.5]:
            result = correspondence_d0(FreeBosonBiBrane(radius, Fraction(1, 4)), D0Brane(radius, Fraction(1, 2)))
            self.assertTrue(result["consistent"])
            self.assertTrue(abs(result["u"] - 0.75) < 1e-9)

    def test_d1(self):
        result = correspondence_d1(FreeBosonBiBrane(1.0, Fraction(1, 5), Fraction(1, 3)),
                                   D1Brane(1.0, Fraction(1, 2)))
        self.assertTrue(result["consistent"])
        self.assertTrue(abs(result["a"] - 5.0 / 6.0) < 1e-9)
        self.assertTrue(result["coverage"] < 0.1)

    def test_bibrane(self):
        result = correspondence_bibrane(FreeBosonBiBrane(0.7, Fraction(3, 10), Fraction(1, 7)),
                                        FreeBosonBiBrane(0.7, Fraction(5, 8), Fraction(2, 3)), seed=1)
        self.assertTrue(result["consistent"])
        self.assertTrue(abs(result["shift"] - 0.925) < 1e-9)


if __name__ == '__main__':
    unittest.main()
