import math

import pytest

from padent.entropy import (
    ExpansivenessError,
    classical_entropy_periodic,
    entropy_compare,
    mahler_measure,
    padic_entropy,
    padic_r_torsion,
    principal_factor_report,
)
from padent.laurent import parse_poly
from padent.padic import PadicNumber, padic_log
from padent.quotients import (
    InfiniteHomologyError,
    diagonal_sequence,
    diagonal_subgroup,
    direct_sum_resolution,
    koszul_resolution,
    principal_resolution,
)

K = 12


def f4_resolution():
    return koszul_resolution([parse_poly("2"), parse_poly("t^2 + t + 1")])


class TestPadicTorsion:
    def test_principal_dual_route(self):
        res = principal_resolution(parse_poly("4 - 3*t"))
        rep = padic_r_torsion(res, 3, diagonal_sequence(1, 1, 12), K)
        ref = padic_log(PadicNumber.from_integer(4, 3, K))
        assert rep.cauchy and rep.estimate.congruent(ref, 8)
        assert rep.diagnostics["routes_agree_valuation"] >= rep.agreement_depth or \
            rep.diagnostics["routes_agree_valuation"] == math.inf

    def test_f4_torsion_vanishes(self):
        rep = padic_r_torsion(f4_resolution(), 5, diagonal_sequence(1, 1, 6, scale=3), K)
        assert rep.estimate.is_zero and rep.agreement_depth == math.inf
        assert all(lvl.chi == 1 for lvl in rep.levels)

    def test_mersenne_vanishes(self):
        res = principal_resolution(parse_poly("t - 2"))
        rep = padic_r_torsion(res, 2, diagonal_sequence(1, 1, 12), 16)
        assert rep.estimate.valuation() >= 8

    def test_not_expansive_raises(self):
        res = principal_resolution(parse_poly("t - 2"))
        with pytest.raises(ExpansivenessError):
            padic_r_torsion(res, 3, diagonal_sequence(1, 1, 6), K)

    def test_additivity_on_direct_sums(self):
        a = principal_resolution(parse_poly("4 - 3*t"))
        b = f4_resolution()
        both = direct_sum_resolution(a, b)
        seq = diagonal_sequence(1, 1, 8, scale=3)
        ra = padic_r_torsion(a, 3, seq, K)
        rb = padic_r_torsion(b, 3, seq, K)
        rs = padic_r_torsion(both, 3, seq, K)
        depth = min(rs.agreement_depth, ra.agreement_depth, rb.agreement_depth, K - 2)
        assert (rs.estimate - (ra.estimate + rb.estimate)).valuation() >= depth

    def test_h1_trivial_for_principal_expansive(self):
        # fixed points equal chi level by level when H_1 vanishes
        res = principal_resolution(parse_poly("4 - 3*t"))
        rep = padic_r_torsion(res, 3, diagonal_sequence(1, 1, 8), K)
        for lvl in rep.levels:
            assert lvl.chi == lvl.fixed_points


class TestPadicEntropy:
    def test_equals_torsion(self):
        res = principal_resolution(parse_poly("4 - 3*t"))
        rep = padic_entropy(res, 3, diagonal_sequence(1, 1, 10), K)
        assert rep.diagnostics["torsion"] == rep.estimate

    def test_f4_entropy_zero_both_primes(self):
        for p in (3, 5):
            rep = padic_entropy(f4_resolution(), p, diagonal_sequence(1, 1, 6, scale=3), K)
            assert rep.estimate.is_zero

    def test_monomial_module(self):
        rep = padic_entropy(principal_resolution(parse_poly("t")), 7,
                            diagonal_sequence(1, 1, 6), K)
        assert rep.estimate.is_zero


class TestMahler:
    def test_t_minus_2(self):
        assert abs(mahler_measure(parse_poly("t - 2")) - math.log(2)) < 1e-10

    def test_root_on_circle(self):
        assert mahler_measure(parse_poly("t - 1")) == 0.0

    def test_4_minus_3t(self):
        assert abs(mahler_measure(parse_poly("4 - 3*t")) - math.log(4)) < 1e-10

    def test_constant(self):
        assert abs(mahler_measure(parse_poly("7")) - math.log(7)) < 1e-12

    def test_two_variables_quadrature(self):
        # m(3 + t1 + t2): quadrature must be stable and match a finer grid
        v1 = mahler_measure(parse_poly("3 + t1 + t2"), grid=32)
        v2 = mahler_measure(parse_poly("3 + t1 + t2"), grid=64)
        assert abs(v1 - v2) < 1e-6

    def test_vanishing_on_torus_flagged(self):
        with pytest.raises(ValueError):
            mahler_measure(parse_poly("t1 - 1", rank=2))

    def test_zero_rejected(self):
        from padent.laurent import LaurentPoly
        with pytest.raises(ValueError):
            mahler_measure(LaurentPoly.zero(1))


class TestClassicalEntropy:
    def test_t_minus_2_converges_to_log2(self):
        res = principal_resolution(parse_poly("t - 2"))
        rep = classical_entropy_periodic(res, diagonal_sequence(1, 1, 30))
        assert abs(rep.estimate - math.log(2)) < 1e-6

    def test_4_minus_3t_trend(self):
        res = principal_resolution(parse_poly("4 - 3*t"))
        rep = classical_entropy_periodic(res, diagonal_sequence(1, 1, 40))
        assert abs(rep.estimate - math.log(4)) < 1e-4

    def test_f4_columns(self):
        rep = classical_entropy_periodic(f4_resolution(), diagonal_sequence(1, 1, 5, scale=3))
        assert all(lvl.value == 0.0 for lvl in rep.levels)
        rates = rep.diagnostics["fixed_point_rates"]
        for n, r in zip(range(1, 6), rates):
            assert abs(r - math.log(4) / (3 * n)) < 1e-12

    def test_infinite_homology_propagates(self):
        res = principal_resolution(parse_poly("t - 1"))
        with pytest.raises(InfiniteHomologyError):
            classical_entropy_periodic(res, diagonal_sequence(1, 1, 4))


class TestPrincipalFactors:
    def test_single_factor(self):
        rep = principal_factor_report([parse_poly("t - 2")], diagonal_subgroup(1, 5))
        assert rep.product == 31

    def test_two_factors(self):
        rep = principal_factor_report([parse_poly("t - 2"), parse_poly("4 - 3*t")],
                                      diagonal_subgroup(1, 2))
        assert [o for _, o in rep.factors] == [3, 7] and rep.product == 21

    def test_singular_factor_rejected(self):
        with pytest.raises(InfiniteHomologyError):
            principal_factor_report([parse_poly("t - 1")], diagonal_subgroup(1, 4))


class TestCompare:
    def test_t_minus_2(self):
        rep = entropy_compare(parse_poly("t - 2"), 2, diagonal_sequence(1, 1, 12), K)
        assert abs(rep.classical.estimate - math.log(2)) < 0.05
        assert abs(rep.mahler - math.log(2)) < 1e-10
        assert rep.padic.estimate.valuation() >= 8
        assert rep.series_route.is_zero

    def test_4_minus_3t(self):
        rep = entropy_compare(parse_poly("4 - 3*t"), 3, diagonal_sequence(1, 1, 12), K)
        assert abs(rep.mahler - math.log(4)) < 1e-10
        ref = padic_log(PadicNumber.from_integer(4, 3, K))
        assert rep.padic.estimate.congruent(ref, 8)

    def test_monomial(self):
        rep = entropy_compare(parse_poly("t"), 5, diagonal_sequence(1, 1, 8), K)
        assert rep.classical.estimate == 0.0
        assert rep.mahler == 0.0
        assert rep.padic.estimate.is_zero
