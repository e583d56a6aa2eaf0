import pytest

from padent.expansive import (
    KIND_EXPONENT_ZERO,
    KIND_INCONCLUSIVE,
    KIND_NOT_EXPANSIVE,
    KIND_POSITIVE_EXPONENT,
    check_classical_n1,
    check_finite_module_padic,
    check_principal_padic,
    torus_sample_min,
)
from padent.laurent import LaurentPoly, parse_poly
from padent.logdet import NotAUnitError, logdet_scalar
from padent.quotients import diagonal_subgroup, euler_characteristic, principal_resolution


class TestPrincipalPadic:
    def test_t_minus_2_at_p2(self):
        v = check_principal_padic(parse_poly("t - 2"), 2)
        assert v.kind == KIND_EXPONENT_ZERO and v.is_expansive

    def test_t_minus_2_at_p3(self):
        v = check_principal_padic(parse_poly("t - 2"), 3)
        assert v.kind == KIND_NOT_EXPANSIVE and v.witness

    def test_two_variables(self):
        assert check_principal_padic(parse_poly("3 + t1 + t2"), 2).kind == KIND_NOT_EXPANSIVE
        assert check_principal_padic(parse_poly("3 - t"), 3).kind == KIND_EXPONENT_ZERO

    def test_zero_determinant_rejected(self):
        from padent.laurent import LaurentMatrix
        one = LaurentPoly.one(1)
        with pytest.raises(ValueError):
            check_principal_padic(LaurentMatrix(1, [[one, one], [one, one]]), 2)

    def test_positive_exponent(self):
        v = check_principal_padic(parse_poly("3 + 9*t"), 3)
        assert v.kind == KIND_POSITIVE_EXPONENT and v.exponent == 1

    def test_json_shape(self):
        doc = check_principal_padic(parse_poly("t - 2"), 2).to_json()
        assert doc["kind"] == KIND_EXPONENT_ZERO and "witness" in doc


class TestFiniteModule:
    def test_f4_annihilators(self):
        v = check_finite_module_padic([parse_poly("2"), parse_poly("t^2 + t + 1")], 3)
        assert v.kind == KIND_EXPONENT_ZERO

    def test_p_power_annihilator(self):
        v = check_finite_module_padic([parse_poly("5")], 5)
        assert v.kind == KIND_POSITIVE_EXPONENT and v.exponent == 1

    def test_inconclusive_not_negative(self):
        v = check_finite_module_padic([parse_poly("t - 1")], 7)
        assert v.kind == KIND_INCONCLUSIVE and v.witness is None

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError):
            check_finite_module_padic([], 3)


class TestClassical:
    def test_t_minus_2(self):
        assert check_classical_n1(parse_poly("t - 2")).kind == KIND_EXPONENT_ZERO

    def test_roots_of_unity_detected_exactly(self):
        assert check_classical_n1(parse_poly("t - 1")).kind == KIND_NOT_EXPANSIVE
        assert check_classical_n1(parse_poly("t^2 + t + 1")).kind == KIND_NOT_EXPANSIVE
        assert check_classical_n1(parse_poly("t^4 + t^3 + t^2 + t + 1")).kind == KIND_NOT_EXPANSIVE

    def test_inconclusive_band(self):
        # 2t^2 - 3t + 2 has conjugate roots of modulus exactly 1 but is not
        # cyclotomic (not monic); numeric certification must refuse
        v = check_classical_n1(parse_poly("2t^2 - 3t + 2"))
        assert v.kind == KIND_INCONCLUSIVE

    def test_constants(self):
        assert check_classical_n1(parse_poly("5")).kind == KIND_EXPONENT_ZERO

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            check_classical_n1(LaurentPoly.zero(1))


class TestTorusSampling:
    def test_lower_bound_positive_case(self):
        assert torus_sample_min(parse_poly("3 + t1 + t2"), 10_000) > 0.9

    def test_vanishing_case(self):
        assert torus_sample_min(parse_poly("1 + t1 + t2"), 20_000) < 0.1

    def test_constant(self):
        assert torus_sample_min(parse_poly("5"), 10) == 5.0

    def test_agrees_with_classical_verdict_n1(self):
        for s in ("t - 2", "4 - 3*t", "2 + t"):
            v = check_classical_n1(parse_poly(s))
            m = torus_sample_min(parse_poly(s), 5_000)
            assert v.is_expansive == (m > 1e-10)


class TestConsistencyWithHomology:
    def test_expansive_implies_finite_homology(self):
        cases = [("t - 2", 2), ("4 - 3*t", 3), ("3 - t", 3), ("t - 2", 5)]
        for s, p in cases:
            f = parse_poly(s)
            verdict = check_principal_padic(f, p)
            if not verdict.is_expansive:
                continue
            res = principal_resolution(f)
            for n in range(1, 9):
                chi = euler_characteristic(res, diagonal_subgroup(1, n))
                assert chi >= 1

    def test_positive_exponent_bounds_homology_p_part(self):
        # for PositiveExponent(nu) verdicts the p-primary exponent of every
        # homology group stays within nu * d * r on the tested instances
        from padent.quotients import complex_from_resolution, homology
        cases = [("3 + 9*t", 3), ("2*t - 4", 2)]
        for s, p in cases:
            f = parse_poly(s)
            verdict = check_principal_padic(f, p)
            assert verdict.kind == KIND_POSITIVE_EXPONENT
            bound = verdict.exponent  # d = r = 1 for principal presentations
            res = principal_resolution(f)
            for n in range(1, 7):
                summary = homology(complex_from_resolution(res, diagonal_subgroup(1, n)))
                for deg in summary.degrees:
                    for div in deg.divisors:
                        v = 0
                        while div % p == 0:
                            div //= p
                            v += 1
                        assert v <= bound

    def test_scalar_unit_test_matches_logdet_availability(self):
        for s, p in (("t - 2", 2), ("t - 2", 3), ("4 - 3*t", 3), ("t^2 + t + 1", 2)):
            f = parse_poly(s)
            verdict = check_principal_padic(f, p)
            if verdict.is_expansive:
                logdet_scalar(f, p, 8)  # must succeed
            else:
                with pytest.raises(NotAUnitError):
                    logdet_scalar(f, p, 8)
