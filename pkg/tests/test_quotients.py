import cmath
import math
import random

import pytest

from padent.intmat import exact_determinant, mat_mul
from padent.laurent import LaurentMatrix, LaurentPoly, parse_poly
from padent.quotients import (
    FreeResolution,
    InfiniteHomologyError,
    IntegerComplex,
    action_matrix,
    complex_from_resolution,
    diagonal_sequence,
    diagonal_subgroup,
    direct_sum_resolution,
    enumerate_quotient,
    euler_characteristic,
    fixed_points_count,
    homology,
    koszul_resolution,
    parse_sequence_spec,
    principal_resolution,
    subgroup_from_matrix,
)

from test_laurent import rand_poly


class TestSubgroups:
    def test_rank_one(self):
        s = subgroup_from_matrix([[3]])
        assert s.index == 3 and s.basis == ((3,),)

    def test_hnf_shape_and_index(self):
        s = subgroup_from_matrix([[2, 1], [0, 3]])
        assert s.index == 6
        assert s.basis[1][0] == 0  # upper triangular
        assert 0 <= s.basis[0][1] < s.basis[0][0] or s.basis[0][0] == 1

    def test_singular_raises(self):
        with pytest.raises(ValueError):
            subgroup_from_matrix([[1, 1], [1, 1]])

    def test_hnf_spans_same_lattice(self):
        rng = random.Random(41)
        for _ in range(50):
            n = rng.randint(1, 3)
            mat = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
            det = exact_determinant(mat)
            if det == 0:
                continue
            s = subgroup_from_matrix(mat)
            assert s.index == abs(det)
            # every generator must reduce to the zero coset
            for c in range(n):
                col = [mat[r][c] for r in range(n)]
                assert s.reduce(col) == (0,) * n

    def test_reduce_is_idempotent_on_box(self):
        s = subgroup_from_matrix([[2, 1], [0, 3]])
        quo = enumerate_quotient(s)
        for rep in quo.reps:
            assert s.reduce(rep) == rep

    def test_hnf_normal_form_invariants(self):
        rng = random.Random(44)
        for _ in range(40):
            n = rng.randint(1, 4)
            mat = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
            if exact_determinant(mat) == 0:
                continue
            s = subgroup_from_matrix(mat)
            for i in range(n):
                assert s.basis[i][i] > 0
                for j in range(n):
                    if j < i:
                        assert s.basis[i][j] == 0
                    elif j > i:
                        assert 0 <= s.basis[i][j] < s.basis[i][i]


class TestQuotients:
    def test_rank_one_reps(self):
        quo = enumerate_quotient(diagonal_subgroup(1, 3))
        assert quo.reps == ((0,), (1,), (2,))

    def test_diag22(self):
        quo = enumerate_quotient(diagonal_subgroup(2, 2))
        assert len(quo.reps) == 4

    def test_trivial_quotient(self):
        quo = enumerate_quotient(diagonal_subgroup(2, 1))
        assert quo.reps == ((0, 0),)


class TestActionMatrix:
    def test_shift_is_cyclic_permutation(self):
        m = action_matrix(parse_poly("t"), diagonal_subgroup(1, 3))
        assert m == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]

    def test_circulant_first_column(self):
        m = action_matrix(parse_poly("4 - 3*t"), diagonal_subgroup(1, 3))
        assert [m[i][0] for i in range(3)] == [4, -3, 0]
        assert exact_determinant(m) == 37

    def test_constant_is_scalar_matrix(self):
        m = action_matrix(parse_poly("5"), diagonal_subgroup(1, 4))
        assert m == [[5 if i == j else 0 for j in range(4)] for i in range(4)]

    def test_ring_homomorphism(self):
        rng = random.Random(42)
        subs = [diagonal_subgroup(1, 4), diagonal_subgroup(2, 3),
                subgroup_from_matrix([[2, 1], [0, 3]])]
        for sub in subs:
            for _ in range(30):
                f = rand_poly(rng, rank=sub.rank, max_terms=3, span=2, coeff=5)
                g = rand_poly(rng, rank=sub.rank, max_terms=3, span=2, coeff=5)
                mf, mg = action_matrix(f, sub), action_matrix(g, sub)
                assert action_matrix(f * g, sub) == mat_mul(mf, mg)
                msum = action_matrix(f + g, sub)
                assert msum == [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(mf, mg)]

    def test_determinant_against_complex_roots(self):
        # product of f over the n-th roots of unity, against exact integer dets
        for n in range(1, 11):
            for f in (parse_poly("4 - 3*t"), parse_poly("t - 2"), parse_poly("t^2 + 3")):
                det = exact_determinant(action_matrix(f, diagonal_subgroup(1, n)))
                prod = 1.0 + 0.0j
                for k in range(n):
                    z = cmath.exp(2j * math.pi * k / n)
                    prod *= sum(c * z ** e for (e,), c in f.terms.items())
                assert abs(prod - det) <= 1e-6 * max(1.0, abs(det))

    def test_powers_of_four_minus_three(self):
        for n in range(1, 13):
            det = exact_determinant(action_matrix(parse_poly("4 - 3*t"), diagonal_subgroup(1, n)))
            assert det == 4 ** n - 3 ** n

    def test_t_minus_two_at_five(self):
        det = exact_determinant(action_matrix(parse_poly("t - 2"), diagonal_subgroup(1, 5)))
        assert abs(det) == 2 ** 5 - 1


class TestResolutions:
    def test_koszul_shapes(self):
        res = koszul_resolution([parse_poly("2"), parse_poly("t^2 + t + 1")])
        assert res.length == 2 and res.module_ranks == (1, 2, 1)
        cx = complex_from_resolution(res, diagonal_subgroup(1, 3))
        assert len(cx.boundaries[0]) == 3 and len(cx.boundaries[0][0]) == 6
        assert len(cx.boundaries[1]) == 6 and len(cx.boundaries[1][0]) == 3

    def test_principal_shape(self):
        res = principal_resolution(parse_poly("t - 2"))
        cx = complex_from_resolution(res, diagonal_subgroup(1, 4))
        assert cx.ranks == (4, 4)

    def test_corrupt_resolution_rejected(self):
        f, g = parse_poly("t"), parse_poly("t + 1")
        d1 = LaurentMatrix(1, [[f, g]])
        d2 = LaurentMatrix(1, [[g], [f]])  # composite 2fg != 0
        with pytest.raises(ValueError):
            FreeResolution(1, [d1, d2])

    def test_json_round_trip(self):
        res = koszul_resolution([parse_poly("3"), parse_poly("t - 1")])
        again = FreeResolution.from_json(res.to_json())
        assert again.boundaries == res.boundaries


class TestHomology:
    def test_times_two_complex(self):
        summary = homology(IntegerComplex([1, 1], [[[2]]]))
        assert summary.degrees[0].order == 2 and summary.degrees[1].order == 1

    def test_principal_coker_order(self):
        res = principal_resolution(parse_poly("t - 2"))
        for n in (1, 2, 5, 8):
            summary = homology(complex_from_resolution(res, diagonal_subgroup(1, n)))
            assert summary.degrees[0].order == 2 ** n - 1
            assert summary.degrees[1].order == 1

    def test_identity_boundary_trivial_homology(self):
        summary = homology(IntegerComplex([3, 3], [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]))
        assert all(d.order == 1 for d in summary.degrees)


class TestEulerCharacteristic:
    def test_f4_module_chi_is_one(self):
        res = koszul_resolution([parse_poly("2"), parse_poly("t^2 + t + 1")])
        for n in range(1, 6):
            assert euler_characteristic(res, diagonal_subgroup(1, 3 * n)) == 1

    def test_principal_chi(self):
        res = principal_resolution(parse_poly("4 - 3*t"))
        for n in range(1, 8):
            assert euler_characteristic(res, diagonal_subgroup(1, n)) == 4 ** n - 3 ** n

    def test_koszul_3_tminus1(self):
        res = koszul_resolution([parse_poly("3"), parse_poly("t - 1")])
        for n in (1, 2, 3, 5):
            assert euler_characteristic(res, diagonal_subgroup(1, n)) == 1

    def test_infinite_homology_raises(self):
        res = principal_resolution(parse_poly("t - 1"))
        with pytest.raises(InfiniteHomologyError):
            euler_characteristic(res, diagonal_subgroup(1, 3))

    def test_unimodular_change_of_basis_invariance(self):
        rng = random.Random(43)
        f, g = parse_poly("2"), parse_poly("t^2 + t + 1")
        res = koszul_resolution([f, g])
        sub = diagonal_subgroup(1, 3)
        base = euler_characteristic(res, sub)
        one, zero = LaurentPoly.one(1), LaurentPoly.zero(1)
        for _ in range(10):
            h = rand_poly(rng, max_terms=2, span=1, coeff=2)
            elem = LaurentMatrix(1, [[one, h], [zero, one]])
            elem_inv = LaurentMatrix(1, [[one, -h], [zero, one]])
            mono = LaurentMatrix.from_scalar(LaurentPoly.monomial((rng.randint(-2, 2),),
                                                                  rng.choice([1, -1])))
            mono_inv = det_inverse_of_monomial(mono)
            # change basis of F_1: d1 <- d1 * E, d2 <- E^inv * d2
            d1 = res.boundaries[0] * elem
            d2 = elem_inv * res.boundaries[1]
            changed = FreeResolution(1, [d1, d2])
            assert euler_characteristic(changed, sub) == base
            # change basis of F_0 (left) and of F_2 (right) by monomial units
            changed2 = FreeResolution(1, [mono * res.boundaries[0], res.boundaries[1] * mono_inv])
            assert euler_characteristic(changed2, sub) == base

    def test_chi_multiplicative_on_direct_sums(self):
        a = principal_resolution(parse_poly("t - 2"))
        b = koszul_resolution([parse_poly("2"), parse_poly("t^2 + t + 1")])
        both = direct_sum_resolution(a, b)
        for n in (3, 6):
            sub = diagonal_subgroup(1, n)
            assert euler_characteristic(both, sub) == \
                euler_characteristic(a, sub) * euler_characteristic(b, sub)

    def test_fixed_points(self):
        res = koszul_resolution([parse_poly("2"), parse_poly("t^2 + t + 1")])
        for n in (1, 2, 4):
            assert fixed_points_count(res, diagonal_subgroup(1, 3 * n)) == 4
        res2 = principal_resolution(parse_poly("t - 2"))
        assert fixed_points_count(res2, diagonal_subgroup(1, 6)) == 2 ** 6 - 1
        res3 = principal_resolution(parse_poly("4 - 3*t"))
        assert fixed_points_count(res3, diagonal_subgroup(1, 4)) == 4 ** 4 - 3 ** 4


def det_inverse_of_monomial(mono: LaurentMatrix) -> LaurentMatrix:
    (m, c), = mono.entries[0][0].terms.items()
    return LaurentMatrix.from_scalar(LaurentPoly.monomial(tuple(-e for e in m), c))


class TestSequences:
    def test_parse_spec(self):
        seq = parse_sequence_spec("diag:n=1..4", 1)
        assert [s.index for s in seq] == [1, 2, 3, 4]
        seq2 = parse_sequence_spec("diag:n=1..3:scale=3", 1)
        assert [s.index for s in seq2] == [3, 6, 9]
        seq3 = parse_sequence_spec("diag:n=2..8:step=2", 2)
        assert [s.index for s in seq3] == [4, 16, 36, 64]

    def test_bad_specs(self):
        for bad in ("diag:n=5..1", "diag", "n=1..4", "diag:n=0..4"):
            with pytest.raises(ValueError):
                parse_sequence_spec(bad, 1)

    def test_diagonal_sequence_matches_spec(self):
        assert [s.index for s in diagonal_sequence(2, 1, 3)] == [1, 4, 9]
