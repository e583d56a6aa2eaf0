"""The p-adic determinant log_p det for the group Z^N.

Two routes are implemented and cross-validated:

* the series route: decompose a unit of the completed group ring as
  p^nu * zeta * t^a * g with g a 1-unit, then take the constant coefficient
  of -sum (1-g)^k / k (the p-power, root of unity and monomial factors
  contribute zero under the Iwasawa branch);
* the limit route: renormalized p-adic logs of exact determinants of the
  finite quotient action matrices.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ._util import map_levels
from .intmat import exact_determinant
from .laurent import LaurentMatrix, LaurentPoly, TruncatedPoly, det_symbolic
from .padic import (
    ConvergenceReport,
    PadicNumber,
    _ilog,
    build_convergence_report,
    int_valuation,
    padic_log,
    teichmuller,
)
from .quotients import FiniteIndexSubgroup, action_matrix, check_strictly_increasing


class NotAUnitError(ValueError):
    """The element is not invertible in the completed group ring: the module
    it presents is not p-adically expansive."""


class SingularLevelError(RuntimeError):
    """A finite-quotient action matrix is singular at some level."""

    def __init__(self, index: int):
        super().__init__(f"singular action matrix at level of index {index}")
        self.index = index


@dataclass(frozen=True)
class SeriesParams:
    """Truncation data for the 1-unit logarithm series at precision K."""

    p: int
    K: int
    k_max: int

    @classmethod
    def for_precision(cls, p: int, K: int) -> "SeriesParams":
        k = 1
        while k - _ilog(k, p) < K:
            k += 1
        return cls(p, K, k)

    @property
    def guard(self) -> int:
        return _ilog(self.k_max, p=self.p) + 1


@dataclass(frozen=True)
class UnitDecomposition:
    """f = p^nu * zeta * t^a * g with zeta in mu_{p-1} and g = 1 mod p."""

    nu: int
    teichmuller: int
    monomial: tuple[int, ...]
    one_unit: TruncatedPoly

    @property
    def p(self) -> int:
        return self.one_unit.p

    @property
    def K(self) -> int:
        return self.one_unit.K

    def reconstructs(self, f: LaurentPoly) -> bool:
        p, K = self.p, self.K
        scaled = f.scale_down(p ** self.nu) if self.nu else f
        lhs = scaled.reduce_mod(p, K)
        rhs = self.one_unit.scale(self.teichmuller).shift(self.monomial)
        return lhs == rhs


def decompose_unit(f: LaurentPoly, p: int, K: int) -> UnitDecomposition | None:
    """Split f along the unit group of the completed group ring.

    Returns None when f is not a unit there, which for exact Laurent
    polynomials happens exactly when the mod-p reduction (after stripping
    the coefficient content) has more than one term.
    """
    if not f:
        raise ValueError("cannot decompose the zero polynomial")
    nu = f.content_valuation(p)
    f1 = f.scale_down(p ** nu) if nu else f
    red = f1.reduce_mod(p, 1)
    if len(red.terms) != 1:
        return None
    (mono, c), = red.terms.items()
    zeta = teichmuller(c, p, K)
    modulus = p ** K
    g = f1.reduce_mod(p, K).scale(pow(zeta, -1, modulus)).shift(tuple(-e for e in mono))
    return UnitDecomposition(int(nu), zeta, mono, g)


def tr_log_one_unit(g, p: int, K: int) -> PadicNumber:
    """Constant coefficient of log(g) for a 1-unit g, certified mod p^K.

    g is a TruncatedPoly with g = 1 mod p, or a square matrix (nested lists)
    of TruncatedPoly with g = 1 mod p entrywise; for matrices the trace is
    taken before the constant coefficient.  Division by k inside the series
    is exact thanks to guard digits carried by the working precision.
    """
    params = SeriesParams.for_precision(p, K)
    working = K + params.guard
    if isinstance(g, TruncatedPoly):
        if g.K < working:
            raise ValueError(
                f"1-unit known to {g.K} digits but the series needs {working}; enlarge K")
        one = TruncatedPoly.one(g.rank, p, g.K)
        x = one - g
        if x.content_valuation() < 1:
            raise ValueError("argument is not a 1-unit")
        # a constant 1-unit is a scalar in Z_p: delegate to the scalar log,
        # which kills torsion units such as -1 exactly
        if not x or set(x.terms) == {(0,) * g.rank}:
            c = g.trace_coefficient()
            return padic_log(PadicNumber(p, 0, c % p ** K, K))
        powers = x
        acc = 0
        modulus = p ** K
        big = p ** g.K
        for k in range(1, params.k_max + 1):
            if k > 1:
                powers = powers * x
            c = powers.trace_coefficient() % big
            e = int_valuation(k, p) if k % p == 0 else 0
            term = (c // p ** e) * pow(k // p ** e, -1, big) % big
            acc = (acc - term) % modulus
        return PadicNumber.from_residue(acc, p, K)

    # matrix branch
    rows = list(g)
    r = len(rows)
    sample = rows[0][0]
    if sample.K < working:
        raise ValueError(
            f"1-unit matrix known to {sample.K} digits but the series needs {working}; enlarge K")
    rank, Kg = sample.rank, sample.K
    one = TruncatedPoly.one(rank, p, Kg)
    zero = TruncatedPoly.zero(rank, p, Kg)
    x = [[(one if i == j else zero) - rows[i][j] for j in range(r)] for i in range(r)]
    for row in x:
        for e in row:
            if e and e.content_valuation() < 1:
                raise ValueError("matrix is not congruent to 1 mod p")

    def mat_mul_trunc(a, b):
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                acc = zero
                for k in range(r):
                    acc = acc + a[i][k] * b[k][j]
                row.append(acc)
            out.append(row)
        return out

    powers = x
    acc = 0
    modulus = p ** K
    big = p ** Kg
    for k in range(1, params.k_max + 1):
        if k > 1:
            powers = mat_mul_trunc(powers, x)
        trace = 0
        for i in range(r):
            trace = (trace + powers[i][i].trace_coefficient()) % big
        e = int_valuation(k, p) if k % p == 0 else 0
        term = (trace // p ** e) * pow(k // p ** e, -1, big) % big
        acc = (acc - term) % modulus
    return PadicNumber.from_residue(acc, p, K)


def logdet_scalar(f: LaurentPoly, p: int, K: int) -> PadicNumber:
    """log_p det of a scalar unit f of the completed group ring.

    The p-power, Teichmueller and monomial factors of the decomposition are
    killed by the Iwasawa branch; only the 1-unit part contributes.
    """
    working = K + SeriesParams.for_precision(p, K).guard
    dec = decompose_unit(f, p, working)
    if dec is None:
        raise NotAUnitError(
            f"{f} is not a unit of the completed group ring at p={p} "
            "(the presented module is not p-adically expansive)")
    return tr_log_one_unit(dec.one_unit, p, K)


def _is_one_mod_p(mat: LaurentMatrix, p: int) -> bool:
    rank = mat.rank
    one = LaurentPoly.one(rank)
    for i in range(mat.rows):
        for j in range(mat.cols):
            e = mat.entries[i][j] - (one if i == j else 0)
            if e and e.content_valuation(p) < 1:
                return False
    return True


def logdet_matrix(f: LaurentMatrix, p: int, K: int) -> PadicNumber:
    """log_p det of a square matrix over the Laurent ring.

    Contract path: logdet of the symbolic determinant.  When f = 1 mod p
    entrywise the direct matrix tr log route is also evaluated and must
    agree to precision (internal cross-check).
    """
    if f.rows != f.cols:
        raise ValueError("logdet of a non-square matrix")
    det = det_symbolic(f)
    if not det:
        raise NotAUnitError("matrix has zero symbolic determinant")
    value = logdet_scalar(det, p, K)
    if _is_one_mod_p(f, p):
        working = K + SeriesParams.for_precision(p, K).guard
        trunc = [[f.entries[i][j].reduce_mod(p, working) for j in range(f.cols)]
                 for i in range(f.rows)]
        direct = tr_log_one_unit(trunc, p, K)
        if not value.congruent(direct, K - 1):
            raise RuntimeError(
                f"matrix and determinant tr-log routes disagree: {value} vs {direct}")
    return value


def logdet_limit_estimate(f: LaurentPoly | LaurentMatrix, p: int,
                          subgroups: Sequence[FiniteIndexSubgroup], K: int) -> ConvergenceReport:
    """Renormalized finite-level route: (index)^{-1} log_p det of the action
    matrices along a subgroup sequence of strictly increasing index."""
    check_strictly_increasing(subgroups)

    def level(sub: FiniteIndexSubgroup):
        det = exact_determinant(action_matrix(f, sub))
        if det == 0:
            raise SingularLevelError(sub.index)
        return padic_log(PadicNumber.from_integer(det, p, K))

    raws = map_levels(level, list(subgroups))
    return build_convergence_report([s.index for s in subgroups], raws)
