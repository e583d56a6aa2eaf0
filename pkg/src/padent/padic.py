"""Capped-precision arithmetic in Q_p.

A nonzero number is stored as p^v * unit with the unit known to `prec`
base-p digits (relative precision).  Arithmetic propagates certified
precision; series evaluations (Iwasawa logarithm, exponential) carry enough
guard digits that every reported digit is correct.  The logarithm takes the
branch with log_p(p) = 0 and kills roots of unity exactly at the stored
precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class PrecisionError(ArithmeticError):
    """All certified digits were cancelled; rerun with a larger precision."""


def int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is undefined for integers")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def _ilog(n: int, p: int) -> int:
    """floor(log_p(n)) for n >= 1."""
    e = 0
    while n >= p:
        n //= p
        e += 1
    return e


class PadicNumber:
    """An element of Q_p at certified finite precision.

    Nonzero: value = p^v * unit with unit coprime to p, known mod p^prec.
    Zero: unit == 0 and prec records the absolute precision to which the
    value is known to vanish (math.inf for exact zeros).
    """

    __slots__ = ("p", "v", "unit", "prec")

    def __init__(self, p: int, v: int | None, unit: int, prec):
        object.__setattr__(self, "p", p)
        if unit == 0:
            object.__setattr__(self, "v", None)
            object.__setattr__(self, "unit", 0)
            object.__setattr__(self, "prec", prec)
            return
        if prec < 1:
            raise PrecisionError("no certified digits left; enlarge K")
        unit %= p ** prec
        if unit % p == 0:
            raise ValueError("unit part divisible by p")
        object.__setattr__(self, "v", int(v))
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "prec", int(prec))

    def __setattr__(self, *_):
        raise AttributeError("PadicNumber is immutable")

    # ----- constructors --------------------------------------------------
    @classmethod
    def zero(cls, p: int, abs_prec=math.inf) -> "PadicNumber":
        return cls(p, None, 0, abs_prec)

    @classmethod
    def one(cls, p: int, K: int) -> "PadicNumber":
        return cls(p, 0, 1, K)

    @classmethod
    def from_integer(cls, n: int, p: int, K: int) -> "PadicNumber":
        if n == 0:
            return cls.zero(p)
        v = int_valuation(n, p)
        return cls(p, v, (n // p ** v) % p ** K, K)

    @classmethod
    def from_rational(cls, q, p: int, K: int) -> "PadicNumber":
        q = Fraction(q)
        if q == 0:
            return cls.zero(p)
        num, den = q.numerator, q.denominator
        vn = int_valuation(num, p)
        vd = int_valuation(den, p)
        modulus = p ** K
        unit = (num // p ** vn) * pow(den // p ** vd, -1, modulus) % modulus
        return cls(p, vn - vd, unit, K)

    @classmethod
    def from_residue(cls, r: int, p: int, abs_prec: int) -> "PadicNumber":
        """Interpret r mod p^abs_prec as a number known to that absolute precision."""
        r %= p ** abs_prec
        if r == 0:
            return cls.zero(p, abs_prec)
        v = int_valuation(r, p)
        return cls(p, v, r // p ** v, abs_prec - v)

    # ----- basic queries --------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    def valuation(self):
        return math.inf if self.is_zero else self.v

    def abs_precision(self):
        return self.prec if self.is_zero else self.v + self.prec

    def unit_digits(self, count: int | None = None) -> list[int]:
        """Little-endian base-p digits of the unit part."""
        if self.is_zero:
            return []
        count = self.prec if count is None else min(count, self.prec)
        u = self.unit
        digits = []
        for _ in range(count):
            u, d = divmod(u, self.p)
            digits.append(d)
        return digits

    def residue(self, abs_prec: int) -> int:
        """The value mod p^abs_prec (requires v >= 0 and enough precision)."""
        if self.is_zero:
            if self.prec < abs_prec:
                raise PrecisionError("zero not certified to the requested precision")
            return 0
        if self.v < 0:
            raise ValueError("negative valuation has no integer residue")
        if self.abs_precision() < abs_prec:
            raise PrecisionError("value not certified to the requested precision")
        return (self.unit * self.p ** self.v) % self.p ** abs_prec

    # ----- arithmetic ------------------------------------------------------
    def _check(self, other: "PadicNumber"):
        if self.p != other.p:
            raise ValueError("mixed primes")

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            self._check(other)
            return other
        if isinstance(other, int):
            K = self.prec if not self.is_zero and self.prec != math.inf else 64
            return PadicNumber.from_integer(other, self.p, int(K))
        return NotImplemented

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            # absolute precision of a product with a zero-at-precision factor
            zs = [z for z in (self, other) if z.is_zero]
            nz = [z for z in (self, other) if not z.is_zero]
            a = min(z.prec for z in zs)
            if nz:
                a = a + nz[0].v if a != math.inf else math.inf
            return PadicNumber.zero(self.p, a)
        prec = min(self.prec, other.prec)
        return PadicNumber(self.p, self.v + other.v, self.unit * other.unit, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by a p-adic zero")
        inv_prec = other.prec
        inv = PadicNumber(self.p, -other.v, pow(other.unit, -1, self.p ** inv_prec), inv_prec)
        return self * inv

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if self.is_zero:
            if n <= 0:
                raise ZeroDivisionError("zero to a non-positive power")
            return PadicNumber.zero(self.p, self.prec)
        if n < 0:
            return PadicNumber.one(self.p, self.prec) / self ** (-n)
        modulus = self.p ** self.prec
        return PadicNumber(self.p, self.v * n, pow(self.unit, n, modulus), self.prec)

    def __neg__(self):
        if self.is_zero:
            return self
        return PadicNumber(self.p, self.v, -self.unit, self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero and other.is_zero:
            return PadicNumber.zero(self.p, min(self.prec, other.prec))
        if self.is_zero or other.is_zero:
            z, x = (self, other) if self.is_zero else (other, self)
            a = min(z.prec, x.abs_precision())
            if a <= x.v:
                return PadicNumber.zero(self.p, a)
            return PadicNumber(self.p, x.v, x.unit, min(x.prec, a - x.v))
        v = min(self.v, other.v)
        a = min(self.abs_precision(), other.abs_precision())
        if a == math.inf:
            a = v + max(self.prec, other.prec)
        modulus = self.p ** (a - v)
        r = (self.unit * self.p ** (self.v - v) + other.unit * self.p ** (other.v - v)) % modulus
        if r == 0:
            return PadicNumber.zero(self.p, a)
        w = int_valuation(r, self.p)
        return PadicNumber(self.p, v + w, r // self.p ** w, a - v - w)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __eq__(self, other):
        if not isinstance(other, PadicNumber):
            return NotImplemented
        if self.p != other.p:
            return False
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        common = min(self.prec, other.prec)
        return self.v == other.v and (self.unit - other.unit) % self.p ** common == 0

    def __hash__(self):
        return hash((self.p, self.v, self.is_zero))

    def congruent(self, other: "PadicNumber", digits: int) -> bool:
        """True when v_p(self - other) >= digits."""
        diff = self - other
        return diff.valuation() >= digits

    # ----- printing --------------------------------------------------------
    def __str__(self):
        if self.is_zero:
            if self.prec == math.inf:
                return "0"
            return f"0 + O({self.p}^{self.prec})"
        digits = self.unit_digits()
        parts = []
        for k, d in enumerate(digits):
            parts.append(str(d) if k == 0 else f"{d}*{self.p ** k}")
        return f"{self.p}^{self.v} * ({' + '.join(parts)} + ...) [K={self.prec}]"

    def __repr__(self):
        return f"PadicNumber({self})"

    def to_json(self) -> dict:
        if self.is_zero:
            return {"p": self.p, "v": None, "unit_digits": [],
                    "K": None if self.prec == math.inf else self.prec}
        return {"p": self.p, "v": self.v, "unit_digits": self.unit_digits(), "K": self.prec}


# --------------------------------------------------------------------------
# logarithm / exponential / Teichmueller
# --------------------------------------------------------------------------

def _log_one_plus(y: int, p: int, abs_prec: int) -> int:
    """log(1 + y) mod p^abs_prec for v_p(y) >= 1 (>= 2 when p = 2)."""
    y %= p ** abs_prec
    if y == 0:
        return 0
    m = int_valuation(y, p)
    if m < 1 or (p == 2 and m < 2):
        raise ValueError("argument outside the convergence domain of log")
    kmax = 1
    while kmax * m - _ilog(kmax, p) < abs_prec:
        kmax += 1
    guard = _ilog(kmax, p) + 1
    modulus = p ** (abs_prec + guard)
    acc = 0
    ypow = 1
    for k in range(1, kmax + 1):
        ypow = ypow * y % modulus
        e = int_valuation(k, p) if k % p == 0 else 0
        term = (ypow // p ** e) * pow(k // p ** e, -1, modulus) % modulus
        acc = acc + term if k % 2 == 1 else acc - term
    return acc % p ** abs_prec


def padic_log(x: PadicNumber) -> PadicNumber:
    """Iwasawa logarithm: log_p(p) = 0, roots of unity are killed exactly.

    The 1-unit part is reached by raising the unit to the (p-1)-th power and
    dividing the series value by p-1 (squaring and halving for p = 2).
    """
    if x.is_zero:
        raise ValueError("logarithm of zero")
    p, K = x.p, x.prec
    if K == math.inf:
        K = 64
    if p == 2:
        usq = pow(x.unit, 2, 2 ** (K + 2))
        L = _log_one_plus(usq - 1, 2, K + 1)
        return PadicNumber.from_residue(L // 2, 2, K)
    w = pow(x.unit, p - 1, p ** K)
    L = _log_one_plus(w - 1, p, K)
    L = L * pow(p - 1, -1, p ** K) % p ** K
    return PadicNumber.from_residue(L, p, K)


def log_of_rational(q, p: int, K: int) -> PadicNumber:
    return padic_log(PadicNumber.from_rational(q, p, K))


def padic_exp(x: PadicNumber) -> PadicNumber:
    """exp_p via the power series; requires v(x) >= 1 (>= 2 when p = 2)."""
    p = x.p
    if x.is_zero:
        prec = x.prec if x.prec != math.inf else 64
        return PadicNumber.one(p, int(min(prec, 10 ** 6)))
    need = 2 if p == 2 else 1
    if x.v < need:
        raise ValueError(f"exp_{p} requires valuation >= {need}, got {x.v}")
    abs_prec = x.v + x.prec
    # tail bound: v(x^k / k!) >= k*v - (k-1)/(p-1), increasing in k since v > 1/(p-1)
    num = abs_prec * (p - 1) - 1
    den = x.v * (p - 1) - 1
    kmax = max(1, -(-num // den))
    guard = sum(kmax // p ** i for i in range(1, _ilog(kmax, p) + 1)) + 1 if kmax >= p else 1
    modulus = p ** (abs_prec + guard)
    xint = x.unit * p ** x.v % modulus
    acc = 1
    xpow = 1
    fe = 0
    fu = 1
    for k in range(1, kmax + 1):
        xpow = xpow * xint % modulus
        e = int_valuation(k, p) if k % p == 0 else 0
        fe += e
        fu = fu * (k // p ** e) % modulus
        acc += (xpow // p ** fe) * pow(fu, -1, modulus)
    return PadicNumber.from_residue(acc % p ** abs_prec, p, abs_prec)


def teichmuller(c: int, p: int, K: int) -> int:
    """The (p-1)-th root of unity congruent to c mod p, as a residue mod p^K.

    Computed by iterating the Frobenius x -> x^p to its fixed point.
    """
    if c % p == 0:
        raise ValueError("no Teichmueller representative for a residue divisible by p")
    if p == 2:
        return 1
    modulus = p ** K
    x = c % modulus
    for _ in range(K + 2):
        nxt = pow(x, p, modulus)
        if nxt == x:
            return x
        x = nxt
    raise AssertionError("Teichmueller iteration failed to stabilize")


@dataclass(frozen=True)
class ComponentDecomposition:
    """x = p^nu * zeta * one_unit with zeta a root of unity and one_unit a 1-unit.

    For odd p the middle factor is the Teichmueller representative; for p = 2
    it lies in {1, -1} and the 1-unit is congruent to 1 mod 4.
    """

    p: int
    K: int
    nu: int
    teichmuller: int
    one_unit: int

    def one_unit_padic(self) -> PadicNumber:
        return PadicNumber(self.p, 0, self.one_unit, self.K)

    def reconstructs(self, x: PadicNumber) -> bool:
        modulus = self.p ** min(self.K, x.prec)
        return self.nu == x.v and (self.teichmuller * self.one_unit - x.unit) % modulus == 0


def component_decomposition(x: PadicNumber) -> ComponentDecomposition:
    if x.is_zero:
        raise ValueError("decomposition of zero")
    p = x.p
    K = x.prec if x.prec != math.inf else 64
    modulus = p ** K
    if p == 2:
        if K < 2:
            raise PrecisionError("need at least 2 digits to split the sign for p = 2")
        zeta = 1 if x.unit % 4 == 1 else modulus - 1
        one_unit = x.unit * zeta % modulus  # zeta is its own inverse
    else:
        zeta = teichmuller(x.unit % p, p, K)
        one_unit = x.unit * pow(zeta, -1, modulus) % modulus
    return ComponentDecomposition(p, int(K), x.v, zeta, one_unit)


def one_unit_component(q, p: int, K: int) -> PadicNumber:
    """The 1-unit component of a nonzero rational, as a p-adic number."""
    return component_decomposition(PadicNumber.from_rational(q, p, K)).one_unit_padic()


# --------------------------------------------------------------------------
# convergence reports
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceLevel:
    index: int
    raw_log: PadicNumber
    value: PadicNumber


@dataclass(frozen=True)
class ConvergenceReport:
    """Renormalized p-adic limit data for a sequence of levels.

    `diff_valuations[j]` is v_p(value_{j+1} - value_j).  The sequence is
    declared Cauchy when these valuations never decrease; the extrapolated
    limit is the last value and is published only in that case.  The
    agreement depth is the minimal difference valuation over the last three
    levels.
    """

    levels: tuple[ConvergenceLevel, ...]
    diff_valuations: tuple
    agreement_depth: float
    cauchy: bool
    extrapolated: PadicNumber | None

    def values(self) -> list[PadicNumber]:
        return [lvl.value for lvl in self.levels]

    def to_json(self) -> dict:
        def enc(v):
            return None if v == math.inf else v

        return {
            "levels": [
                {"index": lvl.index, "raw_log": lvl.raw_log.to_json(), "value": lvl.value.to_json()}
                for lvl in self.levels
            ],
            "diff_valuations": [enc(v) for v in self.diff_valuations],
            "agreement_depth": enc(self.agreement_depth),
            "cauchy": self.cauchy,
            "extrapolated": None if self.extrapolated is None else self.extrapolated.to_json(),
        }


def build_convergence_report(indices: Sequence[int], raw_logs: Sequence[PadicNumber]) -> ConvergenceReport:
    levels = tuple(
        ConvergenceLevel(idx, raw, raw / idx)
        for idx, raw in zip(indices, raw_logs)
    )
    values = [lvl.value for lvl in levels]
    diffs = tuple((b - a).valuation() for a, b in zip(values, values[1:]))
    # depth over a sliding window of three levels; single-level spikes in the
    # raw difference valuations are tolerated, sustained decreases are not
    depths = tuple(min(a, b) for a, b in zip(diffs, diffs[1:]))
    cauchy = all(b >= a for a, b in zip(depths, depths[1:]))
    depth = min(diffs[-2:], default=math.inf)
    extrapolated = values[-1] if (cauchy and values) else None
    return ConvergenceReport(levels, diffs, depth, cauchy, extrapolated)


def limit_checker(pairs: Sequence[tuple[int, object]], p: int, K: int) -> ConvergenceReport:
    """Convergence table for a_n^{-1} log_p(chi_n) over given (a_n, chi_n).

    Non-convergence is a report outcome (cauchy=False), never an error.
    """
    indices = []
    raws = []
    for a_n, chi in pairs:
        if a_n == 0:
            raise ValueError("zero renormalization index")
        chi = Fraction(chi)
        if chi == 0:
            raise ValueError("zero Euler characteristic in limit data")
        indices.append(a_n)
        raws.append(log_of_rational(chi, p, K))
    return build_convergence_report(indices, raws)


# --------------------------------------------------------------------------
# asymptotic comparison of 1-unit components
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OneUnitAsymptoticsReport:
    """Growth table for chi_n^{(1)k} / exp_p(k h_p)^{a_n} -> 1."""

    k: int
    valuations: tuple
    normalized: tuple
    ok: bool

    def to_json(self) -> dict:
        enc = lambda v: None if v == math.inf else v
        return {
            "k": self.k,
            "valuations": [enc(v) for v in self.valuations],
            "normalized": [enc(v) for v in self.normalized],
            "ok": self.ok,
        }


def verify_one_unit_asymptotics(pairs: Sequence[tuple[int, object]], h_p: PadicNumber, k: int, K: int) -> OneUnitAsymptoticsReport:
    """Check that the 1-unit components track exp_p(k*h_p)^{a_n}.

    Requires |k*h_p| < 1 for odd p and < 1/2 for p = 2 so that the
    exponential converges.
    """
    if k == 0:
        raise ValueError("k must be nonzero")
    p = h_p.p
    kh = h_p * k
    need = 2 if p == 2 else 1
    if not kh.is_zero and kh.v < need:
        raise ValueError("k*h_p outside the exponential convergence radius")
    base = padic_exp(kh)
    one = PadicNumber.one(p, K)
    vals = []
    normalized = []
    for a_n, chi in pairs:
        if a_n == 0:
            raise ValueError("zero renormalization index")
        u1 = one_unit_component(Fraction(chi), p, K)
        ratio = (u1 ** k) / (base ** a_n)
        v = (ratio - one).valuation()
        vals.append(v)
        normalized.append(v / abs(a_n) if v != math.inf else math.inf)
    tail = vals[-4:]
    ok = all(
        (a == math.inf and b == math.inf) or (b > a)
        for a, b in zip(tail, tail[1:])
    )
    return OneUnitAsymptoticsReport(k, tuple(vals), tuple(normalized), ok)
