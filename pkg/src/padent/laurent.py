"""Exact arithmetic in the Laurent polynomial ring Z[t1^±1, ..., tN^±1].

Elements of the integral group ring of Z^N are stored as finite maps from
exponent vectors to arbitrary-precision integer coefficients.  Everything in
this module is exact: no floating point, no hidden truncation.  Mod-p^K
truncations (`TruncatedPoly`) serve as finite-precision surrogates for the
p-adically completed group ring.

All values are immutable after construction and all operations are pure.
"""
from __future__ import annotations

import math
import re
from typing import Iterable, Mapping

Monomial = tuple[int, ...]


class ParseError(ValueError):
    """Raised when a polynomial / matrix string does not match the grammar."""


def _validated_terms(rank: int, terms: Mapping[Monomial, int]) -> dict[Monomial, int]:
    out: dict[Monomial, int] = {}
    for mono, coeff in terms.items():
        mono = tuple(int(e) for e in mono)
        if len(mono) != rank:
            raise ValueError(f"monomial {mono} has length {len(mono)}, expected {rank}")
        if coeff:
            out[mono] = int(coeff)
    return out


class LaurentPoly:
    """An element of Z[t1^±1, ..., tN^±1] with exact integer coefficients."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: Mapping[Monomial, int] | None = None):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        object.__setattr__(self, "rank", int(rank))
        object.__setattr__(self, "terms", _validated_terms(rank, terms or {}))

    def __setattr__(self, *_):
        raise AttributeError("LaurentPoly is immutable")

    # ----- constructors -------------------------------------------------
    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls(rank, {})

    @classmethod
    def constant(cls, rank: int, c: int) -> "LaurentPoly":
        return cls(rank, {(0,) * rank: c})

    @classmethod
    def one(cls, rank: int) -> "LaurentPoly":
        return cls.constant(rank, 1)

    @classmethod
    def variable(cls, rank: int, index: int, power: int = 1) -> "LaurentPoly":
        """The monomial t_index^power (index is 1-based)."""
        if not 1 <= index <= rank:
            raise ValueError(f"variable index {index} out of range for rank {rank}")
        exps = [0] * rank
        exps[index - 1] = power
        return cls(rank, {tuple(exps): 1})

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff: int = 1) -> "LaurentPoly":
        exps = tuple(exps)
        return cls(len(exps), {exps: coeff})

    # ----- ring structure -----------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.rank != self.rank:
                raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.rank, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, 0) + c
        return LaurentPoly(self.rank, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.rank, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                terms[mono] = terms.get(mono, 0) + c1 * c2
        return LaurentPoly(self.rank, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers only defined for monomials; use shift()")
        result = LaurentPoly.one(self.rank)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.rank, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # ----- operations from the ring contract ----------------------------
    def augment(self) -> int:
        """Sum of all coefficients (the ring map sending every t^a to 1)."""
        return sum(self.terms.values())

    def trace_coefficient(self) -> int:
        """Coefficient of the zero monomial (0 if absent)."""
        return self.terms.get((0,) * self.rank, 0)

    def content_valuation(self, p: int) -> int | float:
        """Minimum p-adic valuation over the coefficients; +inf for 0."""
        if not self.terms:
            return math.inf
        best: int | float = math.inf
        for c in self.terms.values():
            v = 0
            c = abs(c)
            while c % p == 0:
                c //= p
                v += 1
                if v >= best:
                    break
            best = min(best, v)
            if best == 0:
                return 0
        return best

    def scale_down(self, factor: int) -> "LaurentPoly":
        """Divide every coefficient by `factor`; division must be exact."""
        terms = {}
        for m, c in self.terms.items():
            q, r = divmod(c, factor)
            if r:
                raise ValueError(f"coefficient {c} not divisible by {factor}")
            terms[m] = q
        return LaurentPoly(self.rank, terms)

    def shift(self, exps: Iterable[int]) -> "LaurentPoly":
        """Multiply by the monomial t^exps (exponents may be negative)."""
        exps = tuple(exps)
        if len(exps) != self.rank:
            raise ValueError("shift vector has wrong length")
        return LaurentPoly(
            self.rank,
            {tuple(a + b for a, b in zip(m, exps)): c for m, c in self.terms.items()},
        )

    def reduce_mod(self, p: int, K: int) -> "TruncatedPoly":
        """Coefficientwise reduction mod p^K."""
        return TruncatedPoly(self.rank, p, K, self.terms)

    def min_exponents(self) -> Monomial:
        """Componentwise minimum exponent over the support (0 vector if empty)."""
        if not self.terms:
            return (0,) * self.rank
        cols = zip(*self.terms.keys())
        return tuple(min(col) for col in cols)

    # ----- printing ------------------------------------------------------
    def _var_name(self, i: int) -> str:
        return "t" if self.rank == 1 else f"t{i + 1}"

    def _format_monomial(self, mono: Monomial) -> str:
        parts = []
        for i, e in enumerate(mono):
            if e == 0:
                continue
            if e == 1:
                parts.append(self._var_name(i))
            else:
                parts.append(f"{self._var_name(i)}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            mstr = self._format_monomial(mono)
            if not mstr:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mstr
            else:
                body = f"{abs(c)}*{mstr}"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"LaurentPoly({self.rank}, {str(self)!r})"


class TruncatedPoly:
    """A Laurent polynomial with coefficients reduced into [0, p^K).

    Finite-support stand-in for elements of the p-adically completed group
    ring: results of arithmetic here are correct to precision K.
    """

    __slots__ = ("rank", "p", "K", "modulus", "terms")

    def __init__(self, rank: int, p: int, K: int, terms: Mapping[Monomial, int] | None = None):
        if K < 1:
            raise ValueError("precision K must be >= 1")
        object.__setattr__(self, "rank", int(rank))
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "K", int(K))
        object.__setattr__(self, "modulus", p ** K)
        reduced: dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != rank:
                raise ValueError("monomial length mismatch")
            r = c % self.modulus
            if r:
                reduced[mono] = r
        object.__setattr__(self, "terms", reduced)

    def __setattr__(self, *_):
        raise AttributeError("TruncatedPoly is immutable")

    @classmethod
    def one(cls, rank: int, p: int, K: int) -> "TruncatedPoly":
        return cls(rank, p, K, {(0,) * rank: 1})

    @classmethod
    def zero(cls, rank: int, p: int, K: int) -> "TruncatedPoly":
        return cls(rank, p, K, {})

    def _check(self, other: "TruncatedPoly"):
        if (self.rank, self.p, self.K) != (other.rank, other.p, other.K):
            raise ValueError("rank/prime/precision mismatch")

    def __add__(self, other: "TruncatedPoly"):
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return TruncatedPoly(self.rank, self.p, self.K, terms)

    def __sub__(self, other: "TruncatedPoly"):
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) - c
        return TruncatedPoly(self.rank, self.p, self.K, terms)

    def __mul__(self, other: "TruncatedPoly"):
        self._check(other)
        terms: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                terms[mono] = (terms.get(mono, 0) + c1 * c2) % self.modulus
        return TruncatedPoly(self.rank, self.p, self.K, terms)

    def scale(self, c: int) -> "TruncatedPoly":
        return TruncatedPoly(self.rank, self.p, self.K, {m: v * c for m, v in self.terms.items()})

    def shift(self, exps: Iterable[int]) -> "TruncatedPoly":
        exps = tuple(exps)
        return TruncatedPoly(
            self.rank, self.p, self.K,
            {tuple(a + b for a, b in zip(m, exps)): c for m, c in self.terms.items()},
        )

    def truncate(self, K: int) -> "TruncatedPoly":
        if K > self.K:
            raise ValueError("cannot raise precision of a truncated polynomial")
        return TruncatedPoly(self.rank, self.p, K, self.terms)

    def trace_coefficient(self) -> int:
        return self.terms.get((0,) * self.rank, 0)

    def content_valuation(self) -> int | float:
        if not self.terms:
            return math.inf
        best: int | float = math.inf
        for c in self.terms.values():
            v = 0
            while c % self.p == 0:
                c //= self.p
                v += 1
            best = min(best, v)
        return best

    def is_one(self) -> bool:
        return self.terms == {(0,) * self.rank: 1}

    def __eq__(self, other):
        if not isinstance(other, TruncatedPoly):
            return NotImplemented
        return (self.rank, self.p, self.K, self.terms) == (other.rank, other.p, other.K, other.terms)

    def __hash__(self):
        return hash((self.rank, self.p, self.K, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        inner = str(LaurentPoly(self.rank, self.terms))
        return f"TruncatedPoly(p={self.p}, K={self.K}, {inner!r})"


class LaurentMatrix:
    """A rectangular matrix over Z[t1^±1, ..., tN^±1]."""

    __slots__ = ("rank", "rows", "cols", "entries")

    def __init__(self, rank: int, entries: Iterable[Iterable[LaurentPoly]]):
        rows = tuple(tuple(row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("matrix must be non-empty")
        ncols = len(rows[0])
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for e in row:
                if not isinstance(e, LaurentPoly) or e.rank != rank:
                    raise ValueError("all entries must be LaurentPoly of the common rank")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, *_):
        raise AttributeError("LaurentMatrix is immutable")

    @classmethod
    def identity(cls, rank: int, n: int) -> "LaurentMatrix":
        one, zero = LaurentPoly.one(rank), LaurentPoly.zero(rank)
        return cls(rank, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_scalar(cls, f: LaurentPoly) -> "LaurentMatrix":
        return cls(f.rank, [[f]])

    def _check_same_shape(self, other: "LaurentMatrix"):
        if (self.rank, self.rows, self.cols) != (other.rank, other.rows, other.cols):
            raise ValueError("shape/rank mismatch")

    def __add__(self, other: "LaurentMatrix"):
        self._check_same_shape(other)
        return LaurentMatrix(self.rank, [
            [a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)
        ])

    def __sub__(self, other: "LaurentMatrix"):
        self._check_same_shape(other)
        return LaurentMatrix(self.rank, [
            [a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)
        ])

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return LaurentMatrix(self.rank, [[e * other for e in row] for row in self.entries])
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        if self.rank != other.rank or self.cols != other.rows:
            raise ValueError("shape/rank mismatch in matrix product")
        zero = LaurentPoly.zero(self.rank)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return LaurentMatrix(self.rank, out)

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return (self.rank, self.entries) == (other.rank, other.entries)

    def __hash__(self):
        return hash((self.rank, self.entries))

    def is_zero(self) -> bool:
        return all(not e for row in self.entries for e in row)

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"LaurentMatrix({self.rows}x{self.cols}, [{body}])"


# --------------------------------------------------------------------------
# symbolic determinants
# --------------------------------------------------------------------------

def _lex_leading(f: LaurentPoly) -> tuple[Monomial, int]:
    mono = max(f.terms)
    return mono, f.terms[mono]


def _exact_poly_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact division in the Laurent ring; raises if den does not divide num."""
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    quot = LaurentPoly.zero(num.rank)
    rem = num
    dmono, dcoeff = _lex_leading(den)
    while rem:
        rmono, rcoeff = _lex_leading(rem)
        q, r = divmod(rcoeff, dcoeff)
        if r:
            raise ValueError("inexact coefficient division")
        qmono = tuple(a - b for a, b in zip(rmono, dmono))
        qterm = LaurentPoly(num.rank, {qmono: q})
        quot = quot + qterm
        rem = rem - qterm * den
    return quot


def _det_cofactor(entries, rank: int) -> LaurentPoly:
    n = len(entries)
    if n == 1:
        return entries[0][0]
    if n == 2:
        return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0]
    acc = LaurentPoly.zero(rank)
    for j in range(n):
        if not entries[0][j]:
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in entries[1:]]
        term = entries[0][j] * _det_cofactor(minor, rank)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _det_bareiss_laurent(entries, rank: int) -> LaurentPoly:
    # Normalize each row by a monomial so entries become ordinary polynomials,
    # run fraction-free elimination, then divide the tracked monomial back out.
    n = len(entries)
    total_shift = [0] * rank
    a: list[list[LaurentPoly]] = []
    for row in entries:
        mins = [math.inf] * rank
        for e in row:
            if e:
                for i, m in enumerate(e.min_exponents()):
                    mins[i] = min(mins[i], m)
        mins = [0 if m == math.inf else int(m) for m in mins]
        for i, m in enumerate(mins):
            total_shift[i] += m
        a.append([e.shift([-m for m in mins]) for e in row])

    sign = 1
    prev = LaurentPoly.one(rank)
    for i in range(n - 1):
        if not a[i][i]:
            pivot = next((j for j in range(i + 1, n) if a[j][i]), None)
            if pivot is None:
                return LaurentPoly.zero(rank)
            a[i], a[pivot] = a[pivot], a[i]
            sign = -sign
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                a[j][k] = _exact_poly_div(a[j][k] * a[i][i] - a[j][i] * a[i][k], prev)
            a[j][i] = LaurentPoly.zero(rank)
        prev = a[i][i]
    det = a[n - 1][n - 1]
    if sign < 0:
        det = -det
    return det.shift(total_shift)


def det_symbolic(mat: LaurentMatrix, method: str = "auto") -> LaurentPoly:
    """Exact determinant of a square matrix over the Laurent ring.

    Cofactor expansion for size <= 4, fraction-free Bareiss elimination above
    (monomial row normalization makes the exact divisions land in Z[t]).
    """
    if mat.rows != mat.cols:
        raise ValueError("determinant of a non-square matrix")
    entries = [list(row) for row in mat.entries]
    if method == "cofactor" or (method == "auto" and mat.rows <= 4):
        return _det_cofactor(entries, mat.rank)
    if method in ("bareiss", "auto"):
        return _det_bareiss_laurent(entries, mat.rank)
    raise ValueError(f"unknown method {method!r}")


# --------------------------------------------------------------------------
# text grammar
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|t(?P<idx>\d+)?|(?P<op>[\^*+\-]))")


def _tokenize(text: str) -> list[tuple[str, int | str]]:
    tokens: list[tuple[str, int | str]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character at {text[pos:pos + 8]!r}")
        if m.group("int") is not None:
            tokens.append(("int", int(m.group("int"))))
        elif m.group("op") is not None:
            tokens.append(("op", m.group("op")))
        else:
            idx = m.group("idx")
            tokens.append(("var", int(idx) if idx is not None else 0))  # 0 = bare t
        pos = m.end()
    return tokens


def parse_poly(text: str, rank: int | None = None) -> LaurentPoly:
    """Parse the polynomial grammar: `4 - 3*t`, `3 + t1 + t2^-1`, ...

    `*` between factors is optional, exponents follow `^` and may be negative.
    Bare `t` is shorthand for `t1`.  The rank is inferred from the largest
    variable index unless given explicitly.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial string")

    # terms: list of (coeff, {index: exponent})
    terms: list[tuple[int, dict[int, int]]] = []
    i = 0

    def parse_term(sign: int):
        nonlocal i
        coeff = sign
        exps: dict[int, int] = {}
        saw_factor = False
        while i < len(tokens):
            kind, val = tokens[i]
            if kind == "op" and val in "+-":
                break
            if kind == "op" and val == "*":
                i += 1
                continue
            if kind == "op" and val == "^":
                raise ParseError("dangling '^'")
            if kind == "int":
                coeff *= val
                i += 1
                saw_factor = True
                continue
            # variable factor
            idx = max(int(val), 1)
            i += 1
            e = 1
            if i < len(tokens) and tokens[i] == ("op", "^"):
                i += 1
                esign = 1
                if i < len(tokens) and tokens[i] == ("op", "-"):
                    esign = -1
                    i += 1
                if i >= len(tokens) or tokens[i][0] != "int":
                    raise ParseError("exponent must be an integer")
                e = esign * int(tokens[i][1])
                i += 1
            exps[idx] = exps.get(idx, 0) + e
            saw_factor = True
        if not saw_factor:
            raise ParseError("empty term")
        terms.append((coeff, exps))

    sign = 1
    if tokens[0] == ("op", "-"):
        sign = -1
        i = 1
    elif tokens[0] == ("op", "+"):
        i = 1
    parse_term(sign)
    while i < len(tokens):
        kind, val = tokens[i]
        if kind != "op" or val not in "+-":
            raise ParseError(f"expected '+' or '-', got {val!r}")
        i += 1
        parse_term(1 if val == "+" else -1)

    max_idx = max((idx for _, exps in terms for idx in exps), default=1)
    if rank is None:
        rank = max_idx
    elif max_idx > rank:
        raise ParseError(f"variable t{max_idx} exceeds declared rank {rank}")

    acc: dict[Monomial, int] = {}
    for coeff, exps in terms:
        mono = tuple(exps.get(i + 1, 0) for i in range(rank))
        acc[mono] = acc.get(mono, 0) + coeff
    return LaurentPoly(rank, acc)


def parse_matrix(rows: Iterable[Iterable[str]], rank: int) -> LaurentMatrix:
    """Parse a row-major nested list of polynomial strings."""
    return LaurentMatrix(rank, [[parse_poly(s, rank) for s in row] for row in rows])
