"""Finite-index subgroups of Z^N and homology over the finite quotients.

A finite-index subgroup is held in column Hermite normal form; the quotient
Z^N / Delta is enumerated through the fundamental box of the HNF basis.
Laurent-polynomial data is pushed down to exact integer matrices acting on
the group ring of the quotient, from which Smith normal form gives homology
orders and multiplicative Euler characteristics.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .intmat import (
    IntMatrix,
    kernel_basis,
    lattice_coordinates,
    mat_mul,
    smith_normal_form,
)
from .laurent import LaurentMatrix, LaurentPoly, Monomial, parse_poly


class InfiniteHomologyError(RuntimeError):
    """Some homology group has positive free rank, so chi is undefined."""

    def __init__(self, degree: int, free_rank: int):
        super().__init__(f"H_{degree} has free rank {free_rank}; Euler characteristic undefined")
        self.degree = degree
        self.free_rank = free_rank


class FiniteIndexSubgroup:
    """A finite-index subgroup of Z^N with column-HNF basis.

    The basis matrix is upper triangular with positive diagonal and
    off-diagonal entries reduced mod the diagonal; the index is the product
    of the diagonal entries.
    """

    __slots__ = ("rank", "basis", "index")

    def __init__(self, rank: int, basis: tuple[tuple[int, ...], ...], index: int):
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "index", index)

    def __setattr__(self, *_):
        raise AttributeError("FiniteIndexSubgroup is immutable")

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.basis[i][i] for i in range(self.rank))

    def reduce(self, vec: Sequence[int]) -> Monomial:
        """Canonical coset representative of vec in the HNF fundamental box."""
        v = list(vec)
        b = self.basis
        for i in range(self.rank - 1, -1, -1):
            q = v[i] // b[i][i]
            if q:
                for r in range(i + 1):
                    v[r] -= q * b[r][i]
        return tuple(v)

    def __eq__(self, other):
        if not isinstance(other, FiniteIndexSubgroup):
            return NotImplemented
        return (self.rank, self.basis) == (other.rank, other.basis)

    def __hash__(self):
        return hash((self.rank, self.basis))

    def __repr__(self):
        return f"FiniteIndexSubgroup(rank={self.rank}, index={self.index}, basis={self.basis})"


def subgroup_from_matrix(mat: Sequence[Sequence[int]]) -> FiniteIndexSubgroup:
    """HNF basis of the lattice spanned by the columns of a nonsingular matrix."""
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("subgroup basis matrix must be square")
    cols = [[int(mat[r][c]) for r in range(n)] for c in range(n)]

    # column Euclid, bottom row first, to reach upper triangular form
    for i in range(n - 1, -1, -1):
        pool = list(range(i + 1))
        while True:
            nz = [j for j in pool if cols[j][i] != 0]
            if not nz:
                raise ValueError("singular matrix: columns do not span a finite-index subgroup")
            if len(nz) == 1:
                if nz[0] != i:
                    cols[nz[0]], cols[i] = cols[i], cols[nz[0]]
                break
            j, k = sorted(nz[:2], key=lambda j: abs(cols[j][i]))
            q = cols[k][i] // cols[j][i]
            cols[k] = [a - q * b for a, b in zip(cols[k], cols[j])]
    # positive diagonal
    for i in range(n):
        if cols[i][i] < 0:
            cols[i] = [-x for x in cols[i]]
    # reduce above-diagonal entries into [0, diag)
    for j in range(n):
        for i in range(j - 1, -1, -1):
            q = cols[j][i] // cols[i][i]
            if q:
                cols[j] = [a - q * b for a, b in zip(cols[j], cols[i])]

    basis = tuple(tuple(cols[c][r] for c in range(n)) for r in range(n))
    index = 1
    for i in range(n):
        index *= basis[i][i]
    return FiniteIndexSubgroup(n, basis, index)


def diagonal_subgroup(rank: int, scales: int | Sequence[int]) -> FiniteIndexSubgroup:
    if isinstance(scales, int):
        scales = [scales] * rank
    return subgroup_from_matrix([[scales[i] if i == j else 0 for j in range(rank)] for i in range(rank)])


@dataclass(frozen=True)
class QuotientGroup:
    """The finite group Z^N / Delta with a fixed representative ordering."""

    subgroup: FiniteIndexSubgroup
    reps: tuple[Monomial, ...]
    lookup: dict[Monomial, int] = field(hash=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.reps)


def enumerate_quotient(subgroup: FiniteIndexSubgroup) -> QuotientGroup:
    """Deterministic lexicographic enumeration of the HNF fundamental box."""
    diag = subgroup.diagonal()
    reps = tuple(itertools.product(*(range(d) for d in diag)))
    lookup = {rep: i for i, rep in enumerate(reps)}
    return QuotientGroup(subgroup, reps, lookup)


def action_matrix(f: LaurentPoly | LaurentMatrix, subgroup: FiniteIndexSubgroup) -> IntMatrix:
    """Integer matrix of multiplication by f on the quotient group ring.

    Column j holds the expansion of f * rep_j in the representative basis.
    A LaurentMatrix produces the blockwise matrix on the free module, with
    block (i, j) the action of entry (i, j).
    """
    if isinstance(f, LaurentMatrix):
        if f.rank != subgroup.rank:
            raise ValueError("rank mismatch between matrix and subgroup")
        quo = enumerate_quotient(subgroup)
        m = quo.order
        big = [[0] * (f.cols * m) for _ in range(f.rows * m)]
        for bi in range(f.rows):
            for bj in range(f.cols):
                block = _scalar_action(f.entries[bi][bj], quo)
                for r in range(m):
                    row = big[bi * m + r]
                    brow = block[r]
                    for c in range(m):
                        row[bj * m + c] = brow[c]
        return big
    if f.rank != subgroup.rank:
        raise ValueError("rank mismatch between polynomial and subgroup")
    return _scalar_action(f, enumerate_quotient(subgroup))


def _scalar_action(f: LaurentPoly, quo: QuotientGroup) -> IntMatrix:
    m = quo.order
    mat = [[0] * m for _ in range(m)]
    sub = quo.subgroup
    for j, rep in enumerate(quo.reps):
        for mono, c in f.terms.items():
            tgt = sub.reduce(tuple(a + b for a, b in zip(mono, rep)))
            mat[quo.lookup[tgt]][j] += c
    return mat


# --------------------------------------------------------------------------
# resolutions and complexes
# --------------------------------------------------------------------------

class FreeResolution:
    """A based finite free complex over the Laurent ring presenting M = coker(d_1).

    boundaries[i] is the matrix of d_{i+1} : F_{i+1} -> F_i acting on column
    vectors; consecutive composites must vanish identically.
    """

    __slots__ = ("rank", "boundaries", "annihilators")

    def __init__(self, rank: int, boundaries: Sequence[LaurentMatrix],
                 annihilators: Sequence[LaurentPoly] | None = None):
        boundaries = tuple(boundaries)
        if not boundaries:
            raise ValueError("resolution needs at least one boundary map")
        for b in boundaries:
            if b.rank != rank:
                raise ValueError("boundary rank mismatch")
        for a, b in zip(boundaries, boundaries[1:]):
            if a.cols != b.rows:
                raise ValueError("boundary shapes do not chain")
            if not (a * b).is_zero():
                raise ValueError("corrupt resolution: composite of boundaries is nonzero")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "boundaries", boundaries)
        object.__setattr__(self, "annihilators", tuple(annihilators) if annihilators else None)

    def __setattr__(self, *_):
        raise AttributeError("FreeResolution is immutable")

    @property
    def length(self) -> int:
        return len(self.boundaries)

    @property
    def module_ranks(self) -> tuple[int, ...]:
        """Ranks of F_0, ..., F_d."""
        return (self.boundaries[0].rows,) + tuple(b.cols for b in self.boundaries)

    def to_json(self) -> dict:
        doc = {
            "rank": self.rank,
            "boundaries": [
                [[str(e) for e in row] for row in b.entries] for b in self.boundaries
            ],
        }
        if self.annihilators:
            doc["annihilators"] = [str(f) for f in self.annihilators]
        return doc

    @classmethod
    def from_json(cls, data: dict) -> "FreeResolution":
        rank = int(data["rank"])
        boundaries = [
            LaurentMatrix(rank, [[parse_poly(s, rank) for s in row] for row in rows])
            for rows in data["boundaries"]
        ]
        ann = [parse_poly(s, rank) for s in data.get("annihilators", [])] or None
        return cls(rank, boundaries, annihilators=ann)

    @classmethod
    def load(cls, path: str) -> "FreeResolution":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def principal_resolution(f: LaurentPoly) -> FreeResolution:
    """0 -> R -(f)-> R presenting R/fR."""
    return FreeResolution(f.rank, [LaurentMatrix.from_scalar(f)], annihilators=[f])


def koszul_resolution(f_list: Sequence[LaurentPoly]) -> FreeResolution:
    """Koszul complex of a length-1 or length-2 regular sequence.

    Regularity is the caller's responsibility; the composite-zero check and
    the infinite-homology guard downstream catch misuse.
    """
    if len(f_list) == 1:
        return principal_resolution(f_list[0])
    if len(f_list) != 2:
        raise ValueError("only Koszul complexes of length 1 or 2 are supported")
    f, g = f_list
    if f.rank != g.rank:
        raise ValueError("rank mismatch in Koszul sequence")
    d1 = LaurentMatrix(f.rank, [[f, g]])
    d2 = LaurentMatrix(f.rank, [[g], [-f]])
    return FreeResolution(f.rank, [d1, d2], annihilators=[f, g])


def direct_sum_resolution(a: FreeResolution, b: FreeResolution) -> FreeResolution:
    """Blockwise direct sum (padding shorter resolutions with zero maps)."""
    if a.rank != b.rank:
        raise ValueError("rank mismatch")
    rank = a.rank
    d = max(a.length, b.length)
    ra = a.module_ranks + (0,) * (d - a.length)
    rb = b.module_ranks + (0,) * (d - b.length)
    zero = LaurentPoly.zero(rank)
    boundaries = []
    for i in range(d):
        rows = ra[i] + rb[i]
        cols = ra[i + 1] + rb[i + 1]
        block = [[zero for _ in range(cols)] for _ in range(rows)]
        if i < a.length:
            for r in range(ra[i]):
                for c in range(ra[i + 1]):
                    block[r][c] = a.boundaries[i].entries[r][c]
        if i < b.length:
            for r in range(rb[i]):
                for c in range(rb[i + 1]):
                    block[ra[i] + r][ra[i + 1] + c] = b.boundaries[i].entries[r][c]
        boundaries.append(LaurentMatrix(rank, block))
    ann = None
    if a.annihilators and b.annihilators:
        # an annihilator of the sum must kill both summands
        ann = [f * g for f in a.annihilators for g in b.annihilators]
    return FreeResolution(rank, boundaries, annihilators=ann)


class IntegerComplex:
    """A finite chain complex of free Z-modules with explicit bases.

    boundaries[i] is the matrix of d_{i+1} : C_{i+1} -> C_i; ranks lists the
    ranks of C_0, ..., C_d.  The coordinate basis doubles as the declared
    basis for torsion computations.
    """

    __slots__ = ("ranks", "boundaries")

    def __init__(self, ranks: Sequence[int], boundaries: Sequence[IntMatrix], check: bool = True):
        ranks = tuple(int(r) for r in ranks)
        boundaries = [
            [list(map(int, row)) for row in b] for b in boundaries
        ]
        if len(boundaries) != len(ranks) - 1:
            raise ValueError("need exactly one boundary per adjacent pair of degrees")
        for i, b in enumerate(boundaries):
            rows = len(b)
            cols = len(b[0]) if rows else 0
            if ranks[i + 1] and rows != ranks[i]:
                raise ValueError(f"boundary {i + 1} has {rows} rows, expected {ranks[i]}")
            if rows and cols != ranks[i + 1]:
                raise ValueError(f"boundary {i + 1} has {cols} cols, expected {ranks[i + 1]}")
        if check:
            for i in range(len(boundaries) - 1):
                if boundaries[i] and boundaries[i + 1]:
                    comp = mat_mul(boundaries[i], boundaries[i + 1])
                    if any(any(row) for row in comp):
                        raise ValueError("corrupt complex: composite of boundaries is nonzero")
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "boundaries", boundaries)

    def __setattr__(self, *_):
        raise AttributeError("IntegerComplex is immutable")

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, i: int) -> IntMatrix:
        """Matrix of d_i : C_i -> C_{i-1}; zero maps at the ends."""
        if 1 <= i <= self.length:
            b = self.boundaries[i - 1]
            if not b:
                return [[0] * self.ranks[i] for _ in range(self.ranks[i - 1])]
            return b
        raise IndexError(f"no boundary d_{i}")


def complex_from_resolution(res: FreeResolution, subgroup: FiniteIndexSubgroup) -> IntegerComplex:
    """Push the resolution down to Z-coefficients on the quotient of Delta."""
    if res.rank != subgroup.rank:
        raise ValueError("rank mismatch between resolution and subgroup")
    m = enumerate_quotient(subgroup).order
    boundaries = [action_matrix(b, subgroup) for b in res.boundaries]
    ranks = [r * m for r in res.module_ranks]
    return IntegerComplex(ranks, boundaries)


# --------------------------------------------------------------------------
# homology
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyDegree:
    free_rank: int
    divisors: tuple[int, ...]  # elementary divisors > 1
    order: int | None          # |H_i| when finite, None otherwise

    def is_finite(self) -> bool:
        return self.free_rank == 0


@dataclass(frozen=True)
class HomologySummary:
    degrees: tuple[HomologyDegree, ...]

    def order(self, i: int) -> int | None:
        return self.degrees[i].order if i < len(self.degrees) else 1

    def all_finite(self) -> bool:
        return all(d.is_finite() for d in self.degrees)

    def euler_characteristic(self) -> Fraction:
        chi = Fraction(1)
        for i, deg in enumerate(self.degrees):
            if not deg.is_finite():
                raise InfiniteHomologyError(i, deg.free_rank)
            chi *= Fraction(deg.order) if i % 2 == 0 else Fraction(1, deg.order)
        return chi


def homology(cx: IntegerComplex) -> HomologySummary:
    """Per-degree free rank and torsion of ker d_i / im d_{i+1} via SNF."""
    degrees = []
    d = cx.length
    for i in range(d + 1):
        n_i = cx.ranks[i]
        if n_i == 0:
            degrees.append(HomologyDegree(0, (), 1))
            continue
        if i == 0 or cx.ranks[i - 1] == 0:
            kernel = [[1 if r == c else 0 for c in range(n_i)] for r in range(n_i)]
        else:
            kernel = kernel_basis(cx.boundary(i))
        k = len(kernel[0]) if kernel else 0
        if k == 0:
            degrees.append(HomologyDegree(0, (), 1))
            continue
        if i == d or cx.ranks[i + 1] == 0:
            divisors = []
        else:
            image = cx.boundary(i + 1)
            image_cols = [[image[r][c] for c in range(cx.ranks[i + 1])] for r in range(n_i)]
            image_coords = lattice_coordinates(kernel, image_cols)
            divisors = smith_normal_form(image_coords)
        nonzero = [abs(x) for x in divisors if x != 0]
        free_rank = k - len(nonzero)
        order = None
        if free_rank == 0:
            order = 1
            for x in nonzero:
                order *= x
        degrees.append(HomologyDegree(free_rank, tuple(x for x in nonzero if x > 1), order))
    return HomologySummary(tuple(degrees))


def euler_characteristic(res: FreeResolution, subgroup: FiniteIndexSubgroup) -> Fraction:
    """Alternating product of homology orders; raises InfiniteHomologyError."""
    return homology(complex_from_resolution(res, subgroup)).euler_characteristic()


def fixed_points_count(res: FreeResolution, subgroup: FiniteIndexSubgroup) -> int:
    """|H_0| of the pushed-down complex (the fixed-point count of the dual system)."""
    summary = homology(complex_from_resolution(res, subgroup))
    deg0 = summary.degrees[0]
    if not deg0.is_finite():
        raise InfiniteHomologyError(0, deg0.free_rank)
    return deg0.order


# --------------------------------------------------------------------------
# subgroup sequences
# --------------------------------------------------------------------------

_SEQ_RE = re.compile(
    r"^diag:n=(?P<lo>\d+)\.\.(?P<hi>\d+)(?::step=(?P<step>\d+))?(?::scale=(?P<scale>\d+))?$"
)


def diagonal_sequence(rank: int, lo: int, hi: int, step: int = 1, scale: int = 1) -> list[FiniteIndexSubgroup]:
    return [diagonal_subgroup(rank, scale * n) for n in range(lo, hi + 1, step)]


def parse_sequence_spec(spec: str, rank: int) -> list[FiniteIndexSubgroup]:
    """Parse `diag:n=1..12[:step=s][:scale=c]` into a subgroup sequence."""
    m = _SEQ_RE.match(spec.strip())
    if not m:
        raise ValueError(f"bad sequence spec {spec!r}")
    lo, hi = int(m.group("lo")), int(m.group("hi"))
    step = int(m.group("step") or 1)
    scale = int(m.group("scale") or 1)
    if lo < 1 or hi < lo or step < 1 or scale < 1:
        raise ValueError(f"bad sequence spec {spec!r}")
    return diagonal_sequence(rank, lo, hi, step=step, scale=scale)


def check_strictly_increasing(subgroups: Sequence[FiniteIndexSubgroup]) -> None:
    if not subgroups:
        raise ValueError("empty subgroup sequence")
    for a, b in zip(subgroups, subgroups[1:]):
        if b.index <= a.index:
            raise ValueError("subgroup sequence must have strictly increasing index")
