"""p-adic R-torsion, p-adic and classical entropy of algebraic Z^N-actions.

The p-adic quantities are computed as renormalized limits of Iwasawa logs of
multiplicative Euler characteristics along a subgroup sequence; for principal
presentations the independent series route (tr log of the unit decomposition)
cross-validates the limit.  Classical entropy comes from the same Euler
characteristic tables in real arithmetic and, for principal systems, from the
Mahler measure of the defining polynomial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._util import log_fraction, log_big, map_levels
from .expansive import (
    ExpansivenessVerdict,
    KIND_INCONCLUSIVE,
    check_finite_module_padic,
    check_principal_padic,
)
from .laurent import LaurentPoly
from .logdet import NotAUnitError, logdet_matrix
from .padic import ConvergenceReport, PadicNumber, build_convergence_report, log_of_rational
from .quotients import (
    FiniteIndexSubgroup,
    FreeResolution,
    InfiniteHomologyError,
    check_strictly_increasing,
    complex_from_resolution,
    euler_characteristic,
    homology,
    principal_resolution,
)


class ExpansivenessError(RuntimeError):
    """The expansiveness precondition could not be certified."""

    def __init__(self, verdict: ExpansivenessVerdict):
        detail = verdict.witness or "no witness"
        super().__init__(f"expansiveness verdict {verdict.kind}: {detail}")
        self.verdict = verdict


@dataclass(frozen=True)
class EntropyLevel:
    index: int
    chi: Fraction
    fixed_points: int
    value: object  # PadicNumber in p-adic mode, float in classical mode

    def to_json(self) -> dict:
        chi = {"numerator": self.chi.numerator, "denominator": self.chi.denominator}
        value = self.value.to_json() if isinstance(self.value, PadicNumber) else self.value
        return {"index": self.index, "chi": chi, "fixed_points": self.fixed_points,
                "value": value}


@dataclass(frozen=True)
class EntropyReport:
    """Level table plus the published estimate for one entropy computation."""

    mode: str  # "padic" | "classical"
    levels: tuple[EntropyLevel, ...]
    estimate: object | None
    cauchy: bool
    agreement_depth: float | None = None
    diagnostics: dict = field(default_factory=dict)
    mahler: float | None = None
    classical: float | None = None

    def to_json(self) -> dict:
        est = self.estimate
        if isinstance(est, PadicNumber):
            est = est.to_json()
        depth = self.agreement_depth
        if depth == math.inf:
            depth = None
        diag = {}
        for k, v in self.diagnostics.items():
            if isinstance(v, PadicNumber):
                v = v.to_json()
            elif v == math.inf:
                v = None
            diag[k] = v
        doc = {
            "mode": self.mode,
            "levels": [lvl.to_json() for lvl in self.levels],
            "estimate": est,
            "cauchy": self.cauchy,
            "agreement_depth": depth,
            "diagnostics": diag,
        }
        if self.mahler is not None:
            doc["mahler"] = self.mahler
        if self.classical is not None:
            doc["classical"] = self.classical
        return doc

    def to_csv(self) -> str:
        lines = ["index,chi,fixed_points,value"]
        for lvl in self.levels:
            lines.append(f"{lvl.index},{lvl.chi},{lvl.fixed_points},{lvl.value}")
        return "\n".join(lines) + "\n"


def _certify_expansive(res: FreeResolution, p: int, K: int,
                       annihilators: Sequence[LaurentPoly] | None) -> ExpansivenessVerdict:
    ann = list(annihilators if annihilators is not None else (res.annihilators or ()))
    if not ann and res.boundaries[0].rows == 1:
        # a single presentation row exhibits its entries as annihilators
        ann = [e for e in res.boundaries[0].entries[0] if e]
    if ann:
        verdict = check_finite_module_padic(ann, p, K)
        if verdict.is_expansive:
            return verdict
    if res.length == 1 and res.boundaries[0].rows == res.boundaries[0].cols:
        return check_principal_padic(res.boundaries[0], p, K)
    if ann:
        return check_finite_module_padic(ann, p, K)
    return ExpansivenessVerdict(KIND_INCONCLUSIVE, None, None)


def _level_data(res: FreeResolution, subgroups: Sequence[FiniteIndexSubgroup]):
    def level(sub: FiniteIndexSubgroup):
        summary = homology(complex_from_resolution(res, sub))
        chi = summary.euler_characteristic()
        return sub.index, chi, summary.degrees[0].order
    return map_levels(level, list(subgroups))


def padic_r_torsion(res: FreeResolution, p: int, subgroups: Sequence[FiniteIndexSubgroup],
                    K: int, annihilators: Sequence[LaurentPoly] | None = None,
                    require_expansive: bool = True) -> EntropyReport:
    """The p-adic R-torsion via the renormalized limit of log_p chi.

    For principal presentations (length 1, square) the series route is also
    evaluated and reported in the diagnostics together with the valuation of
    the difference of the two routes.
    """
    check_strictly_increasing(subgroups)
    verdict = _certify_expansive(res, p, K, annihilators)
    if require_expansive and not verdict.is_expansive:
        raise ExpansivenessError(verdict)

    data = _level_data(res, subgroups)
    raws = [log_of_rational(chi, p, K) for _, chi, _ in data]
    conv: ConvergenceReport = build_convergence_report([idx for idx, _, _ in data], raws)
    levels = tuple(
        EntropyLevel(idx, chi, fp, lvl.value)
        for (idx, chi, fp), lvl in zip(data, conv.levels)
    )
    diagnostics: dict = {"expansiveness": verdict.kind}
    if verdict.exponent is not None:
        diagnostics["exponent"] = verdict.exponent
    if res.length == 1 and res.boundaries[0].rows == res.boundaries[0].cols:
        try:
            series = logdet_matrix(res.boundaries[0], p, K)
        except NotAUnitError:
            series = None
        if series is not None:
            diagnostics["series_route"] = series
            if conv.extrapolated is not None:
                diagnostics["routes_agree_valuation"] = (series - conv.extrapolated).valuation()
    return EntropyReport(
        mode="padic",
        levels=levels,
        estimate=conv.extrapolated,
        cauchy=conv.cauchy,
        agreement_depth=conv.agreement_depth,
        diagnostics=diagnostics,
    )


def padic_entropy(res: FreeResolution, p: int, subgroups: Sequence[FiniteIndexSubgroup],
                  K: int, annihilators: Sequence[LaurentPoly] | None = None,
                  require_expansive: bool = True) -> EntropyReport:
    """Periodic-points entropy valued in Q_p.

    This is the same number as the p-adic R-torsion; the report carries both
    labels to make the identity visible.
    """
    report = padic_r_torsion(res, p, subgroups, K, annihilators, require_expansive)
    diag = dict(report.diagnostics)
    diag["torsion"] = report.estimate
    diag["identity"] = "h_p(periodic) = p-adic R-torsion"
    return EntropyReport(report.mode, report.levels, report.estimate, report.cauchy,
                         report.agreement_depth, diag)


# --------------------------------------------------------------------------
# classical side
# --------------------------------------------------------------------------

def mahler_measure(f: LaurentPoly, grid: int = 64) -> float:
    """Torus average of log|f|.

    For one variable this is exact-by-roots (Jensen): log of the leading
    coefficient plus the log of every root modulus outside the unit circle.
    For N >= 2 a tensor grid quadrature is used and refined once; if the grid
    meets a zero of f on the torus the quadrature is declared divergent.
    """
    if not f:
        raise ValueError("Mahler measure of the zero polynomial")
    if f.rank == 1:
        lo = f.min_exponents()[0]
        deg = max(m[0] for m in f.terms) - lo
        coeffs = [0] * (deg + 1)
        for (e,), c in f.terms.items():
            coeffs[e - lo] = c
        if deg == 0:
            return float(log_big(abs(coeffs[0])))
        roots = np.roots(list(reversed(coeffs)))
        m = math.log(abs(coeffs[-1]))
        for r in roots:
            mod = abs(r)
            if mod > 1.0:
                m += math.log(mod)
        return float(m)

    coarse = _torus_grid_average(f, grid)
    fine = _torus_grid_average(f, 2 * grid)
    if abs(fine - coarse) > 1e-3 * max(1.0, abs(fine)):
        raise ValueError(
            "quadrature did not stabilize; f appears to vanish on the torus")
    return float(fine)


def _torus_grid_average(f: LaurentPoly, grid: int) -> float:
    n = f.rank
    axes = [np.arange(grid) / grid for _ in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    vals = np.zeros(mesh[0].shape, dtype=complex)
    for mono, c in f.terms.items():
        phase = sum(e * ax for e, ax in zip(mono, mesh))
        vals += c * np.exp(2j * math.pi * phase)
    mods = np.abs(vals)
    if np.any(mods < 1e-12):
        raise ValueError("f vanishes at a torus grid point; quadrature diverges")
    return float(np.mean(np.log(mods)))


def classical_entropy_periodic(res: FreeResolution,
                               subgroups: Sequence[FiniteIndexSubgroup]) -> EntropyReport:
    """Renormalized real log of chi per level, with the fixed-point column."""
    check_strictly_increasing(subgroups)
    data = _level_data(res, subgroups)
    levels = []
    fp_rates = []
    for idx, chi, fp in data:
        levels.append(EntropyLevel(idx, chi, fp, log_fraction(chi) / idx))
        fp_rates.append(log_big(fp) / idx if fp > 0 else math.inf)
    values = [lvl.value for lvl in levels]
    diffs = [b - a for a, b in zip(values, values[1:])]
    return EntropyReport(
        mode="classical",
        levels=tuple(levels),
        estimate=values[-1],
        cauchy=True,
        agreement_depth=None,
        diagnostics={
            "successive_differences": diffs[-3:],
            "fixed_point_rates": fp_rates,
        },
        classical=values[-1],
    )


@dataclass(frozen=True)
class PrincipalFactorReport:
    """Per-factor orders |ZG / f_i ZG| and their product for one subgroup."""

    index: int
    factors: tuple[tuple[str, int], ...]
    product: int

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "factors": [{"poly": s, "order": o} for s, o in self.factors],
            "product": self.product,
        }


def principal_factor_report(f_list: Sequence[LaurentPoly],
                            subgroup: FiniteIndexSubgroup) -> PrincipalFactorReport:
    """Euler characteristic of a product of principal factors, factor by factor.

    Each order is the exact determinant of the action matrix, cross-checked
    against the Euler characteristic of the principal resolution.
    """
    from .intmat import exact_determinant
    from .quotients import action_matrix

    factors = []
    product = 1
    for f in f_list:
        det = exact_determinant(action_matrix(f, subgroup))
        if det == 0:
            raise InfiniteHomologyError(0, 1)
        chi = euler_characteristic(principal_resolution(f), subgroup)
        if chi != abs(det):
            raise RuntimeError(
                f"factor {f}: determinant {abs(det)} disagrees with chi {chi}")
        factors.append((str(f), abs(det)))
        product *= abs(det)
    return PrincipalFactorReport(subgroup.index, tuple(factors), product)


@dataclass(frozen=True)
class CompareReport:
    """Side-by-side classical and p-adic entropy data for one polynomial."""

    poly: str
    p: int
    classical: EntropyReport
    mahler: float | None
    padic: EntropyReport
    series_route: PadicNumber | None

    def to_json(self) -> dict:
        return {
            "poly": self.poly,
            "p": self.p,
            "classical": self.classical.to_json(),
            "mahler": self.mahler,
            "padic": self.padic.to_json(),
            "series_route": None if self.series_route is None else self.series_route.to_json(),
        }


def entropy_compare(f: LaurentPoly, p: int, subgroups: Sequence[FiniteIndexSubgroup],
                    K: int) -> CompareReport:
    """Bundle classical entropy, Mahler measure, p-adic entropy and the
    series-route p-adic determinant for a principal system."""
    res = principal_resolution(f)
    classical = classical_entropy_periodic(res, subgroups)
    try:
        mahler = mahler_measure(f)
    except ValueError:
        mahler = None
    padic = padic_entropy(res, p, subgroups, K)
    padic = EntropyReport(padic.mode, padic.levels, padic.estimate, padic.cauchy,
                          padic.agreement_depth, padic.diagnostics,
                          mahler=mahler, classical=classical.estimate)
    series = padic.diagnostics.get("series_route")
    return CompareReport(str(f), p, classical, mahler, padic, series)


__all__ = [
    "CompareReport",
    "EntropyLevel",
    "EntropyReport",
    "ExpansivenessError",
    "PrincipalFactorReport",
    "classical_entropy_periodic",
    "entropy_compare",
    "mahler_measure",
    "padic_entropy",
    "padic_r_torsion",
    "principal_factor_report",
]
