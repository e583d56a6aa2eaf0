"""Expansiveness verdicts for the supported module classes.

The p-adic tests reduce to the unit criterion in the completed group ring:
a square presentation is p-adically expansive exactly when its symbolic
determinant is a unit there, with the exponent read off the p-content.  For
general finite modules only the sufficient single-annihilator witness test
is offered.  Classical expansiveness is decided for N = 1 by locating the
complex roots relative to the unit circle, with an exact root-of-unity
pre-pass so that cyclotomic factors are certified rather than guessed from
floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .laurent import LaurentMatrix, LaurentPoly, det_symbolic
from .logdet import decompose_unit

KIND_EXPONENT_ZERO = "ExpansiveExponentZero"
KIND_POSITIVE_EXPONENT = "ExpansivePositiveExponent"
KIND_NOT_EXPANSIVE = "NotExpansive"
KIND_INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ExpansivenessVerdict:
    kind: str
    exponent: int | None = None
    witness: str | None = None

    @property
    def is_expansive(self) -> bool:
        return self.kind in (KIND_EXPONENT_ZERO, KIND_POSITIVE_EXPONENT)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.exponent is not None:
            out["exponent"] = self.exponent
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _unit_verdict(dec, witness: str) -> ExpansivenessVerdict:
    if dec.nu == 0:
        return ExpansivenessVerdict(KIND_EXPONENT_ZERO, 0, witness)
    return ExpansivenessVerdict(KIND_POSITIVE_EXPONENT, dec.nu, witness)


def check_principal_padic(boundary: LaurentMatrix | LaurentPoly, p: int, K: int = 8) -> ExpansivenessVerdict:
    """Unit criterion for a square presentation over the Laurent ring."""
    if isinstance(boundary, LaurentPoly):
        boundary = LaurentMatrix.from_scalar(boundary)
    det = det_symbolic(boundary)
    if not det:
        raise ValueError("boundary has zero determinant: not an injective presentation")
    dec = decompose_unit(det, p, K)
    if dec is None:
        red = det.scale_down(p ** det.content_valuation(p)).reduce_mod(p, 1)
        return ExpansivenessVerdict(
            KIND_NOT_EXPANSIVE, None,
            f"determinant reduces mod {p} to {len(red.terms)} terms, not a monomial")
    return _unit_verdict(dec, f"det = {det} is a unit with p-content {dec.nu}")


def check_finite_module_padic(annihilators: Sequence[LaurentPoly], p: int, K: int = 8) -> ExpansivenessVerdict:
    """Sufficient test: any single annihilator that is a unit certifies
    expansiveness.  Failure of every witness is Inconclusive, never a
    negative verdict."""
    if not annihilators:
        raise ValueError("empty annihilator list")
    for f in annihilators:
        if not f:
            continue
        dec = decompose_unit(f, p, K)
        if dec is not None:
            return _unit_verdict(dec, f"annihilator {f} is a unit with p-content {dec.nu}")
    return ExpansivenessVerdict(KIND_INCONCLUSIVE, None, None)


# --------------------------------------------------------------------------
# classical (archimedean) case for N = 1
# --------------------------------------------------------------------------

def _poly_coefficients(f: LaurentPoly) -> list[int]:
    """Ascending coefficient list after normalizing by the lowest monomial."""
    if f.rank != 1:
        raise ValueError("classical root test only implemented for one variable")
    lo = f.min_exponents()[0]
    deg = max(m[0] for m in f.terms) - lo
    coeffs = [0] * (deg + 1)
    for (e,), c in f.terms.items():
        coeffs[e - lo] = c
    return coeffs


def _poly_divides(den: list[int], num: list[int]) -> bool:
    """Exact divisibility of integer polynomials, den monic."""
    num = list(num)
    dd = len(den) - 1
    while num and num[-1] == 0:
        num.pop()
    while num and len(num) - 1 >= dd:
        lead = num[-1]
        shift = len(num) - 1 - dd
        for i, c in enumerate(den):
            num[shift + i] -= lead * c
        while num and num[-1] == 0:
            num.pop()
    return not num


def _cyclotomic(m: int, cache: dict[int, list[int]]) -> list[int]:
    if m in cache:
        return cache[m]
    # x^m - 1 divided by all proper cyclotomic factors
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            den = _cyclotomic(d, cache)
            num = _poly_quotient(num, den)
    cache[m] = num
    return num


def _poly_quotient(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for shift in range(len(num) - dd - 1, -1, -1):
        lead = num[shift + dd]
        out[shift] = lead
        for i, c in enumerate(den):
            num[shift + i] -= lead * c
    return out


def _euler_phi(m: int) -> int:
    phi, n, q = 1, m, 2
    while q * q <= n:
        if n % q == 0:
            phi *= q - 1
            n //= q
            while n % q == 0:
                phi *= q
                n //= q
        q += 1
    if n > 1:
        phi *= n - 1
    return phi


def check_classical_n1(f: LaurentPoly, tol: float = 1e-10) -> ExpansivenessVerdict:
    """Decide classical expansiveness of the principal system for N = 1.

    Roots of unity on the circle are found exactly via cyclotomic
    divisibility; remaining roots are located numerically, with a band of
    width tol around the circle mapped to Inconclusive since a root exactly
    on the circle cannot be certified in floating point.
    """
    if f.rank != 1:
        raise ValueError("classical test is for rank 1")
    if not f:
        raise ValueError("zero polynomial")
    coeffs = _poly_coefficients(f)
    deg = len(coeffs) - 1
    if deg == 0:
        return ExpansivenessVerdict(KIND_EXPONENT_ZERO, 0, "no roots: nonzero constant")

    cache: dict[int, list[int]] = {}
    for m in range(1, 2 * deg * deg + 3):
        if _euler_phi(m) > deg:
            continue
        if _poly_divides(_cyclotomic(m, cache), coeffs):
            return ExpansivenessVerdict(
                KIND_NOT_EXPANSIVE, None, f"root of unity of order {m} on the unit circle")

    roots = np.roots(list(reversed(coeffs)))
    dists = [abs(abs(r) - 1.0) for r in roots]
    worst = min(dists)
    if worst > tol:
        return ExpansivenessVerdict(
            KIND_EXPONENT_ZERO, 0, f"all roots keep distance {worst:.3e} from the circle")
    culprit = roots[dists.index(worst)]
    return ExpansivenessVerdict(
        KIND_INCONCLUSIVE, None,
        f"root {culprit:.6f} within {tol} of the unit circle; cannot certify numerically")


def torus_sample_min(f: LaurentPoly, samples: int) -> float:
    """Quasi-random scan of |f| over the N-torus; a heuristic lower-bound
    probe only, never a verdict."""
    if samples < 1:
        raise ValueError("need at least one sample")
    n = f.rank
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    alphas = np.array([math.sqrt(p) % 1.0 for p in primes[:n]])
    j = np.arange(1, samples + 1)[:, None]
    theta = (j * alphas[None, :]) % 1.0
    vals = np.zeros(samples, dtype=complex)
    for mono, c in f.terms.items():
        phase = theta @ np.array(mono, dtype=float)
        vals += c * np.exp(2j * math.pi * phase)
    return float(np.min(np.abs(vals)))
