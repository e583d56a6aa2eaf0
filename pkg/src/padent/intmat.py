"""Exact linear algebra over Z: determinants, Smith normal form, kernels.

Matrices are plain lists of lists of Python ints (row-major).  Two exact
determinant engines are provided and cross-validated: fraction-free Bareiss
elimination, and a Chinese-remainder determinant that reduces mod word-sized
primes (with numpy elimination) under a Hadamard bound.
"""
from __future__ import annotations

import math

import numpy as np

IntMatrix = list[list[int]]

# dimension at which exact_determinant switches from Bareiss to CRT
BAREISS_LIMIT = 64

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_below_31bit(count: int) -> list[int]:
    primes = []
    candidate = (1 << 31) - 1
    while len(primes) < count:
        if _is_prime(candidate):
            primes.append(candidate)
        candidate -= 2
    return primes


def identity_matrix(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if not a or not b:
        return []
    rb = len(b)
    return [
        [sum(row[k] * b[k][j] for k in range(rb)) for j in range(len(b[0]))]
        for row in a
    ]


def mat_eq(a: IntMatrix, b: IntMatrix) -> bool:
    return a == b


def zero_matrix(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


# --------------------------------------------------------------------------
# determinants
# --------------------------------------------------------------------------

def det_bareiss(mat: IntMatrix) -> int:
    """Fraction-free Bareiss determinant; all divisions are exact."""
    n = len(mat)
    if n == 0:
        return 1
    if any(len(row) != n for row in mat):
        raise ValueError("determinant of a non-square matrix")
    a = [list(map(int, row)) for row in mat]
    sign = 1
    prev = 1
    for i in range(n - 1):
        if a[i][i] == 0:
            pivot = next((j for j in range(i + 1, n) if a[j][i] != 0), None)
            if pivot is None:
                return 0
            a[i], a[pivot] = a[pivot], a[i]
            sign = -sign
        for j in range(i + 1, n):
            aji = a[j][i]
            for k in range(i + 1, n):
                a[j][k] = (a[j][k] * a[i][i] - aji * a[i][k]) // prev
            a[j][i] = 0
        prev = a[i][i]
    return sign * a[n - 1][n - 1]


def hadamard_log2(mat: IntMatrix) -> float:
    """log2 of the Hadamard bound on |det| (min over row/column bound)."""
    def bound(rows):
        total = 0.0
        for row in rows:
            s = sum(x * x for x in row)
            if s == 0:
                return -math.inf
            total += 0.5 * math.log2(s)
        return total

    cols = [list(col) for col in zip(*mat)]
    return min(bound(mat), bound(cols))


def _det_mod_p(mat: IntMatrix, p: int) -> int:
    a = np.array([[x % p for x in row] for row in mat], dtype=np.int64)
    n = a.shape[0]
    det = 1
    for i in range(n):
        col = a[i:, i]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            return 0
        j = i + int(nz[0])
        if j != i:
            a[[i, j]] = a[[j, i]]
            det = -det % p
        piv = int(a[i, i])
        det = det * piv % p
        inv = pow(piv, -1, p)
        row = (a[i, i:] * inv) % p
        a[i, i:] = row
        if i + 1 < n:
            a[i + 1:, i:] = (a[i + 1:, i:] - np.outer(a[i + 1:, i], row)) % p
    return det % p


def det_crt(mat: IntMatrix) -> int:
    """Exact determinant by CRT over 31-bit primes under the Hadamard bound."""
    n = len(mat)
    if n == 0:
        return 1
    if any(len(row) != n for row in mat):
        raise ValueError("determinant of a non-square matrix")
    bound_bits = hadamard_log2(mat)
    if bound_bits == -math.inf:
        return 0
    needed = int(bound_bits) + 3  # 2*|det| < 2^needed
    primes = _primes_below_31bit(max(1, -(-needed // 30)))
    residue, modulus = 0, 1
    for p in primes:
        r = _det_mod_p(mat, p)
        # incremental CRT
        t = (r - residue) * pow(modulus, -1, p) % p
        residue += modulus * t
        modulus *= p
    if residue > modulus // 2:
        residue -= modulus
    return residue


def exact_determinant(mat: IntMatrix) -> int:
    """Exact integer determinant: Bareiss up to 64x64, CRT above."""
    if len(mat) <= BAREISS_LIMIT:
        return det_bareiss(mat)
    return det_crt(mat)


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------

def smith_normal_form(mat: IntMatrix, transforms: bool = False):
    """Elementary divisors d_1 | d_2 | ... >= 0 of an integer matrix.

    With transforms=True also returns unimodular U (rows) and V (cols) with
    U * mat * V = diag(divisors), verified exactly by the test suite.
    """
    A = [list(map(int, row)) for row in mat]
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity_matrix(m) if transforms else None
    V = identity_matrix(n) if transforms else None

    def row_op(i, j, q):  # row_i -= q * row_j
        Ai, Aj = A[i], A[j]
        for k in range(n):
            Ai[k] -= q * Aj[k]
        if transforms:
            Ui, Uj = U[i], U[j]
            for k in range(m):
                Ui[k] -= q * Uj[k]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in A:
            row[i] -= q * row[j]
        if transforms:
            for row in V:
                row[i] -= q * row[j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if transforms:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if transforms:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        if transforms:
            U[i] = [-x for x in U[i]]

    size = min(m, n)
    for t in range(size):
        # choose a pivot of minimal absolute value in the trailing block
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(A[i][j])
                if v and (best is None or v < best):
                    best, piv = v, (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])

        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_op(i, t, q)
                    if A[i][t]:  # nonzero remainder becomes the new pivot
                        swap_rows(t, i)
                        dirty = True
            if dirty:
                continue
            # clear row t
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_op(j, t, q)
                    if A[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # pivot must divide the whole trailing block for the divisor chain
            offender = None
            d = A[t][t]
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % d:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_op(t, offender, -1)  # add offending row, then re-clear

        if A[t][t] < 0:
            negate_row(t)

    divisors = [A[i][i] for i in range(size)]
    if transforms:
        return divisors, U, V
    return divisors


def kernel_basis(mat: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the integer kernel {x : mat @ x = 0}.

    The kernel of an integer matrix is a saturated sublattice, so the columns
    of V matching zero elementary divisors form a Z-basis of it.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    if n == 0:
        return []
    divisors, _, V = smith_normal_form(mat, transforms=True)
    size = min(m, n)
    free = [j for j in range(n) if j >= size or divisors[j] == 0]
    return [[V[i][j] for j in free] for i in range(n)]


def lattice_coordinates(basis: IntMatrix, vectors: IntMatrix) -> IntMatrix:
    """Solve basis @ X = vectors over Z, where basis has full column rank.

    Raises ValueError if some column of `vectors` is not an integer
    combination of the basis columns.
    """
    n = len(basis)
    k = len(basis[0]) if n else 0
    cols = len(vectors[0]) if vectors and vectors[0] else 0
    if k == 0:
        if any(any(row) for row in vectors):
            raise ValueError("nonzero vector in the span of an empty basis")
        return [[0] * cols for _ in range(0)]
    divisors, U, V = smith_normal_form(basis, transforms=True)
    if any(d == 0 for d in divisors) or len(divisors) < k:
        raise ValueError("basis does not have full column rank")
    C = mat_mul(U, vectors)
    for i in range(k, n):
        if any(C[i][j] for j in range(cols)):
            raise ValueError("vector outside the lattice spanned by the basis")
    Y = []
    for i in range(k):
        row = []
        for j in range(cols):
            q, r = divmod(C[i][j], divisors[i])
            if r:
                raise ValueError("vector outside the lattice spanned by the basis")
            row.append(q)
        Y.append(row)
    return mat_mul(V, Y)


def rank_over_q(mat: IntMatrix) -> int:
    m = len(mat)
    n = len(mat[0]) if m else 0
    if m == 0 or n == 0:
        return 0
    divisors = smith_normal_form(mat)
    return sum(1 for d in divisors if d != 0)
