"""Exact integer linear algebra: Smith normal form, extended gcd,
linear congruences, and unimodularity checks.

All scalars are Python ints (arbitrary precision), so nothing here can
overflow. Rationals elsewhere in the package are fractions.Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import Infeasible


class IntMatrix:
    """Dense row-major integer matrix."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[int]]):
        self.data = [list(map(int, row)) for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        for row in self.data:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)])

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.data)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __setitem__(self, ij, value):
        i, j = ij
        self.data[i][j] = int(value)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.data == other.data

    def __repr__(self) -> str:
        return f"IntMatrix({self.data!r})"

    def column(self, j: int) -> list[int]:
        return [self.data[i][j] for i in range(self.rows)]

    def select_columns(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix([[row[j] for j in idx] for row in self.data])

    def transpose(self) -> "IntMatrix":
        return IntMatrix([list(col) for col in zip(*self.data)]) if self.rows else IntMatrix([])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = list(zip(*other.data))
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.data]
        )

    def matvec(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum(a * b for a, b in zip(row, v)) for row in self.data]


@dataclass
class SNFResult:
    """Factorization M = U @ diag(D) @ V with U, V unimodular.

    Uinv and Vinv are exact inverses, accumulated from the elementary
    operations during the reduction. D entries are nonnegative, each
    nonzero entry divides the next, and zeros only trail.
    """

    U: IntMatrix
    D: list[int]
    V: IntMatrix
    Uinv: IntMatrix
    Vinv: IntMatrix

    def diag_matrix(self, rows: int, cols: int) -> IntMatrix:
        S = IntMatrix.zeros(rows, cols)
        for i, d in enumerate(self.D):
            S[i, i] = d
        return S


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(|a|, |b|) >= 0 and a*x + b*y = g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def solve_mod(t: int, b: int, r: int) -> tuple[int, int]:
    """Solve t*y = b (mod r) for r >= 1.

    Returns (particular, count) where particular is the smallest
    nonnegative solution and count = gcd(r, t) is the number of
    solutions in [0, r); all solutions are particular + multiples of
    r // count. Raises Infeasible when gcd(r, t) does not divide b.
    """
    if r < 1:
        raise ValueError("modulus must be >= 1")
    g, x, _ = ext_gcd(t, r)
    if b % g != 0:
        raise Infeasible(f"{t}*y = {b} (mod {r}): gcd {g} does not divide {b}")
    step = r // g
    particular = (x * (b // g)) % step
    return particular, g


def _snf_rowop(S, Uinv, U, i1, i2, a, b, c, d):
    # rows (i1, i2) of S and Uinv <- [[a, b], [c, d]] @ rows; the inverse
    # op is applied to the columns of U so U @ S stays fixed.
    for M in (S, Uinv):
        r1, r2 = M.data[i1], M.data[i2]
        M.data[i1] = [a * x + b * y for x, y in zip(r1, r2)]
        M.data[i2] = [c * x + d * y for x, y in zip(r1, r2)]
    det = a * d - b * c  # +-1
    for row in U.data:
        x, y = row[i1], row[i2]
        row[i1] = det * (d * x - c * y)
        row[i2] = det * (-b * x + a * y)


def _snf_colop(S, Vinv, V, j1, j2, a, b, c, d):
    # columns (j1, j2) of S and Vinv <- cols @ [[a, c], [b, d]].
    for M in (S, Vinv):
        for row in M.data:
            x, y = row[j1], row[j2]
            row[j1] = a * x + b * y
            row[j2] = c * x + d * y
    det = a * d - b * c
    r1, r2 = V.data[j1], V.data[j2]
    V.data[j1] = [det * (d * x - c * y) for x, y in zip(r1, r2)]
    V.data[j2] = [det * (-b * x + a * y) for x, y in zip(r1, r2)]


def snf(M: IntMatrix) -> SNFResult:
    """Smith normal form M = U @ diag(D) @ V.

    Elementary row/column reduction with smallest-pivot selection; the
    transforms and their inverses are accumulated on the fly. Works for
    any rectangular integer matrix; zero invariant factors trail.
    """
    if M.rows == 0 or M.cols == 0:
        raise ValueError("empty matrix")
    m, n = M.rows, M.cols
    S = M.copy()
    U, Uinv = IntMatrix.identity(m), IntMatrix.identity(m)
    V, Vinv = IntMatrix.identity(n), IntMatrix.identity(n)
    k = min(m, n)

    def pivot_search(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(S.data[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        return best

    t = 0
    while t < k:
        found = pivot_search(t)
        if found is None:
            break
        _, pi, pj = found
        if pi != t:
            _snf_rowop(S, Uinv, U, t, pi, 0, 1, 1, 0)
        if pj != t:
            _snf_colop(S, Vinv, V, t, pj, 0, 1, 1, 0)
        while True:
            for i in range(t + 1, m):
                if S.data[i][t]:
                    p, v = S.data[t][t], S.data[i][t]
                    if v % p == 0:
                        _snf_rowop(S, Uinv, U, t, i, 1, 0, -(v // p), 1)
                    else:
                        g, x, y = ext_gcd(p, v)
                        _snf_rowop(S, Uinv, U, t, i, x, y, -(v // g), p // g)
            for j in range(t + 1, n):
                if S.data[t][j]:
                    p, v = S.data[t][t], S.data[t][j]
                    if v % p == 0:
                        _snf_colop(S, Vinv, V, t, j, 1, 0, -(v // p), 1)
                    else:
                        g, x, y = ext_gcd(p, v)
                        _snf_colop(S, Vinv, V, t, j, x, y, -(v // g), p // g)
            # column ops may refill column t; repeat until both are clear
            if all(S.data[i][t] == 0 for i in range(t + 1, m)) and all(
                S.data[t][j] == 0 for j in range(t + 1, n)
            ):
                break
        # pivot must divide the remaining block; if not, fold the
        # offending row in and redo this step
        p = S.data[t][t]
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if S.data[i][j] % p != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            _snf_rowop(S, Uinv, U, t, offender, 1, 1, 0, 1)
            continue
        if p < 0:
            # negate row t of S and Uinv, column t of U: U absorbs the sign
            S.data[t] = [-x for x in S.data[t]]
            Uinv.data[t] = [-x for x in Uinv.data[t]]
            for row in U.data:
                row[t] = -row[t]
        t += 1

    D = [S.data[i][i] for i in range(k)]
    return SNFResult(U=U, D=D, V=V, Uinv=Uinv, Vinv=Vinv)


def det_exact(M: IntMatrix) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise ValueError("determinant needs a square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = [row[:] for row in M.data]
    sign = 1
    prev = 1
    for t in range(n - 1):
        if a[t][t] == 0:
            for i in range(t + 1, n):
                if a[i][t]:
                    a[t], a[i] = a[i], a[t]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
            a[i][t] = 0
        prev = a[t][t]
    return sign * a[n - 1][n - 1]


def is_unimodular(M: IntMatrix) -> bool:
    """True iff M is square with determinant +-1."""
    if M.rows != M.cols:
        raise ValueError("unimodularity is defined for square matrices")
    return abs(det_exact(M)) == 1


def lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return abs(a * b) // gcd(a, b)


def solve_rational(A: IntMatrix, cols: Sequence[int] | None, rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve A[:, cols] x = rhs exactly (square nonsingular system)."""
    sub = A.select_columns(cols) if cols is not None else A
    n = sub.rows
    if sub.cols != n or len(rhs) != n:
        raise ValueError("square system expected")
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(sub.data)]
    for t in range(n):
        piv = next((i for i in range(t, n) if aug[i][t] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        aug[t], aug[piv] = aug[piv], aug[t]
        inv = 1 / aug[t][t]
        aug[t] = [x * inv for x in aug[t]]
        for i in range(n):
            if i != t and aug[i][t] != 0:
                f = aug[i][t]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[t])]
    return [aug[i][n] for i in range(n)]
