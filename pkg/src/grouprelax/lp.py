"""Pure-ILP modelling, standard-form conversion, and an exact rational
two-phase simplex with Bland's rule.

The simplex is deliberately exact: the group relaxation downstream needs
the *integer* basis matrix A_B identified without rounding, since its
Smith normal form drives everything else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import Infeasible, Unbounded
from .exact import IntMatrix, det_exact, solve_rational

LE, EQ, GE = "<=", "=", ">="
_SENSES = (LE, EQ, GE)


@dataclass
class ILPInstance:
    """min c.x  s.t.  A x (sense) b,  x integer >= 0."""

    name: str
    A: IntMatrix
    b: list[int]
    c: list[Fraction]
    row_sense: list[str]
    var_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.b = [int(v) for v in self.b]
        self.c = [Fraction(v) for v in self.c]
        if self.A.rows != len(self.b) or self.A.rows != len(self.row_sense):
            raise ValueError("row dimension mismatch")
        if self.A.cols != len(self.c):
            raise ValueError("column dimension mismatch")
        for s in self.row_sense:
            if s not in _SENSES:
                raise ValueError(f"bad row sense {s!r}")
        if not self.var_names:
            self.var_names = [f"x{j+1}" for j in range(self.A.cols)]

    @property
    def n_vars(self) -> int:
        return self.A.cols

    @property
    def n_rows(self) -> int:
        return self.A.rows


@dataclass
class StandardFormILP:
    """Equality form with full row rank; slacks/surpluses appended."""

    name: str
    A: IntMatrix
    b: list[int]
    c: list[Fraction]
    slack_map: dict[int, int]  # column index -> originating row index
    n_original: int
    var_names: list[str]


@dataclass
class BasisSolution:
    basis: list[int]
    nonbasic: list[int]
    x_lp: list[Fraction]
    reduced_costs: dict[int, Fraction]  # keyed by nonbasic column
    opt_lp: Fraction
    degenerate_primal: bool


def to_standard_form(inst: ILPInstance) -> StandardFormILP:
    """Append +1 slack per <= row and -1 surplus per >= row, then drop
    linearly dependent rows by exact elimination.

    Since the data is integral, slacks and surpluses are themselves
    integer and nonnegative, so the result is still a pure ILP.
    """
    m, n = inst.A.rows, inst.A.cols
    data = [row[:] for row in inst.A.data]
    names = list(inst.var_names)
    slack_map: dict[int, int] = {}
    col = n
    for i, sense in enumerate(inst.row_sense):
        if sense == EQ:
            continue
        coeff = 1 if sense == LE else -1
        for r in range(m):
            data[r].append(coeff if r == i else 0)
        slack_map[col] = i
        names.append(f"_s{i+1}")
        col += 1
    c = list(inst.c) + [Fraction(0)] * (col - n)
    b = list(inst.b)

    # exact row-rank repair on [A | b]
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(data)]
    keep: list[int] = []
    pivots: list[tuple[int, int]] = []
    for i in range(m):
        row = aug[i][:]
        for kr, pc in pivots:
            if row[pc] != 0:
                f = row[pc] / aug[kr][pc]
                row = [x - f * y for x, y in zip(row, aug[kr])]
        pc = next((j for j in range(col) if row[j] != 0), None)
        if pc is None:
            if row[col] != 0:
                raise Infeasible(f"row {i+1} is inconsistent with earlier rows")
            continue  # redundant row
        aug[i] = row
        pivots.append((i, pc))
        keep.append(i)

    A2 = IntMatrix([data[i] for i in keep])
    b2 = [b[i] for i in keep]
    # remap slack rows to surviving row positions
    pos = {orig: new for new, orig in enumerate(keep)}
    slack_map = {j: pos[i] for j, i in slack_map.items() if i in pos}
    return StandardFormILP(
        name=inst.name, A=A2, b=b2, c=c, slack_map=slack_map,
        n_original=n, var_names=names,
    )


def _simplex(T: list[list[Fraction]], basis: list[int], n: int) -> None:
    """Bland-rule simplex on tableau T (m rows + objective row at end).

    T has n+1 columns (last is the rhs); the objective row holds reduced
    costs (to be minimized) and the current negated objective value.
    Mutates T and basis in place. Raises Unbounded.
    """
    m = len(T) - 1
    while True:
        enter = next((j for j in range(n) if T[m][j] < 0), None)
        if enter is None:
            return
        leave_row = None
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][n] / T[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave_row]
                ):
                    best = ratio
                    leave_row = i
        if leave_row is None:
            raise Unbounded(f"column {enter} has no blocking row")
        piv = T[leave_row][enter]
        T[leave_row] = [x / piv for x in T[leave_row]]
        for i in range(m + 1):
            if i != leave_row and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave_row])]
        basis[leave_row] = enter


def solve_lp_exact(sf: StandardFormILP) -> BasisSolution:
    """Two-phase exact rational simplex; returns an optimal basis."""
    m, n = sf.A.rows, sf.A.cols
    # phase 1: rows flipped so b >= 0, one artificial per row
    rows = []
    for i in range(m):
        sign = 1 if sf.b[i] >= 0 else -1
        rows.append([Fraction(sign * x) for x in sf.A.data[i]] + [Fraction(0)] * m + [Fraction(sign * sf.b[i])])
        rows[i][n + i] = Fraction(1)
    basis = list(range(n, n + m))
    obj = [Fraction(0)] * (n + m + 1)
    for j in range(n, n + m):
        obj[j] = Fraction(1)
    # price out the artificial basis
    for i in range(m):
        obj = [x - y for x, y in zip(obj, rows[i])]
    T = rows + [obj]
    _simplex(T, basis, n + m)  # artificials allowed to re-enter; Bland terminates
    if -T[m][n + m] > 0:
        raise Infeasible("phase 1 optimum is positive")
    # drive any zero-valued artificials out of the basis
    for i in range(m):
        if basis[i] >= n:
            enter = next((j for j in range(n) if T[i][j] != 0), None)
            if enter is None:
                continue  # fully redundant row (rank repair should prevent this)
            piv = T[i][enter]
            T[i] = [x / piv for x in T[i]]
            for r in range(m + 1):
                if r != i and T[r][enter] != 0:
                    f = T[r][enter]
                    T[r] = [x - f * y for x, y in zip(T[r], T[i])]
            basis[i] = enter
    if any(bi >= n for bi in basis):
        raise Infeasible("could not form a basis from structural columns")

    # phase 2 on the original columns
    T2 = [row[:n] + [row[n + m]] for row in T[:m]]
    obj2 = [Fraction(c) for c in sf.c] + [Fraction(0)]
    for i, bi in enumerate(basis):
        if obj2[bi] != 0:
            f = obj2[bi]
            obj2 = [x - f * y for x, y in zip(obj2, T2[i])]
    T2.append(obj2)
    _simplex(T2, basis, n)

    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = T2[i][n]
    nonbasic = [j for j in range(n) if j not in set(basis)]
    reduced = {j: T2[m][j] for j in nonbasic}
    opt = sum((c * xi for c, xi in zip(sf.c, x)), Fraction(0))
    return BasisSolution(
        basis=list(basis),
        nonbasic=nonbasic,
        x_lp=x,
        reduced_costs=reduced,
        opt_lp=opt,
        degenerate_primal=any(x[bi] == 0 for bi in basis),
    )


def check_asymptotic_sufficiency(sf: StandardFormILP, bs: BasisSolution) -> bool:
    """Sufficient condition for the group relaxation to solve the ILP:
    A_B^{-1} b >= max_ij |(A_B^{-1} A_N)_ij| * |det A_B| componentwise.
    """
    if not bs.nonbasic:
        return True
    AB = sf.A.select_columns(bs.basis)
    xb = solve_rational(sf.A, bs.basis, [Fraction(v) for v in sf.b])
    det = abs(det_exact(AB))
    biggest = Fraction(0)
    for j in bs.nonbasic:
        col = solve_rational(sf.A, bs.basis, [Fraction(v) for v in sf.A.column(j)])
        for v in col:
            if abs(v) > biggest:
                biggest = abs(v)
    bound = biggest * det
    return all(v >= bound for v in xb)
