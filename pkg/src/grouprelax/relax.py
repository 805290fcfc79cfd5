"""Build the group relaxation tuple (Abold, bbold, cbold, {r_j}) from an
optimal LP basis, lift kernel-space solutions back to full ILP vectors,
and assemble the LP <= group <= ILP bound chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import IntMatrix, SNFResult, snf, solve_rational
from .lp import BasisSolution, StandardFormILP


@dataclass
class GroupRelaxationData:
    sf: StandardFormILP
    bs: BasisSolution
    snf_basis: SNFResult
    r: list[int]                 # invariant factors of A_B, r_1 | ... | r_m
    Abold: IntMatrix             # m x d, entries reduced into [0, r_row)
    bbold: list[int]             # reduced likewise
    cbold: list[Fraction]        # reduced costs over kept columns, >= 0
    kept_cols: list[int]         # Abold column -> standard-form column index
    dropped_cols: list[int]      # nonbasic columns congruent to 0 mod R Z^m
    shift: Fraction              # OPT_LP

    @property
    def d(self) -> int:
        return self.Abold.cols

    @property
    def m(self) -> int:
        return self.Abold.rows

    @property
    def r_max(self) -> int:
        return self.r[-1]


@dataclass
class GroupSolution:
    x_n_kernelspace: list[int]   # over kept columns
    objective: Fraction          # includes the OPT_LP shift
    lifted_x: list[int]          # full standard-form vector
    ilp_feasible: bool


def build_group_relaxation(sf: StandardFormILP, bs: BasisSolution) -> GroupRelaxationData:
    """Form (Abold, bbold, cbold, {r_j}); columns of U^{-1}A_N that are
    0 mod R Z^m are dropped (fixing those variables to 0 is free)."""
    AB = sf.A.select_columns(bs.basis)
    fact = snf(AB)
    r = [int(x) for x in fact.D]
    assert all(x >= 1 for x in r), "basis matrix must be nonsingular"
    m = len(r)

    bbold = [v % r[i] for i, v in enumerate(fact.Uinv.matvec(sf.b))]
    kept, dropped = [], []
    cols: list[list[int]] = []
    for j in bs.nonbasic:
        col = fact.Uinv.matvec(sf.A.column(j))
        red = [v % r[i] for i, v in enumerate(col)]
        if any(red):
            kept.append(j)
            cols.append(red)
        else:
            dropped.append(j)
    Abold = IntMatrix([[cols[k][i] for k in range(len(cols))] for i in range(m)])
    cbold = [bs.reduced_costs[j] for j in kept]
    assert all(c >= 0 for c in cbold)
    return GroupRelaxationData(
        sf=sf, bs=bs, snf_basis=fact, r=r, Abold=Abold, bbold=bbold,
        cbold=cbold, kept_cols=kept, dropped_cols=dropped, shift=bs.opt_lp,
    )


def lift_to_ilp(grd: GroupRelaxationData, x_n: Sequence[int]) -> GroupSolution:
    """Lift kernel-space x_N (over kept columns) to a full vector.

    x_B = A_B^{-1}(b - A_N x_N) must come out integral; a fractional
    result means the input was not in the feasible coset and is treated
    as a hard fault.
    """
    sf, bs = grd.sf, grd.bs
    if len(x_n) != len(grd.kept_cols):
        raise ValueError("x_N must cover exactly the kept columns")
    full = [0] * sf.A.cols
    for j, v in zip(grd.kept_cols, x_n):
        if v < 0:
            raise ValueError("kernel-space entries must be nonnegative")
        full[j] = int(v)
    rhs = [
        Fraction(bv - sum(sf.A.data[i][j] * full[j] for j in grd.kept_cols))
        for i, bv in enumerate(sf.b)
    ]
    xb = solve_rational(sf.A, bs.basis, rhs)
    for v in xb:
        if v.denominator != 1:
            raise AssertionError("non-integral basic lift: inconsistent coset input")
    for i, j in enumerate(bs.basis):
        full[j] = int(xb[i])
    objective = grd.shift + sum(
        (c * v for c, v in zip(grd.cbold, x_n)), Fraction(0)
    )
    return GroupSolution(
        x_n_kernelspace=[int(v) for v in x_n],
        objective=objective,
        lifted_x=full,
        ilp_feasible=all(v >= 0 for v in xb),
    )


@dataclass
class BoundChain:
    opt_lp: Fraction
    opt_group: Fraction
    opt_ilp: Fraction | None
    delta_lp_ilp: Fraction | None
    delta_b: Fraction | None
    r_abs: Fraction
    r_pct: Fraction | None  # None means "N/A" (zero LP-ILP gap)


def bound_chain(opt_lp, opt_group, opt_ilp=None) -> BoundChain:
    """Assemble gap-closure metrics; violations of the chain
    OPT_LP <= OPT_B <= OPT indicate a solver bug and raise."""
    opt_lp = Fraction(opt_lp)
    opt_group = Fraction(opt_group)
    if opt_group < opt_lp:
        raise AssertionError(f"bound chain violated: OPT_B {opt_group} < OPT_LP {opt_lp}")
    r_abs = opt_group - opt_lp
    if opt_ilp is None:
        return BoundChain(opt_lp, opt_group, None, None, None, r_abs, None)
    opt_ilp = Fraction(opt_ilp)
    if opt_ilp < opt_group:
        raise AssertionError(f"bound chain violated: OPT {opt_ilp} < OPT_B {opt_group}")
    delta_lp_ilp = opt_ilp - opt_lp
    delta_b = opt_ilp - opt_group
    r_pct = 100 * r_abs / delta_lp_ilp if delta_lp_ilp > 0 else None
    return BoundChain(opt_lp, opt_group, opt_ilp, delta_lp_ilp, delta_b, r_abs, r_pct)
