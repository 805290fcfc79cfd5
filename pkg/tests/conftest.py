"""Shared fixtures: instance builders and the seeded random corpus used
by the bound-chain / kernel-oracle / compression suites."""

import random
import time
from fractions import Fraction

import pytest

from grouprelax import (
    ILPInstance,
    IntMatrix,
    brute_force_ilp,
    build_group_relaxation,
    feasible_coset,
    gomory_shortest_path,
    solve_lp_exact,
    to_standard_form,
)
from grouprelax.relax import GroupRelaxationData


def build(inst):
    """Instance -> (sf, bs, grd, fc) through the exact pipeline."""
    sf = to_standard_form(inst)
    bs = solve_lp_exact(sf)
    grd = build_group_relaxation(sf, bs)
    fc = feasible_coset(grd)
    return sf, bs, grd, fc


def stub_grd(Abold_rows, r, bbold, cbold=None):
    """Bare congruence system for kernel-level unit tests; the LP fields
    are not consulted by the kernel and walk operations."""
    A = IntMatrix(Abold_rows)
    return GroupRelaxationData(
        sf=None, bs=None, snf_basis=None,
        r=list(r),
        Abold=A,
        bbold=list(bbold),
        cbold=[Fraction(v) for v in (cbold or [1] * A.cols)],
        kept_cols=list(range(A.cols)),
        dropped_cols=[],
        shift=Fraction(0),
    )


def group_cost(grd):
    def f(pt):
        return grd.shift + sum((c * v for c, v in zip(grd.cbold, pt)), Fraction(0))
    return f


def random_feasible_instance(seed):
    """m <= 3, n <= 6, |A_ij| <= 5, feasible by construction at a point
    inside {0..3}^n; costs nonnegative so the LP is bounded."""
    rng = random.Random(seed)
    m = rng.randint(1, 3)
    n = rng.randint(max(2, m), 6)
    A = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
    for row in A:
        if not any(row):
            row[rng.randrange(n)] = rng.randint(1, 5)
    x0 = [rng.randint(0, 3) for _ in range(n)]
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    sense = [rng.choice(["<=", "=", ">="]) for _ in range(m)]
    c = [Fraction(rng.randint(0, 5)) for _ in range(n)]
    return ILPInstance(name=f"rand{seed}", A=IntMatrix(A), b=b, c=c,
                       row_sense=sense)


@pytest.fixture(scope="session")
def random_suite():
    """200 seeded random instances solved end to end: exact LP, group
    relaxation, kernel coset, certified group optimum (Dijkstra), and
    the brute-force ILP optimum over the box {0..10}^n."""
    t0 = time.monotonic()
    cases = []
    for seed in range(200):
        inst = random_feasible_instance(seed)
        sf, bs, grd, fc = build(inst)
        opt_b = gomory_shortest_path(grd).objective
        opt_ilp, _ = brute_force_ilp(inst, box=10)
        cases.append({
            "inst": inst, "sf": sf, "bs": bs, "grd": grd, "fc": fc,
            "opt_b": opt_b, "opt_ilp": opt_ilp,
        })
    return {"cases": cases, "elapsed": time.monotonic() - t0}
