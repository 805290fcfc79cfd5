"""Solvers for the group relaxation over the feasible coset: Markov
chain search (plain, expander, Metropolis), Dijkstra over the range
group, and brute-force oracles for the coset and for tiny ILPs.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import CapExceeded, Infeasible
from .kernel import FeasibleCoset, enumerate_coset
from .lp import ILPInstance
from .relax import GroupRelaxationData, GroupSolution, lift_to_ilp
from .walks import CayleyWalkSpec, expander_generation, metropolis_step, step

METHODS = ("mcs", "mcs-expander", "mcs-metropolis", "dijkstra", "brute")


@dataclass
class SearchConfig:
    method: str = "mcs"
    seed: Optional[int] = None
    max_samples: int = 64
    mix_steps: Optional[int] = None
    beta: float = 0.0
    epsilon: float = 0.01
    cap: int = 10**6
    expander_c: float = 8.0
    # optional early-exit target (e.g. a known optimum in tests); the
    # search is anytime, so stopping at the target only shortens the run
    stop_at: Optional[Fraction] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.max_samples < 1:
            raise ValueError("max_samples must be >= 1")
        if not (0 < self.epsilon < 1):
            raise ValueError("epsilon must be in (0, 1)")


@dataclass
class SearchResult:
    best_point: Optional[tuple[int, ...]]
    objective: Fraction
    samples_used: int
    certified_optimal: bool
    trace: list[tuple[int, Fraction]] = field(default_factory=list)
    solution: Optional[GroupSolution] = None
    argmin_points: Optional[list[tuple[int, ...]]] = None  # K*, brute only
    seed: Optional[int] = None


def default_mix_steps(fc: FeasibleCoset, epsilon: float) -> int:
    """Walk length per sample: ceil(k * u_max^2 * ln(|K|/eps)), from the
    product-of-cycles gap 1/(k u_max^2)."""
    kb = fc.basis
    k = len(kb.generators)
    if k == 0 or kb.kernel_order <= 1:
        return 1
    u = max(kb.orders)
    return math.ceil(k * u * u * math.log(kb.kernel_order / epsilon))


def sample_budget(kernel_order: int, kstar_order: int, epsilon: float) -> int:
    """ceil(2 (|K|/|K*|) ln(1/eps)) samples suffice to hit an optimum
    with failure probability eps when sampling near-uniformly."""
    return math.ceil(2 * (kernel_order / kstar_order) * math.log(1 / epsilon))


def markov_chain_search(fc: FeasibleCoset, f: Callable[[tuple[int, ...]], Fraction],
                        cfg: SearchConfig,
                        grd: Optional[GroupRelaxationData] = None) -> SearchResult:
    """Anytime search: burn in one mixing time, then repeatedly walk a
    mixing time and keep the sample iff it does not increase f. The
    best-so-far value is non-increasing by construction; the result is
    not certified optimal."""
    kb = fc.basis
    rng = random.Random(cfg.seed)
    fbest = Fraction(f(fc.x_hat))
    best = fc.x_hat
    trace = [(0, fbest)]
    if kb.kernel_order <= 1 or not kb.generators:
        sol = lift_to_ilp(grd, best) if grd is not None else None
        return SearchResult(best, fbest, 0, False, trace, sol, seed=cfg.seed)

    if cfg.method == "mcs-expander":
        gens = tuple(expander_generation(kb, cfg.expander_c, rng))
    else:
        gens = kb.generators
    spec = CayleyWalkSpec(generators=gens, moduli=kb.moduli, rng=rng)
    if cfg.method == "mcs-metropolis":
        def advance(x):
            return metropolis_step(x, cfg.beta, spec, f)
    else:
        def advance(x):
            return step(x, spec)

    t_mix = cfg.mix_steps if cfg.mix_steps is not None else default_mix_steps(fc, cfg.epsilon)
    z = fc.x_hat
    for _ in range(t_mix):  # burn-in before the first comparison
        z = advance(z)
    fz = Fraction(f(z))
    if fz < fbest:
        best, fbest = z, fz
        trace.append((0, fbest))
    samples = 0
    for i in range(1, cfg.max_samples + 1):
        zt = z
        for _ in range(t_mix):
            zt = advance(zt)
        fzt = Fraction(f(zt))
        if fzt <= fz:  # plateau moves allowed
            z, fz = zt, fzt
        if fz < fbest:
            best, fbest = z, fz
            trace.append((i, fbest))
        samples = i
        if cfg.stop_at is not None and fbest <= cfg.stop_at:
            break
    sol = lift_to_ilp(grd, best) if grd is not None else None
    return SearchResult(best, fbest, samples, False, trace, sol, seed=cfg.seed)


def gomory_shortest_path(grd: GroupRelaxationData) -> SearchResult:
    """Dijkstra from 0 to the target residue over the range group: nodes
    are residue tuples mod (r_1..r_m), one outgoing edge per kept column
    with weight equal to its reduced cost. The reconstructed edge
    multiplicities are an optimal x_N; the result is certified."""
    m, r = grd.m, grd.r
    target = tuple(grd.bbold[i] % r[i] for i in range(m))
    src = (0,) * m
    cols = [tuple(grd.Abold.column(j)) for j in range(grd.d)]
    dist: dict[tuple[int, ...], Fraction] = {src: Fraction(0)}
    pred: dict[tuple[int, ...], tuple[tuple[int, ...], int]] = {}
    heap: list[tuple[Fraction, tuple[int, ...]]] = [(Fraction(0), src)]
    done = set()
    while heap:
        dcur, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == target:
            break
        for j, col in enumerate(cols):
            v = tuple((u[i] + col[i]) % r[i] for i in range(m))
            nd = dcur + grd.cbold[j]
            old = dist.get(v)
            if old is None or nd < old:
                dist[v] = nd
                pred[v] = (u, j)
                heapq.heappush(heap, (nd, v))
    if target not in done:
        raise Infeasible("target residue unreachable: group relaxation infeasible")

    x_n = [0] * grd.d
    node = target
    while node != src:
        node, j = pred[node]
        x_n[j] += 1
    # path feasibility: the steps must sum to the target residue
    acc = [0] * m
    for j, mult in enumerate(x_n):
        for i in range(m):
            acc[i] = (acc[i] + mult * cols[j][i]) % r[i]
    assert tuple(acc) == target
    sol = lift_to_ilp(grd, x_n)
    obj = grd.shift + dist[target]
    assert sol.objective == obj
    return SearchResult(tuple(x_n), obj, len(done), True, [(0, obj)], sol)


def brute_force_group(fc: FeasibleCoset, f: Callable[[tuple[int, ...]], Fraction],
                      cap: int,
                      grd: Optional[GroupRelaxationData] = None) -> SearchResult:
    """Exhaustive minimum over the coset plus the full argmin set K*."""
    best = None
    fbest = None
    argmin: list[tuple[int, ...]] = []
    count = 0
    for pt in enumerate_coset(fc, cap):  # raises CapExceeded
        count += 1
        v = Fraction(f(pt))
        if fbest is None or v < fbest:
            best, fbest = pt, v
            argmin = [pt]
        elif v == fbest:
            argmin.append(pt)
    if best is None:
        raise Infeasible("empty coset")
    sol = lift_to_ilp(grd, best) if grd is not None else None
    return SearchResult(best, fbest, count, True, [(0, fbest)], sol,
                        argmin_points=argmin)


@lru_cache(maxsize=8)
def _box_grid(n: int, box: int) -> np.ndarray:
    """All points of {0..box}^n as an int64 array, cached across calls."""
    side = box + 1
    total = side**n
    idx = np.arange(total, dtype=np.int64)
    cols = []
    for _ in range(n):
        cols.append(idx % side)
        idx //= side
    return np.stack(cols, axis=1)


def brute_force_ilp(inst: ILPInstance, box: int, cap: int = 10**7):
    """Exact optimum of the original ILP over the box {0..box}^n by
    vectorized enumeration. Returns (value, x). Raises Infeasible when
    nothing in the box is feasible, CapExceeded when the box is too big.
    """
    n = inst.n_vars
    if (box + 1) ** n > cap:
        raise CapExceeded(f"{(box+1)**n} box points exceed cap {cap}")
    X = _box_grid(n, box)
    mask = np.ones(X.shape[0], dtype=bool)
    for i in range(inst.n_rows):
        lhs = X @ np.asarray(inst.A.data[i], dtype=np.int64)
        s = inst.row_sense[i]
        if s == "<=":
            mask &= lhs <= inst.b[i]
        elif s == ">=":
            mask &= lhs >= inst.b[i]
        else:
            mask &= lhs == inst.b[i]
    if not mask.any():
        raise Infeasible("no feasible point in the box")
    scale = math.lcm(*(c.denominator for c in inst.c)) if inst.c else 1
    cs = [int(c * scale) for c in inst.c]
    if max((abs(v) for v in cs), default=0) * box * max(n, 1) >= 2**62:
        # exact fallback for huge scaled costs
        feas = X[mask]
        vals = [sum(Fraction(c) * int(x) for c, x in zip(inst.c, row)) for row in feas]
        k = min(range(len(vals)), key=vals.__getitem__)
        return vals[k], [int(v) for v in feas[k]]
    obj = X[mask] @ np.asarray(cs, dtype=np.int64)
    k = int(np.argmin(obj))
    xbest = [int(v) for v in X[mask][k]]
    return Fraction(int(obj[k]), scale), xbest


def solve_group(grd: GroupRelaxationData, fc: FeasibleCoset,
                cfg: SearchConfig) -> SearchResult:
    """Dispatch on cfg.method; f is the shifted linear group cost."""
    def f(pt):
        return grd.shift + sum((c * v for c, v in zip(grd.cbold, pt)), Fraction(0))

    if cfg.method == "dijkstra":
        return gomory_shortest_path(grd)
    if cfg.method == "brute":
        return brute_force_group(fc, f, cfg.cap, grd)
    return markov_chain_search(fc, f, cfg, grd)
