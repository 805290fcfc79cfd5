"""Short-path spectral diagnostics at desk scale.

Everything the quantum short-path analysis needs, computed exactly or
via dense eigensolves: shifted cost, the truncation theta_eta, the
short-path Hamiltonian and its ground-state overlap with the optimal
set, gamma / mu* / alpha estimates, and the two dimensionless
super-quadratic condition ratios with a Theta(1) proxy band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DenseLimitExceeded, DiagnosticUnavailable
from .kernel import FeasibleCoset, KernelBasis, enumerate_coset
from .relax import GroupRelaxationData
from .walks import (CayleyWalkSpec, cyclic_norm_max, log_sobolev_lower,
                    pseudo_lipschitz, spectral_gap, transition_matrix)

DENSE_LIMIT_DEFAULT = 4096
BAND_DEFAULT = (0.25, 4.0)  # closed Theta(1) proxy band, both ends inclusive


@dataclass
class SPParams:
    eta: float = 0.5
    mu: Optional[float] = None       # default chosen from mu* and the gap
    dense_limit: int = DENSE_LIMIT_DEFAULT
    mu_sweep: int = 8
    band: tuple[float, float] = BAND_DEFAULT
    expander_c: float = 8.0

    def __post_init__(self):
        if not (0 < self.eta < 1):
            raise ValueError("eta must be in (0, 1)")


def shifted_cost(values: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """Shift constant C = f_max + 1 and ground energy E* = f_min - C.
    All shifted values lie in [E*, -1], so E* < 0 always."""
    fmax = max(values)
    fmin = min(values)
    C = fmax + 1
    return C, fmin - C


def theta_eta(x, eta):
    """Piecewise-linear truncation: -1 at x = -1, 0 for x >= eta - 1,
    linear slope 1/eta in between."""
    return min(0, (x + 1 - eta) / eta)


def build_sp_hamiltonian(P: np.ndarray, ftilde: Sequence[Fraction], mu: float,
                         eta: float, e_star: Fraction) -> np.ndarray:
    """H_mu = -P + mu * diag(theta_eta(ftilde / |E*|)); symmetric since
    P is. The theta arguments all land in [-1, 0]."""
    abs_e = abs(Fraction(e_star))
    diag = []
    for v in ftilde:
        x = Fraction(v) / abs_e
        assert -1 <= x <= 0, "shifted cost left the normalized range"
        th = theta_eta(float(x), eta)
        assert -1 - 1e-12 <= th <= 0
        diag.append(mu * th)
    return -P + np.diag(diag)


def ground_overlap(H: np.ndarray, kstar_idx: Sequence[int]) -> tuple[float, float]:
    """Lowest eigenpair of the symmetric H; overlap is the squared mass
    of the ground state on the optimal index set."""
    lam, Q = np.linalg.eigh(H)
    psi = Q[:, 0]
    resid = np.linalg.norm(H @ psi - lam[0] * psi)
    assert resid <= 1e-10 * max(1.0, np.abs(lam).max())
    overlap = float(np.sum(psi[list(kstar_idx)] ** 2))
    return float(lam[0]), overlap


@dataclass
class ConditionCheck:
    ratio: float
    in_band: bool


@dataclass
class SPReport:
    k_order: int
    kstar_order: int
    g_order: int
    e_star: Fraction
    shift_c: Fraction
    f_max: Fraction
    cyclic_norm_max: Fraction
    delta_p_bound: Fraction
    omega_hat: Fraction
    delta: Optional[float]
    gamma_plain: Optional[float]      # E_pi[ftilde] numerator variant
    gamma_trunc: Optional[float]      # E_pi[truncated ftilde] variant
    mu_star_ls: Optional[float]
    mu_star_gap: Optional[float]
    mu: Optional[float]
    alpha_hat: Optional[float]
    condition_26a: ConditionCheck
    condition_26b: ConditionCheck
    expander_condition: ConditionCheck
    degenerate: bool                  # every feasible point optimal
    sublevel_mass: Optional[float]    # pi(E <= (1-eta) E*), reported only
    pseudo_lipschitz_exact: Optional[Fraction]
    overlap_curve: list[tuple[float, float]] = field(default_factory=list)
    lambda_curve: list[tuple[float, float]] = field(default_factory=list)


def speedup_conditions(kb: KernelBasis, weights: Sequence, e_star: Fraction,
                       kstar_order: int,
                       band: tuple[float, float] = BAND_DEFAULT
                       ) -> tuple[ConditionCheck, ConditionCheck, ConditionCheck]:
    """Dimensionless ratios for the two super-quadratic conditions, with
    log base 2 and a closed band as the Theta(1) proxy:
      R1 = max_j cyclic_norm(h_j, c) * log2(|K|/|K*|) / |E*|
      R2 = u_max^2 * k / log2(|K|/|K*|)
    The expander variant drops the second condition.
    """
    if kstar_order < 1 or kb.kernel_order % kstar_order:
        raise DiagnosticUnavailable("|K*| must divide |K|")
    logr = math.log2(kb.kernel_order / kstar_order)
    if logr == 0:
        degenerate = ConditionCheck(float("nan"), False)
        return degenerate, degenerate, degenerate
    maxcyc = float(cyclic_norm_max(kb.generators, weights, kb.moduli))
    k = len(kb.generators)
    u_max = max(kb.orders, default=1)
    r1 = maxcyc * logr / float(abs(e_star))
    r2 = u_max * u_max * k / logr
    lo, hi = band
    c1 = ConditionCheck(r1, lo <= r1 <= hi)
    c2 = ConditionCheck(r2, lo <= r2 <= hi)
    return c1, c2, ConditionCheck(r1, c1.in_band)


def sp_diagnose(grd: GroupRelaxationData, fc: FeasibleCoset,
                params: SPParams,
                kstar_order: Optional[int] = None) -> SPReport:
    """Full dense-mode diagnostic: enumerates the coset, builds the walk
    matrix and H_mu, sweeps mu in [0, mu_chosen), and evaluates every
    estimate. kstar_order defaults to the brute-force count."""
    kb = fc.basis
    if kb.kernel_order > params.dense_limit:
        raise DenseLimitExceeded(
            f"|K| = {kb.kernel_order} exceeds dense limit {params.dense_limit}")
    states = list(enumerate_coset(fc, params.dense_limit))
    n = len(states)

    def f(pt):
        return grd.shift + sum((c * v for c, v in zip(grd.cbold, pt)), Fraction(0))

    values = [Fraction(f(s)) for s in states]
    C, e_star = shifted_cost(values)
    f_max = C - 1
    ftilde = [v - C for v in values]
    fmin = min(values)
    kstar_idx = [i for i, v in enumerate(values) if v == fmin]
    if kstar_order is None:
        kstar_order = len(kstar_idx)
    degenerate = kstar_order == kb.kernel_order

    spec = CayleyWalkSpec(generators=kb.generators, moduli=kb.moduli)
    weights = grd.cbold
    norms_max = cyclic_norm_max(kb.generators, weights, kb.moduli)
    omega = log_sobolev_lower(kb)
    c1, c2, cexp = speedup_conditions(kb, weights, e_star, kstar_order, params.band)

    if n == 1 or not kb.generators:
        P = np.eye(n)
        delta = 1.0
        plip = Fraction(0)
    else:
        dt = transition_matrix(spec, states, params.dense_limit)
        P = dt.P
        delta = spectral_gap(P)
        plip, _ = pseudo_lipschitz(f, spec, states, weights)

    abs_e = float(abs(e_star))
    eta = params.eta
    pi_ratio = kb.kernel_order / kstar_order
    gamma_plain = gamma_trunc = mu_star_ls = mu = alpha_hat = None
    mu_star_gap = delta / 4
    mean_ft = sum(ftilde, Fraction(0)) / n
    trunc_vals = [abs_e * theta_eta(float(ft) / abs_e, eta) for ft in ftilde]
    mean_trunc = sum(trunc_vals) / n
    sublevel = sum(1 for ft in ftilde if float(ft) <= (1 - eta) * float(e_star)) / n
    if not degenerate:
        logpi = math.log(pi_ratio)
        denom = float(plip) * logpi if plip > 0 else None
        num_plain = -(1 - eta) * float(e_star) - float(mean_ft)
        num_trunc = -(1 - eta) * float(e_star) - mean_trunc
        if denom:
            gamma_plain = float(omega) * num_plain**2 / denom
            gamma_trunc = float(omega) * num_trunc**2 / denom
            mu_star_ls = (2.0 / 3.0) * gamma_trunc * float(omega) * logpi
            mu = 0.9 * min(mu_star_ls, mu_star_gap)
            dp = float(norms_max)
            if dp > 0 and mu > 0:
                alpha_hat = eta * (1 - eta) * abs_e * mu / (2 * dp * logpi)
                alpha_hat = min(alpha_hat, 0.5 - 1e-12)
    elif n >= 1:
        alpha_hat = 0.0

    # mu sweep: overlap and ground energy from 0 up to the chosen mu
    # (or the gap bound when mu is unavailable)
    sweep_top = mu if mu else mu_star_gap
    overlap_curve = []
    lambda_curve = []
    steps = max(params.mu_sweep, 1)
    for i in range(steps):
        mu_i = sweep_top * i / steps
        H = build_sp_hamiltonian(P, ftilde, mu_i, eta, e_star)
        lam1, ov = ground_overlap(H, kstar_idx)
        overlap_curve.append((mu_i, ov))
        lambda_curve.append((mu_i, lam1))
    # mu = 0 ground state is uniform, overlap must equal |K*|/|K|
    assert abs(overlap_curve[0][1] - len(kstar_idx) / n) < 1e-10

    return SPReport(
        k_order=kb.kernel_order,
        kstar_order=kstar_order,
        g_order=kb.range_order,
        e_star=e_star,
        shift_c=C,
        f_max=f_max,
        cyclic_norm_max=norms_max,
        delta_p_bound=norms_max,
        omega_hat=omega,
        delta=delta,
        gamma_plain=gamma_plain,
        gamma_trunc=gamma_trunc,
        mu_star_ls=mu_star_ls,
        mu_star_gap=mu_star_gap,
        mu=mu,
        alpha_hat=alpha_hat,
        condition_26a=c1,
        condition_26b=c2,
        expander_condition=cexp,
        degenerate=degenerate,
        sublevel_mass=sublevel,
        pseudo_lipschitz_exact=plip,
        overlap_curve=overlap_curve,
        lambda_curve=lambda_curve,
    )
