"""Command line interface.

Exit codes: 0 ok, 2 infeasible, 3 unbounded, 4 not a pure ILP,
5 cap or dense/pattern limit exceeded, 1 anything else.
"""

from __future__ import annotations

import functools
import sys
from fractions import Fraction
from pathlib import Path

import click

from .errors import (CapExceeded, DenseLimitExceeded, EmptyWidthBand,
                     GroupRelaxError, Infeasible, MalformedMPS, NotPureILP,
                     PatternLimitExceeded, Unbounded)
from .gen import CutStockSpec, cutgen, planted
from .kernel import compress_coset, feasible_coset
from .lp import solve_lp_exact, to_standard_form
from .mps import emit_mps, parse_mps
from .pipeline import PipelineConfig, emit_report, fmt_rational, run_pipeline
from .relax import build_group_relaxation
from .search import METHODS, SearchConfig, gomory_shortest_path
from .spdiag import SPParams, sp_diagnose


def _exit_code(exc: GroupRelaxError) -> int:
    if isinstance(exc, Infeasible):
        return 2
    if isinstance(exc, Unbounded):
        return 3
    if isinstance(exc, NotPureILP):
        return 4
    if isinstance(exc, (CapExceeded, DenseLimitExceeded, PatternLimitExceeded)):
        return 5
    return 1


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except GroupRelaxError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(_exit_code(exc))
    return wrapper


def _load(path: str):
    p = Path(path)
    return parse_mps(p.read_text(), name_hint=p.stem)


seed_option = click.option("--seed", type=int, default=None, envvar="GROUPRELAX_SEED",
                           help="random seed (env GROUPRELAX_SEED)")


@click.group()
def main():
    """Exact group relaxations of pure integer programs."""


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--method", type=click.Choice(METHODS), default="dijkstra")
@seed_option
@click.option("--max-samples", type=int, default=64)
@click.option("--beta", type=float, default=0.0)
@click.option("--compress", is_flag=True)
@_handle_errors
def solve(file, method, seed, max_samples, beta, compress):
    """Solve the group relaxation of FILE (MPS)."""
    inst = _load(file)
    cfg = PipelineConfig(
        search=SearchConfig(method=method, seed=seed, max_samples=max_samples,
                            beta=beta),
        compress=compress,
    )
    row = run_pipeline(inst, cfg)
    click.echo(f"instance {row.instance}")
    click.echo(f"opt_lp {fmt_rational(row.opt_lp)}")
    click.echo(f"opt_b {fmt_rational(row.opt_b)}")
    if row.opt_ilp is not None:
        click.echo(f"opt_ilp {fmt_rational(row.opt_ilp)}")
    click.echo(f"k_order {row.k_order}")
    click.echo(f"g_order {row.g_order}")
    click.echo(f"certified {'true' if row.certified else 'false'}")


@main.command()
@click.argument("file", type=click.Path(exists=True))
@_handle_errors
def relax(file):
    """Bound chain only: exact OPT_LP and certified OPT_B."""
    inst = _load(file)
    sf = to_standard_form(inst)
    bs = solve_lp_exact(sf)
    grd = build_group_relaxation(sf, bs)
    res = gomory_shortest_path(grd)
    click.echo(f"opt_lp {fmt_rational(bs.opt_lp)}")
    click.echo(f"opt_b {fmt_rational(res.objective)}")
    click.echo(f"r_abs {fmt_rational(res.objective - bs.opt_lp)}")
    click.echo(f"degenerate_lp {'true' if bs.degenerate_primal else 'false'}")


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--compress", is_flag=True)
@_handle_errors
def kernel(file, compress):
    """Kernel generators, orders, |K|, |G|."""
    inst = _load(file)
    sf = to_standard_form(inst)
    bs = solve_lp_exact(sf)
    grd = build_group_relaxation(sf, bs)
    fc = feasible_coset(grd)
    if compress:
        fc = compress_coset(grd, fc)
    kb = fc.basis
    click.echo(f"moduli {' '.join(map(str, kb.moduli))}")
    click.echo(f"x_hat {' '.join(map(str, fc.x_hat))}")
    for h, u in zip(kb.generators, kb.orders):
        click.echo(f"gen {' '.join(map(str, h))} order {u}")
    click.echo(f"k_order {kb.kernel_order}")
    click.echo(f"g_order {kb.range_order}")


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--eta", type=float, default=0.5)
@click.option("--dense-limit", type=int, default=4096)
@click.option("--expander-c", type=float, default=8.0)
@click.option("--mu-sweep", type=int, default=8)
@_handle_errors
def diagnose(file, eta, dense_limit, expander_c, mu_sweep):
    """Short-path spectral diagnostics (dense mode)."""
    inst = _load(file)
    sf = to_standard_form(inst)
    bs = solve_lp_exact(sf)
    grd = build_group_relaxation(sf, bs)
    fc = feasible_coset(grd)
    rep = sp_diagnose(grd, fc, SPParams(eta=eta, dense_limit=dense_limit,
                                        mu_sweep=mu_sweep,
                                        expander_c=expander_c))
    def emit(k, v):
        click.echo(f"{k},{v}")
    emit("k_order", rep.k_order)
    emit("kstar_order", rep.kstar_order)
    emit("g_order", rep.g_order)
    emit("e_star", fmt_rational(rep.e_star))
    emit("shift_c", fmt_rational(rep.shift_c))
    emit("cyclic_norm_max", fmt_rational(rep.cyclic_norm_max))
    emit("delta_p_bound", fmt_rational(rep.delta_p_bound))
    emit("omega_hat", float(rep.omega_hat))
    emit("delta", rep.delta)
    emit("gamma_plain", rep.gamma_plain)
    emit("gamma_trunc", rep.gamma_trunc)
    emit("mu_star_ls", rep.mu_star_ls)
    emit("mu_star_gap", rep.mu_star_gap)
    emit("mu", rep.mu)
    emit("alpha_hat", rep.alpha_hat)
    emit("r1", rep.condition_26a.ratio)
    emit("r1_in_band", rep.condition_26a.in_band)
    emit("r2", rep.condition_26b.ratio)
    emit("r2_in_band", rep.condition_26b.in_band)
    emit("degenerate", rep.degenerate)
    emit("sublevel_mass", rep.sublevel_mass)
    for mu_i, ov in rep.overlap_curve:
        emit("overlap", f"{mu_i:.6g}:{ov:.10g}")


@main.group()
def gen():
    """Instance generators."""


@gen.command("cutgen")
@click.option("--m", "m_", type=int, required=True)
@click.option("--v1", type=float, default=0.01)
@click.option("--v2", type=float, required=True)
@click.option("--l", "--L", "length", type=int, default=1000)
@click.option("--dbar", type=float, required=True)
@seed_option
@click.option("--out", type=click.Path(), required=True)
@_handle_errors
def gen_cutgen(m_, v1, v2, length, dbar, seed, out):
    """Cutting-stock instance over all maximal patterns."""
    spec = CutStockSpec(m=m_, v1=v1, v2=v2, L=length, dbar=dbar,
                        seed=seed if seed is not None else 0)
    inst = cutgen(spec)
    Path(out).write_text(emit_mps(inst))
    click.echo(f"wrote {out} ({inst.n_vars} patterns)")


@gen.command("planted")
@click.option("--t", "t_", type=int, required=True)
@click.option("--m", "m_", type=int, required=True)
@click.option("--ell", type=int, default=1)
@seed_option
@click.option("--style", type=click.Choice(["identity", "random-lower-unit"]),
              default="identity")
@click.option("--out", type=click.Path(), required=True)
@_handle_errors
def gen_planted(t_, m_, ell, seed, style, out):
    """Instance with known group-relaxation structure."""
    inst, meta = planted(t_, m_, ell, seed=seed if seed is not None else 0,
                         style=style)
    Path(out).write_text(emit_mps(inst))
    click.echo(f"wrote {out} (opt_b {meta['opt_b']}, |K| {meta['k_order']})")


@main.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--out", type=click.Path(), default="report.csv")
@click.option("--method", type=click.Choice(METHODS), default="dijkstra")
@seed_option
@click.option("--compress", is_flag=True)
@click.option("--fixed-wall", is_flag=True, help="pin wall_ms to 0 for reproducible bytes")
@_handle_errors
def report(directory, out, method, seed, compress, fixed_wall):
    """Run the pipeline over every .mps file in DIRECTORY."""
    rows = []
    for path in sorted(Path(directory).glob("*.mps")):
        inst = parse_mps(path.read_text(), name_hint=path.stem)
        cfg = PipelineConfig(
            search=SearchConfig(method=method, seed=seed),
            compress=compress,
            record_wall=not fixed_wall,
        )
        rows.append(run_pipeline(inst, cfg))
    rows.sort(key=lambda r: r.instance)
    text = emit_report(rows)
    Path(out).write_text(text)
    click.echo(f"wrote {out} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
