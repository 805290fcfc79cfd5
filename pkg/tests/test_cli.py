"""CLI surface: subcommands, exit codes, reproducible report bytes."""

from click.testing import CliRunner

from grouprelax.cli import main


def run(args, **kw):
    return CliRunner().invoke(main, args, **kw)


def write_planted(tmp_path, t=2, m=2, name="p.mps"):
    path = tmp_path / name
    res = run(["gen", "planted", "--t", str(t), "--m", str(m),
               "--ell", "1", "--out", str(path)])
    assert res.exit_code == 0, res.output
    return path


def test_solve_dijkstra(tmp_path):
    path = write_planted(tmp_path)
    res = run(["solve", str(path), "--method", "dijkstra"])
    assert res.exit_code == 0, res.output
    assert "opt_b 2" in res.output
    assert "certified true" in res.output


def test_relax_and_kernel(tmp_path):
    path = write_planted(tmp_path)
    res = run(["relax", str(path)])
    assert res.exit_code == 0
    assert "opt_lp 0" in res.output and "opt_b 2" in res.output

    res = run(["kernel", str(path)])
    assert res.exit_code == 0
    assert "k_order 4" in res.output and "g_order 4" in res.output

    res = run(["kernel", str(path), "--compress"])
    assert res.exit_code == 0
    assert "k_order 1" in res.output


def test_diagnose(tmp_path):
    path = write_planted(tmp_path, m=3)
    res = run(["diagnose", str(path), "--mu-sweep", "4"])
    assert res.exit_code == 0, res.output
    assert "k_order,8" in res.output
    assert "r2,4.0" in res.output


def test_infeasible_exit_code(tmp_path):
    path = tmp_path / "bad.mps"
    path.write_text(
        "NAME bad\nROWS\n N COST\n E r1\nCOLUMNS\n"
        "    M 'MARKER' 'INTORG'\n    x1 COST 1\n    x1 r1 2\n"
        "    M 'MARKER' 'INTEND'\nRHS\n    RHS r1 1\nENDATA\n"
    )
    res = run(["solve", str(path)])
    assert res.exit_code == 2


def test_not_pure_ilp_exit_code(tmp_path):
    path = tmp_path / "cont.mps"
    path.write_text(
        "NAME cont\nROWS\n N COST\n L r1\nCOLUMNS\n"
        "    x1 COST 1\n    x1 r1 1\nRHS\n    RHS r1 3\nENDATA\n"
    )
    res = run(["solve", str(path)])
    assert res.exit_code == 4


def test_report_fixed_wall_deterministic(tmp_path):
    for m in (1, 2):
        write_planted(tmp_path, m=m, name=f"p{m}.mps")

    def render(out_name):
        out = tmp_path / out_name
        res = run(["report", str(tmp_path), "--out", str(out),
                   "--method", "dijkstra", "--fixed-wall"])
        assert res.exit_code == 0, res.output
        return out.read_bytes()

    a = render("a.csv")
    b = render("b.csv")
    assert a == b
    assert a.splitlines()[0].startswith(b"instance,opt_lp,opt_b,opt_ilp")


def test_gen_cutgen(tmp_path):
    out = tmp_path / "c.mps"
    res = run(["gen", "cutgen", "--m", "3", "--v2", "0.8", "--dbar", "2",
               "--l", "10", "--seed", "1", "--out", str(out)])
    assert res.exit_code == 0, res.output
    res = run(["solve", str(out), "--method", "brute"])
    assert res.exit_code == 0, res.output
    assert "certified true" in res.output
