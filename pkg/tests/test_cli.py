import io
import contextlib
import json
import re
from pathlib import Path

import pytest

from statesum3d.cli import run

GOLDEN = Path(__file__).resolve().parents[1] / "golden"


def _run(argv):
    buf = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(err):
        code = run(argv)
    return code, buf.getvalue(), err.getvalue()


def _strip_timing(text):
    return re.sub(r"wall_seconds: .*", "wall_seconds: X", text)


def test_invariant_command():
    code, out, _ = _run(["invariant", "--triangulation", "s3_2tet",
                         "--category", "vect_Z2_theta1", "--all-orbits"])
    assert code == 0
    assert "orbit 0: size 8 value [1]" in out


def test_dw_command():
    code, out, _ = _run(["dw", "--triangulation", "s3_2tet", "--group", "Z2",
                         "--theta", "1"])
    assert code == 0
    assert "partition: [1/2]" in out
    code, out, _ = _run(["dw", "--triangulation", "l31", "--group", "Z3",
                         "--theta", "1", "--per-class"])
    assert code == 0
    assert "subdivided" in out and "class 2" in out


def test_validate_command_and_exit_codes(tmp_path):
    code, out, _ = _run(["validate-category", "--category", "fibonacci"])
    assert code == 0 and "passed: True" in out
    # corrupt one F-symbol entry in a category file: exit code 2
    from statesum3d.catdata import builtin_category, save_category
    text = save_category(builtin_category("fibonacci"))
    bad = text.replace("fsym 1 1 1 1 1 0 [1,0]", "fsym 1 1 1 1 1 0 [-1,0]")
    assert bad != text
    path = tmp_path / "bad.cat"
    path.write_text(bad)
    code, out, _ = _run(["validate-category", "--category", str(path)])
    assert code == 2 and "FAIL" in out


def test_io_and_domain_errors():
    code, _, err = _run(["invariant", "--triangulation", "nonexistent",
                         "--category", "vect_Z2_theta0"])
    assert code == 4
    code, _, err = _run(["invariant", "--triangulation", "s3_2tet",
                         "--category", "vect_Z2_theta0", "--orbit", "7"])
    assert code == 3


def test_labelings_partition_pachner_hqft(tmp_path):
    code, out, _ = _run(["labelings", "--skeleton", "s1xs2_paper", "--group", "Z2"])
    assert code == 0 and "count orbits: 2" in out
    code, out, _ = _run(["partition", "--triangulation", "rp3",
                         "--category", "vect_Z2_theta1"])
    assert code == 0 and "aggregate:" in out
    out_path = tmp_path / "moved.tri"
    code, out, _ = _run(["pachner", "--triangulation", "s3_2tet", "--move", "2-3",
                         "--location", "0,0", "--out", str(out_path)])
    assert code == 0 and out_path.exists()
    code, out, _ = _run(["hqft-rank", "--surface", "torus_2loop",
                         "--category", "vect_Z2_theta1"])
    assert code == 0 and "rank: 1" in out


def test_eval_graph_command(tmp_path):
    from statesum3d.graphcalc import ColoredGraph, save_graph
    g = ColoredGraph(2, [(0, 1, 1), (0, 1, 1), (0, 1, 1)],
                     [[(0, 0), (1, 0), (2, 0)], [(2, 1), (1, 1), (0, 1)]])
    path = tmp_path / "theta.graph"
    path.write_text(save_graph(g))
    code, out, _ = _run(["eval-graph", "--graph", str(path),
                         "--category", "fibonacci"])
    assert code == 0 and "entries" in out


def test_cobordism_map_command(tmp_path):
    from statesum3d.catdata import FiniteGroup
    from statesum3d.hqft import build_product_cylinder, builtin_surface, save_cobordism
    cob = build_product_cylinder(builtin_surface("sphere_circle", FiniteGroup.cyclic(2)))
    path = tmp_path / "cyl.cob"
    path.write_text(save_cobordism(cob))
    code, out, _ = _run(["cobordism-map", "--cobordism", str(path),
                         "--category", "vect_Z2_theta1"])
    assert code == 0 and "matrix" in out


def test_json_flag_and_reproducibility():
    argv = ["--json", "partition", "--triangulation", "l31",
            "--category", "vect_Z3_theta1"]
    code1, out1, _ = _run(argv)
    code2, out2, _ = _run(argv)
    assert code1 == code2 == 0
    d1, d2 = json.loads(out1), json.loads(out2)
    d1.pop("wall_seconds")
    d2.pop("wall_seconds")
    assert d1 == d2


GOLDEN_COMMANDS = {
    "invariant_s3_z2t1.txt": ["invariant", "--triangulation", "s3_2tet",
                              "--category", "vect_Z2_theta1", "--all-orbits"],
    "dw_s3_z2t1.txt": ["dw", "--triangulation", "s3_2tet", "--group", "Z2",
                       "--theta", "1"],
    "partition_rp3_z2t1.txt": ["partition", "--triangulation", "rp3",
                               "--category", "vect_Z2_theta1"],
    "labelings_s1xs2paper_z2.txt": ["labelings", "--skeleton", "s1xs2_paper",
                                    "--group", "Z2"],
    "hqft_rank_torus_fib.txt": ["hqft-rank", "--surface", "torus_2loop",
                                "--category", "fibonacci"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_COMMANDS))
def test_golden_files_regenerate(name):
    code, out, _ = _run(GOLDEN_COMMANDS[name])
    assert code == 0
    expected = (GOLDEN / name).read_text()
    assert _strip_timing(out) == _strip_timing(expected)
