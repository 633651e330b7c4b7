import json
import os

import numpy as np

from subrep.cli import main
from subrep.examples import (
    all_free_representation,
    twisted_pair_representation,
)
from subrep.ffmat import Matrix, PrimeField
from subrep.lambdamod import LambdaAlgebra, LambdaModule
from subrep.posetrep import direct_sum
from subrep.repfile import (
    serialize_representation,
    serialize_subspace_config,
)
from subrep.birkhoff import SubspaceConfig, subspace_data

F2 = PrimeField(2)
L2 = LambdaAlgebra(F2, 2)
CATALOG_P2 = os.path.join(os.path.dirname(__file__), "..", "fixtures", "catalog_p2")


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_validate_ok(tmp_path, capsys):
    path = write(tmp_path, "m.rep", serialize_representation(all_free_representation(L2)))
    assert main(["validate", path]) == 0
    assert capsys.readouterr().out.strip() == "ok"


def test_validate_non_commuting(tmp_path, capsys):
    n = twisted_pair_representation(L2)
    bad = serialize_representation(n).replace(
        "arrow 1->3\n0\n1\n1\n", "arrow 1->3\n0\n0\n0\n"
    )
    path = write(tmp_path, "bad.rep", bad)
    assert main(["validate", path]) == 2  # caught at parse time with line info
    err = capsys.readouterr().err
    assert "1->3" in err or "commute" in err or "validate" in err


def test_validate_malformed(tmp_path, capsys):
    path = write(tmp_path, "bad.rep", "field 2\nnilpotency 2\npoints 1\ncovers\nvertex 1 dim 1\nt\n0 0\n")
    assert main(["validate", path]) == 2
    assert "line" in capsys.readouterr().err


def test_approx_right_on_subspace_member(tmp_path, capsys):
    m = all_free_representation(L2)
    path = write(tmp_path, "m.rep", serialize_representation(m))
    out = tmp_path / "out"
    assert main(["approx", path, "--kind", "right", "--out", str(out)]) == 0
    produced = (out / "approx_right.rep").read_text()
    assert produced == serialize_representation(m)  # identity on members
    payload = json.loads((out / "approx_right_map.json").read_text())
    assert payload["kind"] == "right"


def test_approx_mimo_dims(tmp_path, capsys):
    # a representation with a kernel at vertex 3 gets augmented at 2 and *
    from subrep.posetrep import Representation
    from subrep.examples import example_quiver

    zero = LambdaModule.zero(L2)
    simple = LambdaModule.simple(L2)
    rep = Representation(
        example_quiver(),
        L2,
        {"1": zero, "2": zero, "3": simple, "*": zero},
        {
            ("1", "2"): Matrix.zeros(F2, 0, 0),
            ("1", "3"): Matrix.zeros(F2, 1, 0),
            ("2", "*"): Matrix.zeros(F2, 0, 0),
            ("3", "*"): Matrix.zeros(F2, 0, 1),
        },
    )
    path = write(tmp_path, "x.rep", serialize_representation(rep))
    out = tmp_path / "out"
    assert main(["approx", path, "--kind", "mimo", "--vertex", "3", "--out", str(out)]) == 0
    table = capsys.readouterr().out
    # kernel is the simple, envelope is 2-dimensional: dims (0, 2, 1, 2)
    assert "0\t2\t1\t2" in table


def test_approx_left_inclusions(tmp_path, capsys):
    n = twisted_pair_representation(L2)
    path = write(tmp_path, "n.rep", serialize_representation(n))
    out = tmp_path / "out"
    assert main(["approx", path, "--kind", "left", "--out", str(out)]) == 0
    assert "subspace_rep\tTrue" in capsys.readouterr().out


def test_decompose_both_methods_agree(tmp_path, capsys):
    m = all_free_representation(L2)
    n = twisted_pair_representation(L2)
    both = direct_sum([m, n]).rep
    path = write(tmp_path, "both.rep", serialize_representation(both))
    out1 = tmp_path / "idem"
    assert main(["decompose", path, "--method", "idempotent", "--out", str(out1)]) == 0
    table1 = capsys.readouterr().out
    assert "(1,3,3,4)\t1" in table1 and "(2,2,2,2)\t1" in table1
    assert (out1 / "summand_000.rep").exists() and (out1 / "summand_001.rep").exists()
    cert = json.loads((out1 / "certificate.json").read_text())
    assert cert["seed"] == 0 and cert["method"] == "idempotent"
    assert sorted(map(tuple, cert["summand_dims"])) == [(1, 3, 3, 4), (2, 2, 2, 2)]
    assert main(
        ["decompose", path, "--method", "chase", "--catalog", CATALOG_P2]
    ) == 0
    table2 = capsys.readouterr().out
    assert table1.strip().splitlines()[-2:] == table2.strip().splitlines()[-2:]


def test_decompose_empty(tmp_path, capsys):
    from subrep.posetrep import Representation
    from subrep.examples import example_quiver

    path = write(
        tmp_path,
        "zero.rep",
        serialize_representation(Representation.zero(example_quiver(), L2)),
    )
    assert main(["decompose", path]) == 0
    out = capsys.readouterr().out
    assert out.strip() == "dim_vector\tmultiplicity"


def test_decompose_seeds_agree(tmp_path, capsys):
    n = twisted_pair_representation(L2)
    both = direct_sum([n, n]).rep
    path = write(tmp_path, "x.rep", serialize_representation(both))
    tables = []
    for seed in ("1", "2"):
        assert main(["decompose", path, "--seed", seed]) == 0
        tables.append(capsys.readouterr().out)
    assert tables[0] == tables[1]


def test_arquiver(tmp_path, capsys):
    dot_path = tmp_path / "quiver.dot"
    assert main(["arquiver", "--catalog", CATALOG_P2, "--dot", str(dot_path)]) == 0
    dot = dot_path.read_text()
    assert dot.startswith("digraph")
    assert sum(1 for l in dot.splitlines() if "label=" in l and "->" not in l) == 25


def test_birkhoff_named(tmp_path, capsys):
    m = all_free_representation(L2)
    cfg = subspace_data(m)
    path = write(tmp_path, "m.sub", serialize_subspace_config(cfg))
    assert main(["birkhoff", path, "--catalog", CATALOG_P2]) == 0
    out = capsys.readouterr().out
    assert "(2,2,2,2)\t1" in out
    assert "compatible\tTrue" in out


def test_birkhoff_invalid_invariance(tmp_path, capsys):
    free = LambdaModule.free(L2)
    cfg = SubspaceConfig(
        free,
        Matrix.zeros(F2, 2, 0),
        Matrix(F2, [[1], [0]]),  # not invariant
        Matrix.identity(F2, 2),
    )
    path = write(tmp_path, "bad.sub", serialize_subspace_config(cfg))
    assert main(["birkhoff", path, "--catalog", CATALOG_P2]) == 1
    assert "v2" in capsys.readouterr().err


def test_check_harada_sai(capsys):
    assert main(
        ["check", "harada-sai", "--samples", "50", "--catalog", CATALOG_P2]
    ) == 0
    out = capsys.readouterr().out
    assert "ok" in out and "bound" in out


def test_check_hom_span(capsys):
    assert main(
        ["check", "hom-span", "--samples", "3", "--catalog", CATALOG_P2, "--seed", "7"]
    ) == 0
    assert "failures\t0" in capsys.readouterr().out


def test_check_evaluation(capsys):
    assert main(
        ["check", "evaluation", "--samples", "2", "--catalog", CATALOG_P2, "--seed", "8"]
    ) == 0
    assert "failures\t0" in capsys.readouterr().out


def test_catalog_command_small_budget_fails(tmp_path, capsys):
    assert main(
        ["catalog", "--poset", "example", "--field", "2", "--budget", "1"]
    ) == 3
    assert "budget" in capsys.readouterr().err.lower()


def test_catalog_command_poset_file(tmp_path, capsys):
    # one-point poset: five indecomposables over k[T]/T^2
    path = write(tmp_path, "poset.txt", "points 1\ncovers\n")
    out = tmp_path / "cat"
    assert main(
        ["catalog", "--poset", path, "--field", "2", "--out", str(out), "--verify",
         "--mesh-tests", "5"]
    ) == 0
    table = capsys.readouterr().out
    assert "objects\t5" in table
    assert "FAIL" not in table
