import csv
import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings

from eulerwalk.cli import run
from eulerwalk.config import Tolerances
from eulerwalk.io import dump_walk, load_walk, walk_from_dict, walk_to_dict
from eulerwalk.scattering import Engine
from eulerwalk.surgery import add_handle_graph, HandleSpec
from eulerwalk.walks import hadamard_vertex, line, trapped_cycle

from strategies import walks

DATA = Path(__file__).resolve().parent.parent / "data"


def rows(path):
    with open(path, encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


@settings(max_examples=25, deadline=None)
@given(walks())
def test_document_roundtrip(walk):
    back = walk_from_dict(json.loads(json.dumps(walk_to_dict(walk))))
    assert back.graph == walk.graph
    for v, lu in walk.locals.items():
        np.testing.assert_array_equal(back.locals[v].matrix, lu.matrix)


def test_bare_real_entries_accepted():
    doc = walk_to_dict(line())
    for d in doc["locals"]:
        d["matrix"] = [[1]]
    assert walk_from_dict(doc).K == 1


def test_tolerance_override():
    t = Tolerances().override(["eps_num=1e-6", "sing=1e-12"])
    assert t.num == 1e-6 and t.sing == 1e-12
    with pytest.raises(ValueError):
        Tolerances().override(["num=-1"])
    with pytest.raises(KeyError):
        Tolerances().override(["bogus=1"])


def test_validate_pass_through(capsys):
    assert run(["validate", str(DATA / "pass_through.json")]) == 0
    assert "K=1" in capsys.readouterr().out


def test_validate_exit_codes(tmp_path):
    doc = walk_to_dict(line())
    doc["edges"] = []  # unbalanced
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run(["validate", str(bad)]) == 1
    doc = walk_to_dict(line())
    doc["locals"][0]["matrix"] = [[0.5]]
    bad.write_text(json.dumps(doc))
    assert run(["validate", str(bad)]) == 1
    assert run(["validate", str(tmp_path / "missing.json")]) == 64
    assert run(["scatter", str(DATA / "line.json"), "--angles", "0"]) == 64
    assert run(["--tolerance", "num=zero", "validate", str(DATA / "line.json")]) == 64
    with pytest.raises(SystemExit) as info:
        run(["no-such-command"])
    assert info.value.code == 64


def test_numeric_failure_exit_code(capsys):
    # sigma_min of I - zA never exceeds 1, so this threshold fails every grid point
    assert run(["--tolerance", "sing=10", "scatter", str(DATA / "pass_through.json")]) == 0
    capsys.readouterr()
    assert run(["--tolerance", "sing=10", "scatter", str(DATA / "line.json")]) == 2
    assert "numeric failure" in capsys.readouterr().err


def test_scatter_hadamard_eight_angles(tmp_path):
    out = tmp_path / "s.csv"
    assert run(["scatter", str(DATA / "hadamard.json"), "--angles", "8", "-o", str(out)]) == 0
    r = rows(out)
    assert len(r) == 8 * 4
    for k in range(2):
        for j in range(2):
            sel = [x for x in r if int(x["k"]) == k and int(x["j"]) == j]
            assert len(sel) == 8
            assert all(abs(float(x["abs2"]) - 0.5) < 1e-15 for x in sel)


def test_csv_is_byte_identical(tmp_path):
    for cmd in (["scatter"], ["coeffs", "--n-max", "12"], ["arrivals", "--n-max", "12"], ["simulate"]):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run([cmd[0], str(DATA / "trapped_cycle.json"), *cmd[1:], "-o", str(a)]) == 0
        assert run([cmd[0], str(DATA / "trapped_cycle.json"), *cmd[1:], "-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


def test_full_precision_floats(tmp_path):
    out = tmp_path / "c.csv"
    run(["coeffs", str(DATA / "hadamard.json"), "--n-max", "1", "-o", str(out)])
    re = rows(out)[0]["re"]
    assert re == "7.0710678118654746e-01"


def test_arrivals_by_tail_id(tmp_path):
    out = tmp_path / "q.csv"
    assert run(["arrivals", str(DATA / "hadamard.json"), "--k", "x2", "--j", "y1", "--n-max", "3", "-o", str(out)]) == 0
    assert [float(x["q"]) for x in rows(out)] == pytest.approx([0.5, 0, 0])
    assert run(["arrivals", str(DATA / "hadamard.json"), "--k", "x9"]) == 64


def test_exit_prob(capsys):
    assert run(["exit-prob", str(DATA / "hadamard.json"), "--k", "0", "--j", "1"]) == 0
    assert float(capsys.readouterr().out.split()[0]) == pytest.approx(0.5, abs=1e-15)
    assert run(["exit-prob", str(DATA / "line.json"), "--method", "quadrature", "--samples", "32"]) == 0
    assert float(capsys.readouterr().out.split()[0]) == pytest.approx(1.0)


def test_bound_states(capsys):
    assert run(["bound-states", str(DATA / "trapped_cycle.json")]) == 0
    assert "dim H0 = 2" in capsys.readouterr().out


def test_compare(capsys):
    assert run(["compare", str(DATA / "pass_through.json"), "--compare", str(DATA / "pass_through.json")]) == 0
    assert capsys.readouterr().out.strip() == "indistinguishable"
    assert run(["compare", str(DATA / "pass_through.json"), "--compare", str(DATA / "pass_through_flipped.json")]) == 0
    assert capsys.readouterr().out.startswith("distinguished max|tau2|=1")
    assert run(["compare", str(DATA / "hadamard.json"), "--compare", str(DATA / "line.json")]) == 1


def test_reverse_document(tmp_path):
    out = tmp_path / "r.json"
    assert run(["reverse", str(DATA / "line.json"), "-o", str(out)]) == 0
    r = load_walk(out)
    assert r.graph.edge("e").src == "v2"


def test_surgery_outputs_pass_selfcheck(tmp_path, capsys):
    hj = tmp_path / "looped.json"
    amps = tmp_path / "looped.csv"
    assert run(["add-handle", str(DATA / "hadamard.json"), "--add-handle", "y1,x1",
                "-o", str(hj), "--amplitudes", str(amps)]) == 0
    assert run(["selfcheck", str(hj), "--against", str(amps)]) == 0
    out = capsys.readouterr().out
    assert "[FAIL]" not in out and "[PASS] amplitudes" in out

    cj, camps = tmp_path / "cut.json", tmp_path / "cut.csv"
    assert run(["cut-edge", str(hj), "--cut-edge", "y1~x1", "--in-id", "a", "--out-id", "b",
                "-o", str(cj), "--amplitudes", str(camps)]) == 0
    assert [t.id for t in load_walk(cj).graph.tails_in] == ["a", "x2"]
    assert run(["selfcheck", str(cj), "--against", str(camps)]) == 0

    sj, samps = tmp_path / "spliced.json", tmp_path / "spliced.csv"
    assert run(["splice", str(DATA / "line.json"), "--splice", f"{DATA / 'hadamard.json'}:y,x2",
                "-o", str(sj), "--amplitudes", str(samps)]) == 0
    assert run(["selfcheck", str(sj), "--against", str(samps)]) == 0
    assert run(["cut-edge", str(hj), "--cut-edge", "x1"]) == 64
    assert run(["add-handle", str(hj), "--add-handle", "y1"]) == 64


def test_selfcheck_detects_mismatch(tmp_path, capsys):
    amps = tmp_path / "wrong.csv"
    run(["scatter", str(DATA / "line.json"), "--angles", "4", "-o", str(amps)])
    assert run(["selfcheck", str(DATA / "hadamard.json"), "--against", str(amps)]) == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_simulate_csv(tmp_path):
    out = tmp_path / "sim.csv"
    assert run(["simulate", str(DATA / "line.json"), "--steps", "3", "-o", str(out)]) == 0
    assert [(x["step"], x["edge"], x["re"]) for x in rows(out)] == [
        ("0", "x@0", "1.0000000000000000e+00"),
        ("1", "e", "1.0000000000000000e+00"),
        ("2", "y@0", "1.0000000000000000e+00"),
        ("3", "y@1", "1.0000000000000000e+00"),
    ]
    assert run(["simulate", str(DATA / "line.json"), "--steps", "3", "--depth", "1"]) == 1


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("EULERWALK_OUTPUT_DIR", str(tmp_path / "outdir"))
    assert run(["scatter", str(DATA / "line.json"), "--angles", "2", "-o", "s.csv"]) == 0
    assert (tmp_path / "outdir" / "s.csv").exists()


def test_data_documents_match_builders(tmp_path):
    for name, w in (("line", line()), ("hadamard", hadamard_vertex()), ("trapped_cycle", trapped_cycle())):
        p = tmp_path / f"{name}.json"
        dump_walk(w, p)
        assert p.read_text() == (DATA / f"{name}.json").read_text()


def test_handle_document_scatters_like_engine(tmp_path):
    p = tmp_path / "h.json"
    w = add_handle_graph(hadamard_vertex(), HandleSpec(0, 0))
    dump_walk(w, p)
    out = tmp_path / "s.csv"
    run(["scatter", str(p), "--angles", "16", "-o", str(out)])
    eng = Engine(w)
    for x in rows(out):
        t = complex(float(x["re"]), float(x["im"]))
        assert abs(t - eng.S(np.exp(1j * float(x["theta"])))[0, 0]) < 1e-15
