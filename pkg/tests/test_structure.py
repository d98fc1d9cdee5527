import numpy as np
import pytest
from hypothesis import given, settings

from eulerwalk.errors import NotAnAutomorphism, NotUnitary, SlotMismatch
from eulerwalk.graph import EulerianGraphWithTails, MorphismWitness, Tail, tail_permutations
from eulerwalk.scattering import Engine
from eulerwalk.structure import (
    LocalUnitary, assemble_boundary_block, attach_structure, check_quantum_automorphism,
    reverse_structure,
)
from eulerwalk.surgery import build_interferometer
from eulerwalk.walks import hadamard_vertex, line, pass_through

from strategies import sample_points, walks

EPS = 1e-9
H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
BEAM_SPLITTER = np.array([[1, 1j], [1j, 1]]) / np.sqrt(2)


def test_attach_pass_through_and_hadamard():
    assert pass_through().locals["v"].matrix[0, 0] == 1
    np.testing.assert_allclose(hadamard_vertex().locals["v"].matrix, H)


def test_attach_rejects_non_unitary():
    g = EulerianGraphWithTails(["v"], [], [Tail("x1", "v"), Tail("x2", "v")], [Tail("y1", "v"), Tail("y2", "v")])
    with pytest.raises(NotUnitary) as info:
        attach_structure(g, [LocalUnitary("v", ["x1", "x2"], ["y1", "y2"], [[1, 0], [1, 0]])])
    assert info.value.vertex == "v"


def test_attach_rejects_bad_slots():
    g = EulerianGraphWithTails(["v"], [], [Tail("x", "v")], [Tail("y", "v")])
    with pytest.raises(SlotMismatch):
        attach_structure(g, [LocalUnitary("v", ["y"], ["x"], [[1]])])
    with pytest.raises(SlotMismatch):
        attach_structure(g, [])


def test_block_pass_through():
    b = assemble_boundary_block(pass_through())
    assert b.m == 0
    np.testing.assert_array_equal(b.D, [[1]])


def test_block_line_graph():
    b = assemble_boundary_block(line())
    for blk in (b.B, b.C):
        np.testing.assert_array_equal(blk, [[1]])
    for blk in (b.A, b.D):
        np.testing.assert_array_equal(blk, [[0]])


def test_block_hadamard():
    b = assemble_boundary_block(hadamard_vertex())
    assert b.m == 0
    np.testing.assert_allclose(b.D, H)


def test_reverse_examples():
    r = reverse_structure(pass_through())
    assert r.graph.tails_in[0].id == "y" and r.locals["v"].matrix[0, 0] == 1
    np.testing.assert_allclose(reverse_structure(hadamard_vertex()).locals["v"].matrix, H)


@settings(max_examples=40, deadline=None)
@given(walks())
def test_block_unitary_and_contractive(walk):
    b = assemble_boundary_block(walk)
    W = b.full
    assert np.max(np.abs(W.conj().T @ W - np.eye(W.shape[0]))) < EPS
    if b.m:
        assert np.linalg.svd(b.A, compute_uv=False).max() <= 1 + EPS


@settings(max_examples=40, deadline=None)
@given(walks())
def test_reverse_block_is_transpose(walk):
    b = assemble_boundary_block(walk)
    r = assemble_boundary_block(reverse_structure(walk))
    assert r.interior == b.interior
    assert r.tails_in == b.tails_out and r.tails_out == b.tails_in
    np.testing.assert_array_equal(r.full, b.full.T)


@settings(max_examples=30, deadline=None)
@given(walks())
def test_reverse_twice_is_identity(walk):
    rr = reverse_structure(reverse_structure(walk))
    assert rr.graph == walk.graph
    for v, lu in walk.locals.items():
        assert rr.locals[v].in_order == lu.in_order
        np.testing.assert_array_equal(rr.locals[v].matrix, lu.matrix)


def _branch_swap(walk):
    """Witness exchanging the two interferometer arms and both tail pairs."""
    vmap = {"A": "A", "B": "B"}
    emap = {"A-1": "A-2", "A-2": "A-1", "1-B": "2-B", "2-B": "1-B",
            "X1A": "X2A", "X2A": "X1A", "Y1B": "Y2B", "Y2B": "Y1B"}
    for v in walk.graph.vertices:
        if v.startswith("g1."):
            vmap[v] = "g2." + v[3:]
            vmap["g2." + v[3:]] = v
    for e in walk.graph.edges:
        if e.id.startswith("g1."):
            emap[e.id] = "g2." + e.id[3:]
            emap["g2." + e.id[3:]] = e.id
    return MorphismWitness(vmap, emap)


def test_identity_witness_is_quantum_automorphism():
    w = build_interferometer(pass_through(), pass_through())
    ident = MorphismWitness({v: v for v in w.graph.vertices},
                            {i: i for i in w.graph.edge_ids + ["X1A", "X2A", "Y1B", "Y2B"]})
    assert check_quantum_automorphism(w, ident)


def test_branch_swap_with_symmetric_splitters():
    same = build_interferometer(line(), line(), splitter=BEAM_SPLITTER)
    assert check_quantum_automorphism(same, _branch_swap(same))
    differ = build_interferometer(pass_through(), pass_through(-1), splitter=BEAM_SPLITTER)
    assert not check_quantum_automorphism(differ, _branch_swap(differ))


def test_branch_swap_is_not_quantum_for_hadamard_splitters():
    # the -1 entry of the splitter breaks the exchange symmetry
    w = build_interferometer(line(), line())
    assert not check_quantum_automorphism(w, _branch_swap(w))


def test_non_automorphism_witness_raises():
    w = line()
    bad = MorphismWitness({"v1": "v2", "v2": "v1"}, {"e": "e", "x": "x", "y": "y"})
    with pytest.raises(NotAnAutomorphism):
        check_quantum_automorphism(w, bad)


@settings(max_examples=20, deadline=None)
@given(walks(max_tails=1, max_edges=6))
def test_automorphism_permutes_scattering_matrix(arm):
    w = build_interferometer(arm, arm, splitter=BEAM_SPLITTER)
    wit = _branch_swap(w)
    assert check_quantum_automorphism(w, wit)
    pi_in, pi_out = tail_permutations(w.graph, wit)
    eng = Engine(w)
    for z in sample_points(12):
        S = eng.S(z)
        for j in range(2):
            for k in range(2):
                assert abs(S[pi_out[j], pi_in[k]] - S[j, k]) < 1e-9
