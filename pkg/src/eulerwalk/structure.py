"""Quantum structures: per-vertex local unitaries and the boundary block.

Local matrices use the convention ``matrix[row=out slot, col=in slot]``. The
global step is never built over the tails; the only stored operator is the
finite block

    [[A, B],      columns: interior edges, then incoming-tail attach edges
     [C, D]]      rows:    interior edges, then outgoing-tail attach edges

so that a walker on incoming attach edge k is moved to ``B[:, k]`` inside
the graph and ``D[:, k]`` on the outgoing attach edges in one step.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import NotAnAutomorphism, NotUnitary, SlotMismatch
from .graph import MorphismKind, check_morphism, reverse_graph


def unitarity_defect_of(m):
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[1]))))


@dataclass(frozen=True)
class LocalUnitary:
    vertex: str
    in_order: tuple
    out_order: tuple
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "in_order", tuple(self.in_order))
        object.__setattr__(self, "out_order", tuple(self.out_order))
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2:
            m = m.reshape(len(self.out_order), len(self.in_order))
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return len(self.in_order)

    def entry(self, out_slot, in_slot):
        return self.matrix[self.out_order.index(out_slot), self.in_order.index(in_slot)]

    def relabel(self, in_map, out_map=None, vertex=None):
        """Copy with slot ids substituted (ids missing from a map are kept)."""
        out_map = in_map if out_map is None else out_map
        return LocalUnitary(
            self.vertex if vertex is None else vertex,
            [in_map.get(s, s) for s in self.in_order],
            [out_map.get(s, s) for s in self.out_order],
            self.matrix,
        )


@dataclass(frozen=True)
class QuantumWalk:
    graph: object
    locals: dict

    @property
    def K(self):
        return self.graph.K

    def local(self, v):
        return self.locals[v]


def attach_structure(g, locals_, tol=DEFAULT):
    """Validate local unitaries against ``g`` and bundle them into a walk."""
    if not isinstance(locals_, dict):
        locals_ = {lu.vertex: lu for lu in locals_}
    missing = set(g.vertices) - set(locals_)
    extra = set(locals_) - set(g.vertices)
    if missing or extra:
        raise SlotMismatch(f"local unitaries missing for {sorted(missing)}, unknown vertices {sorted(extra)}")
    for v in g.vertices:
        lu = locals_[v]
        want_in, want_out = sorted(g.in_slots(v)), sorted(g.out_slots(v))
        if sorted(lu.in_order) != want_in:
            raise SlotMismatch(f"vertex {v!r}: in_order {list(lu.in_order)} != incident {want_in}")
        if sorted(lu.out_order) != want_out:
            raise SlotMismatch(f"vertex {v!r}: out_order {list(lu.out_order)} != incident {want_out}")
        if lu.matrix.shape != (len(lu.out_order), len(lu.in_order)):
            raise SlotMismatch(f"vertex {v!r}: matrix shape {lu.matrix.shape} does not match slots")
        defect = unitarity_defect_of(lu.matrix)
        if defect > tol.unitary:
            raise NotUnitary(v, defect)
    return QuantumWalk(g, {v: locals_[v] for v in g.vertices})


@dataclass(frozen=True)
class BoundaryBlock:
    interior: tuple
    tails_in: tuple
    tails_out: tuple
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    @property
    def m(self):
        return len(self.interior)

    @property
    def K(self):
        return len(self.tails_in)

    @property
    def full(self):
        return np.block([[self.A, self.B], [self.C, self.D]])


def assemble_boundary_block(walk):
    g = walk.graph
    m, K = len(g.edges), g.K
    row = {eid: i for i, eid in enumerate(g.edge_ids)}
    col = dict(row)
    row.update({t.id: m + j for j, t in enumerate(g.tails_out)})
    col.update({t.id: m + k for k, t in enumerate(g.tails_in)})
    W = np.zeros((m + K, m + K), dtype=complex)
    for lu in walk.locals.values():
        rows = [row[s] for s in lu.out_order]
        cols = [col[s] for s in lu.in_order]
        W[np.ix_(rows, cols)] = lu.matrix
    return BoundaryBlock(
        interior=tuple(g.edge_ids),
        tails_in=tuple(t.id for t in g.tails_in),
        tails_out=tuple(t.id for t in g.tails_out),
        A=W[:m, :m], B=W[:m, m:], C=W[m:, :m], D=W[m:, m:],
    )


def reverse_structure(walk):
    """Walk on the reverse graph with ``(U_R)_v = R^-1 U_v^-1 R``.

    ``R`` is conjugate-linear, so in the reversed edge basis the local matrix
    is the plain transpose of the original one.
    """
    locals_ = {
        v: LocalUnitary(v, lu.out_order, lu.in_order, lu.matrix.T)
        for v, lu in walk.locals.items()
    }
    return QuantumWalk(reverse_graph(walk.graph), locals_)


def check_quantum_automorphism(walk, witness, tol=DEFAULT):
    g = walk.graph
    if check_morphism(g, g, witness) is not MorphismKind.ISOMORPHISM:
        raise NotAnAutomorphism("witness is not a graph automorphism")
    f, F = witness.vertex_map, witness.edge_map
    for v, lu in walk.locals.items():
        image = walk.locals[f[v]]
        rows = [image.out_order.index(F[s]) for s in lu.out_order]
        cols = [image.in_order.index(F[s]) for s in lu.in_order]
        if np.max(np.abs(image.matrix[np.ix_(rows, cols)] - lu.matrix), initial=0.0) > tol.unitary:
            return False
    return True
