"""Graph surgery: handles, cuts, splices and the comparison interferometer.

Every operation comes in two flavours. The graph-level one builds the
modified walk, whose amplitudes the engine can compute directly. The
amplitude-level one composes the amplitudes of the original pieces. Tests
check that the two agree.

Tail positions are 0-based. A handle joins outgoing tail ``out_tail`` to
incoming tail ``in_tail`` with a new interior edge from the outgoing tail's
vertex to the incoming tail's vertex. Cutting an edge inserts the two new
tails at position 0 of both tail lists.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import (
    BadTailIndex, CutResonance, HandleResonance, MultiHandleResonance,
    NotAnInteriorEdge, NotTwoTailGraphs,
)
from .graph import Edge, EulerianGraphWithTails, Tail
from .scattering import Engine, TransmissionSeries, sample_circle
from .structure import BoundaryBlock, LocalUnitary, attach_structure, assemble_boundary_block, reverse_structure

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class HandleSpec:
    out_tail: int
    in_tail: int


class AmplitudeFunction:
    """K x K matrix-valued function of z with ``S(z)[j, k] = t_j^(k)(z)``."""

    def __init__(self, fn, K, provenance="direct", tails_in=None, tails_out=None):
        self._fn = fn
        self.K = K
        self.provenance = provenance
        self.tails_in = tuple(tails_in) if tails_in is not None else tuple(range(K))
        self.tails_out = tuple(tails_out) if tails_out is not None else tuple(range(K))

    @classmethod
    def from_walk(cls, walk, tol=DEFAULT):
        eng = Engine(walk, tol)
        return cls(eng.S, walk.K, "direct",
                   [t.id for t in walk.graph.tails_in], [t.id for t in walk.graph.tails_out])

    @classmethod
    def from_series(cls, series, tails_in=None, tails_out=None):
        return cls(series.evaluate, series.coefficients.shape[1], "direct", tails_in, tails_out)

    def __call__(self, z):
        if self.K == 0:
            return np.zeros((0, 0), dtype=complex)
        return np.asarray(self._fn(complex(z)), dtype=complex)

    def __repr__(self):
        return f"AmplitudeFunction(K={self.K}, provenance={self.provenance!r})"

    def series(self, n_max, radius=0.5, n_samples=None):
        """Taylor coefficients recovered by a DFT on the circle ``|z| = radius``.

        Roundoff in coefficient n grows like ``radius**-n``, so this is meant
        for modest ``n_max`` (about 30 at the default radius).
        """
        N = n_samples or max(256, 4 * (n_max + 1))
        _, vals = sample_circle(self, N, radius)
        c = np.fft.fft(vals, axis=0)[: n_max + 1] / N
        c /= (radius ** np.arange(n_max + 1))[:, None, None]
        c[0] = 0
        return TransmissionSeries(c)

    def isometry_defect(self, n_angles=256):
        if self.K == 0:
            return 0.0
        _, S = sample_circle(self, n_angles)
        eye = np.eye(self.K)
        return float(max(np.max(np.abs(s.conj().T @ s - eye)) for s in S))


def _check_tail_indices(K, spec):
    if not (0 <= spec.out_tail < K and 0 <= spec.in_tail < K):
        raise BadTailIndex(f"handle {spec} out of range for K={K}")


def _drop(seq, i):
    return [x for n, x in enumerate(seq) if n != i]


# -- add a handle -----------------------------------------------------------

def add_handle_graph(walk, spec, edge_id=None, tol=DEFAULT):
    g = walk.graph
    _check_tail_indices(g.K, spec)
    y, x = g.tails_out[spec.out_tail], g.tails_in[spec.in_tail]
    eid = edge_id or f"{y.id}~{x.id}"
    graph = EulerianGraphWithTails(
        vertices=g.vertices,
        edges=list(g.edges) + [Edge(eid, y.vertex, x.vertex)],
        tails_in=_drop(g.tails_in, spec.in_tail),
        tails_out=_drop(g.tails_out, spec.out_tail),
    )
    # x.id only occurs as an in-slot and y.id only as an out-slot, so a
    # self-loop (same vertex) is handled by the same substitution
    locals_ = {v: lu.relabel({x.id: eid}, {y.id: eid}) for v, lu in walk.locals.items()}
    return attach_structure(graph, locals_, tol)


def add_handle_amplitudes(S, spec, tol=DEFAULT):
    """tau_j^(k) = t_j^(k) + t_j^(q) t_p^(k) / (1 - t_p^(q)) for a handle Y_p -> X_q."""
    _check_tail_indices(S.K, spec)
    p, q = spec.out_tail, spec.in_tail
    rows = _drop(range(S.K), p)
    cols = _drop(range(S.K), q)

    def tau(z):
        s = S(z)
        denom = 1 - s[p, q]
        if abs(denom) < tol.sing:
            raise HandleResonance(z)
        return s[np.ix_(rows, cols)] + np.outer(s[rows, q], s[p, cols]) / denom

    return AmplitudeFunction(tau, S.K - 1, "composed",
                             _drop(S.tails_in, q), _drop(S.tails_out, p))


def add_handles_multi(S, pairs, tol=DEFAULT):
    """Add several handles at once by solving the L x L loop system at each z."""
    pairs = list(pairs)
    for spec in pairs:
        _check_tail_indices(S.K, spec)
    ps = [s.out_tail for s in pairs]
    qs = [s.in_tail for s in pairs]
    if len(set(ps)) != len(ps) or len(set(qs)) != len(qs):
        raise BadTailIndex("handle tail indices must be distinct")
    rows = [j for j in range(S.K) if j not in ps]
    cols = [k for k in range(S.K) if k not in qs]
    L = len(pairs)

    def tau(z):
        s = S(z)
        M = np.eye(L) - s[np.ix_(ps, qs)]
        if L and np.linalg.svd(M, compute_uv=False)[-1] < tol.sing:
            raise MultiHandleResonance(z)
        # a[l, k]: amplitude carried by handle l for a walker entering on k
        a = np.linalg.solve(M, s[np.ix_(ps, cols)]) if L else np.zeros((0, len(cols)))
        return s[np.ix_(rows, cols)] + s[np.ix_(rows, qs)] @ a

    return AmplitudeFunction(tau, S.K - L, "composed",
                             [S.tails_in[k] for k in cols], [S.tails_out[j] for j in rows])


# -- cut a handle -----------------------------------------------------------

def cut_edge_graph(walk, edge_id, in_id=None, out_id=None, tol=DEFAULT):
    g = walk.graph
    if not g.has_edge(edge_id):
        raise NotAnInteriorEdge(f"{edge_id!r} is not an interior edge")
    e = g.edge(edge_id)
    x_id = in_id or f"{edge_id}:in"
    y_id = out_id or f"{edge_id}:out"
    graph = EulerianGraphWithTails(
        vertices=g.vertices,
        edges=[f for f in g.edges if f.id != edge_id],
        tails_in=[Tail(x_id, e.dst)] + list(g.tails_in),
        tails_out=[Tail(y_id, e.src)] + list(g.tails_out),
    )
    locals_ = {v: lu.relabel({edge_id: x_id}, {edge_id: y_id}) for v, lu in walk.locals.items()}
    return attach_structure(graph, locals_, tol)


def _cut_column_engine(block, e, tol):
    """Engine for a walker entering along the removed edge ``e``.

    Built only from the original block: interior without ``e``, one incoming
    column (what ``e`` feeds), outgoing rows ``[e] + original outgoing tails``.
    """
    r = [i for i in range(block.m) if i != e]
    sub = BoundaryBlock(
        interior=tuple(block.interior[i] for i in r),
        tails_in=(block.interior[e],),
        tails_out=(block.interior[e],) + block.tails_out,
        A=block.A[np.ix_(r, r)],
        B=block.A[np.ix_(r, [e])],
        C=np.vstack([block.A[np.ix_([e], r)], block.C[:, r]]),
        D=np.vstack([block.A[np.ix_([e], [e])], block.C[:, [e]]]),
    )
    return Engine(sub, tol)


def cut_edge_amplitudes(walk, edge_id, tol=DEFAULT):
    """Amplitudes of ``cut_edge_graph(walk, edge_id)`` computed from the uncut walk.

    The column of the new incoming tail comes from the restricted resolvent
    of the original interior; the row of the new outgoing tail comes from the
    same computation on the reverse walk (its amplitudes are the transpose);
    the remaining entries invert the add-a-handle formula.
    """
    g = walk.graph
    if not g.has_edge(edge_id):
        raise NotAnInteriorEdge(f"{edge_id!r} is not an interior edge")
    block = assemble_boundary_block(walk)
    e = block.interior.index(edge_id)
    fwd = _cut_column_engine(block, e, tol)
    rev = _cut_column_engine(assemble_boundary_block(reverse_structure(walk)), e, tol)
    whole = Engine(block, tol)
    K = g.K

    def T(z):
        col = fwd.S(z)[:, 0]     # T[:, 0], new in-tail to [new out] + old outs
        row = rev.S(z)[:, 0]     # T[0, :], via reversal
        t = whole.S(z)
        denom = 1 - col[0]
        if abs(denom) < tol.sing:
            raise CutResonance(z)
        out = np.empty((K + 1, K + 1), dtype=complex)
        out[:, 0] = col
        out[0, 1:] = row[1:]
        out[1:, 1:] = t - np.outer(col[1:], row[1:]) / denom
        return out

    cut = cut_edge_graph(walk, edge_id, tol=tol)
    return AmplitudeFunction(T, K + 1, "composed",
                             [t.id for t in cut.graph.tails_in], [t.id for t in cut.graph.tails_out])


# -- splice -----------------------------------------------------------------

def prefixed(walk, prefix):
    """Copy of ``walk`` with every vertex, edge and tail id prefixed."""
    g = walk.graph
    ren = lambda s: f"{prefix}{s}"
    graph = EulerianGraphWithTails(
        vertices=[ren(v) for v in g.vertices],
        edges=[Edge(ren(e.id), ren(e.src), ren(e.dst)) for e in g.edges],
        tails_in=[Tail(ren(t.id), ren(t.vertex)) for t in g.tails_in],
        tails_out=[Tail(ren(t.id), ren(t.vertex)) for t in g.tails_out],
    )
    locals_ = {
        ren(v): LocalUnitary(ren(v), [ren(s) for s in lu.in_order], [ren(s) for s in lu.out_order], lu.matrix)
        for v, lu in walk.locals.items()
    }
    return attach_structure(graph, locals_)


def disjoint_union(walk1, walk2, tol=DEFAULT):
    g1, g2 = walk1.graph, walk2.graph
    graph = EulerianGraphWithTails(
        vertices=g1.vertices + g2.vertices,
        edges=g1.edges + g2.edges,
        tails_in=g1.tails_in + g2.tails_in,
        tails_out=g1.tails_out + g2.tails_out,
    )
    return attach_structure(graph, {**walk1.locals, **walk2.locals}, tol)


def splice_amplitudes(S1, S2, out_tail_of_1, in_tail_of_2):
    """Amplitudes after joining outgoing tail p of G1 to incoming tail q of G2.

    Tail order of the result: G1 tails then G2 tails, minus the two used.
    """
    p, q = out_tail_of_1, in_tail_of_2
    if not (0 <= p < S1.K and 0 <= q < S2.K):
        raise BadTailIndex(f"splice indices ({p}, {q}) out of range")
    K1, K2 = S1.K, S2.K
    r1 = _drop(range(K1), p)
    r2 = _drop(range(K2), q)

    def tau(z):
        s1, s2 = S1(z), S2(z)
        out = np.zeros((K1 + K2 - 1, K1 + K2 - 1), dtype=complex)
        out[: K1 - 1, :K1] = s1[r1, :]
        out[K1 - 1:, :K1] = np.outer(s2[:, q], s1[p, :])
        out[K1 - 1:, K1:] = s2[:, r2]
        return out

    return AmplitudeFunction(tau, K1 + K2 - 1, "composed",
                             list(S1.tails_in) + _drop(S2.tails_in, q),
                             _drop(S1.tails_out, p) + list(S2.tails_out))


def splice(walk1, walk2, out_tail_of_1, in_tail_of_2, prefixes=("g1.", "g2."), tol=DEFAULT):
    """Return ``(composed amplitudes, spliced walk)``."""
    if not (0 <= out_tail_of_1 < walk1.K and 0 <= in_tail_of_2 < walk2.K):
        raise BadTailIndex(f"splice indices ({out_tail_of_1}, {in_tail_of_2}) out of range")
    w1, w2 = prefixed(walk1, prefixes[0]), prefixed(walk2, prefixes[1])
    union = disjoint_union(w1, w2, tol)
    joined = add_handle_graph(union, HandleSpec(out_tail_of_1, walk1.K + in_tail_of_2), tol=tol)
    amps = splice_amplitudes(AmplitudeFunction.from_walk(w1, tol), AmplitudeFunction.from_walk(w2, tol),
                             out_tail_of_1, in_tail_of_2)
    return amps, joined


# -- interferometer ---------------------------------------------------------

def build_interferometer(walk1, walk2, prefixes=("g1.", "g2."), splitter=HADAMARD, tol=DEFAULT):
    """Place two single-tail-pair walks in parallel between splitters A and B.

    Tails of the result: incoming ``X1A, X2A`` at A, outgoing ``Y1B, Y2B`` at B.
    Both splitters carry ``splitter`` (default ``[[1, 1], [1, -1]] / sqrt(2)``;
    rows are the outgoing slots, columns the incoming ones).
    """
    if walk1.K != 1 or walk2.K != 1:
        raise NotTwoTailGraphs(f"need one incoming and one outgoing tail each, got K={walk1.K}, K={walk2.K}")
    w1, w2 = prefixed(walk1, prefixes[0]), prefixed(walk2, prefixes[1])
    edges, locals_ = [], {}
    for n, w in ((1, w1), (2, w2)):
        x, y = w.graph.tails_in[0], w.graph.tails_out[0]
        a_edge, b_edge = f"A-{n}", f"{n}-B"
        edges += list(w.graph.edges) + [Edge(a_edge, "A", x.vertex), Edge(b_edge, y.vertex, "B")]
        for v, lu in w.locals.items():
            locals_[v] = lu.relabel({x.id: a_edge}, {y.id: b_edge})
    graph = EulerianGraphWithTails(
        vertices=["A", "B"] + list(w1.graph.vertices) + list(w2.graph.vertices),
        edges=edges,
        tails_in=[Tail("X1A", "A"), Tail("X2A", "A")],
        tails_out=[Tail("Y1B", "B"), Tail("Y2B", "B")],
    )
    locals_["A"] = LocalUnitary("A", ["X1A", "X2A"], ["A-1", "A-2"], splitter)
    locals_["B"] = LocalUnitary("B", ["1-B", "2-B"], ["Y1B", "Y2B"], splitter)
    return attach_structure(graph, locals_, tol)


def interferometer_amplitudes(S1, S2):
    """Formula path: ``tau = (z^2 / 2) [[t1 + t2, t1 - t2], [t1 - t2, t1 + t2]]``."""
    if S1.K != 1 or S2.K != 1:
        raise NotTwoTailGraphs("interferometer arms must have K = 1")

    def tau(z):
        t1, t2 = S1(z)[0, 0], S2(z)[0, 0]
        return (z * z / 2) * np.array([[t1 + t2, t1 - t2], [t1 - t2, t1 + t2]])

    return AmplitudeFunction(tau, 2, "composed", ["X1A", "X2A"], ["Y1B", "Y2B"])


@dataclass(frozen=True)
class Verdict:
    distinguished: bool
    max_dark: float
    argmax_theta: float

    def __str__(self):
        if not self.distinguished:
            return "indistinguishable"
        return f"distinguished max|tau2|={self.max_dark:.17g} theta={self.argmax_theta:.17g}"


def compare_graphs(walk1, walk2, n_angles=256, tol=DEFAULT):
    """Run the interferometer and look for amplitude on the dark port Y2B."""
    eng = Engine(build_interferometer(walk1, walk2, tol=tol), tol)
    theta, S = sample_circle(eng, n_angles)
    dark = np.abs(S[:, 1, 0])
    i = int(np.argmax(dark))
    return Verdict(bool(dark[i] > tol.compare), float(dark[i]), float(theta[i]))
