"""Eulerian directed graphs with semi-infinite tails.

A graph stores its interior edges explicitly. Tails are stored as ordered
lists of ``Tail(id, vertex)`` entries; the attaching edge of a tail is
implied by the entry and is addressed by the tail id. Loops and multi-edges
are allowed, and several tails may share an attachment vertex.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum

from .errors import DanglingEndpoint, DuplicateId, NotEulerian, TailCountMismatch, ValidationError


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class Tail:
    id: str
    vertex: str


@dataclass(frozen=True)
class EulerianGraphWithTails:
    vertices: tuple
    edges: tuple
    tails_in: tuple
    tails_out: tuple
    _edge_index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "tails_in", tuple(self.tails_in))
        object.__setattr__(self, "tails_out", tuple(self.tails_out))
        _validate(self)
        object.__setattr__(self, "_edge_index", {e.id: e for e in self.edges})

    @property
    def K(self):
        return len(self.tails_in)

    @property
    def edge_ids(self):
        return [e.id for e in self.edges]

    def edge(self, edge_id):
        return self._edge_index[edge_id]

    def has_edge(self, edge_id):
        return edge_id in self._edge_index

    def in_slots(self, v):
        """Slot ids entering ``v``: interior edges first, then incoming tails."""
        return [e.id for e in self.edges if e.dst == v] + [t.id for t in self.tails_in if t.vertex == v]

    def out_slots(self, v):
        return [e.id for e in self.edges if e.src == v] + [t.id for t in self.tails_out if t.vertex == v]

    def tail_in_index(self, tail_id):
        for k, t in enumerate(self.tails_in):
            if t.id == tail_id:
                return k
        raise KeyError(tail_id)

    def tail_out_index(self, tail_id):
        for j, t in enumerate(self.tails_out):
            if t.id == tail_id:
                return j
        raise KeyError(tail_id)

    def to_dict(self):
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "from": e.src, "to": e.dst} for e in self.edges],
            "tails_in": [{"id": t.id, "vertex": t.vertex} for t in self.tails_in],
            "tails_out": [{"id": t.id, "vertex": t.vertex} for t in self.tails_out],
        }


def _validate(g):
    vertex_counts = Counter(g.vertices)
    dup = [v for v, c in vertex_counts.items() if c > 1]
    if dup:
        raise DuplicateId(f"duplicate vertex ids: {dup}")
    # edges and tails share one id namespace since both appear as slots
    id_counts = Counter([e.id for e in g.edges] + [t.id for t in g.tails_in] + [t.id for t in g.tails_out])
    dup = [i for i, c in id_counts.items() if c > 1]
    if dup:
        raise DuplicateId(f"duplicate edge/tail ids: {dup}")
    vs = set(g.vertices)
    for e in g.edges:
        for end in (e.src, e.dst):
            if end not in vs:
                raise DanglingEndpoint(f"edge {e.id!r} references undeclared vertex {end!r}")
    for t in g.tails_in + g.tails_out:
        if t.vertex not in vs:
            raise DanglingEndpoint(f"tail {t.id!r} attaches to undeclared vertex {t.vertex!r}")
    if len(g.tails_in) != len(g.tails_out):
        raise TailCountMismatch(
            f"{len(g.tails_in)} incoming tails but {len(g.tails_out)} outgoing tails")
    indeg = Counter(e.dst for e in g.edges) + Counter(t.vertex for t in g.tails_in)
    outdeg = Counter(e.src for e in g.edges) + Counter(t.vertex for t in g.tails_out)
    bad = {v: (indeg[v], outdeg[v]) for v in g.vertices if indeg[v] != outdeg[v]}
    if bad:
        raise NotEulerian(bad)


def build_graph(doc):
    """Build a validated graph from a graph document (a parsed mapping)."""
    try:
        return EulerianGraphWithTails(
            vertices=[str(v) for v in doc["vertices"]],
            edges=[Edge(str(e["id"]), str(e["from"]), str(e["to"])) for e in doc.get("edges", [])],
            tails_in=[Tail(str(t["id"]), str(t["vertex"])) for t in doc.get("tails_in", [])],
            tails_out=[Tail(str(t["id"]), str(t["vertex"])) for t in doc.get("tails_out", [])],
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed graph document: {exc!r}") from exc


def reverse_graph(g):
    """Flip every edge; incoming tail k becomes outgoing tail k and vice versa."""
    return EulerianGraphWithTails(
        vertices=g.vertices,
        edges=[Edge(e.id, e.dst, e.src) for e in g.edges],
        tails_in=g.tails_out,
        tails_out=g.tails_in,
    )


def find_pairing(g):
    """Fixed-point-free involution pairing each edge with an opposite one.

    Returns a dict ``edge_id -> edge_id`` or None when no pairing exists.
    Within each vertex pair, edges are matched in sorted-id order.
    """
    forward = defaultdict(list)
    for e in g.edges:
        forward[(e.src, e.dst)].append(e.id)
    pairing = {}
    for (a, b), ids in forward.items():
        if a == b:
            if len(ids) % 2:
                return None
            ids = sorted(ids)
            for x, y in zip(ids[::2], ids[1::2]):
                pairing[x] = y
                pairing[y] = x
            continue
        if a > b:
            continue
        back = forward.get((b, a), [])
        if len(back) != len(ids):
            return None
        for x, y in zip(sorted(ids), sorted(back)):
            pairing[x] = y
            pairing[y] = x
    if len(pairing) != len(g.edges):
        return None
    return pairing


@dataclass(frozen=True)
class MorphismWitness:
    """Vertex map and edge map; tails are addressed by their ids in ``edge_map``."""
    vertex_map: dict
    edge_map: dict


class MorphismKind(str, Enum):
    ISOMORPHISM = "isomorphism"
    MORPHISM = "morphism"
    NOT_A_MORPHISM = "not-a-morphism"


def _endpoints(g):
    # initial/terminal vertex per slot id; tail ends outside G are None
    ends = {e.id: ("edge", e.src, e.dst) for e in g.edges}
    ends.update({t.id: ("in", None, t.vertex) for t in g.tails_in})
    ends.update({t.id: ("out", t.vertex, None) for t in g.tails_out})
    return ends


def check_morphism(g, g2, w):
    f, F = w.vertex_map, w.edge_map
    src = _endpoints(g)
    dst = _endpoints(g2)
    if set(f) != set(g.vertices) or set(F) != set(src):
        return MorphismKind.NOT_A_MORPHISM
    if any(f[v] not in set(g2.vertices) for v in g.vertices):
        return MorphismKind.NOT_A_MORPHISM
    for eid, (kind, i, t) in src.items():
        image = dst.get(F[eid])
        if image is None:
            return MorphismKind.NOT_A_MORPHISM
        kind2, i2, t2 = image
        if kind != kind2:
            return MorphismKind.NOT_A_MORPHISM
        if i is not None and f[i] != i2:
            return MorphismKind.NOT_A_MORPHISM
        if t is not None and f[t] != t2:
            return MorphismKind.NOT_A_MORPHISM
    bijective = (
        len(set(f.values())) == len(g.vertices) == len(g2.vertices)
        and len(set(F.values())) == len(src) == len(dst)
    )
    return MorphismKind.ISOMORPHISM if bijective else MorphismKind.MORPHISM


def tail_permutations(g, w):
    """Tail index permutations (pi_in, pi_out) induced by an automorphism witness."""
    pi_in = [g.tail_in_index(w.edge_map[t.id]) for t in g.tails_in]
    pi_out = [g.tail_out_index(w.edge_map[t.id]) for t in g.tails_out]
    return pi_in, pi_out
