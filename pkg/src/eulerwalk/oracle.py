"""Brute-force time stepping on a tail-truncated state space.

Independent of the block-matrix engine: it reads only the graph and the
local unitaries, applies each vertex map to the amplitudes sitting on its
incoming slots, and shifts the tails by one edge per step. Tails are kept
to depth ``N``; a walk started inside the graph or on an attaching edge is
exact for ``N`` steps because nothing can reach outgoing depth ``N + 1``
sooner.
"""

from dataclasses import dataclass

import numpy as np

from .errors import TruncationTooShallow


@dataclass
class TruncatedState:
    interior: np.ndarray   # (m,) in graph edge order
    tails_in: np.ndarray   # (K, N + 1), depth 0 is the attaching edge
    tails_out: np.ndarray  # (K, N + 1), depth 0 is the attaching edge
    step: int

    def norm(self):
        return float(np.sqrt(
            np.sum(np.abs(self.interior) ** 2)
            + np.sum(np.abs(self.tails_in) ** 2)
            + np.sum(np.abs(self.tails_out) ** 2)))

    def amplitude(self, location):
        kind = location[0]
        if kind == "in":
            return complex(self.tails_in[location[1], location[2]])
        if kind == "out":
            return complex(self.tails_out[location[1], location[2]])
        raise KeyError(location)


class _Stepper:
    def __init__(self, walk, depth):
        g = walk.graph
        self.m, self.K, self.N = len(g.edges), g.K, depth
        L = depth + 1
        self.in0 = self.m
        self.out0 = self.m + self.K * L
        self.size = self.out0 + self.K * L
        index = {eid: i for i, eid in enumerate(g.edge_ids)}
        in_index = dict(index)
        out_index = dict(index)
        in_index.update({t.id: self.in0 + k * L for k, t in enumerate(g.tails_in)})
        out_index.update({t.id: self.out0 + j * L for j, t in enumerate(g.tails_out)})
        self.vertex_maps = [
            (np.array([in_index[s] for s in lu.in_order], dtype=int),
             np.array([out_index[s] for s in lu.out_order], dtype=int),
             lu.matrix)
            for lu in walk.locals.values()
        ]
        self.edge_index = index

    def split(self, psi, step):
        L = self.N + 1
        return TruncatedState(
            psi[:self.m].copy(),
            psi[self.in0:self.out0].reshape(self.K, L).copy(),
            psi[self.out0:].reshape(self.K, L).copy(),
            step)

    def step(self, psi):
        L = self.N + 1
        new = np.zeros_like(psi)
        tin = psi[self.in0:self.out0].reshape(self.K, L)
        tout = psi[self.out0:].reshape(self.K, L)
        # free propagation along the tails
        new[self.in0:self.out0].reshape(self.K, L)[:, :-1] = tin[:, 1:]
        new[self.out0:].reshape(self.K, L)[:, 1:] = tout[:, :-1]
        for src, dst, U in self.vertex_maps:
            new[dst] += U @ psi[src]
        return new


def _start_vector(st, walk, start):
    psi = np.zeros(st.size, dtype=complex)
    L = st.N + 1
    g = walk.graph
    if isinstance(start, str):
        if start in st.edge_index:
            start = ("edge", start)
        else:
            start = ("in", g.tail_in_index(start), 0)
    kind = start[0]
    if kind == "edge":
        psi[st.edge_index[start[1]]] = 1.0
    elif kind == "in":
        if start[2] > st.N:
            raise TruncationTooShallow(f"start depth {start[2]} exceeds tail depth {st.N}")
        psi[st.in0 + start[1] * L + start[2]] = 1.0
    elif kind == "out":
        psi[st.out0 + start[1] * L + start[2]] = 1.0
    else:
        raise ValueError(f"unknown start location {start!r}")
    return psi


def simulate(walk, start, n_steps, tail_depth=None):
    """Return the state history ``[state_0, ..., state_n_steps]``.

    ``start`` is an interior edge id, an incoming tail id (attaching edge),
    or a location tuple ``("edge", id)``, ``("in", k, depth)``, ``("out", j, depth)``.
    """
    N = n_steps if tail_depth is None else tail_depth
    if n_steps > N:
        raise TruncationTooShallow(f"{n_steps} steps need tail depth >= {n_steps}, got {N}")
    st = _Stepper(walk, N)
    psi = _start_vector(st, walk, start)
    history = [st.split(psi, 0)]
    for n in range(1, n_steps + 1):
        psi = st.step(psi)
        history.append(st.split(psi, n))
    return history


def arrival_amplitudes(walk, k, n_max):
    """Amplitudes ``out[n, j]`` on outgoing attach edge j after n steps from incoming tail k."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    st = _Stepper(walk, n_max)
    L = n_max + 1
    psi = _start_vector(st, walk, ("in", k, 0))
    out = np.zeros((n_max + 1, st.K), dtype=complex)
    for n in range(1, n_max + 1):
        psi = st.step(psi)
        out[n] = psi[st.out0::L][:st.K] if st.K else out[n]
    return out


def arrival_table(walk, n_max):
    """Oracle coefficients shaped like a transmission series: ``[n, j, k]``."""
    K = walk.graph.K
    table = np.zeros((n_max + 1, K, K), dtype=complex)
    for k in range(K):
        table[:, :, k] = arrival_amplitudes(walk, k, n_max)
    return table
