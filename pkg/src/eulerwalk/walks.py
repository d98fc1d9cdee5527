"""Small hand-built walks used throughout the docs, scripts and tests."""

import numpy as np

from .graph import Edge, EulerianGraphWithTails, Tail
from .structure import LocalUnitary, attach_structure

SQRT_HALF = 1 / np.sqrt(2)


def pass_through(phase=1.0):
    """One vertex, one incoming and one outgoing tail, local matrix ``[[phase]]``."""
    g = EulerianGraphWithTails(["v"], [], [Tail("x", "v")], [Tail("y", "v")])
    return attach_structure(g, [LocalUnitary("v", ["x"], ["y"], [[phase]])])


def line():
    """v1 -> v2 with an incoming tail at v1 and an outgoing tail at v2."""
    g = EulerianGraphWithTails(["v1", "v2"], [Edge("e", "v1", "v2")], [Tail("x", "v1")], [Tail("y", "v2")])
    return attach_structure(g, [
        LocalUnitary("v1", ["x"], ["e"], [[1]]),
        LocalUnitary("v2", ["e"], ["y"], [[1]]),
    ])


def hadamard_vertex():
    """One vertex with two incoming and two outgoing tails and a balanced splitter."""
    g = EulerianGraphWithTails(["v"], [], [Tail("x1", "v"), Tail("x2", "v")], [Tail("y1", "v"), Tail("y2", "v")])
    H = SQRT_HALF * np.array([[1, 1], [1, -1]])
    return attach_structure(g, [LocalUnitary("v", ["x1", "x2"], ["y1", "y2"], H)])


def trapped_cycle():
    """Line graph plus a directed 2-cycle that no tail can reach.

    The cycle a -> b -> a carries identity locals, so its interior is
    invariant with eigenvalues +1 and -1.
    """
    g = EulerianGraphWithTails(
        ["v1", "v2", "a", "b"],
        [Edge("e", "v1", "v2"), Edge("ab", "a", "b"), Edge("ba", "b", "a")],
        [Tail("x", "v1")], [Tail("y", "v2")],
    )
    return attach_structure(g, [
        LocalUnitary("v1", ["x"], ["e"], [[1]]),
        LocalUnitary("v2", ["e"], ["y"], [[1]]),
        LocalUnitary("a", ["ba"], ["ab"], [[1]]),
        LocalUnitary("b", ["ab"], ["ba"], [[1]]),
    ])
