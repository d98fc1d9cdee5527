"""Walk documents (JSON) and CSV emitters.

A walk document is a JSON object::

    {
      "vertices": ["v1", "v2"],
      "edges":    [{"id": "e", "from": "v1", "to": "v2"}],
      "tails_in":  [{"id": "x1", "vertex": "v1"}],
      "tails_out": [{"id": "y1", "vertex": "v2"}],
      "locals": [
        {"vertex": "v1", "in_order": ["x1"], "out_order": ["e"], "matrix": [[[1.0, 0.0]]]},
        {"vertex": "v2", "in_order": ["e"], "out_order": ["y1"], "matrix": [[[1.0, 0.0]]]}
      ]
    }

The order of ``tails_in`` / ``tails_out`` fixes the tail indices. Matrix
entries are ``[re, im]`` pairs (a bare number is read as a real entry);
rows follow ``out_order`` and columns follow ``in_order``. A document
without ``locals`` is a plain graph document.
"""

import csv
import json

import numpy as np

from .config import DEFAULT
from .errors import ValidationError
from .graph import build_graph
from .structure import LocalUnitary, attach_structure

FLOAT_FMT = "{:.16e}"  # 17 significant digits


def _entry(x):
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValidationError(f"matrix entry {x!r} must be [re, im]")
        return complex(float(x[0]), float(x[1]))
    return complex(float(x))


def walk_from_dict(doc, tol=DEFAULT):
    g = build_graph(doc)
    try:
        locals_ = [
            LocalUnitary(
                str(d["vertex"]),
                [str(s) for s in d["in_order"]],
                [str(s) for s in d["out_order"]],
                np.array([[_entry(x) for x in row] for row in d["matrix"]], dtype=complex).reshape(
                    len(d["out_order"]), len(d["in_order"])),
            )
            for d in doc["locals"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed locals: {exc!r}") from exc
    return attach_structure(g, locals_, tol)


def walk_to_dict(walk):
    doc = walk.graph.to_dict()
    doc["locals"] = [
        {
            "vertex": lu.vertex,
            "in_order": list(lu.in_order),
            "out_order": list(lu.out_order),
            "matrix": [[[float(x.real), float(x.imag)] for x in row] for row in lu.matrix],
        }
        for lu in walk.locals.values()
    ]
    return doc


def load_document(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_walk(path, tol=DEFAULT):
    return walk_from_dict(load_document(path), tol)


def dump_walk(walk, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(walk_to_dict(walk), fh, indent=2)
        fh.write("\n")


def _f(x):
    return FLOAT_FMT.format(float(x))


def write_scatter_csv(fh, theta, S, tails_in, tails_out):
    """One row per angle per (k, j): theta, k, j, Re t, Im t, |t|^2."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["theta", "k", "j", "in_tail", "out_tail", "re", "im", "abs2"])
    K = len(tails_in)
    for k in range(K):
        for j in range(K):
            for th, s in zip(theta, S):
                t = s[j, k]
                w.writerow([_f(th), k, j, tails_in[k], tails_out[j], _f(t.real), _f(t.imag), _f(abs(t) ** 2)])


def write_coeffs_csv(fh, coefficients, tails_in, tails_out):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "k", "j", "in_tail", "out_tail", "re", "im", "q"])
    K = len(tails_in)
    for n in range(1, coefficients.shape[0]):
        for k in range(K):
            for j in range(K):
                c = coefficients[n, j, k]
                w.writerow([n, k, j, tails_in[k], tails_out[j], _f(c.real), _f(c.imag), _f(abs(c) ** 2)])


def write_arrivals_csv(fh, q, k, j):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "k", "j", "q"])
    for n in range(1, len(q)):
        w.writerow([n, k, j, _f(q[n])])


def write_simulation_csv(fh, history, graph):
    """Per-step nonzero amplitudes: step, edge id (tail edges as ``id@depth``), Re, Im."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["step", "edge", "re", "im"])
    for state in history:
        rows = [(eid, a) for eid, a in zip(graph.edge_ids, state.interior)]
        for t, amps in zip(graph.tails_in, state.tails_in):
            rows += [(f"{t.id}@{d}", a) for d, a in enumerate(amps)]
        for t, amps in zip(graph.tails_out, state.tails_out):
            rows += [(f"{t.id}@{d}", a) for d, a in enumerate(amps)]
        for eid, a in rows:
            if a != 0:
                w.writerow([state.step, eid, _f(a.real), _f(a.imag)])
