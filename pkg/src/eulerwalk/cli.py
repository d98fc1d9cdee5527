"""Command-line front end.

Exit codes: 0 success, 1 validation failure (or a failed selfcheck),
2 numeric failure, 64 usage error. Relative output paths are resolved
against ``$EULERWALK_OUTPUT_DIR`` when it is set.
"""

import argparse
import contextlib
import csv
import json
import logging
import os
import sys

import numpy as np

from .config import DEFAULT
from .errors import NumericError, ValidationError
from .io import (
    dump_walk, load_walk, walk_to_dict, write_arrivals_csv, write_coeffs_csv,
    write_scatter_csv, write_simulation_csv,
)
from .oracle import arrival_table, simulate
from .scattering import Engine, exit_probability, sample_circle, transmission_series
from .structure import reverse_structure
from .surgery import (
    AmplitudeFunction, HandleSpec, add_handle_amplitudes, add_handle_graph,
    compare_graphs, cut_edge_amplitudes, cut_edge_graph, splice,
)

OUTPUT_DIR_ENV = "EULERWALK_OUTPUT_DIR"
EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2, 64

log = logging.getLogger("eulerwalk")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _resolve(path):
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, path)
    return path


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(_resolve(path), "w", encoding="utf-8", newline="") as fh:
            yield fh


def _tail_index(tails, value, kind):
    ids = [t.id for t in tails]
    if value in ids:
        return ids.index(value)
    try:
        i = int(value)
    except ValueError:
        raise UsageError(f"unknown {kind} tail {value!r}; known: {ids}") from None
    if not 0 <= i < len(ids):
        raise UsageError(f"{kind} tail index {i} out of range (K={len(ids)})")
    return i


def _pair(text, what):
    parts = text.split(",")
    if len(parts) != 2 or not all(parts):
        raise UsageError(f"{what} expects OUT_ID,IN_ID, got {text!r}")
    return parts


def _write_walk(walk, path):
    if path in (None, "-"):
        json.dump(walk_to_dict(walk), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        dump_walk(walk, _resolve(path))


def _write_amplitudes(amps, path, n_angles):
    theta, S = sample_circle(amps, n_angles)
    with _open_out(path) as fh:
        write_scatter_csv(fh, theta, S, amps.tails_in, amps.tails_out)


# -- commands ---------------------------------------------------------------

def cmd_validate(args, tol):
    walk = load_walk(args.walk, tol)
    g = walk.graph
    print(f"valid: {len(g.vertices)} vertices, {len(g.edges)} interior edges, K={g.K}")


def cmd_scatter(args, tol):
    walk = load_walk(args.walk, tol)
    eng = Engine(walk, tol)
    theta, S = sample_circle(eng, args.angles, args.radius)
    with _open_out(args.output) as fh:
        write_scatter_csv(fh, theta, S, [t.id for t in walk.graph.tails_in], [t.id for t in walk.graph.tails_out])


def cmd_coeffs(args, tol):
    walk = load_walk(args.walk, tol)
    c = transmission_series(walk, args.n_max).coefficients
    with _open_out(args.output) as fh:
        write_coeffs_csv(fh, c, [t.id for t in walk.graph.tails_in], [t.id for t in walk.graph.tails_out])


def cmd_arrivals(args, tol):
    walk = load_walk(args.walk, tol)
    k = _tail_index(walk.graph.tails_in, args.k, "incoming")
    j = _tail_index(walk.graph.tails_out, args.j, "outgoing")
    c = transmission_series(walk, args.n_max).coefficients[:, j, k]
    with _open_out(args.output) as fh:
        write_arrivals_csv(fh, np.abs(c) ** 2, k, j)


def cmd_exit_prob(args, tol):
    walk = load_walk(args.walk, tol)
    k = _tail_index(walk.graph.tails_in, args.k, "incoming")
    j = _tail_index(walk.graph.tails_out, args.j, "outgoing")
    p = exit_probability(walk, k, j, args.method, n_max=args.n_max, n_samples=args.samples, tol=tol)
    print(f"{p.value:.17g} +/- {p.error:.3g} ({p.method})")


def cmd_bound_states(args, tol):
    walk = load_walk(args.walk, tol)
    eng = Engine(walk, tol)
    bs = eng.bound
    print(f"dim H0 = {bs.dim}")
    for n, lam in enumerate(bs.eigenvalues):
        v = bs.vectors[:, n]
        support = {eid: complex(a) for eid, a in zip(eng.block.interior, v) if abs(a) > 1e-12}
        print(f"lambda = {lam.real:.17g}{lam.imag:+.17g}j support = {support}")


def cmd_reverse(args, tol):
    _write_walk(reverse_structure(load_walk(args.walk, tol)), args.output)


def cmd_add_handle(args, tol):
    walk = load_walk(args.walk, tol)
    out_id, in_id = _pair(args.add_handle, "--add-handle")
    spec = HandleSpec(_tail_index(walk.graph.tails_out, out_id, "outgoing"),
                      _tail_index(walk.graph.tails_in, in_id, "incoming"))
    _write_walk(add_handle_graph(walk, spec, edge_id=args.edge_id, tol=tol), args.output)
    if args.amplitudes:
        _write_amplitudes(add_handle_amplitudes(AmplitudeFunction.from_walk(walk, tol), spec, tol),
                          args.amplitudes, args.angles)


def cmd_cut_edge(args, tol):
    walk = load_walk(args.walk, tol)
    if not walk.graph.has_edge(args.cut_edge):
        raise UsageError(f"unknown edge {args.cut_edge!r}")
    _write_walk(cut_edge_graph(walk, args.cut_edge, args.in_id, args.out_id, tol), args.output)
    if args.amplitudes:
        _write_amplitudes(cut_edge_amplitudes(walk, args.cut_edge, tol), args.amplitudes, args.angles)


def cmd_splice(args, tol):
    walk1 = load_walk(args.walk, tol)
    path2, _, ids = args.splice.rpartition(":")
    if not path2:
        raise UsageError("--splice expects FILE2:OUT_ID,IN_ID")
    walk2 = load_walk(path2, tol)
    out_id, in_id = _pair(ids, "--splice")
    p = _tail_index(walk1.graph.tails_out, out_id, "outgoing")
    q = _tail_index(walk2.graph.tails_in, in_id, "incoming")
    amps, joined = splice(walk1, walk2, p, q, tol=tol)
    _write_walk(joined, args.output)
    if args.amplitudes:
        _write_amplitudes(amps, args.amplitudes, args.angles)


def cmd_compare(args, tol):
    verdict = compare_graphs(load_walk(args.walk, tol), load_walk(args.compare, tol), args.angles, tol)
    print(verdict)


def cmd_simulate(args, tol):
    walk = load_walk(args.walk, tol)
    start = args.start or walk.graph.tails_in[0].id
    history = simulate(walk, start, args.steps, args.depth)
    with _open_out(args.output) as fh:
        write_simulation_csv(fh, history, walk.graph)


def _check(name, value, limit, results):
    ok = bool(value < limit)
    results.append(ok)
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {value:.3e} (< {limit:.1e})")


def _read_scatter_csv(path):
    rows = []
    with open(path, encoding="utf-8") as fh:
        for r in csv.DictReader(fh):
            rows.append((float(r["theta"]), int(r["k"]), int(r["j"]), complex(float(r["re"]), float(r["im"]))))
    return rows


def cmd_selfcheck(args, tol):
    """Oracle equivalence, isometry, reversal and composed-vs-direct surgery checks."""
    walk = load_walk(args.walk, tol)
    K = walk.K
    results = []
    eng = Engine(walk, tol)
    if K:
        c = transmission_series(walk, args.n_max).coefficients
        _check("oracle equivalence", float(np.max(np.abs(c - arrival_table(walk, args.n_max)))), 1e-10, results)
        _, S = sample_circle(eng, args.angles)
        eye = np.eye(K)
        _check("circle isometry", float(max(np.max(np.abs(s.conj().T @ s - eye)) for s in S)), tol.num, results)
        rev = Engine(reverse_structure(walk), tol)
        zs = 0.9 * np.exp(2j * np.pi * np.arange(16) / 16)
        _check("reversal law", float(max(np.max(np.abs(rev.S(z) - eng.S(z).T)) for z in zs)), tol.num, results)
    zs = [r * np.exp(2j * np.pi * (n + 0.5) / 8) for r in (0.5, 0.9) for n in range(8)]
    direct = AmplitudeFunction.from_walk(walk, tol)
    if K >= 2:
        spec = HandleSpec(0, 0)
        composed = add_handle_amplitudes(direct, spec, tol)
        handled = Engine(add_handle_graph(walk, spec, tol=tol), tol)
        _check("add-handle composed vs direct",
               float(max(np.max(np.abs(composed(z) - handled.S(z))) for z in zs)), tol.num, results)
    for eid in walk.graph.edge_ids[: args.max_cuts]:
        composed = cut_edge_amplitudes(walk, eid, tol)
        cut = Engine(cut_edge_graph(walk, eid, tol=tol), tol)
        _check(f"cut-edge {eid} composed vs direct",
               float(max(np.max(np.abs(composed(z) - cut.S(z))) for z in zs)), tol.num, results)
    if args.against:
        rows = _read_scatter_csv(args.against)
        err = max((abs(eng.S(np.exp(1j * th))[j, k] - t) for th, k, j, t in rows), default=0.0)
        _check(f"amplitudes in {args.against}", float(err), 1e-9, results)
    if not all(results):
        return EXIT_INVALID
    return EXIT_OK


# -- wiring -----------------------------------------------------------------

def build_parser():
    p = _Parser(prog="eulerwalk", description=__doc__.splitlines()[0])
    p.add_argument("--tolerance", action="append", default=[], metavar="KEY=VALUE",
                   help="override a tolerance (unitary, num, eig, compare, sing)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, fn, help_, output=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("walk", help="walk document (JSON)")
        if output:
            sp.add_argument("-o", "--output", default=None, help="output path (default stdout)")
        sp.set_defaults(func=fn)
        return sp

    cmd("validate", cmd_validate, "validate a walk document", output=False)
    sp = cmd("scatter", cmd_scatter, "S(e^{i theta}) on an angle grid as CSV")
    sp.add_argument("--angles", type=int, default=64)
    sp.add_argument("--radius", type=float, default=1.0)
    sp = cmd("coeffs", cmd_coeffs, "Taylor coefficients of the transmission amplitudes as CSV")
    sp.add_argument("--n-max", type=int, default=50)
    sp = cmd("arrivals", cmd_arrivals, "first-arrival probabilities q(n) as CSV")
    sp.add_argument("--k", default="0", help="incoming tail id or index")
    sp.add_argument("--j", default="0", help="outgoing tail id or index")
    sp.add_argument("--n-max", type=int, default=50)
    sp = cmd("exit-prob", cmd_exit_prob, "total exit probability from tail k to tail j", output=False)
    sp.add_argument("--k", default="0")
    sp.add_argument("--j", default="0")
    sp.add_argument("--method", choices=["parseval", "quadrature"], default="parseval")
    sp.add_argument("--n-max", type=int, default=200)
    sp.add_argument("--samples", type=int, default=256)
    cmd("bound-states", cmd_bound_states, "bound states of the interior", output=False)
    cmd("reverse", cmd_reverse, "write the reverse walk document")
    for name, fn, flag, extra in (
        ("add-handle", cmd_add_handle, "--add-handle", "OUT_ID,IN_ID"),
        ("cut-edge", cmd_cut_edge, "--cut-edge", "EDGE_ID"),
        ("splice", cmd_splice, "--splice", "FILE2:OUT_ID,IN_ID"),
    ):
        sp = cmd(name, fn, f"{name} surgery; writes the modified walk document")
        sp.add_argument(flag, required=True, metavar=extra)
        sp.add_argument("--amplitudes", default=None, help="also write the composed amplitudes CSV here")
        sp.add_argument("--angles", type=int, default=64)
        if name == "add-handle":
            sp.add_argument("--edge-id", default=None)
        if name == "cut-edge":
            sp.add_argument("--in-id", default=None)
            sp.add_argument("--out-id", default=None)
    sp = cmd("compare", cmd_compare, "interferometric comparison of two 2-tail walks", output=False)
    sp.add_argument("--compare", required=True, metavar="FILE2")
    sp.add_argument("--angles", type=int, default=256)
    sp = cmd("simulate", cmd_simulate, "brute-force time stepping, per-step CSV")
    sp.add_argument("--start", default=None, help="interior edge id or incoming tail id (default: first tail)")
    sp.add_argument("--steps", type=int, default=10)
    sp.add_argument("--depth", type=int, default=None)
    sp = cmd("selfcheck", cmd_selfcheck, "run oracle and composed-vs-direct checks", output=False)
    sp.add_argument("--n-max", type=int, default=50)
    sp.add_argument("--angles", type=int, default=256)
    sp.add_argument("--max-cuts", type=int, default=4)
    sp.add_argument("--against", default=None, help="scatter CSV to compare with the direct amplitudes")
    return p


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        tol = DEFAULT.override(args.tolerance)
        for name in ("angles", "steps", "n_max", "samples"):
            if getattr(args, name, 1) is not None and getattr(args, name, 1) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be >= 1")
        code = args.func(args, tol)
    except (UsageError, KeyError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if code is None else code


def main():
    sys.exit(run())
