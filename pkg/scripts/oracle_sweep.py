"""Engine vs brute-force oracle on a family of random walks.

Reports, per walk size, the worst coefficient mismatch, the worst isometry
defect on the circle, how many bound states were deflated and the wall time.
Random walks come from the test-suite generator, so run from the repo root.
"""

import argparse
import sys
import time
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from strategies import random_walk  # noqa: E402

from eulerwalk import Engine, arrival_table, transmission_series, unitarity_defect  # noqa: E402


@dataclass
class Config:
    n_walks: int = 200
    n_max: int = 50
    n_angles: int = 256
    max_edges: int = 16
    max_tails: int = 4
    seed: int = 0


def main(cfg):
    rng = np.random.default_rng(cfg.seed)
    rows = defaultdict(lambda: [0, 0.0, 0.0, 0])
    t0 = time.perf_counter()
    for _ in range(cfg.n_walks):
        w = random_walk(rng, max_edges=cfg.max_edges, max_tails=cfg.max_tails)
        err = np.max(np.abs(transmission_series(w, cfg.n_max).coefficients - arrival_table(w, cfg.n_max)))
        r = rows[len(w.graph.edges)]
        r[0] += 1
        r[1] = max(r[1], float(err))
        r[2] = max(r[2], unitarity_defect(w, cfg.n_angles))
        r[3] += Engine(w).bound.dim
    print(" m  walks  max|engine-oracle|  max isometry defect  bound states")
    for m in sorted(rows):
        n, e, d, b = rows[m]
        print(f"{m:2d}  {n:5d}  {e:18.2e}  {d:19.2e}  {b:12d}")
    print(f"{cfg.n_walks} walks in {time.perf_counter() - t0:.2f} s")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in Config.__dataclass_fields__.values():
        p.add_argument("--" + f.name.replace("_", "-"), type=int, default=f.default)
    main(Config(**vars(p.parse_args())))
