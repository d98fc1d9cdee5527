"""Looped Hadamard vertex: composed vs direct amplitudes and the 2^-n arrival law."""

import argparse
from dataclasses import dataclass

import numpy as np

from eulerwalk import (
    AmplitudeFunction, Engine, HandleSpec, add_handle_amplitudes, add_handle_graph,
    arrival_table, hadamard_vertex, transmission_series,
)


@dataclass
class Config:
    n_max: int = 20
    n_angles: int = 64


def main(cfg):
    walk = hadamard_vertex()
    looped = add_handle_graph(walk, HandleSpec(0, 0))
    composed = add_handle_amplitudes(AmplitudeFunction.from_walk(walk), HandleSpec(0, 0))
    direct = Engine(looped)
    zs = np.exp(2j * np.pi * (np.arange(cfg.n_angles) + 0.5) / cfg.n_angles)
    err = max(abs(composed(z)[0, 0] - direct.S(z)[0, 0]) for z in zs)
    print(f"max |composed - direct| on the circle: {err:.3e}")

    c = transmission_series(looped, cfg.n_max).coefficients[:, 0, 0]
    oracle = arrival_table(looped, cfg.n_max)[:, 0, 0]
    print(" n  q(n)                 2^-n                 |engine - oracle|")
    for n in range(1, cfg.n_max + 1):
        print(f"{n:2d}  {abs(c[n]) ** 2:.17f}  {2.0 ** -n:.17f}  {abs(c[n] - oracle[n]):.1e}")
    print(f"sum q(n), n <= {cfg.n_max}: {np.sum(np.abs(c) ** 2):.15f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-max", type=int, default=Config.n_max)
    p.add_argument("--angles", type=int, default=Config.n_angles)
    a = p.parse_args()
    main(Config(a.n_max, a.angles))
