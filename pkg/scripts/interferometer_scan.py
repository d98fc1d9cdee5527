"""Dark-port amplitude of the comparison interferometer as one arm's phase is swept.

With arms ``[[1]]`` and ``[[e^{i phi}]]`` the dark port carries
``|tau2| = |1 - e^{i phi}| / 2`` on the whole circle, so the maximum traces
``|sin(phi / 2)|``.
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from eulerwalk import compare_graphs, pass_through


@dataclass
class Config:
    n_phases: int = 17
    n_angles: int = 256


def main(cfg, out=sys.stdout):
    out.write("phi,max_dark,expected,verdict\n")
    for phi in np.linspace(0, 2 * np.pi, cfg.n_phases):
        v = compare_graphs(pass_through(), pass_through(np.exp(1j * phi)), cfg.n_angles)
        out.write(f"{phi:.6f},{v.max_dark:.12f},{abs(np.sin(phi / 2)):.12f},"
                  f"{'distinguished' if v.distinguished else 'indistinguishable'}\n")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--phases", type=int, default=Config.n_phases)
    p.add_argument("--angles", type=int, default=Config.n_angles)
    a = p.parse_args()
    main(Config(a.phases, a.angles))
