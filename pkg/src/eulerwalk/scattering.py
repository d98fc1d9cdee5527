"""Scattering matrix, transmission series and arrival/exit probabilities.

With the boundary block ``[[A, B], [C, D]]`` of a walk, the transmission
amplitudes are

    S(z) = z * (D + z * C (I - z A)^-1 B),      S[j, k] = t_j^(k)(z)

whose Taylor coefficients are the first-arrival amplitudes
``c_1 = D`` and ``c_n = C A^(n-2) B``. Unit-modulus eigenvectors of ``A``
(bound states) are orthogonal to the range of ``B`` and to the row space of
``C``; they are projected out before the resolvent is formed, which keeps it
invertible on the whole closed unit disc.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import DEFAULT
from .errors import EigSolverFailure, LeakyBoundState, NearSingularResolvent, NumericError
from .structure import BoundaryBlock, QuantumWalk, assemble_boundary_block

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundStateBasis:
    vectors: np.ndarray      # (m, d), orthonormal columns spanning H0
    eigenvalues: np.ndarray  # (d,)

    @property
    def dim(self):
        return self.vectors.shape[1]


@dataclass(frozen=True)
class TransmissionSeries:
    coefficients: np.ndarray  # (n_max + 1, K, K); coefficients[0] == 0

    @property
    def n_max(self):
        return self.coefficients.shape[0] - 1

    def __getitem__(self, n):
        return self.coefficients[n]

    def evaluate(self, z):
        powers = np.asarray(z, dtype=complex) ** np.arange(self.n_max + 1)
        return np.tensordot(powers, self.coefficients, axes=1)


@dataclass(frozen=True)
class ScatterSample:
    z: complex
    S: np.ndarray


@dataclass(frozen=True)
class ExitProbability:
    value: float
    error: float
    method: str


def bound_states(block, tol=DEFAULT):
    """Orthonormal basis of the bound-state subspace H0 of the interior."""
    A, C = block.A, block.C
    m = A.shape[0]
    if m == 0:
        return BoundStateBasis(np.zeros((0, 0), dtype=complex), np.zeros(0, dtype=complex))
    try:
        w, V = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise EigSolverFailure(str(exc)) from exc
    keep = np.abs(w) >= 1.0 - tol.eig
    if not keep.any():
        return BoundStateBasis(np.zeros((m, 0), dtype=complex), np.zeros(0, dtype=complex))
    U, s, _ = np.linalg.svd(V[:, keep], full_matrices=False)
    Q = U[:, s > 1e-8 * s[0]]
    # A restricted to H0 is unitary, hence normal: its Schur vectors are eigenvectors
    T, Z = scipy.linalg.schur(Q.conj().T @ A @ Q, output="complex")
    Q = Q @ Z
    lam = np.diag(T).copy()
    resid = np.linalg.norm(A @ Q - Q * lam, axis=0)
    if np.any(resid > tol.eig) or np.any(np.abs(np.abs(lam) - 1) > tol.eig):
        raise EigSolverFailure(f"bound-state eigenpairs inaccurate (residual {resid.max():.3e})")
    leak = np.linalg.norm(C @ Q, axis=0) if C.size else np.zeros(Q.shape[1])
    if np.any(leak > tol.eig):
        raise LeakyBoundState(float(leak.max()))
    return BoundStateBasis(Q, lam)


class Engine:
    """Deflated resolvent data for one boundary block; cheap to evaluate at many z."""

    def __init__(self, walk_or_block, tol=DEFAULT):
        if isinstance(walk_or_block, QuantumWalk):
            block = assemble_boundary_block(walk_or_block)
        elif isinstance(walk_or_block, BoundaryBlock):
            block = walk_or_block
        else:
            raise TypeError(f"expected QuantumWalk or BoundaryBlock, got {type(walk_or_block).__name__}")
        self.block = block
        self.tol = tol
        self.bound = bound_states(block, tol)
        m = block.m
        if self.bound.dim:
            Q1 = scipy.linalg.null_space(self.bound.vectors.conj().T)
        else:
            Q1 = np.eye(m, dtype=complex)
        self.Q1 = Q1
        self.At = Q1.conj().T @ block.A @ Q1
        self.Bt = Q1.conj().T @ block.B
        self.Ct = block.C @ Q1
        self.D = block.D

    @property
    def K(self):
        return self.block.K

    def _solve(self, z):
        n = self.At.shape[0]
        M = np.eye(n, dtype=complex) - z * self.At
        if n:
            smin = np.linalg.svd(M, compute_uv=False)[-1]
            if smin < self.tol.sing:
                raise NearSingularResolvent(z, smin)
        return np.linalg.solve(M, self.Bt) if n else np.zeros((0, self.Bt.shape[1]), dtype=complex)

    def S(self, z):
        z = complex(z)
        X = self._solve(z)
        return z * (self.D + z * (self.Ct @ X))

    def interior(self, z):
        """Interior part of the generalized eigenstates, one column per incoming tail."""
        z = complex(z)
        return z * (self.Q1 @ self._solve(z))

    def deflated_norm(self):
        return float(np.linalg.norm(self.At, 2)) if self.At.size else 0.0

    def decay_rate(self):
        """(rho, p) with ||At^n|| <= rho^(n - p + 1) for all n >= 0.

        Uses rho = min over p of ||At^p||^(1/p); p = 1 is the plain largest
        singular value of the deflated interior block.
        """
        n = self.At.shape[0]
        if n == 0:
            return 0.0, 1
        best, best_p = 1.0, 1
        P = np.eye(n, dtype=complex)
        for p in range(1, n + 1):
            P = P @ self.At
            r = np.linalg.norm(P, 2) ** (1.0 / p)
            if r < best - 1e-15:
                best, best_p = r, p
            if r == 0.0:
                break
        return best, best_p


def _engine(obj, tol=DEFAULT):
    return obj if isinstance(obj, Engine) else Engine(obj, tol)


def scattering_matrix(walk, z, tol=DEFAULT):
    eng = _engine(walk, tol)
    return ScatterSample(complex(z), eng.S(z))


def transmission_series(walk, n_max):
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    block = walk.block if isinstance(walk, Engine) else assemble_boundary_block(walk)
    K = block.K
    c = np.zeros((n_max + 1, K, K), dtype=complex)
    c[1] = block.D
    W = block.B
    for n in range(2, n_max + 1):
        c[n] = block.C @ W
        W = block.A @ W
    return TransmissionSeries(c)


def first_arrival(walk, k, j, n):
    if n < 1:
        raise ValueError("n must be >= 1")
    c = transmission_series(walk, n)[n]
    return float(abs(c[j, k]) ** 2)


def circle_angles(n, shift=False):
    theta = 2 * np.pi * np.arange(n) / n
    return theta + np.pi / n if shift else theta


def sample_circle(fn, n_angles, radius=1.0):
    """Evaluate ``fn`` (an Engine or any z -> matrix callable) on an equispaced circle grid.

    A numeric failure at a grid point triggers one retry on the grid shifted
    by half a step; a second failure propagates.
    """
    fn = fn.S if isinstance(fn, Engine) else fn
    for shift in (False, True):
        theta = circle_angles(n_angles, shift)
        try:
            return theta, np.array([fn(radius * np.exp(1j * t)) for t in theta])
        except NumericError:
            if shift:
                raise
            log.info("singular point on circle grid; shifting by half a step")


def exit_probability(walk, k, j, method="parseval", n_max=200, n_samples=256, tol=DEFAULT):
    """Probability that a walker entering on tail ``k`` ever leaves on tail ``j``."""
    eng = _engine(walk, tol)
    if method == "parseval":
        if n_max < 1:
            raise ValueError("n_max must be >= 1")
        c = transmission_series(eng, n_max).coefficients[:, j, k]
        value = float(np.sum(np.abs(c) ** 2))
        rho, p = eng.decay_rate()
        if rho > 1 - 1e-12:
            log.warning("slow convergence: deflated decay rate %.15f", rho)
            err = math.inf
        elif rho == 0.0:
            err = 0.0 if n_max >= p + 1 else max(0.0, 1.0 - value)
        else:
            # |c_n| <= ||At^(n-2)|| <= rho^(n-1-p)
            err = rho ** (2 * (n_max - p)) / (1 - rho ** 2)
            err = min(err, max(0.0, 1.0 - value))
        return ExitProbability(value, err, "parseval")
    if method == "quadrature":
        if n_samples < 2:
            raise ValueError("n_samples must be >= 2")
        _, S = sample_circle(eng, n_samples)
        vals = np.abs(S[:, j, k]) ** 2
        value = float(vals.mean())
        coarse = float(vals[::2].mean())
        return ExitProbability(value, abs(value - coarse), "quadrature")
    raise ValueError(f"unknown method {method!r}")


def eigenstate_component(walk, k, z, location, tol=DEFAULT):
    """Component of the generalized eigenstate for incoming tail ``k`` at ``location``.

    ``location`` is one of ``("in", j, depth)``, ``("edge", edge_id)`` or
    ``("out", j, depth)``; depth 0 is the attaching edge.
    """
    z = complex(z)
    if z == 0:
        raise ValueError("z must be nonzero")
    eng = _engine(walk, tol)
    kind = location[0]
    if kind == "in":
        _, j, depth = location
        return z ** (-depth) if j == k else 0j
    if kind == "edge":
        idx = eng.block.interior.index(location[1])
        return complex(eng.interior(z)[idx, k])
    if kind == "out":
        _, j, depth = location
        return complex(eng.S(z)[j, k] * z ** depth)
    raise ValueError(f"unknown location {location!r}")


def unitarity_defect(walk, n_angles, tol=DEFAULT):
    if n_angles < 1:
        raise ValueError("n_angles must be >= 1")
    eng = _engine(walk, tol)
    if eng.K == 0:
        return 0.0
    _, S = sample_circle(eng, n_angles)
    eye = np.eye(eng.K)
    return float(max(np.max(np.abs(s.conj().T @ s - eye)) for s in S))
