import numpy as np
import pytest
from hypothesis import given, settings

from eulerwalk.errors import NearSingularResolvent
from eulerwalk.oracle import _Stepper, arrival_table
from eulerwalk.scattering import (
    Engine, bound_states, eigenstate_component, exit_probability, first_arrival,
    sample_circle, scattering_matrix, transmission_series, unitarity_defect,
)
from eulerwalk.structure import assemble_boundary_block, reverse_structure
from eulerwalk.walks import hadamard_vertex, line, pass_through, trapped_cycle

from strategies import sample_points, walks

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


@pytest.mark.parametrize("z", [0.3, 0.5j, np.exp(0.7j), -1.0])
def test_closed_forms(z):
    assert scattering_matrix(pass_through(), z).S[0, 0] == pytest.approx(z, abs=1e-15)
    assert scattering_matrix(line(), z).S[0, 0] == pytest.approx(z * z, abs=1e-15)
    np.testing.assert_allclose(scattering_matrix(hadamard_vertex(), z).S, z * H, atol=1e-15)


def test_line_series_and_first_arrival():
    c = transmission_series(line(), 6).coefficients[:, 0, 0]
    np.testing.assert_array_equal(c, [0, 0, 1, 0, 0, 0, 0])
    assert first_arrival(line(), 0, 0, 2) == 1.0
    assert first_arrival(line(), 0, 0, 3) == 0.0


def test_hadamard_first_arrival():
    assert first_arrival(hadamard_vertex(), 0, 1, 1) == pytest.approx(0.5)


def test_vanishes_at_origin():
    for w in (line(), hadamard_vertex(), trapped_cycle()):
        assert np.abs(Engine(w).S(1e-8)).max() <= 1e-7


@settings(max_examples=25, deadline=None)
@given(walks())
def test_series_matches_resolvent_inside_disc(walk):
    eng = Engine(walk)
    series = transmission_series(eng, 200)
    for z in sample_points(24, radii=(0.5, 0.9)):
        np.testing.assert_allclose(series.evaluate(z), eng.S(z), atol=1e-8)


@settings(max_examples=25, deadline=None)
@given(walks())
def test_series_matches_oracle(walk):
    np.testing.assert_allclose(transmission_series(walk, 30).coefficients, arrival_table(walk, 30), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(walks())
def test_isometry_on_circle(walk):
    assert unitarity_defect(walk, 64) < 1e-9


@settings(max_examples=25, deadline=None)
@given(walks())
def test_reversal_transposes(walk):
    fwd, rev = Engine(walk), Engine(reverse_structure(walk))
    for z in sample_points(16):
        np.testing.assert_allclose(rev.S(z), fwd.S(z).T, atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(walks())
def test_parseval_matches_quadrature(walk):
    for k in range(walk.K):
        for j in range(walk.K):
            p = exit_probability(walk, k, j, n_max=400)
            q = exit_probability(walk, k, j, method="quadrature", n_samples=512)
            if np.isfinite(p.error) and p.error < 1e-10 and q.error < 1e-10:
                assert p.value == pytest.approx(q.value, abs=1e-9)


def test_exit_probability_hadamard():
    p = exit_probability(hadamard_vertex(), 0, 1)
    assert p.value == pytest.approx(0.5) and p.error == 0.0
    q = exit_probability(hadamard_vertex(), 0, 1, method="quadrature", n_samples=16)
    assert q.value == pytest.approx(0.5, abs=1e-14)


def test_exit_probability_bad_method():
    with pytest.raises(ValueError):
        exit_probability(line(), 0, 0, method="monte-carlo")


def test_trapped_cycle_bound_states():
    w = trapped_cycle()
    b = bound_states(assemble_boundary_block(w))
    assert b.dim == 2
    np.testing.assert_allclose(sorted(b.eigenvalues.real), [-1, 1], atol=1e-12)
    # the engine deflates them, so z = 1 and z = -1 are fine
    for z in (1.0, -1.0):
        assert Engine(w).S(z)[0, 0] == pytest.approx(z * z)


def test_undeflated_resolvent_is_singular():
    b = assemble_boundary_block(trapped_cycle())
    eng = Engine(b)
    eng.At, eng.Bt, eng.Ct = b.A, b.B, b.C  # pretend nothing was deflated
    with pytest.raises(NearSingularResolvent):
        eng.S(1.0)


@settings(max_examples=20, deadline=None)
@given(walks())
def test_eigenstate_is_eigenvector_of_one_step(walk):
    """U psi_z = psi_z / z, checked with the oracle's stepping map."""
    N = 6
    st = _Stepper(walk, N)
    L = N + 1
    g = walk.graph
    for z in (0.8 * np.exp(0.4j), np.exp(2.1j)):
        for k in range(g.K):
            psi = np.zeros(st.size, dtype=complex)
            for i, e in enumerate(g.edge_ids):
                psi[i] = eigenstate_component(walk, k, z, ("edge", e))
            for j in range(g.K):
                for d in range(L):
                    psi[st.in0 + j * L + d] = eigenstate_component(walk, k, z, ("in", j, d))
                    psi[st.out0 + j * L + d] = eigenstate_component(walk, k, z, ("out", j, d))
            new = st.step(psi)
            keep = np.ones(st.size, dtype=bool)
            keep[st.in0 + N:st.out0:L] = False  # truncated far end of the incoming tails
            np.testing.assert_allclose(new[keep], psi[keep] / z, atol=1e-9)


def test_sample_circle_shifts_off_singular_points():
    def fn(z):
        if abs(z - 1) < 1e-12:
            raise NearSingularResolvent(z, 0.0)
        return np.array([[z]])

    theta, vals = sample_circle(fn, 8)
    assert theta[0] == pytest.approx(np.pi / 8)
    np.testing.assert_allclose(vals[:, 0, 0], np.exp(1j * theta))
