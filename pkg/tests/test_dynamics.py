import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import random_density
from spinalg import DomainError, build_tables, hermitian_basis
from spinalg.dynamics import (BlochState1, BlochState2, HamiltonianCoeffs, IntegrationError,
                              bloch_length, bloch_to_density, bloch_to_density2,
                              decompose_hamiltonian, density_to_bloch, density_to_bloch2,
                              deriv_one_qudit, deriv_two_qudit, integrate, oracle_evolve,
                              oracle_trajectory, reconstruct_hamiltonian)

SZ_HALF = np.diag([0.5, -0.5])


def _random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


# -- conversions ---------------------------------------------------------------

def test_maximally_mixed_and_pure_qubit():
    for spin in ("1/2", "1", "3/2"):
        b = hermitian_basis(spin)
        R = density_to_bloch(np.eye(b.dim) / b.dim, b).R
        assert np.abs(R - np.eye(len(b))[0]).max() < 1e-12
        assert bloch_length(R) < 1e-12
    b = hermitian_basis("1/2")
    st_up = density_to_bloch(np.diag([1.0, 0.0]), b)
    assert np.abs(st_up.R - [1, 0, 0, 1]).max() < 1e-15
    assert bloch_length(st_up) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("spin", ["1/2", "1", "3/2", "2"])
def test_round_trip_one(spin, rng):
    b = hermitian_basis(spin)
    rho = random_density(rng, b.dim)
    R = density_to_bloch(rho, b)
    assert R.R[0] == pytest.approx(1.0, abs=1e-12)
    assert np.abs(bloch_to_density(R, b) - rho).max() < 1e-12
    again = density_to_bloch(bloch_to_density(R.R, b), b)
    assert np.abs(again.R - R.R).max() < 1e-12


@pytest.mark.parametrize("s1, s2", [("1/2", "1/2"), ("1", "1/2"), ("1", "1")])
def test_round_trip_two(s1, s2, rng):
    b1, b2 = hermitian_basis(s1), hermitian_basis(s2)
    rho = random_density(rng, b1.dim * b2.dim)
    R = density_to_bloch2(rho, b1, b2)
    assert R.R[0, 0] == pytest.approx(1.0, abs=1e-12)
    assert np.abs(bloch_to_density2(R, b1, b2) - rho).max() < 1e-12
    # direct trace against the Kronecker product
    s1f = np.sqrt(float(b1.spin) * (float(b1.spin) + 1) / 3)
    s2f = np.sqrt(float(b2.spin) * (float(b2.spin) + 1) / 3)
    for a, c in [(1, 2), (3, 0), (0, 3), (len(b1) - 1, len(b2) - 1)]:
        want = np.trace(rho @ np.kron(b1[a], b2[c])).real / (s1f * s2f)
        assert R.R[a, c] == pytest.approx(want, abs=1e-12)


@settings(max_examples=50)
@given(arrays(np.float64, 8, elements=st.floats(-3, 3)))
def test_any_real_vector_gives_hermitian_unit_trace(v):
    b = hermitian_basis(1)
    R = np.concatenate([[1.0], v])
    rho = bloch_to_density(R, b)
    assert np.array_equal(rho, rho.conj().T) or np.abs(rho - rho.conj().T).max() < 1e-15
    assert abs(np.trace(rho) - 1) < 1e-12


def test_conversion_errors():
    b = hermitian_basis(1)
    with pytest.raises(DomainError):
        density_to_bloch(np.eye(3), b)
    with pytest.raises(DomainError):
        density_to_bloch(np.eye(2) / 2, b)
    with pytest.raises(DomainError):
        density_to_bloch2(np.eye(6), b, hermitian_basis("1/2"))


# -- derivatives -----------------------------------------------------------------

def test_zero_hamiltonian(rng):
    t = build_tables(1)
    assert np.array_equal(deriv_one_qudit(rng.normal(size=9), np.zeros(9), t), np.zeros(9))
    t2 = build_tables("1/2")
    R = rng.normal(size=(9, 4))
    assert np.array_equal(deriv_two_qudit(R, np.zeros((9, 4)), t, t2), np.zeros((9, 4)))


def test_qubit_rotation_derivative():
    t = build_tables("1/2")
    w = 1.7
    R = np.array([1.0, 0.3, -0.4, 0.5])
    d = deriv_one_qudit(R, np.array([0, 0, 0, 2 * w]), t)
    assert np.allclose(d, [0, -w * R[2], w * R[1], 0], atol=1e-15)


@pytest.mark.parametrize("spin", ["1", "3/2"])
def test_derivative_matches_oracle_finite_difference(spin, rng):
    b = hermitian_basis(spin)
    t = build_tables(spin)
    h = rng.normal(size=len(b))
    H = reconstruct_hamiltonian(h, b)
    rho = random_density(rng, b.dim)
    eps = 1e-5
    plus = density_to_bloch(oracle_evolve(rho, H, eps), b).R
    minus = density_to_bloch(oracle_evolve(rho, H, -eps), b).R
    fd = (plus - minus) / (2 * eps)
    d = deriv_one_qudit(density_to_bloch(rho, b), HamiltonianCoeffs((b.spin,), h), t)
    assert d[0] == 0.0
    assert np.abs(fd - d).max() < 1e-6


@pytest.mark.parametrize("s1, s2", [("1/2", "1/2"), ("1", "1/2"), ("1/2", "1"), ("1", "1")])
def test_two_qudit_derivative_matches_oracle(s1, s2, rng, backend):
    b1, b2 = hermitian_basis(s1), hermitian_basis(s2)
    t1, t2 = build_tables(s1), build_tables(s2)
    h = rng.normal(size=(len(b1), len(b2)))
    H = reconstruct_hamiltonian(h, (b1, b2))
    rho = random_density(rng, b1.dim * b2.dim)
    eps = 1e-5
    fd = (density_to_bloch2(oracle_evolve(rho, H, eps), b1, b2).R
          - density_to_bloch2(oracle_evolve(rho, H, -eps), b1, b2).R) / (2 * eps)
    d = deriv_two_qudit(density_to_bloch2(rho, b1, b2), h, t1, t2)
    assert d[0, 0] == 0.0
    assert np.abs(fd - d).max() < 1e-6


def test_local_field_freezes_other_marginal(rng):
    t1, t2 = build_tables(1), build_tables("1/2")
    h = np.zeros((9, 4))
    h[1:, 0] = rng.normal(size=8)
    R = rng.normal(size=(9, 4))
    R[0, 0] = 1.0
    d = deriv_two_qudit(R, h, t1, t2)
    assert np.abs(d[0, :]).max() < 1e-15


def test_derivative_shape_and_spin_errors():
    t1, th = build_tables(1), build_tables("1/2")
    with pytest.raises(DomainError):
        deriv_one_qudit(np.zeros(4), np.zeros(9), t1)
    with pytest.raises(DomainError):
        deriv_one_qudit(BlochState1(th.spin, np.zeros(4)), np.zeros(9), t1)
    with pytest.raises(DomainError):
        deriv_two_qudit(np.zeros((9, 4)), np.zeros((4, 9)), t1, th)
    with pytest.raises(DomainError):
        deriv_two_qudit(BlochState2((th.spin, t1.spin), np.zeros((9, 4))),
                        np.zeros((9, 4)), t1, th)


# -- integration ---------------------------------------------------------------------

def _precession(dt, steps):
    t = build_tables("1/2")
    h = np.array([0, 0, 0, 2.0])
    return integrate(lambda R: deriv_one_qudit(R, h, t), np.array([1.0, 1.0, 0, 0]), dt, steps)


def test_qubit_precession_closed_form():
    traj = _precession(1e-3, 10_000)
    assert traj.steps == 10_000 and len(traj.states) == 10_001
    assert np.all(np.diff(traj.times) > 0)
    err = max(np.abs(traj.states[:, 1] - np.cos(traj.times)).max(),
              np.abs(traj.states[:, 2] - np.sin(traj.times)).max())
    assert err < 1e-8


def test_fourth_order_convergence():
    def err(dt):
        traj = _precession(dt, int(round(10 / dt)))
        return np.abs(traj.states[:, 1] - np.cos(traj.times)).max()
    ratio = err(0.1) / err(0.05)
    assert 14 < ratio < 18


def test_zero_hamiltonian_is_constant(rng):
    R0 = rng.normal(size=9)
    traj = integrate(lambda R: np.zeros_like(R), R0, 0.1, 20)
    assert np.array_equal(traj.states, np.broadcast_to(R0, traj.states.shape))


def test_integrate_errors():
    with pytest.raises(DomainError):
        integrate(lambda R: R, np.ones(3), 0.0, 5)
    with pytest.raises(DomainError):
        integrate(lambda R: R, np.ones(3), 0.1, 0)
    with pytest.raises(IntegrationError):
        with np.errstate(over="ignore", invalid="ignore"):
            integrate(lambda R: R ** 8, np.full(3, 10.0), 1.0, 10)


def test_integrate_keeps_state_type():
    b = hermitian_basis("1/2")
    st0 = density_to_bloch(np.diag([1.0, 0.0]), b)
    traj = integrate(lambda R: np.zeros_like(R), st0, 0.5, 2)
    assert traj.spins == (b.spin,)
    assert isinstance(traj.state(1), BlochState1)


@pytest.mark.parametrize("spin", ["1/2", "1", "3/2"])
def test_one_qudit_conservation_and_oracle(spin, rng, backend):
    b, t = hermitian_basis(spin), build_tables(spin)
    h = rng.normal(size=len(b))
    rho0 = random_density(rng, b.dim)
    traj = integrate(lambda R: deriv_one_qudit(R, h, t), density_to_bloch(rho0, b), 1e-3, 3000)
    ref = oracle_trajectory(rho0, reconstruct_hamiltonian(h, b), traj.times[::100])
    ref_R = np.array([density_to_bloch(r, b).R for r in ref])
    assert np.abs(traj.states[::100] - ref_R).max() < 1e-6
    assert np.abs(traj.lengths - traj.lengths[0]).max() < 1e-8
    assert np.all(traj.states[:, 0] == traj.states[0, 0])


@pytest.mark.parametrize("s1, s2", [("1/2", "1/2"), ("1", "1/2"), ("1", "1")])
def test_two_qudit_conservation(s1, s2, rng):
    b1, b2 = hermitian_basis(s1), hermitian_basis(s2)
    t1, t2 = build_tables(s1), build_tables(s2)
    h = rng.normal(size=(len(b1), len(b2)))
    rho0 = random_density(rng, b1.dim * b2.dim)
    traj = integrate(lambda R: deriv_two_qudit(R, h, t1, t2),
                     density_to_bloch2(rho0, b1, b2), 1e-3, 2000)
    assert np.abs(traj.lengths - traj.lengths[0]).max() < 1e-8
    assert np.all(traj.states[:, 0, 0] == traj.states[0, 0, 0])
    assert bloch_length(traj.state(5)) == pytest.approx(traj.lengths[5])


def test_product_state_local_hamiltonian_stays_product(rng):
    b1, b2 = hermitian_basis(1), hermitian_basis("1/2")
    t1, t2 = build_tables(1), build_tables("1/2")
    h = np.zeros((9, 4))
    h[1:, 0] = rng.normal(size=8)
    h[0, 1:] = rng.normal(size=3)
    rho0 = np.kron(random_density(rng, 3), random_density(rng, 2))
    traj = integrate(lambda R: deriv_two_qudit(R, h, t1, t2),
                     density_to_bloch2(rho0, b1, b2), 1e-3, 3000)
    for R in traj.states[::300]:
        assert np.abs(R[1:, 1:] - np.outer(R[1:, 0], R[0, 1:])).max() < 1e-6


# -- Hamiltonian coefficients and the oracle -------------------------------------------

def test_decompose_examples():
    b = hermitian_basis("1/2")
    w = 0.8
    # H = w S_z = (w/2) sigma_z gives h_3 = 2w under H = h_b C_b / 2
    h = decompose_hamiltonian(w * SZ_HALF, b).h
    assert np.allclose(h, [0, 0, 0, 2 * w], atol=1e-15)
    b1 = hermitian_basis(1)
    H = np.kron(b1[5], b[2])
    hm = decompose_hamiltonian(H, (b1, b)).h
    want = np.zeros((9, 4))
    want[5, 2] = 2
    assert np.abs(hm - want).max() < 1e-12


@pytest.mark.parametrize("spin", ["1/2", "3/2", "2"])
def test_decompose_round_trip(spin, rng):
    b = hermitian_basis(spin)
    H = _random_hermitian(rng, b.dim)
    h = decompose_hamiltonian(H, b)
    assert np.abs(reconstruct_hamiltonian(h, b) - H).max() < 1e-12
    b2 = hermitian_basis("1/2")
    H2 = _random_hermitian(rng, b.dim * 2)
    assert np.abs(reconstruct_hamiltonian(decompose_hamiltonian(H2, (b, b2)), (b, b2))
                  - H2).max() < 1e-12


def test_decompose_errors():
    b = hermitian_basis("1/2")
    with pytest.raises(DomainError):
        decompose_hamiltonian(np.array([[0, 1], [0, 0]]), b)
    with pytest.raises(DomainError):
        decompose_hamiltonian(np.eye(3), b)


def test_oracle_properties(rng):
    H = _random_hermitian(rng, 4)
    rho0 = random_density(rng, 4)
    assert np.abs(oracle_evolve(rho0, H, 0.0) - rho0).max() < 1e-14
    rho = oracle_evolve(rho0, H, 3.7)
    assert np.abs(rho - rho.conj().T).max() < 1e-10
    assert abs(np.trace(rho) - 1) < 1e-10
    assert np.abs(np.linalg.eigvalsh(rho) - np.linalg.eigvalsh(rho0)).max() < 1e-10
    # a state commuting with H does not move
    w, V = np.linalg.eigh(H)
    still = V @ np.diag([0.4, 0.3, 0.2, 0.1]) @ V.conj().T
    assert np.abs(oracle_evolve(still, H, 5.0) - still).max() < 1e-12
    traj = oracle_trajectory(rho0, H, [0.0, 3.7])
    assert np.abs(traj[1] - rho).max() < 1e-12


def test_oracle_qubit_precession():
    b = hermitian_basis("1/2")
    H = 0.5 * 2.0 * b[3]
    rho0 = bloch_to_density(np.array([1.0, 1.0, 0, 0]), b)
    for t in (0.3, 1.0, 7.5):
        R = density_to_bloch(oracle_evolve(rho0, H, t), b).R
        assert np.allclose(R[1:3], [np.cos(t), np.sin(t)], atol=1e-12)
    assert np.isclose(SZ_HALF[0, 0], b[3][0, 0].real)
