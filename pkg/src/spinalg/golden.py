"""Published spin-1 (qutrit) reference data in the C_0..C_8 enumeration."""
import numpy as np

_r2 = np.sqrt(2.0)
_r3 = np.sqrt(3.0)

SPIN1_MATRICES = np.array([
    np.sqrt(2 / 3) * np.eye(3),
    np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]) / _r2,
    1j / _r2 * np.array([[0, -1, 0], [1, 0, -1], [0, 1, 0]]),
    np.diag([1.0, 0.0, -1.0]),
    1j * np.array([[0, 0, -1], [0, 0, 0], [1, 0, 0]]),
    1j / _r2 * np.array([[0, -1, 0], [1, 0, 1], [0, -1, 0]]),
    np.diag([1.0, -2.0, 1.0]) / _r3,
    np.array([[0, 1, 0], [1, 0, -1], [0, -1, 0]]) / _r2,
    np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
], dtype=np.complex128)


def gell_mann() -> np.ndarray:
    """lambda_1..lambda_8 stacked at indices 1..8 (index 0 is the identity)."""
    lam = np.zeros((9, 3, 3), dtype=np.complex128)
    lam[0] = np.eye(3)
    lam[1][0, 1] = lam[1][1, 0] = 1
    lam[2][0, 1], lam[2][1, 0] = -1j, 1j
    lam[3] = np.diag([1, -1, 0])
    lam[4][0, 2] = lam[4][2, 0] = 1
    lam[5][0, 2], lam[5][2, 0] = -1j, 1j
    lam[6][1, 2] = lam[6][2, 1] = 1
    lam[7][1, 2], lam[7][2, 1] = -1j, 1j
    lam[8] = np.diag([1, 1, -2]) / _r3
    return lam


# C_a in terms of Gell-Mann matrices: a -> {lambda index: coefficient}
GELL_MANN_MAP = {
    1: {1: 1 / _r2, 6: 1 / _r2},
    2: {2: 1 / _r2, 7: 1 / _r2},
    3: {3: 0.5, 8: _r3 / 2},
    4: {5: 1.0},
    5: {2: 1 / _r2, 7: -1 / _r2},
    6: {3: _r3 / 2, 8: -0.5},
    7: {1: 1 / _r2, 6: -1 / _r2},
    8: {4: 1.0},
}

# nonzero constants as listed (one representative ordering each)
SPIN1_E = {
    (1, 2, 3): 0.5, (1, 5, 8): 0.5, (2, 5, 4): 0.5, (2, 7, 8): 0.5,
    (3, 7, 5): 0.5, (4, 7, 1): 0.5,
    (1, 5, 6): _r3 / 2, (6, 7, 2): _r3 / 2,
    (3, 4, 8): -1.0,
}

SPIN1_G = {
    (3, 3, 6): 1 / _r3, (4, 4, 6): 1 / _r3, (6, 6, 6): -1 / _r3, (6, 8, 8): 1 / _r3,
    (5, 5, 6): -1 / (2 * _r3), (1, 1, 6): -1 / (2 * _r3),
    (2, 2, 6): -1 / (2 * _r3), (6, 7, 7): -1 / (2 * _r3),
    (2, 3, 5): 0.5, (1, 1, 8): 0.5, (5, 5, 8): 0.5, (1, 2, 4): 0.5, (1, 3, 7): 0.5,
    (2, 2, 8): -0.5, (7, 7, 8): -0.5, (4, 7, 5): -0.5,
}
