import os
import subprocess
import sys

import numpy as np
import pytest

from spinalg import _kernels, build_tables, hermitian_basis
from spinalg.dynamics import deriv_one_qudit, deriv_two_qudit

needs_numba = pytest.mark.skipif(_kernels.numba_backend is None, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("spin", ["1/2", "1", "3/2", "2"])
def test_triple_traces_agree(spin):
    mats = hermitian_basis(spin).matrices[1:]
    a = _kernels.numpy_backend.triple_traces(mats)
    b = _kernels.numba_backend.triple_traces(mats)
    assert np.abs(a - b).max() < 1e-13


@needs_numba
@pytest.mark.parametrize("spin", ["1/2", "1", "3/2", "2"])
def test_one_qudit_rhs_agree(spin, rng):
    pk = build_tables(spin).packed()
    m = pk.e.shape[0]
    h, R = rng.normal(size=m), rng.normal(size=m)
    a = _kernels.numpy_backend.one_qudit_rhs(pk, h, R)
    b = _kernels.numba_backend.one_qudit_rhs(pk, h, R)
    assert np.abs(a - b).max() < 1e-13


@needs_numba
@pytest.mark.parametrize("s1, s2", [("1/2", "1/2"), ("1", "1/2"), ("1", "1"), ("3/2", "1")])
def test_two_qudit_rhs_agree(s1, s2, rng):
    p1, p2 = build_tables(s1).packed(), build_tables(s2).packed()
    shape = (p1.e.shape[0], p2.e.shape[0])
    h, R = rng.normal(size=shape), rng.normal(size=shape)
    a = _kernels.numpy_backend.two_qudit_rhs(p1, p2, h, R, 0.7, 0.4)
    b = _kernels.numba_backend.two_qudit_rhs(p1, p2, h, R, 0.7, 0.4)
    assert np.abs(a - b).max() < 1e-12


def test_packed_expands_permutations():
    t = build_tables(1)
    pk = t.packed()
    e, g = pk.e, pk.g
    assert np.allclose(e, -e.transpose(1, 0, 2)) and np.allclose(e, -e.transpose(0, 2, 1))
    assert np.allclose(g, g.transpose(1, 0, 2)) and np.allclose(g, g.transpose(2, 1, 0))
    assert np.all(e[0] == 0) and np.all(g[:, 0] == 0)
    dense = np.zeros_like(e)
    dense[tuple(pk.e_idx.T)] = pk.e_val
    assert np.array_equal(dense, e)


def test_derivatives_use_selected_backend(backend, rng):
    t = build_tables(1)
    h, R = rng.normal(size=9), rng.normal(size=9)
    d = deriv_one_qudit(R, h, t)
    assert np.allclose(d, np.einsum("ijl,i,j->l", t.packed().e, h, R), atol=1e-13)
    t2 = build_tables("1/2")
    H, R2 = rng.normal(size=(9, 4)), rng.normal(size=(9, 4))
    out = deriv_two_qudit(R2, H, t, t2)
    assert out[0, 0] == 0.0


@pytest.mark.parametrize("value, disabled", [
    ("1", True), ("yes", True), ("0", False), ("", False), ("false", False)])
def test_env_flag(monkeypatch, value, disabled):
    monkeypatch.setenv("SPINALG_DISABLE_JIT", value)
    assert _kernels.jit_disabled() is disabled
    if disabled or _kernels.numba_backend is None:
        assert _kernels.backend() is _kernels.numpy_backend
    else:
        assert _kernels.backend() is _kernels.numba_backend


def test_env_flag_in_fresh_process():
    env = dict(os.environ, SPINALG_DISABLE_JIT="1")
    out = subprocess.run([sys.executable, "-c",
                          "from spinalg import _kernels; print(_kernels.backend().name)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_set_threads_is_safe():
    _kernels.set_threads(None)
    _kernels.set_threads(1)
    _kernels.set_threads(10_000)
