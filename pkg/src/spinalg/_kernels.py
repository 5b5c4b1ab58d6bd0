"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The numba backend is used when numba imports and ``SPINALG_DISABLE_JIT`` is
unset (or ``0``). Both backends expose the same functions:

``triple_traces(mats)``
    complex tensor ``T[i, j, k] = Tr(C_i C_j C_k)``.
``one_qudit_rhs(pk, h, R)``
    ``dR_l = sum_ij e_ijl h_i R_j``.
``two_qudit_rhs(pk1, pk2, h, R, s1, s2)``
    derivative of the two-qudit coefficient matrix.

``pk`` arguments are :class:`Packed` tables: the numba kernels walk the
sparse (index, value) lists, the numpy ones contract the dense arrays.
"""
from __future__ import annotations

import os
from types import SimpleNamespace
from typing import NamedTuple

import numpy as np

try:
    import numba
    from numba import njit, prange
    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the system TBB is too old for numba and only produces warnings
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None
    HAVE_NUMBA = False


class Packed(NamedTuple):
    """Structure constants of one spin, over basis indices 0..n (0 is unused)."""

    e_idx: np.ndarray  # (nnz, 3) int64, every permutation of every stored triple
    e_val: np.ndarray
    g_idx: np.ndarray
    g_val: np.ndarray
    e: np.ndarray      # dense (n+1, n+1, n+1)
    g: np.ndarray


def jit_disabled() -> bool:
    return os.environ.get("SPINALG_DISABLE_JIT", "0").strip().lower() not in ("", "0", "false", "no")


# -- numpy -----------------------------------------------------------------

def _np_triple_traces(mats):
    return np.einsum("iab,jbc,kca->ijk", mats, mats, mats, optimize=True)


def _np_one_qudit_rhs(pk, h, R):
    return np.einsum("ijl,i,j->l", pk.e, h, R)


def _np_two_qudit_rhs(pk1, pk2, h, R, s1, s2):
    e1, g1, e2, g2 = pk1.e, pk1.g, pk2.e, pk2.g
    out = np.empty_like(R)
    out[0, 0] = 0.0
    # Greek sums over the full index range collapse the 0 / Latin split
    out[1:, 0] = s2 * np.einsum("pim,pi->m", e1, h @ R.T)[1:]
    out[0, 1:] = s1 * np.einsum("pim,pi->m", e2, h.T @ R)[1:]

    a = s2 * (np.einsum("pn,i->pin", h, R[:, 0]) + np.einsum("p,in->pin", h[:, 0], R))
    a += np.einsum("il,pln->pin", R, np.tensordot(h, g2, axes=(1, 0)))
    b = s1 * (np.einsum("mp,i->pim", h, R[0, :]) + np.einsum("p,mi->pim", h[0, :], R))
    b += np.einsum("lmp,li->pim", np.einsum("rlm,rp->lmp", g1, h), R)
    full = np.einsum("pim,pin->mn", e1, a) + np.einsum("pin,pim->mn", e2, b)
    out[1:, 1:] = full[1:, 1:]
    return out


numpy_backend = SimpleNamespace(
    name="numpy",
    triple_traces=_np_triple_traces,
    one_qudit_rhs=_np_one_qudit_rhs,
    two_qudit_rhs=_np_two_qudit_rhs,
)


# -- numba -----------------------------------------------------------------

if HAVE_NUMBA:

    @njit(parallel=True, cache=True)
    def _nb_triple_traces_kernel(mats):
        m, d, _ = mats.shape
        out = np.zeros((m, m, m), dtype=np.complex128)
        for i in prange(m):
            prod = np.empty((d, d), dtype=np.complex128)
            for j in range(m):
                for a in range(d):
                    for c in range(d):
                        acc = 0j
                        for b in range(d):
                            acc += mats[i, a, b] * mats[j, b, c]
                        prod[a, c] = acc
                for k in range(m):
                    acc = 0j
                    for a in range(d):
                        for c in range(d):
                            acc += prod[a, c] * mats[k, c, a]
                    out[i, j, k] = acc
        return out

    @njit(cache=True)
    def _nb_one_qudit_kernel(e_idx, e_val, h, R):
        out = np.zeros_like(R)
        for t in range(e_val.shape[0]):
            out[e_idx[t, 2]] += e_val[t] * h[e_idx[t, 0]] * R[e_idx[t, 1]]
        return out

    @njit(cache=True)
    def _nb_two_qudit_kernel(e1_idx, e1_val, g1_idx, g1_val,
                             e2_idx, e2_val, g2_idx, g2_val, h, R, s1, s2):
        n1 = R.shape[0]
        n2 = R.shape[1]
        out = np.zeros_like(R)

        # G2[p, i, n] = sum_rl g2_rln h_pr R_il
        G2 = np.zeros((n1, n1, n2))
        for t in range(g2_val.shape[0]):
            r, l, n = g2_idx[t, 0], g2_idx[t, 1], g2_idx[t, 2]
            w = g2_val[t]
            for p in range(1, n1):
                hw = w * h[p, r]
                if hw != 0.0:
                    for i in range(1, n1):
                        G2[p, i, n] += hw * R[i, l]
        # G1[p, i, m] = sum_rl g1_rlm h_rp R_li
        G1 = np.zeros((n2, n2, n1))
        for t in range(g1_val.shape[0]):
            r, l, m = g1_idx[t, 0], g1_idx[t, 1], g1_idx[t, 2]
            w = g1_val[t]
            for p in range(1, n2):
                hw = w * h[r, p]
                if hw != 0.0:
                    for i in range(1, n2):
                        G1[p, i, m] += hw * R[l, i]

        for t in range(e1_val.shape[0]):
            p, i, m = e1_idx[t, 0], e1_idx[t, 1], e1_idx[t, 2]
            v = e1_val[t]
            acc = 0.0
            for b in range(n2):
                acc += h[p, b] * R[i, b]
            out[m, 0] += s2 * v * acc
            for n in range(1, n2):
                out[m, n] += v * (s2 * (h[p, n] * R[i, 0] + h[p, 0] * R[i, n]) + G2[p, i, n])

        for t in range(e2_val.shape[0]):
            p, i, n = e2_idx[t, 0], e2_idx[t, 1], e2_idx[t, 2]
            v = e2_val[t]
            acc = 0.0
            for a in range(n1):
                acc += h[a, p] * R[a, i]
            out[0, n] += s1 * v * acc
            for m in range(1, n1):
                out[m, n] += v * (s1 * (h[m, p] * R[0, i] + h[0, p] * R[m, i]) + G1[p, i, m])
        return out

    def _nb_triple_traces(mats):
        return _nb_triple_traces_kernel(np.ascontiguousarray(mats, dtype=np.complex128))

    def _nb_one_qudit_rhs(pk, h, R):
        return _nb_one_qudit_kernel(pk.e_idx, pk.e_val, h, R)

    def _nb_two_qudit_rhs(pk1, pk2, h, R, s1, s2):
        return _nb_two_qudit_kernel(pk1.e_idx, pk1.e_val, pk1.g_idx, pk1.g_val,
                                    pk2.e_idx, pk2.e_val, pk2.g_idx, pk2.g_val,
                                    h, R, float(s1), float(s2))

    numba_backend = SimpleNamespace(
        name="numba",
        triple_traces=_nb_triple_traces,
        one_qudit_rhs=_nb_one_qudit_rhs,
        two_qudit_rhs=_nb_two_qudit_rhs,
    )
else:  # pragma: no cover
    numba_backend = None


def backend():
    """The backend selected by the environment."""
    if HAVE_NUMBA and not jit_disabled():
        return numba_backend
    return numpy_backend


def set_threads(n: int | None) -> None:
    """Limit numba's worker pool; a no-op on the numpy path."""
    if n is None or not HAVE_NUMBA:
        return
    numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))
