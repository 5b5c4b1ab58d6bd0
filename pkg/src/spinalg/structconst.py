"""Antisymmetric (e) and symmetric (g) structure constants of su(2S+1).

Three independent routes are provided:

* closed forms in 3jm/6j symbols (:func:`e_analytic`, :func:`g_analytic`);
* trace definitions over explicit matrices (:func:`e_trace`, :func:`g_trace`);
* the three-tensor-operator trace identity (:func:`triple_trace`), which
  the closed forms are built on.

:func:`build_tables` sweeps all index triples with either route and stores
the nonzero values in a :class:`StructureTables`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations

import numpy as np

from . import _kernels
from .errors import ConsistencyError, DomainError
from .exact import HalfInt, SqrtRational
from .spinbasis import BasisLabel, BasisSet, hermitian_basis, parse_spin
from .wigner import _six_j2, _three_jm2

__all__ = [
    "StructureTables",
    "pattern_class",
    "coefficient_F",
    "e_analytic",
    "g_analytic",
    "e_trace",
    "g_trace",
    "triple_trace",
    "build_tables",
    "reconstruct_product",
    "SPARSITY",
]

SPARSITY = 1e-14
_IMAG_TOL = 1e-12

E_CLASSES = {"XXY": "e_XXY", "YYY": "e_YYY", "XYZ": "e_XYZ"}
G_CLASSES = {"XXX": "g_XXX", "XYY": "g_XYY", "XXZ": "g_XXZ", "YYZ": "g_YYZ",
             "ZZZ": "g_ZZZ"}
_KIND_RANK = {"X": 0, "Y": 1, "Z": 2}


def pattern_class(kinds, which: str) -> str:
    """Formula name for the multiset of kinds, or ``"vanishes"``."""
    key = "".join(sorted(kinds, key=_KIND_RANK.__getitem__))
    table = E_CLASSES if which == "e" else G_CLASSES
    return table.get(key, "vanishes")


def _parity(perm) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def _tj(k: int, q: int, kp: int, qp: int, kpp: int, qpp: int) -> SqrtRational:
    return _three_jm2(2 * k, 2 * kp, 2 * kpp, 2 * q, 2 * qp, 2 * qpp)


def _ph(q: int) -> int:
    return -1 if q % 2 else 1


@lru_cache(maxsize=None)
def _F_exact(k: int, kp: int, kpp: int, two_s: int) -> SqrtRational:
    sixj = _six_j2(2 * k, 2 * kp, 2 * kpp, two_s, two_s, two_s)
    s = Fraction(two_s, 2)
    rad = s * (s + 1) * (two_s + 1) * (2 * k + 1) * (2 * kp + 1) * (2 * kpp + 1) / 3
    return SqrtRational(_ph(two_s), rad) * sixj


def coefficient_F(k, kp, kpp, spin) -> float:
    """Common prefactor of every closed-form structure constant.

    ``(-1)^(2S)/sqrt(3) * sqrt(S(S+1)(2S+1)(2k+1)(2k'+1)(2k''+1)) * {k k' k''; S S S}``
    """
    s = parse_spin(spin)
    ranks = []
    for r in (k, kp, kpp):
        r = HalfInt.of(r)
        if not r.is_integer or not 1 <= int(r) <= s.twice:
            raise DomainError(f"rank {r} outside 1..2S for S = {s}")
        ranks.append(int(r))
    return float(_F_exact(*ranks, s.twice))


def _check_labels(spin: HalfInt, labels) -> list[BasisLabel]:
    out = []
    for lab in labels:
        if isinstance(lab, str):
            lab = BasisLabel.parse(lab)
        if lab.kind == "U":
            raise DomainError("structure constants are defined on traceless elements only")
        if not lab.valid_for(spin):
            raise DomainError(f"label {lab} invalid for S = {spin}")
        out.append(lab)
    return out


def _canonical(labels):
    """Sort labels into formula order (X < Y < Z, then k, q); return parity too."""
    order = sorted(range(3), key=lambda i: (_KIND_RANK[labels[i].kind], labels[i].k, labels[i].q))
    return [labels[i] for i in order], _parity(order)


_HALF = SqrtRational(1, Fraction(1, 2))


def _terms(F: SqrtRational, *terms) -> float:
    # each term F * (+-1) * 3jm is an exact signed root; round once per term
    return sum(float(F * sign * tj) for sign, tj in terms)


def _e_formula(a: BasisLabel, b: BasisLabel, c: BasisLabel, two_s: int) -> float:
    k, q, kp, qp, kpp, qpp = a.k, a.q, b.k, b.q, c.k, c.q
    F = _F_exact(k, kp, kpp, two_s)
    if F.is_zero:
        return 0.0
    kinds = a.kind + b.kind + c.kind
    if kinds == "XXY":
        return _terms(-F * _HALF,
                      (_ph(q), _tj(k, q, kp, -qp, kpp, -qpp)),
                      (_ph(qp), _tj(k, -q, kp, qp, kpp, -qpp)),
                      (_ph(qpp), _tj(k, q, kp, qp, kpp, -qpp)))
    if kinds == "YYY":
        return _terms(F * _HALF,
                      (_ph(q), _tj(k, -q, kp, qp, kpp, qpp)),
                      (_ph(qp), _tj(k, q, kp, -qp, kpp, qpp)),
                      (_ph(qpp), _tj(k, q, kp, qp, kpp, -qpp)))
    if kinds == "XYZ":
        return _terms(-F, (_ph(q), _tj(k, q, kp, -qp, kpp, 0)))
    raise AssertionError(kinds)


def _g_formula(a: BasisLabel, b: BasisLabel, c: BasisLabel, two_s: int) -> float:
    k, q, kp, qp, kpp, qpp = a.k, a.q, b.k, b.q, c.k, c.q
    F = _F_exact(k, kp, kpp, two_s)
    if F.is_zero:
        return 0.0
    kinds = a.kind + b.kind + c.kind
    if kinds == "XXX":
        return _terms(F * _HALF,
                      (_ph(q), _tj(k, q, kp, -qp, kpp, -qpp)),
                      (_ph(qp), _tj(k, -q, kp, qp, kpp, -qpp)),
                      (_ph(qpp), _tj(k, q, kp, qp, kpp, -qpp)))
    if kinds == "XYY":
        return _terms(F * _HALF,
                      (-_ph(q), _tj(k, q, kp, -qp, kpp, -qpp)),
                      (_ph(qp), _tj(k, -q, kp, qp, kpp, -qpp)),
                      (_ph(qpp), _tj(k, -q, kp, -qp, kpp, qpp)))
    if kinds in ("XXZ", "YYZ"):
        return _terms(F, (_ph(q), _tj(k, q, kp, -qp, kpp, 0)))
    if kinds == "ZZZ":
        # q = 0 for Z elements, so the (-1)^q factor is +1
        return _terms(F, (1, _tj(k, 0, kp, 0, kpp, 0)))
    raise AssertionError(kinds)


def e_analytic(spin, li, lj, lk) -> float:
    """Antisymmetric structure constant e_ijk from the closed forms."""
    s = parse_spin(spin)
    labels = _check_labels(s, (li, lj, lk))
    if (labels[0].k + labels[1].k + labels[2].k) % 2 == 0:
        return 0.0
    if labels[0] == labels[1] or labels[1] == labels[2] or labels[0] == labels[2]:
        return 0.0
    if pattern_class([lab.kind for lab in labels], "e") == "vanishes":
        return 0.0
    ordered, sign = _canonical(labels)
    return sign * _e_formula(*ordered, s.twice)


def g_analytic(spin, li, lj, lk) -> float:
    """Symmetric structure constant g_ijk from the closed forms."""
    s = parse_spin(spin)
    labels = _check_labels(s, (li, lj, lk))
    if (labels[0].k + labels[1].k + labels[2].k) % 2 == 1:
        return 0.0
    if pattern_class([lab.kind for lab in labels], "g") == "vanishes":
        return 0.0
    ordered, _ = _canonical(labels)
    return _g_formula(*ordered, s.twice)


def _check_mats(*mats):
    shape = mats[0].shape
    if len(shape) != 2 or shape[0] != shape[1] or any(m.shape != shape for m in mats):
        raise DomainError("matrices must be square and of equal dimension")


def _real(z: complex) -> float:
    if abs(z.imag) > _IMAG_TOL:
        raise ConsistencyError(f"imaginary residue {z.imag:.3e} in a real structure constant")
    return float(z.real)


def e_trace(ci, cj, ck, c: float) -> float:
    """e_ijk = Tr([C_i, C_j] C_k) / (2ic)."""
    ci, cj, ck = (np.asarray(m) for m in (ci, cj, ck))
    _check_mats(ci, cj, ck)
    z = np.trace((ci @ cj - cj @ ci) @ ck) / (2j * c)
    return _real(complex(z))


def g_trace(ci, cj, ck, c: float) -> float:
    """g_ijk = Tr({C_i, C_j} C_k) / (2c)."""
    ci, cj, ck = (np.asarray(m) for m in (ci, cj, ck))
    _check_mats(ci, cj, ck)
    z = np.trace((ci @ cj + cj @ ci) @ ck) / (2 * c)
    return _real(complex(z))


def triple_trace(spin, kq1, kq2, kq3) -> complex:
    """Tr(T_{k,q} T_{k',q'} T_{k'',q''}) via one 6j and one 3jm symbol."""
    s = parse_spin(spin)
    (k, q), (kp, qp), (kpp, qpp) = [
        (int(HalfInt.of(a)), int(HalfInt.of(b))) for a, b in (kq1, kq2, kq3)]
    for r, p in ((k, q), (kp, qp), (kpp, qpp)):
        if not 0 <= r <= s.twice or abs(p) > r:
            raise DomainError(f"need 0 <= k <= 2S and |q| <= k, got k={r}, q={p}")
    tj = _three_jm2(2 * k, 2 * kp, 2 * kpp, 2 * q, 2 * qp, 2 * qpp)
    sixj = _six_j2(2 * k, 2 * kp, 2 * kpp, s.twice, s.twice, s.twice)
    if tj.is_zero or sixj.is_zero:
        return 0j
    sign = _ph(s.twice + k + kp + kpp)
    d = s.twice + 1
    mag = math.sqrt(d ** 3 * (2 * k + 1) * (2 * kp + 1) * (2 * kpp + 1))
    return complex(sign * mag * float(sixj * tj))


@dataclass(eq=False)
class StructureTables:
    """Sparse e and g tables keyed by sorted traceless index triples.

    Lookups for unsorted triples apply the permutation sign for ``e`` and no
    sign for ``g``; absent keys are zero.
    """

    spin: HalfInt
    labels: tuple[BasisLabel, ...]
    e: dict[tuple[int, int, int], float]
    g: dict[tuple[int, int, int], float]
    method: str = "analytic"
    _packed: _kernels.Packed | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.labels) - 1

    @property
    def c(self) -> float:
        s = float(self.spin)
        return s * (s + 1) * (2 * s + 1) / 3

    def e_value(self, i: int, j: int, k: int) -> float:
        order = sorted(range(3), key=(i, j, k).__getitem__)
        key = tuple((i, j, k)[o] for o in order)
        v = self.e.get(key, 0.0)
        return v * _parity(order) if v else 0.0

    def g_value(self, i: int, j: int, k: int) -> float:
        return self.g.get(tuple(sorted((i, j, k))), 0.0)

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        """Full (n+1)^3 arrays; row/column 0 (the unit element) stays zero."""
        return self.packed().e, self.packed().g

    def packed(self) -> _kernels.Packed:
        if self._packed is None:
            self._packed = _pack(self)
        return self._packed

    def max_deviation(self, other: StructureTables) -> tuple[float, float]:
        """max |e - e'| and max |g - g'| over all stored keys of either table."""
        def dev(a, b):
            keys = set(a) | set(b)
            return max((abs(a.get(t, 0.0) - b.get(t, 0.0)) for t in keys), default=0.0)
        return dev(self.e, other.e), dev(self.g, other.g)


def _pack(tables: StructureTables) -> _kernels.Packed:
    m = tables.n + 1
    dense = {}
    coo = {}
    for name, store, antisym in (("e", tables.e, True), ("g", tables.g, False)):
        arr = np.zeros((m, m, m))
        idx, val = [], []
        for key, v in store.items():
            seen = set()
            for perm in permutations(range(3)):
                t = tuple(key[p] for p in perm)
                if t in seen:
                    continue
                seen.add(t)
                w = v * _parity(perm) if antisym else v
                arr[t] = w
                idx.append(t)
                val.append(w)
        dense[name] = arr
        coo[name] = (np.array(idx, dtype=np.int64).reshape(-1, 3),
                     np.array(val, dtype=np.float64))
    return _kernels.Packed(coo["e"][0], coo["e"][1], coo["g"][0], coo["g"][1],
                           dense["e"], dense["g"])


def _sorted_triples(n: int):
    return combinations_with_replacement(range(1, n + 1), 3)


def build_tables(spin, method: str = "analytic", threads: int | None = None) -> StructureTables:
    """Sweep all sorted triples 1 <= i <= j <= k <= n and keep |v| > 1e-14.

    ``method`` is ``"analytic"`` (closed forms) or ``"trace"`` (trace
    definitions evaluated on the explicit basis). ``threads`` only affects the
    accelerated trace kernel. Results are memoized per (spin, method) and
    must be treated as read-only.
    """
    if method not in ("analytic", "trace"):
        raise DomainError(f"unknown method {method!r}; expected 'analytic' or 'trace'")
    _kernels.set_threads(threads)
    return _build_tables2(parse_spin(spin).twice, method)


@lru_cache(maxsize=32)
def _build_tables2(two_s: int, method: str) -> StructureTables:
    basis = hermitian_basis(HalfInt(two_s))
    e: dict = {}
    g: dict = {}
    if method == "analytic":
        labels = basis.labels
        for i, j, k in _sorted_triples(basis.n):
            li, lj, lk = labels[i], labels[j], labels[k]
            ev = e_analytic(basis.spin, li, lj, lk)
            gv = g_analytic(basis.spin, li, lj, lk)
            if abs(ev) > SPARSITY:
                e[(i, j, k)] = ev
            if abs(gv) > SPARSITY:
                g[(i, j, k)] = gv
    else:
        T = _kernels.backend().triple_traces(basis.matrices[1:])
        c = basis.norm
        # Tr([Ci,Cj]Ck) = T_ijk - T_jik,  Tr({Ci,Cj}Ck) = T_ijk + T_jik
        Tt = T.transpose(1, 0, 2)
        ez = (T - Tt) / (2j * c)
        gz = (T + Tt) / (2 * c)
        worst = max(np.abs(ez.imag).max(), np.abs(gz.imag).max())
        if worst > _IMAG_TOL:
            raise ConsistencyError(f"imaginary residue {worst:.3e} in trace sweep")
        for i, j, k in _sorted_triples(basis.n):
            ev = ez[i - 1, j - 1, k - 1].real
            gv = gz[i - 1, j - 1, k - 1].real
            if abs(ev) > SPARSITY:
                e[(i, j, k)] = float(ev)
            if abs(gv) > SPARSITY:
                g[(i, j, k)] = float(gv)
    return StructureTables(basis.spin, basis.labels, e, g, method)


def reconstruct_product(i: int, j: int, tables: StructureTables, basis: BasisSet) -> np.ndarray:
    """(c/d) E delta_ij + sum_k (g_ijk + i e_ijk) C_k."""
    n = basis.n
    if not (1 <= i <= n and 1 <= j <= n):
        raise DomainError(f"indices must lie in 1..{n}")
    out = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    if i == j:
        out += (basis.norm / basis.dim) * np.eye(basis.dim)
    for k in range(1, n + 1):
        z = tables.g_value(i, j, k) + 1j * tables.e_value(i, j, k)
        if z != 0:
            out += z * basis.matrices[k]
    return out


def clear_caches() -> None:
    """Drop memoized tables and symbols (for cold-start timing)."""
    from . import spinbasis, wigner

    _build_tables2.cache_clear()
    spinbasis._hermitian_basis2.cache_clear()
    spinbasis._tensor_operator2.cache_clear()
    spinbasis._tensor_entries2.cache_clear()
    _F_exact.cache_clear()
    wigner._three_jm2.cache_clear()
    wigner._six_j2.cache_clear()
