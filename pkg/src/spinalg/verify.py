"""Property suites driven by ``spinalg verify``.

Each suite returns a list of :class:`Check` results; nothing here raises on
a failed property, only on invalid arguments.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from . import golden
from .dynamics import (density_to_bloch, density_to_bloch2, deriv_one_qudit,
                       deriv_two_qudit, integrate, oracle_trajectory, reconstruct_hamiltonian)
from .errors import DomainError
from .exact import HalfInt
from .spinbasis import appendix_permutation, hermitian_basis, spin_operators, tensor_operator
from .structconst import (build_tables, e_analytic, e_trace, g_analytic, g_trace,
                          pattern_class, reconstruct_product, triple_trace)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  {self.detail}".rstrip()


def _le(name: str, value: float, tol: float) -> Check:
    return Check(name, bool(value < tol), f"max={value:.3e} tol={tol:g}")


def suite_appendix(spin, spin2=None) -> list[Check]:
    if HalfInt.of(spin).twice != 2:
        raise DomainError("the appendix suite applies to S = 1 only")
    basis = hermitian_basis(1)
    perm = appendix_permutation(1)
    inv = {v: k for k, v in perm.items()}
    out = [_le("appendix matrices", max(
        np.abs(basis[c] - golden.SPIN1_MATRICES[a]).max() for c, a in perm.items()), 1e-12)]
    lam = golden.gell_mann()
    dev = max(np.abs(sum(c * lam[i] for i, c in m.items()) - golden.SPIN1_MATRICES[a]).max()
              for a, m in golden.GELL_MANN_MAP.items())
    out.append(_le("Gell-Mann correspondence", dev, 1e-12))
    for method in ("analytic", "trace"):
        t = build_tables(1, method)
        e_dev = max(abs(t.e_value(*(inv[x] for x in key)) - v) for key, v in golden.SPIN1_E.items())
        g_dev = max(abs(t.g_value(*(inv[x] for x in key)) - v) for key, v in golden.SPIN1_G.items())
        e_keys = {tuple(sorted(perm[i] for i in key)) for key in t.e}
        g_keys = {tuple(sorted(perm[i] for i in key)) for key in t.g}
        out.append(_le(f"appendix e values ({method})", e_dev, 1e-12))
        out.append(_le(f"appendix g values ({method})", g_dev, 1e-12))
        out.append(Check(f"appendix e support ({method})",
                         e_keys == {tuple(sorted(k)) for k in golden.SPIN1_E},
                         f"{len(e_keys)} entries"))
        out.append(Check(f"appendix g support ({method})",
                         g_keys == {tuple(sorted(k)) for k in golden.SPIN1_G},
                         f"{len(g_keys)} entries"))
    return out


def suite_orthogonality(spin, spin2=None) -> list[Check]:
    basis = hermitian_basis(spin)
    s, d = basis.spin, basis.dim
    out = []
    ops = {(k, q): tensor_operator(s, k, q)
           for k in range(s.twice + 1) for q in range(-k, k + 1)}
    dev = 0.0
    for (k, q), A in ops.items():
        for (kp, qp), B in ops.items():
            want = (-1) ** q * d if (k == kp and q == -qp) else 0.0
            dev = max(dev, abs(np.trace(A @ B) - want))
    out.append(_le("tensor operator orthogonality", dev, 1e-12))
    gram = np.einsum("iab,jba->ij", basis.matrices, basis.matrices)
    out.append(_le("Gram matrix", np.abs(gram - basis.norm * np.eye(len(basis))).max(), 1e-12))
    mats = basis.matrices[1:]
    out.append(_le("hermiticity", np.abs(mats - mats.conj().transpose(0, 2, 1)).max(), 1e-12))
    out.append(_le("tracelessness", np.abs(np.trace(mats, axis1=1, axis2=2)).max(), 1e-12))
    zs = [basis[i] for i, lab in enumerate(basis.labels) if lab.kind == "Z"]
    off = max(np.abs(z - np.diag(np.diag(z))).max() for z in zs)
    comm = max(np.abs(a @ b - b @ a).max() for a in zs for b in zs)
    out.append(Check("Z elements diagonal and commuting", off == 0.0 and comm == 0.0,
                     f"offdiag={off:g} comm={comm:g}"))
    sx, sy, sz = spin_operators(s)
    out.append(_le("indices 1-3 are Sx, Sy, Sz",
                   max(np.abs(basis[1] - sx).max(), np.abs(basis[2] - sy).max(),
                       np.abs(basis[3] - sz).max()), 1e-12))
    return out


def suite_kparity(spin, spin2=None) -> list[Check]:
    basis = hermitian_basis(spin)
    labels, c = basis.labels, basis.norm
    exact_ok = True
    worst = 0.0
    for i, j, k in combinations_with_replacement(range(1, basis.n + 1), 3):
        K = labels[i].k + labels[j].k + labels[k].k
        if K % 2 == 0:
            exact_ok &= e_analytic(basis.spin, labels[i], labels[j], labels[k]) == 0.0
            worst = max(worst, abs(e_trace(basis[i], basis[j], basis[k], c)))
        else:
            exact_ok &= g_analytic(basis.spin, labels[i], labels[j], labels[k]) == 0.0
            worst = max(worst, abs(g_trace(basis[i], basis[j], basis[k], c)))
    return [Check("K-parity exact on analytic path", bool(exact_ok)),
            _le("K-parity on trace path", worst, 1e-12)]


def suite_patterns(spin, spin2=None) -> list[Check]:
    basis = hermitian_basis(spin)
    labels, c = basis.labels, basis.norm
    worst = 0.0
    for i, j, k in combinations_with_replacement(range(1, basis.n + 1), 3):
        kinds = [labels[x].kind for x in (i, j, k)]
        if pattern_class(kinds, "e") == "vanishes":
            worst = max(worst, abs(e_trace(basis[i], basis[j], basis[k], c)))
        if pattern_class(kinds, "g") == "vanishes":
            worst = max(worst, abs(g_trace(basis[i], basis[j], basis[k], c)))
    return [_le("vanishing pattern classes", worst, 1e-12)]


def suite_equivalence(spin, spin2=None) -> list[Check]:
    de, dg = build_tables(spin, "analytic").max_deviation(build_tables(spin, "trace"))
    return [_le("analytic vs trace (e)", de, 1e-10), _le("analytic vs trace (g)", dg, 1e-10)]


def suite_triple(spin, spin2=None) -> list[Check]:
    s = hermitian_basis(spin).spin
    kq = [(k, q) for k in range(s.twice + 1) for q in range(-k, k + 1)]
    ops = {x: tensor_operator(s, *x) for x in kq}
    worst = 0.0
    for a in kq:
        ab = {b: ops[a] @ ops[b] for b in kq}
        for b in kq:
            for c in kq:
                direct = np.trace(ab[b] @ ops[c])
                worst = max(worst, abs(triple_trace(s, a, b, c) - direct))
    return [_le("three-operator trace identity", worst, 1e-12)]


def suite_jacobi(spin, spin2=None) -> list[Check]:
    e, _ = build_tables(spin).dense()
    J = (np.einsum("ijm,mkl->ijkl", e, e) + np.einsum("jkm,mil->ijkl", e, e)
         + np.einsum("kim,mjl->ijkl", e, e))
    return [_le("Jacobi identity", float(np.abs(J).max()), 1e-10)]


def suite_closure(spin, spin2=None) -> list[Check]:
    basis = hermitian_basis(spin)
    t = build_tables(spin)
    worst = 0.0
    for i in range(1, basis.n + 1):
        for j in range(1, basis.n + 1):
            worst = max(worst, np.abs(reconstruct_product(i, j, t, basis) - basis[i] @ basis[j]).max())
    return [_le("product reconstruction", worst, 1e-10)]


def _random_density(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def _random_run(spin, spin2, seed=7, dt=1e-3, steps=10_000):
    rng = np.random.default_rng(seed)
    b1 = hermitian_basis(spin)
    t1 = build_tables(spin)
    if spin2 is None:
        h = rng.normal(size=len(b1))
        rho0 = _random_density(rng, b1.dim)
        traj = integrate(lambda R: deriv_one_qudit(R, h, t1), density_to_bloch(rho0, b1), dt, steps)
        orc = oracle_trajectory(rho0, reconstruct_hamiltonian(h, b1), traj.times)
        ref = np.array([density_to_bloch(r, b1).R for r in orc])
        return traj, ref
    b2 = hermitian_basis(spin2)
    t2 = build_tables(spin2)
    h = rng.normal(size=(len(b1), len(b2)))
    rho0 = _random_density(rng, b1.dim * b2.dim)
    traj = integrate(lambda R: deriv_two_qudit(R, h, t1, t2),
                     density_to_bloch2(rho0, b1, b2), dt, steps)
    orc = oracle_trajectory(rho0, reconstruct_hamiltonian(h, (b1, b2)), traj.times)
    ref = np.array([density_to_bloch2(r, b1, b2).R for r in orc])
    return traj, ref


def suite_conservation(spin, spin2=None) -> list[Check]:
    traj, _ = _random_run(spin, spin2)
    drift = float(np.abs(traj.lengths - traj.lengths[0]).max())
    return [_le("Bloch length drift", drift, 1e-8)]


def suite_oracle(spin, spin2=None) -> list[Check]:
    traj, ref = _random_run(spin, spin2)
    return [_le("real-form vs complex evolution", float(np.abs(traj.states - ref).max()), 1e-6)]


SUITES = {
    "appendix": suite_appendix,
    "orthogonality": suite_orthogonality,
    "kparity": suite_kparity,
    "patterns": suite_patterns,
    "equivalence": suite_equivalence,
    "triple": suite_triple,
    "jacobi": suite_jacobi,
    "closure": suite_closure,
    "conservation": suite_conservation,
    "oracle": suite_oracle,
}


def run_suites(names, spin, spin2=None) -> list[Check]:
    if "all" in names:
        names = [n for n in SUITES if n != "appendix" or HalfInt.of(spin).twice == 2]
    results = []
    for name in names:
        if name not in SUITES:
            raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
        results += SUITES[name](spin, spin2)
    return results

