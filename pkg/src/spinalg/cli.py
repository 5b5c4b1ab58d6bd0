"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import os
import re
import sys
import time

import numpy as np

from . import formats
from .dynamics import (bloch_to_density, bloch_to_density2, density_to_bloch, density_to_bloch2,
                       deriv_one_qudit, deriv_two_qudit, integrate, oracle_trajectory,
                       reconstruct_hamiltonian)
from .errors import ConsistencyError, DomainError
from .spinbasis import BasisLabel, hermitian_basis, parse_spin
from .structconst import build_tables
from .verify import SUITES, run_suites
from .wigner import six_j, three_jm

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
EQUIVALENCE_TOL = 1e-10
ORACLE_TOL = 1e-6

# argparse treats "-1/2" as an option flag unless told otherwise
_NEGATIVE = re.compile(r"^-\d+$|^-\d*\.\d+$|^-\d+/\d+$")


class UsageError(Exception):
    pass


def _spin(text: str):
    try:
        return parse_spin(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _threads(args) -> int | None:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("SPINALG_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"SPINALG_THREADS must be an integer, got {env!r}") from None
    return None


# -- coefficient input ------------------------------------------------------

def _split_terms(items: list[str]) -> list[str]:
    out = []
    for item in items:
        out += [t for t in re.split(r"[,\s]+", item) if t]
    return out


def _parse_key(key: str, bases) -> tuple[int, ...]:
    parts = key.split("*")
    if len(parts) != len(bases):
        want = "LABEL" if len(bases) == 1 else "LABEL1*LABEL2"
        raise UsageError(f"coefficient key {key!r} must have the form {want}")
    return tuple(b.index_of(BasisLabel.parse(p)) for p, b in zip(parts, bases))


def _coefficients(items: list[str], file: str | None, bases) -> np.ndarray:
    """Real coefficient array from ``KEY=VALUE`` terms and/or a JSON object file."""
    arr = np.zeros(tuple(len(b) for b in bases))
    pairs: list[tuple[str, float]] = []
    if file:
        with open(file, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise UsageError("coefficient file must hold a JSON object of label: value")
        pairs += [(str(k), float(v)) for k, v in data.items()]
    for term in _split_terms(items or []):
        key, sep, value = term.partition("=")
        if not sep:
            raise UsageError(f"coefficient {term!r} must look like KEY=VALUE")
        try:
            pairs.append((key, float(value)))
        except ValueError:
            raise UsageError(f"bad coefficient value in {term!r}") from None
    for key, value in pairs:
        arr[_parse_key(key, bases)] += value
    return arr


def _initial_state(items: list[str], bases) -> np.ndarray:
    if items:
        R = _coefficients(items, None, bases)
        origin = (0,) * len(bases)
        if R[origin] not in (0.0, 1.0):
            raise UsageError("the unit component of the initial state is fixed to 1")
        R[origin] = 1.0
        return R
    # default: every qudit in |S, m = S>
    rhos = []
    for b in bases:
        rho = np.zeros((b.dim, b.dim), dtype=np.complex128)
        rho[0, 0] = 1.0
        rhos.append(rho)
    if len(bases) == 1:
        return density_to_bloch(rhos[0], bases[0]).R
    return density_to_bloch2(np.kron(*rhos), *bases).R


# -- subcommands --------------------------------------------------------------

def cmd_wigner(args) -> int:
    if len(args.values) != 6:
        raise UsageError(f"{args.kind} needs exactly 6 numbers, got {len(args.values)}")
    fn = three_jm if args.kind == "3jm" else six_j
    val = fn(*args.values)
    if val.is_zero:
        print("0")
    else:
        print(f"{val} = {format(float(val), '.17g')}")
    return EXIT_OK


def cmd_basis(args) -> int:
    basis = hermitian_basis(args.spin)
    with _output(args.out) as fh:
        formats.write_basis(basis, fh, args.format)
    return EXIT_OK


def cmd_structconst(args) -> int:
    threads = _threads(args)
    primary = "trace" if args.method == "trace" else "analytic"
    tables = build_tables(args.spin, primary, threads=threads)
    with _output(args.out) as fh:
        formats.write_tables_csv(tables, fh)
    if args.method == "both":
        other = build_tables(args.spin, "trace", threads=threads)
        de, dg = tables.max_deviation(other)
        worst = max(de, dg)
        print(f"max |analytic - trace|: e {de:.3e}, g {dg:.3e}", file=sys.stderr)
        if worst > EQUIVALENCE_TOL:
            print(f"FAIL: deviation above {EQUIVALENCE_TOL:g}", file=sys.stderr)
            return EXIT_FAIL
    return EXIT_OK


def _evolve(args, spins) -> int:
    if args.dt <= 0 or args.steps < 1:
        raise UsageError("--dt must be positive and --steps at least 1")
    bases = [hermitian_basis(s) for s in spins]
    tables = [build_tables(s, threads=_threads(args)) for s in spins]
    h = _coefficients(args.h, args.h_file, bases)
    R0 = _initial_state(args.r0, bases)
    if len(spins) == 1:
        def rhs(R):
            return deriv_one_qudit(R, h, tables[0])
    else:
        def rhs(R):
            return deriv_two_qudit(R, h, tables[0], tables[1])

    start = time.perf_counter()
    traj = integrate(rhs, R0, args.dt, args.steps)
    traj.spins = tuple(spins)
    elapsed = time.perf_counter() - start
    drift = float(np.abs(traj.lengths - traj.lengths[0]).max())
    with _output(args.out) as fh:
        formats.write_trajectory(traj, fh, h, extra={"labels": [
            [str(lab) for lab in b.labels] for b in bases]})
    report = sys.stderr if args.out in (None, "-") else sys.stdout
    print(f"bloch length: initial {traj.lengths[0]:.12g}, final {traj.lengths[-1]:.12g}, "
          f"max drift {drift:.3e} ({args.steps} steps in {elapsed:.2f} s)", file=report)

    if args.oracle_check:
        if len(spins) == 1:
            rho0 = bloch_to_density(R0, bases[0])
            H = reconstruct_hamiltonian(h, bases[0])
            ref = [density_to_bloch(r, bases[0]).R for r in oracle_trajectory(rho0, H, traj.times)]
        else:
            rho0 = bloch_to_density2(R0, *bases)
            H = reconstruct_hamiltonian(h, tuple(bases))
            ref = [density_to_bloch2(r, *bases).R
                   for r in oracle_trajectory(rho0, H, traj.times)]
        dev = float(np.abs(np.array(ref) - traj.states).max())
        print(f"max |R - R_oracle|: {dev:.3e}", file=report)
        if dev > ORACLE_TOL:
            print(f"FAIL: oracle deviation above {ORACLE_TOL:g}", file=report)
            return EXIT_FAIL
    return EXIT_OK


def cmd_evolve1(args) -> int:
    return _evolve(args, [args.spin])


def cmd_evolve2(args) -> int:
    if args.spin2 is None:
        raise UsageError("evolve2 requires --spin2")
    return _evolve(args, [args.spin, args.spin2])


def cmd_verify(args) -> int:
    suites = args.suite or ["all"]
    ok = True
    for check in run_suites(suites, args.spin, args.spin2):
        print(check.line())
        ok &= check.passed
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spinalg",
                                description="su(2S+1) structure constants and qudit dynamics")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("wigner", help="exact 3jm / 6j symbols")
    w._negative_number_matcher = _NEGATIVE
    w.add_argument("kind", choices=["3jm", "6j"])
    w.add_argument("values", nargs="+")
    w.set_defaults(func=cmd_wigner)

    b = sub.add_parser("basis", help="write the Hermitian basis matrices")
    b.add_argument("--spin", type=_spin, required=True)
    b.add_argument("--out")
    b.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    b.set_defaults(func=cmd_basis)

    s = sub.add_parser("structconst", help="write the e/g structure constant table (CSV)")
    s.add_argument("--spin", type=_spin, required=True)
    s.add_argument("--method", choices=["analytic", "trace", "both"], default="analytic")
    s.add_argument("--out")
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_structconst)

    for name, func in (("evolve1", cmd_evolve1), ("evolve2", cmd_evolve2)):
        e = sub.add_parser(name, help=f"integrate the real-form equations ({name[-1]} qudit(s))")
        e.add_argument("--spin", type=_spin, required=True)
        if name == "evolve2":
            e.add_argument("--spin2", type=_spin, required=True)
        e.add_argument("--h", action="append", default=[],
                       help="Hamiltonian coefficient KEY=VALUE (H = h C / 2); repeatable")
        e.add_argument("--h-file", help="JSON object of Hamiltonian coefficients")
        e.add_argument("--r0", action="append", default=[],
                       help="initial Bloch components KEY=VALUE; default is m = S")
        e.add_argument("--dt", type=float, default=1e-3)
        e.add_argument("--steps", type=int, default=10_000)
        e.add_argument("--out")
        e.add_argument("--format", choices=["jsonl"], default="jsonl")
        e.add_argument("--threads", type=int)
        e.add_argument("--oracle-check", action="store_true",
                       help="compare against exp(-iHt) rho exp(iHt)")
        e.set_defaults(func=func)

    v = sub.add_parser("verify", help="run property suites")
    v.add_argument("--spin", type=_spin, required=True)
    v.add_argument("--spin2", type=_spin)
    v.add_argument("--suite", action="append", choices=sorted(SUITES) + ["all"])
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"spinalg {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"spinalg {args.command}: failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"spinalg {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
