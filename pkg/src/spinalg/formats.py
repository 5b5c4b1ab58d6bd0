"""On-disk formats: structure-table CSV, basis export, trajectory JSONL."""
from __future__ import annotations

import csv
import io
import json
from typing import IO, Iterable

import numpy as np

from .errors import DomainError
from .spinbasis import BasisSet, hermitian_basis
from .structconst import StructureTables

TABLE_HEADER = ["type", "i", "j", "k", "label_i", "label_j", "label_k", "value"]
BASIS_CSV_HEADER = ["index", "label", "kind", "k", "q", "dim", "re", "im"]


def format_value(v: float) -> str:
    return format(float(v), "#.17g")


def table_rows(tables: StructureTables) -> Iterable[list[str]]:
    labels = tables.labels
    for kind, store in (("e", tables.e), ("g", tables.g)):
        for key in sorted(store):
            i, j, k = key
            yield [kind, str(i), str(j), str(k), str(labels[i]), str(labels[j]),
                   str(labels[k]), format_value(store[key])]


def write_tables_csv(tables: StructureTables, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TABLE_HEADER)
    w.writerows(table_rows(tables))


def tables_csv(tables: StructureTables) -> str:
    buf = io.StringIO()
    write_tables_csv(tables, buf)
    return buf.getvalue()


def read_tables_csv(fh: IO[str], spin) -> StructureTables:
    basis = hermitian_basis(spin)
    reader = csv.reader(fh)
    header = next(reader, None)
    if header != TABLE_HEADER:
        raise DomainError(f"unexpected table header {header}")
    e, g = {}, {}
    for row in reader:
        kind, i, j, k, li, lj, lk, value = row
        key = (int(i), int(j), int(k))
        if list(key) != sorted(key):
            raise DomainError(f"unsorted index triple {key}")
        for idx, lab in zip(key, (li, lj, lk)):
            if str(basis.labels[idx]) != lab:
                raise DomainError(f"label {lab} does not match index {idx}")
        {"e": e, "g": g}[kind][key] = float(value)
    return StructureTables(basis.spin, basis.labels, e, g, method="file")


def basis_records(basis: BasisSet) -> Iterable[dict]:
    for idx, (lab, mat) in enumerate(zip(basis.labels, basis.matrices)):
        yield {
            "index": idx,
            "label": str(lab),
            "kind": lab.kind,
            "k": lab.k,
            "q": lab.q,
            "dim": basis.dim,
            "re": [float(x) for x in mat.real.ravel()],
            "im": [float(x) for x in mat.imag.ravel()],
        }


def write_basis(basis: BasisSet, fh: IO[str], fmt: str = "jsonl") -> None:
    """One record per matrix; entries row-major, rows ordered m = S..-S."""
    if fmt == "jsonl":
        for rec in basis_records(basis):
            fh.write(json.dumps(rec) + "\n")
    elif fmt == "csv":
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BASIS_CSV_HEADER)
        for rec in basis_records(basis):
            w.writerow([rec["index"], rec["label"], rec["kind"], rec["k"], rec["q"], rec["dim"],
                        " ".join(repr(x) for x in rec["re"]),
                        " ".join(repr(x) for x in rec["im"])])
    else:
        raise DomainError(f"unknown basis format {fmt!r}")


def read_basis_jsonl(fh: IO[str]) -> list[tuple[str, np.ndarray]]:
    out = []
    for line in fh:
        if not line.strip():
            continue
        rec = json.loads(line)
        d = rec["dim"]
        mat = (np.array(rec["re"]) + 1j * np.array(rec["im"])).reshape(d, d)
        out.append((rec["label"], mat))
    return out


def write_trajectory(traj, fh: IO[str], h: np.ndarray, extra: dict | None = None) -> None:
    """Header record, then one ``{"t", "R", "bloch_length"}`` record per snapshot."""
    header = {
        "type": "header",
        "spins": [str(s) for s in traj.spins],
        "dt": traj.dt,
        "steps": traj.steps,
        "h": np.asarray(h).tolist(),
    }
    if extra:
        header.update(extra)
    fh.write(json.dumps(header) + "\n")
    for t, R, b in zip(traj.times, traj.states, traj.lengths):
        fh.write(json.dumps({"t": float(t), "R": R.ravel().tolist(), "bloch_length": float(b)}))
        fh.write("\n")


def read_trajectory(fh: IO[str]) -> tuple[dict, list[dict]]:
    lines = [json.loads(line) for line in fh if line.strip()]
    return lines[0], lines[1:]
