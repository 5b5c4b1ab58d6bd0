"""Irreducible tensor operators and the Hermitian operator basis built from them.

Matrices act on ``|S, m>`` with ``m`` running from ``S`` down to ``-S``
(row/column 0 is ``m = S``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .exact import HalfInt, SqrtRational
from .wigner import _three_jm2

__all__ = [
    "BasisLabel",
    "BasisSet",
    "tensor_operator",
    "hermitian_basis",
    "index_of",
    "label_of",
    "appendix_permutation",
    "spin_operators",
    "parse_spin",
]

KINDS = ("U", "X", "Y", "Z")


def parse_spin(value) -> HalfInt:
    """Parse a spin quantum number; 2S must be a positive integer."""
    s = HalfInt.of(value)
    if s.twice <= 0:
        raise DomainError(f"spin must be positive, got {s}")
    return s


def spin_dimension(spin) -> int:
    return parse_spin(spin).twice + 1


@dataclass(frozen=True, order=True)
class BasisLabel:
    """Label of one Hermitian basis element: kind, rank ``k``, projection ``q``.

    ``U`` is the scaled unit matrix (``k = q = 0``); ``Z`` elements are
    diagonal with ``q = 0``; ``X``/``Y`` elements have ``1 <= q <= k``.
    """

    kind: str
    k: int = 0
    q: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown basis kind {self.kind!r}")
        if self.kind == "U":
            if self.k != 0 or self.q != 0:
                raise DomainError("unit label requires k = q = 0")
        elif self.kind == "Z":
            if self.k < 1 or self.q != 0:
                raise DomainError(f"invalid Z label k={self.k}, q={self.q}")
        elif not 1 <= self.q <= self.k:
            raise DomainError(f"invalid {self.kind} label k={self.k}, q={self.q}")

    def valid_for(self, spin: HalfInt) -> bool:
        return self.k <= spin.twice

    def __str__(self) -> str:
        if self.kind == "U":
            return "U"
        if self.kind == "Z":
            return f"Z:{self.k}"
        return f"{self.kind}:{self.k}:{self.q}"

    @classmethod
    def parse(cls, text: str) -> BasisLabel:
        """Inverse of ``str``: ``U``, ``Z:k`` or ``X:k:q`` / ``Y:k:q``."""
        parts = text.strip().split(":")
        kind = parts[0].upper()
        try:
            nums = [int(p) for p in parts[1:]]
        except ValueError:
            raise DomainError(f"malformed basis label {text!r}") from None
        if kind == "U" and not nums:
            return cls("U")
        if kind == "Z" and len(nums) == 1:
            return cls("Z", nums[0], 0)
        if kind in ("X", "Y") and len(nums) == 2:
            return cls(kind, nums[0], nums[1])
        raise DomainError(f"malformed basis label {text!r}")


def canonical_labels(spin) -> list[BasisLabel]:
    """Unit first, then for k = 1..2S: X q=1..k, Y q=1..k, Z."""
    s = parse_spin(spin)
    labels = [BasisLabel("U")]
    for k in range(1, s.twice + 1):
        labels += [BasisLabel("X", k, q) for q in range(1, k + 1)]
        labels += [BasisLabel("Y", k, q) for q in range(1, k + 1)]
        labels.append(BasisLabel("Z", k, 0))
    return labels


@lru_cache(maxsize=None)
def _tensor_entries2(two_s: int, k: int, q: int) -> dict[tuple[int, int], SqrtRational]:
    """Nonzero entries of T_{k,q} as exact signed roots, keyed by (row, col)."""
    norm = SqrtRational(1, Fraction((two_s + 1) * (2 * k + 1)))
    out = {}
    for row in range(two_s + 1):
        m2 = two_s - 2 * row
        phase = -1 if ((two_s - m2) // 2) % 2 else 1
        for col in range(two_s + 1):
            mp2 = two_s - 2 * col
            val = _three_jm2(two_s, 2 * k, two_s, -m2, 2 * q, mp2)
            if not val.is_zero:
                out[row, col] = phase * (norm * val)
    return out


def _materialize(two_s: int, entries: dict, scale: complex = 1.0) -> np.ndarray:
    out = np.zeros((two_s + 1, two_s + 1), dtype=np.complex128)
    for pos, val in entries.items():
        out[pos] = scale * float(val)
    return out


@lru_cache(maxsize=None)
def _tensor_operator2(two_s: int, k: int, q: int) -> np.ndarray:
    # entries are rounded once from exact values, so T_{0,0} is the identity bit for bit
    out = _materialize(two_s, _tensor_entries2(two_s, k, q))
    out.setflags(write=False)
    return out


def tensor_operator(spin, k, q) -> np.ndarray:
    """Matrix of the irreducible tensor operator ``T_{k,q}`` for spin ``S``.

    ``T_{0,0}`` is the identity.
    """
    s = parse_spin(spin)
    k_, q_ = HalfInt.of(k), HalfInt.of(q)
    if not (k_.is_integer and q_.is_integer):
        raise DomainError("rank and projection must be integers")
    k_, q_ = int(k_), int(q_)
    if not 0 <= k_ <= s.twice or abs(q_) > k_:
        raise DomainError(f"need 0 <= k <= 2S and |q| <= k, got k={k_}, q={q_}")
    return _tensor_operator2(s.twice, k_, q_).copy()


def basis_matrix(spin, label: BasisLabel) -> np.ndarray:
    s = parse_spin(spin)
    if not label.valid_for(s):
        raise DomainError(f"label {label} invalid for S = {s}")
    two_s = s.twice
    ss1 = Fraction(two_s * (two_s + 2), 4)
    if label.kind == "U":
        return float(SqrtRational(1, ss1 / 3)) * np.eye(two_s + 1, dtype=np.complex128)
    k, q = label.k, label.q
    if label.kind == "Z":
        scale = SqrtRational(1, ss1 / 3)
        return _materialize(two_s, {p: scale * v for p, v in _tensor_entries2(two_s, k, 0).items()})
    # T_{k,-q} and T_{k,q} never share a nonzero position (q != 0), so every
    # entry is one exact product and is rounded once
    a = SqrtRational(1, ss1 / 6)
    sgn = _ph(q)
    minus = {p: a * v for p, v in _tensor_entries2(two_s, k, -q).items()}
    plus = {p: sgn * (a * v) for p, v in _tensor_entries2(two_s, k, q).items()}
    if label.kind == "X":
        return _materialize(two_s, {**minus, **plus})
    return _materialize(two_s, minus, 1j) + _materialize(two_s, plus, -1j)


def _ph(q: int) -> int:
    return -1 if q % 2 else 1


@dataclass(frozen=True, eq=False)
class BasisSet:
    """The (2S+1)^2 Hermitian basis matrices of su(2S+1) plus the unit element.

    ``matrices`` has shape ``(n + 1, d, d)`` and is read-only; index 0 is the
    unit element and indices 1..n the traceless elements in canonical order.
    """

    spin: HalfInt
    labels: tuple[BasisLabel, ...]
    matrices: np.ndarray
    _index: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return self.spin.twice + 1

    @property
    def n(self) -> int:
        """Number of traceless elements, (2S+1)^2 - 1."""
        return len(self.labels) - 1

    @property
    def norm(self) -> float:
        """Common value of Tr(C_r C_r): S(S+1)(2S+1)/3."""
        s = float(self.spin)
        return s * (s + 1) * (2 * s + 1) / 3

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, index: int) -> np.ndarray:
        return self.matrices[index]

    def index_of(self, label: BasisLabel | str) -> int:
        if isinstance(label, str):
            label = BasisLabel.parse(label)
        try:
            return self._index[label]
        except KeyError:
            raise DomainError(f"label {label} not in basis for S = {self.spin}") from None

    def label_of(self, index: int) -> BasisLabel:
        if not 0 <= index < len(self.labels):
            raise DomainError(f"index {index} out of range for S = {self.spin}")
        return self.labels[index]


@lru_cache(maxsize=16)
def _hermitian_basis2(two_s: int) -> BasisSet:
    spin = HalfInt(two_s)
    labels = tuple(canonical_labels(spin))
    mats = np.stack([basis_matrix(spin, lab) for lab in labels])
    mats.setflags(write=False)
    return BasisSet(spin, labels, mats, {lab: i for i, lab in enumerate(labels)})


def hermitian_basis(spin) -> BasisSet:
    """Build the complete Hermitian basis for spin ``S`` (cached, immutable)."""
    return _hermitian_basis2(parse_spin(spin).twice)


def index_of(basis: BasisSet, label: BasisLabel | str) -> int:
    return basis.index_of(label)


def label_of(basis: BasisSet, index: int) -> BasisLabel:
    return basis.label_of(index)


# spin-1 enumeration C_0..C_8 used by the published qutrit tables
_APPENDIX_SPIN1 = {
    BasisLabel("U"): 0,
    BasisLabel("X", 1, 1): 1,
    BasisLabel("Y", 1, 1): 2,
    BasisLabel("Z", 1): 3,
    BasisLabel("Y", 2, 2): 4,
    BasisLabel("Y", 2, 1): 5,  # printed as C_{1,2y}; the matrix is the k=2, q=1 element
    BasisLabel("Z", 2): 6,
    BasisLabel("X", 2, 1): 7,  # printed without q; the matrix has q=1
    BasisLabel("X", 2, 2): 8,
}


def appendix_permutation(spin=1) -> dict[int, int]:
    """Map canonical spin-1 indices to the qutrit enumeration C_0..C_8."""
    s = parse_spin(spin)
    if s.twice != 2:
        raise DomainError(f"appendix enumeration exists only for S = 1, got {s}")
    basis = hermitian_basis(s)
    return {basis.index_of(lab): idx for lab, idx in _APPENDIX_SPIN1.items()}


def spin_operators(spin) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sx, Sy, Sz from the ladder construction, for cross-checking."""
    s = parse_spin(spin)
    j = float(s)
    m = j - np.arange(s.twice + 1)
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), 1).astype(np.complex128)
    jm = jp.conj().T
    return 0.5 * (jp + jm), -0.5j * (jp - jm), np.diag(m).astype(np.complex128)
