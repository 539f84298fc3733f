"""Exact n-qubit Pauli operators in binary symplectic form.

A word is stored as ``i**phase * (X^x Z^z)`` where ``x`` and ``z`` are
bitsets (bit j = qubit j) and the per-qubit factor is ``X^{x_j} Z^{z_j}``
in that order.  A ``Y`` on qubit j is ``x_j = z_j = 1`` with ``+1`` added
to the phase exponent, since ``Y = iXZ``.

Tensor convention, fixed once for the whole package: qubit 0 is the
leftmost tensor factor and the most significant bit of a state index.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .f2 import parity, popcount

DEFAULT_DENSE_BOUND = 12


class DimensionError(ValueError):
    """Qubit counts of two operands disagree."""


class BoundExceeded(RuntimeError):
    """A dense rendering would exceed the configured qubit bound."""


def dense_bound() -> int:
    """Dense-rendering qubit bound; MGSTATE_MAX_QUBITS overrides."""
    env = os.environ.get("MGSTATE_MAX_QUBITS")
    if env is not None:
        return int(env)
    return DEFAULT_DENSE_BOUND


_LETTER_XZ = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
# phase exponent added when writing the letter in canonical X^x Z^z form
_LETTER_ADJUST = {"I": 0, "X": 0, "Z": 0, "Y": 1}
_XZ_LETTER = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}

# Single-qubit Clifford conjugation table: tag -> {letter: (sign, letter')}
# with U P U^dag = sign * P'.  H is the Hadamard, N the negaHadamard
# (1/sqrt2)[[1, i], [1, -i]], and D = diag(1, i) appears only in tests.
CONJUGATION_TABLE: Dict[str, Dict[str, Tuple[int, str]]] = {
    "I": {"X": (1, "X"), "Z": (1, "Z"), "Y": (1, "Y")},
    "H": {"X": (1, "Z"), "Z": (1, "X"), "Y": (-1, "Y")},
    "N": {"X": (-1, "Y"), "Z": (1, "X"), "Y": (-1, "Z")},
    "N2": {"X": (1, "Z"), "Z": (-1, "Y"), "Y": (-1, "X")},
    "NH": {"X": (1, "X"), "Z": (-1, "Y"), "Y": (1, "Z")},
    "HN": {"X": (1, "Y"), "Z": (1, "Z"), "Y": (-1, "X")},
}


@dataclass(frozen=True)
class PauliWord:
    """n-qubit Pauli operator with exact i-power phase."""

    n: int
    x: int
    z: int
    phase: int

    def __post_init__(self) -> None:
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError("x/z bits out of range")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliWord":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_letters(cls, letters: str, phase: int = 0) -> "PauliWord":
        """Build from a string like "XZI"; qubit 0 is the first letter."""
        x = z = 0
        ph = phase
        for j, c in enumerate(letters):
            xb, zb = _LETTER_XZ[c]
            x |= xb << j
            z |= zb << j
            ph += _LETTER_ADJUST[c]
        return cls(len(letters), x, z, ph)

    def letters(self) -> str:
        return "".join(
            _XZ_LETTER[((self.x >> j) & 1, (self.z >> j) & 1)] for j in range(self.n)
        )

    def letter_phase(self) -> int:
        """Phase exponent relative to the plain tensor of letters.

        ``self == i**letter_phase() * (letter string as matrices)``.
        """
        return (self.phase - popcount(self.x & self.z)) % 4

    def __str__(self) -> str:
        pre = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.letter_phase()]
        return pre + self.letters()

    def is_identity_up_to_phase(self) -> bool:
        return self.x == 0 and self.z == 0

    def mul(self, other: "PauliWord") -> "PauliWord":
        """Matrix product self * other (self acts on the left)."""
        if self.n != other.n:
            raise DimensionError(f"qubit counts differ: {self.n} != {other.n}")
        ph = self.phase + other.phase + 2 * parity(self.z & other.x)
        return PauliWord(self.n, self.x ^ other.x, self.z ^ other.z, ph)

    def commutes(self, other: "PauliWord") -> bool:
        if self.n != other.n:
            raise DimensionError(f"qubit counts differ: {self.n} != {other.n}")
        return (parity(self.x & other.z) ^ parity(self.z & other.x)) == 0

    def is_hermitian(self) -> bool:
        return (self.phase & 1) == parity(self.x & self.z)

    def dagger(self) -> "PauliWord":
        ph = (-self.phase + 2 * parity(self.x & self.z)) % 4
        return PauliWord(self.n, self.x, self.z, ph)

    def negate(self) -> "PauliWord":
        return PauliWord(self.n, self.x, self.z, self.phase + 2)

    def conjugate_single(self, j: int, tag: str) -> "PauliWord":
        """Conjugate qubit j by a tag from {I, H, N, N2, NH, HN}."""
        if tag not in CONJUGATION_TABLE:
            raise ValueError(f"unknown Clifford tag: {tag!r}")
        if not 0 <= j < self.n:
            raise DimensionError(f"qubit index {j} out of range")
        xb, zb = (self.x >> j) & 1, (self.z >> j) & 1
        letter = _XZ_LETTER[(xb, zb)]
        if letter == "I":
            return self
        sign, new_letter = CONJUGATION_TABLE[tag][letter]
        nx, nz = _LETTER_XZ[new_letter]
        ph = (
            self.phase
            - _LETTER_ADJUST[letter]
            + _LETTER_ADJUST[new_letter]
            + (0 if sign == 1 else 2)
        )
        x = (self.x & ~(1 << j)) | (nx << j)
        z = (self.z & ~(1 << j)) | (nz << j)
        return PauliWord(self.n, x, z, ph)

    def support_column(self) -> int:
        """Column index of the unique nonzero entry in row 0 of the dense form."""
        return _bits_to_index(self.x, self.n)

    def entry(self, row: int, col: int) -> Tuple[int, int]:
        """Exact dense entry as (re, im), without building the matrix."""
        xi = _bits_to_index(self.x, self.n)
        if row != col ^ xi:
            return (0, 0)
        zi = _bits_to_index(self.z, self.n)
        k = (self.phase + 2 * parity(zi & col)) % 4
        return [(1, 0), (0, 1), (-1, 0), (0, -1)][k]

    def to_dense(self) -> "GaussianMatrix":
        if self.n > dense_bound():
            raise BoundExceeded(
                f"dense rendering of {self.n} qubits exceeds bound {dense_bound()}"
            )
        dim = 1 << self.n
        cols = np.arange(dim, dtype=np.int64)
        rows = cols ^ _bits_to_index(self.x, self.n)
        zi = _bits_to_index(self.z, self.n)
        signs = 1 - 2 * _parity_array(cols & zi)
        re = np.zeros((dim, dim), dtype=np.int64)
        im = np.zeros((dim, dim), dtype=np.int64)
        k = self.phase % 4
        if k == 0:
            re[rows, cols] = signs
        elif k == 1:
            im[rows, cols] = signs
        elif k == 2:
            re[rows, cols] = -signs
        else:
            im[rows, cols] = -signs
        return GaussianMatrix(re, im, 0)


def _bits_to_index(mask: int, n: int) -> int:
    """Qubit bitset -> state index (qubit 0 becomes the most significant bit)."""
    idx = 0
    for j in range(n):
        if (mask >> j) & 1:
            idx |= 1 << (n - 1 - j)
    return idx


def _parity_array(values: np.ndarray) -> np.ndarray:
    v = values.copy()
    out = np.zeros_like(v)
    while v.any():
        out ^= v & 1
        v >>= 1
    return out


def mul(p: PauliWord, q: PauliWord) -> PauliWord:
    return p.mul(q)


def commutes(p: PauliWord, q: PauliWord) -> bool:
    return p.commutes(q)


def is_hermitian(p: PauliWord) -> bool:
    return p.is_hermitian()


def conjugate_single(p: PauliWord, j: int, tag: str) -> PauliWord:
    return p.conjugate_single(j, tag)


def ordered_product(rows: Sequence[PauliWord], indices: Iterable[int]) -> PauliWord:
    """Product of the indexed rows with the lowest index leftmost.

    This matches the worked product listings (e.g. rows {0,1} multiply as
    rows[0] @ rows[1]); the empty index set gives the identity.
    """
    idx = sorted(indices)
    if not rows:
        raise ValueError("ordered_product needs at least the row list")
    n = rows[0].n
    acc = PauliWord.identity(n)
    for h in idx:
        if not 0 <= h < len(rows):
            raise IndexError(f"row index {h} out of range")
        acc = acc.mul(rows[h])
    return acc


def to_dense(p: PauliWord) -> "GaussianMatrix":
    return p.to_dense()


class GaussianMatrix:
    """Square matrix of Gaussian integers over a power-of-two denominator.

    The value is ``(re + i*im) / 2**denom_log2``; all arithmetic is exact.
    """

    __slots__ = ("re", "im", "denom_log2")

    def __init__(self, re: np.ndarray, im: np.ndarray, denom_log2: int = 0):
        re = np.asarray(re, dtype=np.int64)
        im = np.asarray(im, dtype=np.int64)
        if re.shape != im.shape or re.ndim != 2 or re.shape[0] != re.shape[1]:
            raise ValueError("re/im must be equal square matrices")
        if denom_log2 < 0:
            raise ValueError("denominator exponent must be non-negative")
        self.re = re
        self.im = im
        self.denom_log2 = denom_log2

    @property
    def dim(self) -> int:
        return self.re.shape[0]

    @classmethod
    def zeros(cls, dim: int) -> "GaussianMatrix":
        return cls(np.zeros((dim, dim), np.int64), np.zeros((dim, dim), np.int64), 0)

    @classmethod
    def identity(cls, dim: int) -> "GaussianMatrix":
        return cls(np.eye(dim, dtype=np.int64), np.zeros((dim, dim), np.int64), 0)

    def copy(self) -> "GaussianMatrix":
        return GaussianMatrix(self.re.copy(), self.im.copy(), self.denom_log2)

    def normalized(self) -> "GaussianMatrix":
        """Equivalent matrix with the smallest possible denominator."""
        re, im, d = self.re, self.im, self.denom_log2
        while d > 0 and not ((re & 1).any() or (im & 1).any()):
            re, im, d = re >> 1, im >> 1, d - 1
        return GaussianMatrix(re, im, d)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GaussianMatrix):
            return NotImplemented
        if self.dim != other.dim:
            return False
        a, b = self.normalized(), other.normalized()
        return (
            a.denom_log2 == b.denom_log2
            and np.array_equal(a.re, b.re)
            and np.array_equal(a.im, b.im)
        )

    def __hash__(self):
        a = self.normalized()
        return hash((a.denom_log2, a.re.tobytes(), a.im.tobytes()))

    def add(self, other: "GaussianMatrix") -> "GaussianMatrix":
        d = max(self.denom_log2, other.denom_log2)
        sa = 1 << (d - self.denom_log2)
        sb = 1 << (d - other.denom_log2)
        return GaussianMatrix(self.re * sa + other.re * sb, self.im * sa + other.im * sb, d)

    def sub(self, other: "GaussianMatrix") -> "GaussianMatrix":
        return self.add(other.scale_int(-1))

    def scale_int(self, k: int) -> "GaussianMatrix":
        return GaussianMatrix(self.re * k, self.im * k, self.denom_log2)

    def scale_i_power(self, k: int) -> "GaussianMatrix":
        k %= 4
        if k == 0:
            return self.copy()
        if k == 1:
            return GaussianMatrix(-self.im, self.re, self.denom_log2)
        if k == 2:
            return GaussianMatrix(-self.re, -self.im, self.denom_log2)
        return GaussianMatrix(self.im, -self.re, self.denom_log2)

    def shift_denom(self, extra: int) -> "GaussianMatrix":
        """Same value with denominator multiplied by 2**extra."""
        return GaussianMatrix(self.re << extra, self.im << extra, self.denom_log2 + extra)

    def divided_by_pow2(self, extra: int) -> "GaussianMatrix":
        """Value divided by 2**extra."""
        return GaussianMatrix(self.re, self.im, self.denom_log2 + extra)

    def matmul(self, other: "GaussianMatrix") -> "GaussianMatrix":
        if self.dim != other.dim:
            raise DimensionError("matrix dimensions differ")
        re = self.re @ other.re - self.im @ other.im
        im = self.re @ other.im + self.im @ other.re
        return GaussianMatrix(re, im, self.denom_log2 + other.denom_log2)

    def conj_transpose(self) -> "GaussianMatrix":
        return GaussianMatrix(self.re.T.copy(), -self.im.T.copy(), self.denom_log2)

    def is_hermitian(self) -> bool:
        return np.array_equal(self.re, self.re.T) and np.array_equal(self.im, -self.im.T)

    def trace(self) -> Tuple[int, int, int]:
        """Exact trace as (re, im, denom_log2)."""
        return int(self.re.trace()), int(self.im.trace()), self.denom_log2

    def trace_is_one(self) -> bool:
        tr_re, tr_im, d = self.trace()
        return tr_im == 0 and tr_re == (1 << d)

    def conjugate_by_word(self, w: PauliWord) -> "GaussianMatrix":
        """Exact w @ self @ w^dag via index permutation and sign masks."""
        dim = self.dim
        if dim != (1 << w.n):
            raise DimensionError("word size does not match matrix")
        xi = _bits_to_index(w.x, w.n)
        zi = _bits_to_index(w.z, w.n)
        idx = np.arange(dim, dtype=np.int64)
        perm = idx ^ xi
        # (w rho w+)[a,b] = (-1)^{z.(a^x)} (-1)^{z.(b^x)} rho[a^x, b^x]
        flip = 1 - 2 * _parity_array(perm & zi)
        m = np.outer(flip, flip)
        return GaussianMatrix(self.re[np.ix_(perm, perm)] * m, self.im[np.ix_(perm, perm)] * m, self.denom_log2)

    def to_entry_lists(self) -> List[List[List[int]]]:
        return [
            [[int(self.re[r, c]), int(self.im[r, c])] for c in range(self.dim)]
            for r in range(self.dim)
        ]

    def to_json_dict(self) -> Dict:
        return {
            "dim": self.dim,
            "denom_log2": self.denom_log2,
            "entries": self.to_entry_lists(),
        }

    @classmethod
    def from_json_dict(cls, d: Dict) -> "GaussianMatrix":
        dim = d["dim"]
        re = np.zeros((dim, dim), np.int64)
        im = np.zeros((dim, dim), np.int64)
        for r in range(dim):
            for c in range(dim):
                re[r, c], im[r, c] = d["entries"][r][c]
        return cls(re, im, d["denom_log2"])

    def to_text_grid(self) -> str:
        """Aligned grid of exact entries with the denominator up front."""
        cells = []
        for r in range(self.dim):
            row = []
            for c in range(self.dim):
                row.append(_format_gaussian(int(self.re[r, c]), int(self.im[r, c])))
            cells.append(row)
        width = max((len(s) for row in cells for s in row), default=1)
        body = "\n".join(" ".join(s.rjust(width) for s in row) for row in cells)
        if self.denom_log2:
            return f"1/{1 << self.denom_log2} *\n{body}"
        return body


def _format_gaussian(re: int, im: int) -> str:
    if im == 0:
        return str(re)
    if re == 0:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        return f"{im}i"
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    istr = "i" if mag == 1 else f"{mag}i"
    return f"{re}{sign}{istr}"
