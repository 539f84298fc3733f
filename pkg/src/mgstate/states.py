"""Exact states and child density matrices.

State vectors come from generalized Boolean phase functions p: F2^n -> Z4 as
``2^{-n/2} i^p``; children of parents arise twice over, by exact partial
trace and by the dual-group Pauli sum with sign coefficients, and the two
constructions must agree entry for entry.

All arithmetic is exact: amplitudes are fourth roots of unity over a global
``2^{-s/2}`` factor, matrices are Gaussian integers over a power-of-two
denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .extension import ParentExtension, j_members
from .f2 import bits_of, parity
from .pauli import (
    BoundExceeded,
    DimensionError,
    GaussianMatrix,
    PauliWord,
    dense_bound,
    ordered_product,
)

STATE_BOUND = 12


@dataclass(frozen=True)
class PhaseFunction:
    """p(x) = sum 2 x_j x_k (quadratic) + sum x_j (Z4) + sum 2 x_j (binary)."""

    n_total: int
    quadratic: FrozenSet[Tuple[int, int]] = frozenset()
    z4_linear: FrozenSet[int] = frozenset()
    binary_linear: FrozenSet[int] = frozenset()

    def __post_init__(self) -> None:
        for j, k in self.quadratic:
            if j >= k:
                raise ValueError("quadratic pairs must be stored as (min, max)")
            if not (0 <= j < self.n_total and 0 <= k < self.n_total):
                raise ValueError("quadratic pair out of range")

    @classmethod
    def from_parent(cls, p: ParentExtension) -> "PhaseFunction":
        return cls(
            p.total,
            frozenset(p.quadratic_pairs()),
            frozenset(p.red_nodes()),
            frozenset(p.binary_offsets()),
        )

    def evaluate(self, x_mask: int) -> int:
        v = 0
        for j, k in self.quadratic:
            v += 2 * ((x_mask >> j) & (x_mask >> k) & 1)
        for j in self.z4_linear:
            v += (x_mask >> j) & 1
        for j in self.binary_linear:
            v += 2 * ((x_mask >> j) & 1)
        return v % 4

    def restrict_to_zero(self, keep: Sequence[int]) -> "PhaseFunction":
        """Restriction setting every variable outside ``keep`` to zero."""
        keep_set = set(keep)
        pos = {j: i for i, j in enumerate(sorted(keep_set))}
        quad = frozenset(
            (pos[j], pos[k]) for j, k in self.quadratic if j in keep_set and k in keep_set
        )
        z4 = frozenset(pos[j] for j in self.z4_linear if j in keep_set)
        binary = frozenset(pos[j] for j in self.binary_linear if j in keep_set)
        return PhaseFunction(len(keep_set), quad, z4, binary)

    def describe(self) -> str:
        terms = []
        quad = sorted(self.quadratic)
        if quad:
            terms.append("2*(" + " + ".join(f"x{j}*x{k}" for j, k in quad) + ")")
        for j in sorted(self.binary_linear):
            terms.append(f"2*x{j}")
        for j in sorted(self.z4_linear):
            terms.append(f"x{j}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class ExactStateVector:
    """Amplitudes ``i^{phases[idx]} * 2^{-norm_log2sqrt/2}`` on the mask."""

    n_total: int
    phases: Tuple[int, ...]
    mask: Tuple[bool, ...]
    norm_log2sqrt: int

    def amplitude_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        ph = np.array(self.phases, dtype=np.int64) % 4
        on = np.array(self.mask, dtype=np.int64)
        re = np.where(ph == 0, 1, np.where(ph == 2, -1, 0)) * on
        im = np.where(ph == 1, 1, np.where(ph == 3, -1, 0)) * on
        return re.astype(np.int64), im.astype(np.int64)


def state_from_phase(p: PhaseFunction, bound: Optional[int] = None) -> ExactStateVector:
    """Graph state 2^{-n/2} i^p; index bit of qubit 0 is the most significant."""
    n = p.n_total
    if n > (bound if bound is not None else min(STATE_BOUND, dense_bound())):
        raise BoundExceeded(f"state on {n} qubits exceeds the configured bound")
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    bit = [(idx >> (n - 1 - j)) & 1 for j in range(n)]
    ph = np.zeros(dim, dtype=np.int64)
    for j, k in p.quadratic:
        ph += 2 * bit[j] * bit[k]
    for j in p.z4_linear:
        ph += bit[j]
    for j in p.binary_linear:
        ph += 2 * bit[j]
    return ExactStateVector(n, tuple(int(v) % 4 for v in ph), (True,) * dim, n)


def stabilizes(w: PauliWord, psi: ExactStateVector) -> bool:
    """Exact check of w |psi> = |psi>."""
    if w.n != psi.n_total:
        raise DimensionError("word size does not match state")
    n = w.n
    dim = 1 << n
    xi = _index_mask(w.x, n)
    zi = _index_mask(w.z, n)
    for d in range(dim):
        src = d ^ xi
        if not psi.mask[src]:
            if psi.mask[d]:
                return False
            continue
        if not psi.mask[d]:
            return False
        ph = (w.phase + 2 * parity(zi & src) + psi.phases[src]) % 4
        if ph != psi.phases[d]:
            return False
    return True


def _index_mask(qubit_mask: int, n: int) -> int:
    out = 0
    for j in range(n):
        if (qubit_mask >> j) & 1:
            out |= 1 << (n - 1 - j)
    return out


@dataclass(frozen=True)
class DensityMatrix:
    """Exact density matrix on n lab qubits."""

    n: int
    mat: GaussianMatrix

    @property
    def dim(self) -> int:
        return 1 << self.n

    def normalized(self) -> "DensityMatrix":
        return DensityMatrix(self.n, self.mat.normalized())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.n == other.n and self.mat == other.mat

    def __hash__(self):
        return hash((self.n, self.mat))

    def trace_is_one(self) -> bool:
        return self.mat.trace_is_one()

    def is_hermitian(self) -> bool:
        return self.mat.is_hermitian()

    def conjugated_by(self, w: PauliWord) -> "DensityMatrix":
        return DensityMatrix(self.n, self.mat.conjugate_by_word(w))

    def is_pure(self) -> bool:
        sq = self.mat.matmul(self.mat)
        return sq == self.mat

    def to_json_dict(self) -> Dict:
        m = self.mat.normalized()
        return {"n": self.n, **m.to_json_dict()}

    def to_text_grid(self) -> str:
        return self.mat.normalized().to_text_grid()


def partial_trace_env(psi: ExactStateVector, env: Sequence[int]) -> DensityMatrix:
    """Trace the environment qubits out of |psi><psi|, exactly."""
    n_total = psi.n_total
    env_sorted = sorted(set(env))
    if any(not 0 <= j < n_total for j in env_sorted):
        raise DimensionError("environment index out of range")
    lab = [j for j in range(n_total) if j not in env_sorted]
    n = len(lab)
    re, im = psi.amplitude_arrays()
    shape = (2,) * n_total
    order = lab + env_sorted
    re = re.reshape(shape).transpose(order).reshape(1 << n, 1 << len(env_sorted))
    im = im.reshape(shape).transpose(order).reshape(1 << n, 1 << len(env_sorted))
    rho_re = re @ re.T + im @ im.T
    rho_im = im @ re.T - re @ im.T
    return DensityMatrix(n, GaussianMatrix(rho_re, rho_im, psi.norm_log2sqrt).normalized())


@dataclass(frozen=True)
class ChildResult:
    """Child density matrix with its Pauli-sum decomposition."""

    parent: ParentExtension
    rho: DensityMatrix
    terms: Dict[int, int]  # J member bitset -> i-exponent of b_j

    def coefficient(self, j: int) -> complex:
        return 1j ** self.terms[j]


def sign_coefficients(p: ParentExtension, duals: Sequence[PauliWord]) -> Dict[int, int]:
    """i-exponents of the Pauli-sum coefficients b_j, keyed by J member.

    b_j is fixed by Hermiticity and the parent's lab-restricted phase
    function: the only row-0 entry of s_j sits at the column indexed by j,
    and 2^n rho[0, col] = i^{-p_lab(j)}, so b_j = i^{-p_lab(j)} / s_j[0, col].
    Weight-1 members get +1, anticommuting pairs get +-i with the sign set
    by which factor carries Y versus Z, and binary offsets flip every term
    containing the offset row.
    """
    n = p.n
    p_lab = PhaseFunction.from_parent(p).restrict_to_zero(range(n))
    out: Dict[int, int] = {}
    for j in j_members(p):
        word = ordered_product(duals, bits_of(j))
        col = word.support_column()
        re, im = word.entry(0, col)
        entry_exp = {(1, 0): 0, (0, 1): 1, (-1, 0): 2, (0, -1): 3}[(re, im)]
        out[j] = (-p_lab.evaluate(j) - entry_exp) % 4
    return out


def child_from_pauli_sum(
    p: ParentExtension, duals: Sequence[PauliWord]
) -> ChildResult:
    """rho = 2^{-n} sum_{j in J} b_j s_j, with closure and commutation asserted."""
    n = p.n
    members = j_members(p)
    member_set = set(members)
    for a in members:
        for b in members:
            if (a ^ b) not in member_set:
                raise AssertionError("J is not closed under addition")
    words = {j: ordered_product(duals, bits_of(j)) for j in members}
    for a in members:
        for b in members:
            if not words[a].commutes(words[b]):
                raise AssertionError("J members must commute pairwise")
    coeffs = sign_coefficients(p, duals)
    acc = GaussianMatrix.zeros(1 << n)
    for j in members:
        acc = acc.add(words[j].to_dense().scale_i_power(coeffs[j]))
    rho = DensityMatrix(n, acc.divided_by_pow2(n).normalized())
    return ChildResult(p, rho, coeffs)


def child_from_partial_trace(p: ParentExtension) -> DensityMatrix:
    psi = state_from_phase(PhaseFunction.from_parent(p))
    return partial_trace_env(psi, list(p.env_indices()))


def stabilized_by(rho: DensityMatrix, gens: Sequence[PauliWord]) -> bool:
    return all(rho.conjugated_by(g) == rho for g in gens)


def children_family_e1(
    g_duals: Sequence[PauliWord], parents: Sequence[ParentExtension]
) -> Tuple[List[ChildResult], List[List[int]]]:
    """Children of the e = 1 parents, grouped under lab Z-pattern conjugation.

    Two children pair when some Z over a lab subset conjugates one onto the
    other; with disjoint supports this reduces to comparing coefficient maps
    under sign flips, searched over all 2^n patterns.
    """
    children = [child_from_pauli_sum(p, g_duals) for p in parents]
    n = parents[0].n if parents else 0
    classes: List[List[int]] = []
    assigned = [False] * len(children)
    for a in range(len(children)):
        if assigned[a]:
            continue
        group = [a]
        assigned[a] = True
        for b in range(a + 1, len(children)):
            if assigned[b]:
                continue
            if _z_pattern_equivalent(children[a], children[b], n) is not None:
                group.append(b)
                assigned[b] = True
        classes.append(group)
    return children, classes


def _z_pattern_equivalent(a: ChildResult, b: ChildResult, n: int) -> Optional[int]:
    if set(a.terms) != set(b.terms):
        return None
    for pattern in range(1 << n):
        if all(
            (a.terms[j] + 2 * parity(pattern & j)) % 4 == b.terms[j] for j in a.terms
        ):
            return pattern
    return None


@dataclass(frozen=True)
class RationalMatrix:
    """Gaussian-rational matrix for convex mixtures: (re + i im) / denom."""

    re: np.ndarray
    im: np.ndarray
    denom: int

    def conjugated_by(self, w: PauliWord) -> "RationalMatrix":
        dim = self.re.shape[0]
        if dim != (1 << w.n):
            raise DimensionError("word size does not match matrix")
        xi = _index_mask(w.x, w.n)
        zi = _index_mask(w.z, w.n)
        idx = np.arange(dim)
        perm = idx ^ xi
        flip = np.array([1 - 2 * parity(int(p) & zi) for p in perm], dtype=object)
        m = np.outer(flip, flip)
        return RationalMatrix(
            self.re[np.ix_(perm, perm)] * m, self.im[np.ix_(perm, perm)] * m, self.denom
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return bool(
            np.array_equal(self.re * other.denom, other.re * self.denom)
            and np.array_equal(self.im * other.denom, other.im * self.denom)
        )

    def trace(self) -> Tuple[int, int, int]:
        return int(self.re.trace()), int(self.im.trace()), self.denom

    def trace_is_one(self) -> bool:
        tr_re, tr_im, d = self.trace()
        return tr_im == 0 and tr_re == d


def convex_combine(
    children: Sequence[DensityMatrix], weights: Sequence[Fraction]
) -> RationalMatrix:
    """Exact convex combination; weights must be non-negative and sum to 1."""
    if len(children) != len(weights):
        raise ValueError("one weight per child required")
    if not children:
        raise ValueError("at least one child required")
    ws = [Fraction(w) for w in weights]
    if any(w < 0 for w in ws):
        raise ValueError("weights must be non-negative")
    if sum(ws) != 1:
        raise ValueError("weights must sum to 1")
    dim = children[0].dim
    denom = 1
    for w, c in zip(ws, children):
        denom = lcm(denom, w.denominator * (1 << c.mat.denom_log2))
    re = np.zeros((dim, dim), dtype=object)
    im = np.zeros((dim, dim), dtype=object)
    for w, c in zip(ws, children):
        if c.dim != dim:
            raise DimensionError("children must share a dimension")
        scale = w.numerator * denom // (w.denominator * (1 << c.mat.denom_log2))
        re += c.mat.re.astype(object) * scale
        im += c.mat.im.astype(object) * scale
    return RationalMatrix(re, im, denom)
