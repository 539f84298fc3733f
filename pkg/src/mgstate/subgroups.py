"""Maximal commutative subgroups of the dual group as isotropic subspaces.

Index subsets of dual rows are identified with vectors in F2^n; two products
commute iff ``v Gamma v'^T = 0``.  A maximal commutative subgroup of the dual
corresponds to an e-dimensional totally isotropic subspace of the reduced
full-rank form, lifted back through the kernel of Gamma.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .f2 import (
    BinMatrix,
    bits_of,
    kernel,
    parity,
    rank,
    rref,
    span,
    symplectic_basis,
)
from .graphs import MixedGraph, mixed_rank
from .pauli import BoundExceeded

DEFAULT_ENUM_BOUND = 16


@dataclass(frozen=True)
class GammaReduction:
    """Gamma with t dependent rows/columns removed to full-rank gamma_tilde."""

    gamma: BinMatrix
    gamma_tilde: BinMatrix
    kept: Tuple[int, ...]
    removed: Tuple[int, ...]
    kernel_basis: Tuple[int, ...]

    @property
    def n(self) -> int:
        return self.gamma.cols

    @property
    def t(self) -> int:
        return len(self.removed)

    @property
    def e(self) -> int:
        return (self.n - self.t) // 2

    def lift(self, reduced_vec: int) -> int:
        """Embed a reduced-space vector, zeros at the removed positions."""
        v = 0
        for new_j, j in enumerate(self.kept):
            if (reduced_vec >> new_j) & 1:
                v |= 1 << j
        return v


def reduce_gamma(gamma: BinMatrix) -> GammaReduction:
    """Deterministic reduction: keep each row iff it increases the rank."""
    if not gamma.is_symmetric() or not gamma.is_zero_diagonal():
        raise ValueError("gamma must be symmetric with zero diagonal")
    n = gamma.cols
    kept: List[int] = []
    current: List[int] = []
    for j in range(n):
        trial = current + [gamma.rows[j]]
        if len(rref(trial, n)[0]) > len(rref(current, n)[0]):
            kept.append(j)
            current = trial
    removed = tuple(j for j in range(n) if j not in kept)
    gt = gamma.submatrix(kept, kept)
    assert rank(gt) == len(kept)
    ker = kernel(gamma)
    return GammaReduction(gamma, gt, tuple(kept), removed, tuple(ker.rows))


@dataclass(frozen=True)
class IsotropicSubspace:
    """Maximal totally isotropic subspace of gamma_tilde plus its lift."""

    reduction: GammaReduction
    basis: Tuple[int, ...]          # e rows over F2^{n-t}, RREF
    lifted_basis: Tuple[int, ...]   # e + t rows over F2^n, RREF

    @property
    def dim(self) -> int:
        return len(self.basis)

    def span_reduced(self) -> List[int]:
        return span(self.basis, self.reduction.n - self.reduction.t)

    def span_lifted(self) -> List[int]:
        return span(self.lifted_basis, self.reduction.n)

    def contains(self, v: int) -> bool:
        base = list(self.lifted_basis)
        aug, _ = rref(base + [v], self.reduction.n)
        return len(aug) == len(base)


def chi(e: int) -> int:
    """Number of maximal commutative subgroups: prod_{j=1}^{e} (2^j + 1)."""
    if e < 0:
        raise ValueError("e must be non-negative")
    out = 1
    for j in range(1, e + 1):
        out *= (1 << j) + 1
    return out


def enumerate_max_isotropic(
    red: GammaReduction, bound: int = DEFAULT_ENUM_BOUND
) -> List[IsotropicSubspace]:
    """All maximal totally isotropic subspaces of gamma_tilde, canonical order.

    Subspaces are deduplicated by RREF canonical form; every maximal one has
    dimension e, so the enumeration proceeds level by level up to e.
    """
    m = red.n - red.t
    if m > bound:
        raise BoundExceeded(f"enumeration bound exceeded: 2e = {m} > {bound}")
    gt = red.gamma_tilde
    e = red.e
    gt_images = [gt.mul_vec(v) for v in range(1 << m)]

    level: set = {()}
    for _ in range(e):
        nxt: set = set()
        for basis in level:
            sp = span(list(basis), m)
            spset = set(sp)
            ortho_ok = [v for v in range(1, 1 << m) if v not in spset]
            for v in ortho_ok:
                if any(parity(gt_images[v] & u) for u in basis):
                    continue
                reduced, _ = rref(list(basis) + [v], m)
                nxt.add(tuple(reduced))
        level = nxt
    out = []
    for basis in sorted(level):
        lifted = [red.lift(b) for b in basis] + list(red.kernel_basis)
        lifted_r, _ = rref(lifted, red.n)
        out.append(IsotropicSubspace(red, basis, tuple(lifted_r)))
    return out


def membership_count(subspaces: Sequence[IsotropicSubspace], element: int) -> int:
    """Number of the given subspaces whose lifted span contains the element."""
    return sum(1 for s in subspaces if s.contains(element))


def commutes_via_gamma(gamma: BinMatrix, v_k: int, v_j: int) -> bool:
    """True iff the products indexed by v_k and v_j commute (v_K Gamma v_J^T = 0)."""
    return parity(v_k & gamma.mul_vec(v_j)) == 0


def gamma_order(gt: BinMatrix) -> int:
    """Least u >= 1 with gt^u = I; raises on singular input."""
    n = gt.cols
    if rank(gt) != n:
        raise ValueError("gamma_tilde must be invertible")
    ident = BinMatrix.identity(n)
    acc = gt
    u = 1
    while acc != ident:
        acc = acc.matmul(gt)
        u += 1
        if u > 1 << (2 * n):
            raise RuntimeError("order search runaway")
    return u


def gram_factor_search(
    gt: BinMatrix, seed: int = 0, random_trials: int = 200_000
) -> Optional[BinMatrix]:
    """Search for Omega with Omega Omega^T = gt.

    Exhaustive for dimension <= 4 (2^16 candidates), randomized beyond.  For
    a valid gamma_tilde no factorization exists; the identity matrix is a
    useful positive control.
    """
    n = gt.cols
    if n != gt.nrows:
        raise ValueError("square matrix required")

    def check(rows: Tuple[int, ...]) -> bool:
        for i in range(n):
            for j in range(n):
                if parity(rows[i] & rows[j]) != gt.get(i, j):
                    return False
        return True

    if n <= 4:
        for code in range(1 << (n * n)):
            rows = tuple((code >> (n * i)) & ((1 << n) - 1) for i in range(n))
            if check(rows):
                return BinMatrix(rows, n)
        return None
    rng = random.Random(seed)
    for _ in range(random_trials):
        rows = tuple(rng.randrange(1 << n) for _ in range(n))
        if check(rows):
            return BinMatrix(rows, n)
    return None


def subgroup_isomorphism(
    g: MixedGraph, h: MixedGraph
) -> Optional[Dict[int, Tuple[int, ...]]]:
    """Commutation-preserving map between the dual groups of g and h.

    Row index j of g's dual maps to an index set of h's dual rows such that
    v Gamma_g v'^T = f(v) Gamma_h f(v')^T for all v, v'.  Built by matching
    symplectic bases (hyperbolic pairs plus kernel), which exist whenever the
    two graphs share n and mixed rank e; otherwise returns None.
    """
    if g.n != h.n:
        return None
    if mixed_rank(g) != mixed_rank(h):
        return None
    n = g.n
    gamma_g, gamma_h = g.gamma(), h.gamma()
    basis_g = _flat_basis(*symplectic_basis(gamma_g))
    basis_h = _flat_basis(*symplectic_basis(gamma_h))
    # f(e_j) = coordinates of e_j in basis_g applied to basis_h
    bg = BinMatrix(tuple(basis_g), n).transpose()
    mapping: Dict[int, Tuple[int, ...]] = {}
    from .f2 import solve

    for j in range(n):
        coords = solve(bg, 1 << j)
        assert coords is not None, "basis must span F2^n"
        image = 0
        for idx in bits_of(coords):
            image ^= basis_h[idx]
        mapping[j] = tuple(bits_of(image))
    return mapping


def _flat_basis(pairs: List[Tuple[int, int]], ker: List[int]) -> List[int]:
    flat: List[int] = []
    for a, b in pairs:
        flat += [a, b]
    flat += list(ker)
    return flat


def apply_row_map(mapping: Dict[int, Tuple[int, ...]], v: int) -> int:
    """Extend the row map linearly to an index vector."""
    out = 0
    for j in bits_of(v):
        m = 0
        for k in mapping[j]:
            m |= 1 << k
        out ^= m
    return out
