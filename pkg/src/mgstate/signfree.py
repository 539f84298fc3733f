"""Row subsets of the dual matrix whose products are order-independent.

A subset of dual rows multiplies to the same word in every order exactly
when the rows pairwise commute, i.e. when the subset is independent in the
skeleton.  The family of all such subsets is the union of the power sets of
the maximal independent sets, computable either directly or through the
intersection recursion; the remaining subsets are the members of the dual
group defined only up to a sign.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, List, Sequence, Tuple

from .pauli import BoundExceeded, PauliWord

SetFamily = Tuple[Tuple[int, ...], ...]

ORACLE_BOUND = 12


def canonical_family(members) -> SetFamily:
    """Duplicate-free family in canonical order (lexicographic sorted tuples)."""
    return tuple(sorted({tuple(sorted(set(m))) for m in members}))


def _powerset(w: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    out = [()]
    for v in w:
        out += [s + (v,) for s in out]
    return out


def e_direct(family: SetFamily) -> SetFamily:
    """E(V) as the union of the power sets of the members."""
    out = set()
    for w in canonical_family(family):
        out.update(_powerset(w))
    return canonical_family(out)


def e_recursive(family: SetFamily) -> SetFamily:
    """E(V) via E(V) = E(V^) u U_w P(w) \\ E(V_w), memoized."""
    memo: Dict[FrozenSet[Tuple[int, ...]], FrozenSet[Tuple[int, ...]]] = {}

    def rec(v: SetFamily) -> FrozenSet[Tuple[int, ...]]:
        key = frozenset(v)
        if key in memo:
            return memo[key]
        if not v:
            result: FrozenSet[Tuple[int, ...]] = frozenset()
        elif len(v) == 1:
            result = frozenset(_powerset(v[0]))
        else:
            v_hat = canonical_family(
                tuple(sorted(set(a) & set(b)))
                for i, a in enumerate(v)
                for b in v[i + 1 :]
            )
            acc = set(rec(v_hat))
            for w in v:
                v_w = canonical_family(
                    tuple(sorted(set(w) & set(w2))) for w2 in v if w2 != w
                )
                acc |= set(_powerset(w)) - set(rec(v_w))
            result = frozenset(acc)
        memo[key] = result
        return result

    return canonical_family(rec(canonical_family(family)))


def commuting_subsets_oracle(rows: Sequence[PauliWord]) -> SetFamily:
    """All index subsets whose rows pairwise commute, by direct check."""
    n = len(rows)
    if n > ORACLE_BOUND:
        raise BoundExceeded(f"oracle bound exceeded: {n} > {ORACLE_BOUND}")
    pairs = [
        [rows[i].commutes(rows[j]) for j in range(n)] for i in range(n)
    ]
    out = []
    for mask in range(1 << n):
        members = [j for j in range(n) if (mask >> j) & 1]
        if all(
            pairs[a][b] for i, a in enumerate(members) for b in members[i + 1 :]
        ):
            out.append(tuple(members))
    return canonical_family(out)


def family_to_lists(family: SetFamily) -> List[List[int]]:
    return [list(m) for m in family]
