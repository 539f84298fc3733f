from __future__ import annotations

import pytest

from mgstate.graphs import dual_stabilizer, maximal_independent_sets, parse_graph
from mgstate.signfree import (
    canonical_family,
    commuting_subsets_oracle,
    e_direct,
    e_recursive,
)
from paper_data import APPENDIX_A, APPENDIX_E_FAMILY, APPENDIX_V, TRIANGLE
from test_graphs import random_mixed_graph


def appendix_family():
    g = parse_graph(APPENDIX_A)
    return canonical_family(maximal_independent_sets(g.gamma()))


def test_appendix_v():
    assert set(appendix_family()) == set(canonical_family(APPENDIX_V))


def test_e_direct_appendix_24_members():
    fam = e_direct(appendix_family())
    assert len(fam) == 24
    assert fam == canonical_family(APPENDIX_E_FAMILY)


def test_e_direct_single_pair():
    assert e_direct((((0, 1)),)) == canonical_family([(), (0,), (1,), (0, 1)])


def test_e_direct_triangle():
    g = parse_graph(TRIANGLE)
    fam = e_direct(canonical_family(maximal_independent_sets(g.gamma())))
    assert fam == canonical_family([(), (0,), (1,), (2,)])


def test_e_recursive_matches_worked_expansion():
    fam = e_recursive(appendix_family())
    assert fam == canonical_family(APPENDIX_E_FAMILY)


def test_e_recursive_single_member_is_power_set():
    assert e_recursive(((0, 2, 3),)) == e_direct(((0, 2, 3),))


def test_oracle_appendix_counts():
    g = parse_graph(APPENDIX_A)
    fam = commuting_subsets_oracle(dual_stabilizer(g))
    assert len(fam) == 24
    assert (1 << 6) - len(fam) == 40
    assert fam == canonical_family(APPENDIX_E_FAMILY)


def test_oracle_undirected_graph_everything_commutes():
    g = parse_graph("nodes 3\nedge 0 -- 1\nedge 1 -- 2\n")
    fam = commuting_subsets_oracle(dual_stabilizer(g))
    assert len(fam) == 8


def test_oracle_triangle():
    g = parse_graph(TRIANGLE)
    fam = commuting_subsets_oracle(dual_stabilizer(g))
    assert len(fam) == 4  # empty set and three singletons
    assert (1 << 3) - len(fam) == 4


def test_oracle_bound():
    from mgstate.pauli import BoundExceeded

    g = parse_graph("nodes 3\n")
    rows = dual_stabilizer(g) * 5
    with pytest.raises(BoundExceeded):
        commuting_subsets_oracle(rows)


def test_three_way_agreement_random(rng):
    for _ in range(200):
        g = random_mixed_graph(rng, rng.randrange(1, 7))
        v = canonical_family(maximal_independent_sets(g.gamma()))
        direct = e_direct(v)
        recursive = e_recursive(v)
        oracle = commuting_subsets_oracle(dual_stabilizer(g))
        assert direct == recursive == oracle


def test_family_downward_closed(rng):
    for _ in range(60):
        g = random_mixed_graph(rng, rng.randrange(1, 7))
        fam = e_direct(canonical_family(maximal_independent_sets(g.gamma())))
        members = set(fam)
        for m in fam:
            for drop in range(len(m)):
                assert m[:drop] + m[drop + 1 :] in members


def test_counts_add_up(rng):
    for _ in range(60):
        n = rng.randrange(1, 7)
        g = random_mixed_graph(rng, n)
        fam = commuting_subsets_oracle(dual_stabilizer(g))
        ambiguous = (1 << n) - len(fam)
        assert len(fam) + ambiguous == 1 << n
        assert ambiguous >= 0
