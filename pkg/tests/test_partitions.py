from collections import Counter

import pytest

from fmseries.partitions import (
    SetPartition, bell_number, enumerate_partitions, extend_partition, ordered_compositions,
    restricted_growth_strings,
)

from oracles import bell_by_stirling, brute_force_partitions


def test_empty_and_small():
    assert enumerate_partitions(0) == [SetPartition(0, ())]
    assert len(enumerate_partitions(3)) == 5


@pytest.mark.parametrize("n", range(7))
def test_matches_brute_force(n):
    got = [P.as_frozenset() for P in enumerate_partitions(n)]
    assert len(got) == len(set(got))
    assert set(got) == brute_force_partitions(n)


def test_bell_counts():
    counts = [len(enumerate_partitions(n)) for n in range(8)]
    assert counts == [1, 1, 2, 5, 15, 52, 203, 877]
    assert counts == [bell_by_stirling(n) for n in range(8)]
    assert [bell_number(n) for n in range(12)] == [bell_by_stirling(n) for n in range(12)]


def test_canonical_order():
    for P in enumerate_partitions(6):
        maxes = [p[-1] for p in P.parts]
        assert maxes == sorted(maxes)
        assert all(list(p) == sorted(p) for p in P.parts)


def test_extend_examples():
    assert extend_partition(SetPartition(0, ())) == [SetPartition(1, ((0,),))]
    P = SetPartition(2, ((0,), (1,)))
    out = extend_partition(P)
    assert len(out) == 3
    assert {Q.as_frozenset() for Q in out} == {
        frozenset({frozenset({0}), frozenset({1}), frozenset({2})}),
        frozenset({frozenset({0, 1}), frozenset({2})}),
        frozenset({frozenset({1}), frozenset({0, 2})}),
    }


@pytest.mark.parametrize("n", range(7))
def test_extension_is_bijective(n):
    produced = Counter(Q.as_frozenset() for P in enumerate_partitions(n)
                       for Q in extend_partition(P))
    assert all(c == 1 for c in produced.values())
    assert set(produced) == {Q.as_frozenset() for Q in enumerate_partitions(n + 1)}


def test_extension_sizes():
    for P in enumerate_partitions(5):
        assert len(extend_partition(P)) == P.num_parts + 1


def test_invalid_partitions_rejected():
    for bad in [((0,), (0, 1)), ((1,), (0,)), ((1, 0),), ((0,),)]:
        with pytest.raises(ValueError):
            SetPartition(2, bad)


def test_restricted_growth_strings():
    for n in range(6):
        strings = list(restricted_growth_strings(n))
        assert len(strings) == bell_by_stirling(n)
        for a in strings:
            assert all(a[i] <= 1 + max(a[:i], default=-1) for i in range(n))


def test_ordered_compositions():
    for n in range(1, 9):
        comps = list(ordered_compositions(n))
        assert len(comps) == 2 ** (n - 1)
        assert all(sum(c) == n and min(c) >= 1 for c in comps)
        assert len(set(comps)) == len(comps)
    assert list(ordered_compositions(0)) == [()]
