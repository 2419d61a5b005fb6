from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from freeprob.fubm import fubm_oracle
from freeprob.ncpart import (
    MAX_CUMULANT,
    NCPartition,
    catalan,
    enumerate_nc,
    free_cumulant,
    haar_oracle,
    interval,
    join,
    ks_rhs,
    leq,
    mixed_cumulant,
    mobius,
    mobius_to_top,
)
from freeprob.scalar import ONE, Q, T


def set_partitions(elems):
    if not elems:
        yield []
        return
    first, rest = elems[0], elems[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def crossing(blocks):
    for a, b in combinations(blocks, 2):
        for x, z in combinations(sorted(a), 2):
            for y, w in combinations(sorted(b), 2):
                if x < y < z < w or y < x < w < z:
                    return True
    return False


def brute_nc(n):
    return {NCPartition(n, tuple(map(tuple, p))) for p in set_partitions(list(range(1, n + 1))) if not crossing(p)}


def brute_join(pi, rho):
    uppers = [s for s in enumerate_nc(pi.n) if leq(pi, s) and leq(rho, s)]
    least = [s for s in uppers if all(leq(s, u) for u in uppers)]
    assert len(least) == 1
    return least[0]


def brute_mobius(pi, rho):
    # mu(pi, rho) = -sum_{pi <= tau < rho} mu(pi, tau), the other-sided recursion
    memo = {}

    def mu(tau):
        if tau not in memo:
            memo[tau] = 1 if tau == pi else -sum(mu(s) for s in enumerate_nc(pi.n) if leq(pi, s) and leq(s, tau) and s != tau)
        return memo[tau]

    return mu(rho)


@pytest.mark.parametrize("n", range(1, 8))
def test_enumeration_matches_brute_force(n):
    parts = enumerate_nc(n)
    assert len(parts) == catalan(n) == len(set(parts))
    assert set(parts) == brute_nc(n)


def test_catalan_counts():
    assert [len(enumerate_nc(n)) for n in range(1, 11)] == [1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]
    with pytest.raises(ValueError):
        enumerate_nc(13)


def test_partition_validation():
    assert NCPartition(4, ((3, 1), (2,), (4,))).blocks == ((1, 3), (2,), (4,))
    with pytest.raises(ValueError):
        NCPartition(4, ((1, 3), (2, 4)))
    with pytest.raises(ValueError):
        NCPartition(3, ((1, 2),))
    assert str(NCPartition.one(3)) == "{{1,2,3}}"
    assert NCPartition(4, ((1, 2), (3, 4))).is_interval()
    assert not NCPartition(4, ((1, 4), (2, 3))).is_interval()


def test_join_examples():
    rho = NCPartition(4, ((1,), (3,), (2, 4)))
    assert join(NCPartition.zero(4), rho) == rho
    assert join(NCPartition(4, ((1, 3), (2,), (4,))), rho) == NCPartition.one(4)
    assert all(leq(p, NCPartition.one(5)) for p in enumerate_nc(5))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_join_is_least_upper_bound(n):
    parts = enumerate_nc(n)
    for pi in parts:
        for rho in parts:
            assert join(pi, rho) == brute_join(pi, rho)


def test_mobius_examples():
    p = NCPartition(4, ((1, 2), (3,), (4,)))
    assert mobius(p, p) == 1
    assert mobius(NCPartition.zero(2), NCPartition.one(2)) == -1
    assert mobius(NCPartition.zero(4), NCPartition.one(4)) == -5
    with pytest.raises(ValueError):
        mobius(NCPartition.one(3), NCPartition.zero(3))


@pytest.mark.parametrize("n", range(1, 10))
def test_mobius_bottom_top_is_signed_catalan(n):
    assert mobius(NCPartition.zero(n), NCPartition.one(n)) == (-1) ** (n - 1) * catalan(n - 1)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_mobius_matches_dual_recursion(n):
    parts = enumerate_nc(n)
    for pi in parts:
        for rho in parts:
            if leq(pi, rho):
                assert mobius(pi, rho) == brute_mobius(pi, rho)


def test_interval_contents():
    pi, rho = NCPartition.zero(3), NCPartition.one(3)
    assert interval(pi, rho) == set(enumerate_nc(3))
    assert interval(rho, pi) == set()


def test_mobius_to_top_sums_to_zero():
    for n in range(2, 7):
        assert sum(mu for _, mu in mobius_to_top(n)) == 0


def test_mixed_cumulant_examples():
    u = fubm_oracle()
    assert mixed_cumulant(u, [1]) == Q
    assert mixed_cumulant(u, [1, -1]) == 1 - Q**2
    assert mixed_cumulant(u, [1, -1, 1]) == Q * (-1 + (1 + T) * Q**2)
    with pytest.raises(ValueError):
        mixed_cumulant(u, [1] * (MAX_CUMULANT + 1))


def test_haar_alternating_cumulants_are_signed_catalan():
    h = haar_oracle()
    for n in range(1, 5):
        word = [1, -1] * n
        assert mixed_cumulant(h, word) == (-1) ** (n - 1) * catalan(n - 1)
    assert mixed_cumulant(h, [1, 1]) == 0


def test_cumulant_of_constant_entry_vanishes():
    u = fubm_oracle()
    assert mixed_cumulant(u, [1, 0]) == 0
    assert mixed_cumulant(u, [0, 1, -1]) == 0
    assert mixed_cumulant(u, [0]) == 1


def test_free_cumulant_of_semicircle():
    moments = {k: (catalan(k // 2) if k % 2 == 0 else 0) for k in range(1, 9)}
    assert [free_cumulant(moments.__getitem__, n) for n in range(1, 9)] == [0, 1, 0, 0, 0, 0, 0, 0]


def test_ks_examples():
    u = fubm_oracle()
    word = [1, -1, 1, -1]
    one = NCPartition.one(4)
    assert ks_rhs(one, word, u) == u.word_moment(word) == ONE
    assert ks_rhs(NCPartition(4, ((1,), (2,), (3, 4))), word, u) == 0
    assert ks_rhs(NCPartition(4, ((1, 2), (3, 4))), word, u) == 0
    with pytest.raises(ValueError):
        ks_rhs(NCPartition(4, ((1, 4), (2,), (3,))), word, u)


@given(st.lists(st.sampled_from([1, -1]), min_size=2, max_size=5), st.data())
def test_ks_product_formula(word, data):
    n = len(word)
    cuts = sorted(data.draw(st.sets(st.integers(1, n - 1))))
    bounds = [0, *cuts, n]
    sigma = NCPartition(n, tuple(tuple(range(a + 1, b + 1)) for a, b in zip(bounds, bounds[1:])))
    u = fubm_oracle()
    products = [sum(word[i - 1] for i in b) for b in sigma.blocks]
    assert mixed_cumulant(u, products) == ks_rhs(sigma, word, u)
