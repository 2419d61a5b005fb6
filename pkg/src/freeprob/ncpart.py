"""Noncrossing partitions, their lattice Möbius function, free cumulants.

This is the brute-force side of the package: every closed-form cumulant
elsewhere is checked against the Möbius sums computed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from threading import Lock
from typing import Callable, Sequence

from .scalar import ONE, ZERO, Scalar

__all__ = [
    "NCPartition",
    "MomentOracle",
    "haar_oracle",
    "enumerate_nc",
    "leq",
    "join",
    "mobius",
    "mobius_to_top",
    "mixed_cumulant",
    "free_cumulant",
    "ks_rhs",
    "catalan",
    "MAX_ENUMERATE",
    "MAX_CUMULANT",
]

MAX_ENUMERATE = 12
MAX_CUMULANT = 10


def catalan(n: int) -> int:
    from math import comb

    return comb(2 * n, n) // (n + 1)


def _labels(blocks, n):
    lab = [0] * (n + 1)
    for i, b in enumerate(blocks):
        for x in b:
            lab[x] = i
    return lab


def _is_noncrossing(blocks, n) -> bool:
    # stack scan: an element of an already-open block must sit in the
    # innermost open block
    lab = _labels(blocks, n)
    first = {b[0]: i for i, b in enumerate(blocks)}
    last = [b[-1] for b in blocks]
    stack: list[int] = []
    for x in range(1, n + 1):
        b = lab[x]
        if first.get(x) == b:
            stack.append(b)
        elif not stack or stack[-1] != b:
            return False
        if last[b] == x:
            stack.pop()
    return True


def _canonical(blocks):
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


@dataclass(frozen=True)
class NCPartition:
    """A noncrossing partition of ``{1..n}``, blocks sorted by minimum."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        canon = _canonical(self.blocks)
        object.__setattr__(self, "blocks", canon)
        seen = sorted(x for b in canon for x in b)
        if any(len(b) == 0 for b in canon) or seen != list(range(1, self.n + 1)):
            raise ValueError(f"blocks {canon} do not partition 1..{self.n}")
        if not _is_noncrossing(canon, self.n):
            raise ValueError(f"partition {canon} is crossing")

    @classmethod
    def _trusted(cls, n, blocks):
        p = object.__new__(cls)
        object.__setattr__(p, "n", n)
        object.__setattr__(p, "blocks", blocks)
        return p

    @classmethod
    def zero(cls, n: int) -> NCPartition:
        return cls._trusted(n, tuple((i,) for i in range(1, n + 1)))

    @classmethod
    def one(cls, n: int) -> NCPartition:
        return cls._trusted(n, (tuple(range(1, n + 1)),))

    def is_interval(self) -> bool:
        return all(b[-1] - b[0] + 1 == len(b) for b in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __str__(self):
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


@lru_cache(maxsize=None)
def _nc_blocks(lo: int, hi: int) -> tuple:
    """All NC partitions of the interval lo..hi as canonical block tuples."""
    if lo > hi:
        return ((),)
    out = []
    rest = list(range(lo + 1, hi + 1))
    # choose the block of lo: lo < i_1 < ... ; gaps between are independent
    for mask in range(1 << len(rest)):
        block = [lo] + [x for j, x in enumerate(rest) if mask >> j & 1]
        pieces = [()]
        bounds = block + [hi + 1]
        for a, b in zip(bounds, bounds[1:]):
            sub = _nc_blocks(a + 1, b - 1)
            pieces = [p + s for p in pieces for s in sub]
        for p in pieces:
            out.append(_canonical((tuple(block),) + p))
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_nc(n: int) -> tuple[NCPartition, ...]:
    """All noncrossing partitions of ``{1..n}`` (Catalan(n) of them)."""
    if not 1 <= n <= MAX_ENUMERATE:
        raise ValueError(f"n must be in 1..{MAX_ENUMERATE}, got {n}")
    return tuple(NCPartition._trusted(n, b) for b in sorted(_nc_blocks(1, n)))


def _check_same(pi: NCPartition, rho: NCPartition):
    if pi.n != rho.n:
        raise ValueError(f"partitions of different sets: n={pi.n} vs n={rho.n}")


def leq(pi: NCPartition, rho: NCPartition) -> bool:
    """Reverse refinement: every block of ``rho`` is a union of blocks of ``pi``."""
    _check_same(pi, rho)
    lab = _labels(rho.blocks, rho.n)
    return all(len({lab[x] for x in b}) == 1 for b in pi.blocks)


def _pair_noncrossing(a, b) -> bool:
    sb = set(b)
    for x in a:
        for y in a:
            if x < y and any(x < u < y for u in sb) and any(u < x or u > y for u in sb):
                return False
    return True


def join(pi: NCPartition, rho: NCPartition) -> NCPartition:
    """Least upper bound in NC(n).

    Set-partition join (connected components), then merge crossing block
    pairs until nothing crosses.  Each merge lowers the block count, so the
    loop ends.
    """
    _check_same(pi, rho)
    n = pi.n
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in (pi, rho):
        for b in p.blocks:
            for x in b[1:]:
                parent[find(x)] = find(b[0])
    groups: dict[int, list[int]] = {}
    for x in range(1, n + 1):
        groups.setdefault(find(x), []).append(x)
    blocks = [set(g) for g in groups.values()]
    changed = True
    while changed:
        changed = False
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                if not _pair_noncrossing(blocks[i], blocks[j]):
                    blocks[i] |= blocks.pop(j)
                    changed = True
                    break
            if changed:
                break
    return NCPartition._trusted(n, _canonical(blocks))


def _covers_within(bl, rho_lab, n):
    """Block tuples obtained from ``bl`` by merging two blocks inside one rho-block."""
    for i in range(len(bl)):
        for j in range(i + 1, len(bl)):
            if rho_lab[bl[i][0]] != rho_lab[bl[j][0]]:
                continue
            merged = tuple(sorted(bl[i] + bl[j]))
            new = _canonical(bl[:i] + bl[i + 1 : j] + bl[j + 1 :] + (merged,))
            if _is_noncrossing(new, n):
                yield new


def _interval_blocks(pi_blocks, rho_blocks, n):
    rho_lab = _labels(rho_blocks, n)
    seen = {pi_blocks}
    frontier = [pi_blocks]
    while frontier:
        nxt = []
        for tau in frontier:
            for up in _covers_within(tau, rho_lab, n):
                if up not in seen:
                    seen.add(up)
                    nxt.append(up)
        frontier = nxt
    return seen


def interval(pi: NCPartition, rho: NCPartition) -> set[NCPartition]:
    """All tau with pi <= tau <= rho."""
    if not leq(pi, rho):
        return set()
    return {NCPartition._trusted(pi.n, b) for b in _interval_blocks(pi.blocks, rho.blocks, pi.n)}


_mobius_lock = Lock()


@lru_cache(maxsize=None)
def _mobius(pi_blocks, rho_blocks, n) -> int:
    if pi_blocks == rho_blocks:
        return 1
    # mu(pi, rho) = -sum_{pi < tau <= rho} mu(tau, rho)
    return -sum(
        _mobius(tau, rho_blocks, n)
        for tau in _interval_blocks(pi_blocks, rho_blocks, n)
        if tau != pi_blocks
    )


def mobius(pi: NCPartition, rho: NCPartition) -> int:
    """Möbius function of the interval ``[pi, rho]`` in NC(n)."""
    if not leq(pi, rho):
        raise ValueError(f"{pi} is not below {rho}")
    with _mobius_lock:
        return _mobius(pi.blocks, rho.blocks, pi.n)


@lru_cache(maxsize=None)
def mobius_to_top(n: int) -> tuple[tuple[NCPartition, int], ...]:
    """``(pi, Mob(pi, 1_n))`` for every pi in NC(n)."""
    top = NCPartition.one(n)
    parts = sorted(enumerate_nc(n), key=len)
    return tuple((p, mobius(p, top)) for p in parts)


class MomentOracle:
    """Moments ``phi(u^m)`` of a unitary with conjugation-symmetric law.

    Words in ``u`` and ``u*`` are lists of signed powers; unitarity reduces
    any word to the net power.
    """

    def __init__(self, moment: Callable[[int], Scalar], name: str = "oracle"):
        self._moment = moment
        self._cache: dict[int, Scalar] = {0: ONE}
        self._lock = Lock()
        self.name = name

    def moment(self, m: int) -> Scalar:
        m = abs(m)
        v = self._cache.get(m)
        if v is None:
            v = self._moment(m)
            with self._lock:
                self._cache[m] = v
        return v

    @staticmethod
    def reduce(word: Sequence[int]) -> int:
        return sum(word)

    def word_moment(self, word: Sequence[int]) -> Scalar:
        return self.moment(self.reduce(word))

    def __repr__(self):
        return f"MomentOracle({self.name})"


def haar_oracle() -> MomentOracle:
    """Haar unitary: ``phi(u^m) = 1`` if m == 0 else 0."""
    return MomentOracle(lambda m: ONE if m == 0 else ZERO, name="haar")


def mixed_cumulant(oracle: MomentOracle, word: Sequence[int]) -> Scalar:
    """Joint free cumulant ``kappa_n(u^{e_1}, ..., u^{e_n})``.

    ``word`` holds the exponents ``e_i`` (+1 for u, -1 for u*, 0 for the
    identity; any integer stands for a product already reduced).
    """
    n = len(word)
    if not 1 <= n <= MAX_CUMULANT:
        raise ValueError(f"word length must be in 1..{MAX_CUMULANT}, got {n}")
    total = ZERO
    for pi, mu in mobius_to_top(n):
        term = Scalar(mu)
        for b in pi.blocks:
            term = term * oracle.moment(sum(word[i - 1] for i in b))
            if not term:
                break
        total = total + term
    return total


def free_cumulant(moment: Callable[[int], Scalar], n: int) -> Scalar:
    """``kappa_n`` of a single variable from its moments ``moment(k)``."""
    if not 1 <= n <= MAX_CUMULANT:
        raise ValueError(f"n must be in 1..{MAX_CUMULANT}, got {n}")
    cache = {}
    total = ZERO
    for pi, mu in mobius_to_top(n):
        term = Scalar(mu)
        for b in pi.blocks:
            k = len(b)
            if k not in cache:
                cache[k] = moment(k)
            term = term * cache[k]
        total = total + term
    return total


def ks_rhs(sigma: NCPartition, word: Sequence[int], oracle: MomentOracle) -> Scalar:
    """Right side of the Krawczyk-Speicher product formula.

    Sum over pi in NC(n) with ``pi v sigma = 1_n`` of the product of block
    cumulants of ``word`` restricted to each block of pi.
    """
    if not sigma.is_interval():
        raise ValueError(f"{sigma} is not an interval partition")
    n = sigma.n
    if len(word) != n:
        raise ValueError("word length does not match sigma")
    top = NCPartition.one(n)
    cache: dict[tuple[int, ...], Scalar] = {}
    total = ZERO
    for pi in enumerate_nc(n):
        if join(pi, sigma) != top:
            continue
        term = ONE
        for b in pi.blocks:
            sub = tuple(word[i - 1] for i in b)
            if sub not in cache:
                cache[sub] = mixed_cumulant(oracle, sub)
            term = term * cache[sub]
        total = total + term
    return total
