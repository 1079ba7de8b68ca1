"""Permutations, inversions, major index, and the parabolic quotients.

Words are 1-indexed in value: a permutation of ``[n]`` is the tuple
``(sigma(1), ..., sigma(n))``.

``S(n, k)`` is the set of permutations in which ``n-k+1, ..., n`` occur
left to right in increasing order; ``S'(n, k)`` the set in which
``1, ..., k`` do.  Both have ``n!/k!`` elements.

>>> list(enumerate_quotient(3, 2))
[Permutation(1, 2, 3), Permutation(2, 1, 3), Permutation(2, 3, 1)]
>>> signed_distribution(3, 2)
IntPolynomial('z - q*z + q^2')
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from typing import Iterator, Sequence

from .enumeration import check_budget, reduce_counters
from .qpoly import IntPolynomial

__all__ = [
    "Permutation", "NotInQuotient", "inv", "maj", "descents",
    "enumerate_quotient", "enumerate_quotient_prime", "quotient_size",
    "s_stat", "signed_distribution", "signed_distribution_prime",
    "sn_distribution",
]


class NotInQuotient(ValueError):
    pass


def inv(word: Sequence[int]) -> int:
    n = len(word)
    return sum(1 for i in range(n) for j in range(i + 1, n) if word[i] > word[j])


def descents(word: Sequence[int]) -> list[int]:
    """Descent positions, 1-indexed."""
    return [i + 1 for i in range(len(word) - 1) if word[i] > word[i + 1]]


def maj(word: Sequence[int]) -> int:
    return sum(i + 1 for i in range(len(word) - 1) if word[i] > word[i + 1])


class Permutation(tuple):
    """A permutation of ``[n]`` in one-line notation."""

    def __new__(cls, *word):
        if len(word) == 1 and not isinstance(word[0], int):
            word = tuple(word[0])
        if sorted(word) != list(range(1, len(word) + 1)):
            raise ValueError(f"{word!r} is not a permutation of [{len(word)}]")
        return super().__new__(cls, word)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(range(1, n + 1))

    @property
    def n(self) -> int:
        return len(self)

    def inverse(self) -> Permutation:
        out = [0] * len(self)
        for i, v in enumerate(self, 1):
            out[v - 1] = i
        return Permutation(out)

    def compose(self, other: Sequence[int]) -> Permutation:
        """``(self o other)(i) = self(other(i))``."""
        return Permutation(self[v - 1] for v in other)

    def inv(self) -> int:
        return inv(self)

    def maj(self) -> int:
        return maj(self)

    def descents(self) -> list[int]:
        return descents(self)

    def __repr__(self):
        return f"Permutation{tuple(self)!r}" if len(self) != 1 else f"Permutation({self[0]})"


def _chain_words(n: int, chain: Sequence[int], prefix: Sequence[int] = ()) -> Iterator[tuple]:
    """Words of S_n extending ``prefix`` in which ``chain`` appears in order, lexicographically."""
    chain_pos = {v: i for i, v in enumerate(chain)}
    used = [False] * (n + 1)
    word = list(prefix)
    nxt = 0
    for v in prefix:
        used[v] = True
        if v in chain_pos:
            if chain_pos[v] != nxt:
                return
            nxt += 1

    def rec(nxt):
        if len(word) == n:
            yield tuple(word)
            return
        for v in range(1, n + 1):
            if used[v]:
                continue
            if v in chain_pos:
                if chain_pos[v] != nxt:
                    continue
                step = 1
            else:
                step = 0
            used[v] = True
            word.append(v)
            yield from rec(nxt + step)
            word.pop()
            used[v] = False

    yield from rec(nxt)


def _normalize_k(n: int, k: int) -> int:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    return max(k, 1) if n else 0


def quotient_size(n: int, k: int) -> int:
    k = _normalize_k(n, k)
    return math.factorial(n) // math.factorial(k)


def enumerate_quotient(n: int, k: int) -> Iterator[Permutation]:
    """Members of S(n, k) in lexicographic order."""
    k = _normalize_k(n, k)
    for w in _chain_words(n, range(n - k + 1, n + 1)):
        yield Permutation(w)


def enumerate_quotient_prime(n: int, k: int) -> Iterator[Permutation]:
    """Members of S'(n, k), where ``1..k`` appear in increasing order."""
    k = _normalize_k(n, k)
    for w in _chain_words(n, range(1, k + 1)):
        yield Permutation(w)


def s_stat(sigma: Sequence[int], n: int, k: int) -> int:
    """Boundary statistic: ``sigma(n)-1`` if ``sigma(n) <= n-k``, else ``n-k``."""
    k = _normalize_k(n, k)
    last = sigma[n - 1]
    if last <= n - k:
        return last - 1
    if last == n:
        return n - k
    raise NotInQuotient(f"{tuple(sigma)} ends in {last}, not allowed in S({n},{k})")


def _quotient_block(n, k, first, signed, prime):
    chain = range(1, k + 1) if prime else range(n - k + 1, n + 1)
    counts = Counter()
    for w in _chain_words(n, chain, (first,)):
        c = -1 if signed and inv(w) % 2 else 1
        if prime:
            counts[maj(w)] += c
        else:
            counts[(maj(w), s_stat(w, n, k))] += c
    return counts


def _distribution(n, k, signed, prime, jobs):
    k = _normalize_k(n, k)
    check_budget(quotient_size(n, k), what=f"S({n},{k})")
    if n == 0:
        return IntPolynomial.constant(1, ("q",) if prime else ("q", "z"))
    blocks = [(n, k, first, signed, prime) for first in range(1, n + 1)]
    counts = reduce_counters(_quotient_block, blocks, jobs)
    return IntPolynomial.from_counts(("q",) if prime else ("q", "z"), counts)


def signed_distribution(n: int, k: int, signed: bool = True, jobs: int = 1) -> IntPolynomial:
    """``sum over S(n,k) of (-1)^inv q^maj z^s`` (drop the sign if not ``signed``)."""
    return _distribution(n, k, signed, False, jobs)


def signed_distribution_prime(n: int, k: int, signed: bool = True, jobs: int = 1) -> IntPolynomial:
    """``sum over S'(n,k) of (-1)^inv q^maj``."""
    return _distribution(n, k, signed, True, jobs)


def sn_distribution(n: int, stat=maj) -> IntPolynomial:
    """Distribution of ``stat`` over all of S_n, by plain enumeration."""
    check_budget(math.factorial(n), what=f"S_{n}")
    counts = Counter(stat(w) for w in itertools.permutations(range(1, n + 1)))
    return IntPolynomial.from_counts(("q",), counts)
