"""Colored permutations, G(r,n), G(r,p,n), the dual quotient, and flag-major index.

An element ``g = [s_1^{z_1}, ..., s_n^{z_n}]`` of G(r,n) sends ``i^0`` to
``s_i^{z_i}``.  Products compose as functions: ``(g*h)(i^0) = g(h(i^0))``.

The dual group G(r,p,n)* is G(r,n) modulo the central cyclic subgroup
generated by the uniform color shift by ``r/p``.  A coset is stored as
the representative whose minimal weakly decreasing color lift (the
k-vector) is entrywise least among the ``p`` shifts.

>>> g = DualGroupElement.from_word(6, 3, [2, 7, 6, 4, 8, 1, 5, 3], [2, 3, 3, 5, 1, 1, 3, 2])
>>> g.k_vec
(18, 13, 13, 9, 5, 5, 1, 0)
>>> g.fmaj()
106
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .enumeration import check_budget
from .permstat import Permutation, inv as word_inv
from .qpoly import IntPolynomial

__all__ = [
    "ColoredPermutation", "DualGroupElement", "ModulusMismatch", "NoEntrywiseMinimum",
    "multiply", "inverse", "canonical_dual", "min_decreasing_lift",
    "enumerate_group", "enumerate_grpn", "enumerate_dual", "dual_size",
    "c_k_set", "in_c_k", "fmaj_inverse_distribution", "signed_fmaj_inverse_distribution",
    "is_z", "pi_set", "in_nrp", "in_calA",
    "encode_compatible", "decode_compatible", "fg_series_truncated", "fg_series_closed",
    "colori_check", "partitions_bounded",
]


class ModulusMismatch(ValueError):
    pass


class NoEntrywiseMinimum(ArithmeticError):
    """The p candidate k-vectors of a coset have no entrywise least element."""


@dataclass(frozen=True)
class ColoredPermutation:
    r: int
    word: tuple[int, ...]
    colors: tuple[int, ...]

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("modulus must be positive")
        if len(self.word) != len(self.colors):
            raise ValueError("word and colors differ in length")
        Permutation(self.word)
        object.__setattr__(self, "word", tuple(self.word))
        object.__setattr__(self, "colors", tuple(c % self.r for c in self.colors))

    @classmethod
    def identity(cls, r: int, n: int) -> ColoredPermutation:
        return cls(r, tuple(range(1, n + 1)), (0,) * n)

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def abs(self) -> Permutation:
        return Permutation(self.word)

    def __mul__(self, other: ColoredPermutation) -> ColoredPermutation:
        if self.r != other.r:
            raise ModulusMismatch(f"{self.r} != {other.r}")
        if self.n != other.n:
            raise ValueError("size mismatch")
        return ColoredPermutation(
            self.r,
            tuple(self.word[t - 1] for t in other.word),
            tuple(self.colors[t - 1] + w for t, w in zip(other.word, other.colors)))

    def inverse(self) -> ColoredPermutation:
        tau = [0] * self.n
        for i, s in enumerate(self.word, 1):
            tau[s - 1] = i
        return ColoredPermutation(self.r, tuple(tau), tuple(-self.colors[t - 1] for t in tau))

    def shift(self, c: int) -> ColoredPermutation:
        """Add ``c`` to every color (multiplication by a central element)."""
        return ColoredPermutation(self.r, self.word, tuple(z + c for z in self.colors))

    def to_dict(self) -> dict:
        return {"r": self.r, "word": list(self.word), "colors": list(self.colors)}

    @classmethod
    def from_dict(cls, d) -> ColoredPermutation:
        return cls(int(d["r"]), tuple(d["word"]), tuple(d["colors"]))

    def __str__(self):
        return "[" + ",".join(f"{s}^{z}" for s, z in zip(self.word, self.colors)) + "]"


def multiply(g: ColoredPermutation, h: ColoredPermutation) -> ColoredPermutation:
    return g * h


def inverse(g: ColoredPermutation) -> ColoredPermutation:
    return g.inverse()


def min_decreasing_lift(colors: Sequence[int], r: int) -> tuple[int, ...]:
    """Least weakly decreasing sequence of integers congruent to ``colors`` mod ``r``."""
    out = [0] * len(colors)
    prev = 0
    for i in reversed(range(len(colors))):
        prev += (colors[i] - prev) % r
        out[i] = prev
    return tuple(out)


@dataclass(frozen=True)
class DualGroupElement:
    r: int
    p: int
    rep: ColoredPermutation
    k_vec: tuple[int, ...]

    @classmethod
    def from_word(cls, r: int, p: int, word: Sequence[int], colors: Sequence[int]) -> DualGroupElement:
        return canonical_dual(ColoredPermutation(r, tuple(word), tuple(colors)), p)

    @property
    def n(self) -> int:
        return self.rep.n

    @property
    def word(self) -> tuple[int, ...]:
        return self.rep.word

    @property
    def colors(self) -> tuple[int, ...]:
        return self.rep.colors

    @cached_property
    def hdes(self) -> frozenset:
        w, z = self.rep.word, self.rep.colors
        return frozenset(i for i in range(1, self.n)
                         if z[i - 1] == z[i] and w[i - 1] > w[i])

    @cached_property
    def h_vec(self) -> tuple[int, ...]:
        out, acc = [0] * self.n, 0
        for i in range(self.n, 0, -1):
            if i in self.hdes:
                acc += 1
            out[i - 1] = acc
        return tuple(out)

    @cached_property
    def lambda_vec(self) -> tuple[int, ...]:
        return tuple(self.r * h + k for h, k in zip(self.h_vec, self.k_vec))

    def fmaj(self) -> int:
        return sum(self.lambda_vec)

    def inverse(self) -> DualGroupElement:
        return canonical_dual(self.rep.inverse(), self.p)

    def __mul__(self, other: DualGroupElement) -> DualGroupElement:
        if (self.r, self.p) != (other.r, other.p):
            raise ModulusMismatch("different groups")
        return canonical_dual(self.rep * other.rep, self.p)

    def to_dict(self) -> dict:
        return {**self.rep.to_dict(), "p": self.p}

    @classmethod
    def from_dict(cls, d) -> DualGroupElement:
        return cls.from_word(int(d["r"]), int(d.get("p", 1)), d["word"], d["colors"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __str__(self):
        return f"{self.rep} in G({self.r},{self.p},{self.n})*"


def canonical_dual(g: ColoredPermutation, p: int = 1) -> DualGroupElement:
    """Canonical representative of the coset of ``g`` modulo uniform shifts by ``r/p``."""
    r = g.r
    if p < 1 or r % p:
        raise ValueError(f"p={p} must divide r={r}")
    step = r // p
    best = None
    for j in range(p):
        cand = g.shift(j * step)
        k = min_decreasing_lift(cand.colors, r)
        if best is None or all(a <= b for a, b in zip(k, best[1])):
            best = (cand, k)
    rep, kmin = best
    for j in range(p):
        k = min_decreasing_lift(g.shift(j * step).colors, r)
        if not all(a <= b for a, b in zip(kmin, k)):
            raise NoEntrywiseMinimum(f"no entrywise least k-vector in the coset of {g}")
    return DualGroupElement(r, p, rep, kmin)


# -- enumeration ----------------------------------------------------------

def _group_size(r, n):
    return r ** n * math.factorial(n)


def dual_size(r: int, p: int, n: int) -> int:
    return _group_size(r, n) // p


def enumerate_group(r: int, n: int) -> Iterator[ColoredPermutation]:
    check_budget(_group_size(r, n), what=f"G({r},{n})")
    for w in itertools.permutations(range(1, n + 1)):
        for z in itertools.product(range(r), repeat=n):
            yield ColoredPermutation(r, w, z)


def enumerate_grpn(r: int, p: int, n: int) -> Iterator[ColoredPermutation]:
    """Elements of G(r,p,n): color sum divisible by ``p``."""
    if r % p:
        raise ValueError(f"p={p} must divide r={r}")
    for g in enumerate_group(r, n):
        if sum(g.colors) % p == 0:
            yield g


def enumerate_dual(r: int, p: int, n: int) -> Iterator[DualGroupElement]:
    """Each element of G(r,p,n)* once, as its canonical representative."""
    if r % p:
        raise ValueError(f"p={p} must divide r={r}")
    check_budget(_group_size(r, n), what=f"G({r},{n})")
    step = r // p
    for w in itertools.permutations(range(1, n + 1)):
        # the coset has exactly one element whose last color is below r/p
        for z in itertools.product(range(r), repeat=n - 1):
            for last in range(step if n else 1):
                yield canonical_dual(ColoredPermutation(r, w, z + (last,)), p)


def c_k_set(r: int, p: int, n: int, k: int) -> Iterator[DualGroupElement]:
    """Elements with a representative whose first ``k`` entries are increasing and uncolored."""
    if not 0 <= k < n and not (k == 0 and n == 0):
        raise ValueError(f"need 0 <= k < n, got n={n}, k={k}")
    if k == 0:
        yield from enumerate_dual(r, p, n)
        return
    check_budget(r ** (n - k) * math.factorial(n) // math.factorial(k), what=f"C_{k}")
    for head in itertools.combinations(range(1, n + 1), k):
        rest = [v for v in range(1, n + 1) if v not in head]
        for tail in itertools.permutations(rest):
            for z in itertools.product(range(r), repeat=n - k):
                yield canonical_dual(ColoredPermutation(r, head + tail, (0,) * k + z), p)


def in_c_k(g: DualGroupElement, k: int) -> bool:
    """Membership in C_k, independent of the stored representative."""
    w, z = g.word, g.colors
    if any(w[i] > w[i + 1] for i in range(k - 1)):
        return False
    if k == 0:
        return True
    step = g.r // g.p
    return all(c == z[0] for c in z[:k]) and z[0] % step == 0


def fmaj_inverse_distribution(elements: Iterable[DualGroupElement]) -> IntPolynomial:
    """``sum of q^fmaj(g^{-1})`` over the given elements."""
    counts = Counter(g.inverse().fmaj() for g in elements)
    return IntPolynomial.from_counts(("q",), counts)


def signed_fmaj_inverse_distribution(elements: Iterable[DualGroupElement]) -> IntPolynomial:
    """``sum of (-1)^inv(|g|) q^fmaj(g^{-1})``."""
    counts = Counter()
    for g in elements:
        counts[g.inverse().fmaj()] += -1 if word_inv(g.word) % 2 else 1
    return IntPolynomial.from_counts(("q",), counts)


# -- homogeneous increasing subsequences ----------------------------------

def is_z(g: ColoredPermutation, z: int) -> int:
    """Length of the longest increasing subsequence of ``|g|`` among positions of color ``z``."""
    vals = [s for s, c in zip(g.word, g.colors) if c == z % g.r]
    best = []
    for i, v in enumerate(vals):
        best.append(1 + max((best[j] for j in range(i) if vals[j] < v), default=0))
    return max(best, default=0)


def pi_set(r: int, n: int, k: int) -> Iterator[ColoredPermutation]:
    """Elements with uncolored increasing first ``n-k`` entries and ``is_0 == n-k``."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    m = n - k
    check_budget(r ** k * math.factorial(n) // math.factorial(m), what=f"Pi({r},{n},{k})")
    for head in itertools.combinations(range(1, n + 1), m):
        rest = [v for v in range(1, n + 1) if v not in head]
        for tail in itertools.permutations(rest):
            for z in itertools.product(range(r), repeat=k):
                g = ColoredPermutation(r, head + tail, (0,) * m + z)
                if is_z(g, 0) == m:
                    yield g


# -- compatible vectors ---------------------------------------------------

def in_nrp(f: Sequence[int], r: int, p: int) -> bool:
    """All entries congruent mod ``r`` to a common multiple of ``r/p``."""
    if not f:
        return True
    step = r // p
    c = f[0] % r
    return c % step == 0 and all(x % r == c for x in f)


def in_calA(f: Sequence[int], r: int, p: int, k: int) -> bool:
    head = f[:k]
    return all(head[i] >= head[i + 1] for i in range(k - 1)) and in_nrp(head, r, p)


def encode_compatible(g: DualGroupElement, mu: Sequence[int], h: int) -> tuple[int, ...]:
    """The ``g``-compatible vector for partition ``mu`` and shift ``h``."""
    n, r, p = g.n, g.r, g.p
    mu = tuple(mu) + (0,) * (n - len(mu))
    if len(mu) != n or any(mu[i] < mu[i + 1] for i in range(n - 1)) or (n and mu[-1] < 0):
        raise ValueError(f"{mu} is not a partition with at most {n} parts")
    if not 0 <= h < p:
        raise ValueError(f"h={h} outside 0..{p - 1}")
    lam = g.lambda_vec
    f = [0] * n
    for j, s in enumerate(g.word):
        f[s - 1] = lam[j] + r * mu[j] + h * (r // p)
    return tuple(f)


def decode_compatible(f: Sequence[int], r: int, p: int) -> tuple[DualGroupElement, tuple[int, ...], int]:
    """Inverse of :func:`encode_compatible`: recover ``(g, mu, h)`` from ``f``."""
    n = len(f)
    step = r // p
    # positions sorted by value descending; ties keep ascending positions
    word = tuple(sorted(range(1, n + 1), key=lambda i: (-f[i - 1], i)))
    a = [f[s - 1] for s in word]
    g = canonical_dual(ColoredPermutation(r, word, tuple(x % r for x in a)), p)
    lam = g.lambda_vec
    shift = (a[0] - lam[0]) % r if n else 0
    if shift % step:
        raise ArithmeticError(f"{tuple(f)} does not decode over G({r},{p},{n})*")
    h = shift // step
    mu = []
    for x, l in zip(a, lam):
        d = x - l - h * step
        if d % r or d < 0:
            raise ArithmeticError(f"{tuple(f)} does not decode over G({r},{p},{n})*")
        mu.append(d // r)
    mu = tuple(mu)
    if encode_compatible(g, mu, h) != tuple(f):
        raise ArithmeticError(f"{tuple(f)} failed to round-trip")
    return g, mu, h


def partitions_bounded(n: int, max_part: int) -> Iterator[tuple[int, ...]]:
    """Weakly decreasing n-tuples with entries in ``0..max_part``."""
    def rec(i, cap):
        if i == n:
            yield ()
            return
        for v in range(cap, -1, -1):
            for rest in rec(i + 1, v):
                yield (v,) + rest
    return rec(0, max_part)


def _vectors_up_to(n: int, total: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _vectors_up_to(n - 1, total - first):
            yield (first,) + rest


def fg_series_truncated(g: DualGroupElement, D: int) -> IntPolynomial:
    """``sum q^|f|`` over ``g``-compatible ``f`` with ``|f| <= D``, found by decoding all of them."""
    counts = Counter()
    for f in _vectors_up_to(g.n, D):
        g2, _, _ = decode_compatible(f, g.r, g.p)
        if g2 == g:
            counts[sum(f)] += 1
    return IntPolynomial.from_counts(("q",), counts)


def fg_series_closed(g: DualGroupElement, D: int) -> IntPolynomial:
    """Power series of ``q^fmaj / prod_{i<n}(1-q^{ri}) (1-q^{rn/p})`` up to degree ``D``."""
    n, r, p = g.n, g.r, g.p
    coeffs = [0] * (D + 1)
    if g.fmaj() <= D:
        coeffs[g.fmaj()] = 1
    periods = [r * i for i in range(1, n)] + ([r * n // p] if n else [])
    for m in periods:
        # multiply by 1/(1-q^m)
        for d in range(m, D + 1):
            coeffs[d] += coeffs[d - m]
    return IntPolynomial.from_counts(("q",), dict(enumerate(coeffs)))


def colori_check(g: DualGroupElement) -> bool:
    """``(lambda_i(g) + lambda_{|g(i)|}(g^{-1}))_i`` lies in N^n_{(r,p)}."""
    lam, lam_inv = g.lambda_vec, g.inverse().lambda_vec
    vec = [lam[i] + lam_inv[s - 1] for i, s in enumerate(g.word)]
    return in_nrp(vec, g.r, g.p)
