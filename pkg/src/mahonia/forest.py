"""Forest posets, their labellings, and the rake / T(n,k) families.

Vertices are numbered ``1..n``.  A forest is given by a parent map: the
parent of ``x`` is the unique element covering ``x``, or ``None`` for a
maximal element.  ``x < y`` means ``y`` is a proper ancestor of ``x``.

In the rake ``R(n, k)`` the teeth ``x_1..x_k`` sit under the handle
``x_{k+1} < ... < x_n``; ``x_n`` is the top.  Labellings of a rake are
taken up to permuting teeth labels, with the canonical representative
having teeth labels increasing in vertex order.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from .enumeration import check_budget
from .permstat import Permutation, maj as word_maj
from .qpoly import IntPolynomial

__all__ = [
    "ForestPoset", "Labelling", "NotFixedPoint",
    "hook_lengths", "inv_label", "maj_label", "maj_distribution",
    "linear_extensions", "le_maj_distribution",
    "make_tnk", "make_rake", "rake_classes", "rake_teeth", "r_stat",
    "rake_signed_distribution", "phi", "halve",
    "forest_shapes", "parent_maps", "canonical_form", "random_forest",
]


class NotFixedPoint(ValueError):
    pass


@dataclass(frozen=True)
class ForestPoset:
    n: int
    parent: tuple  # parent[x-1] is the parent of x, or None

    def __post_init__(self):
        if len(self.parent) != self.n:
            raise ValueError("parent map must have one entry per vertex")
        for x, p in enumerate(self.parent, 1):
            if p is not None and not 1 <= p <= self.n:
                raise ValueError(f"parent {p} of {x} out of range")
        for x in range(1, self.n + 1):
            seen = set()
            y = x
            while y is not None:
                if y in seen:
                    raise ValueError(f"parent map has a cycle through {x}")
                seen.add(y)
                y = self.parent[y - 1]

    @classmethod
    def from_parent_map(cls, n: int, parent: Mapping) -> ForestPoset:
        return cls(n, tuple(parent.get(x) for x in range(1, n + 1)))

    @classmethod
    def from_json(cls, text: str | Mapping) -> ForestPoset:
        """Parse ``{"n": 7, "parent": {"1": 5, ...}}``; absent keys are roots."""
        d = json.loads(text) if isinstance(text, str) else text
        n = int(d["n"])
        parent = {int(x): (None if p is None else int(p))
                  for x, p in d.get("parent", {}).items()}
        if any(not 1 <= x <= n for x in parent):
            raise ValueError("parent map key out of range")
        return cls.from_parent_map(n, parent)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "parent": {
            str(x): p for x, p in enumerate(self.parent, 1) if p is not None}})

    @classmethod
    def antichain(cls, n: int) -> ForestPoset:
        return cls(n, (None,) * n)

    @classmethod
    def chain(cls, n: int) -> ForestPoset:
        return cls(n, tuple(x + 1 if x < n else None for x in range(1, n + 1)))

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids = [[] for _ in range(self.n + 1)]
        for x, p in enumerate(self.parent, 1):
            if p is not None:
                kids[p].append(x)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def ancestors(self) -> tuple[frozenset, ...]:
        out = [frozenset()]
        for x in range(1, self.n + 1):
            anc = set()
            y = self.parent[x - 1]
            while y is not None:
                anc.add(y)
                y = self.parent[y - 1]
            out.append(frozenset(anc))
        return tuple(out)

    def covers(self) -> list[tuple[int, int]]:
        """Pairs ``(x, y)`` with ``y`` covering ``x``."""
        return [(x, p) for x, p in enumerate(self.parent, 1) if p is not None]

    def less(self, x: int, y: int) -> bool:
        return y in self.ancestors[x]

    def comparable(self, x: int, y: int) -> bool:
        return self.less(x, y) or self.less(y, x)

    def adjacent(self, x: int, y: int) -> bool:
        return self.parent[x - 1] == y or self.parent[y - 1] == x

    def relations(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(1, self.n + 1) for y in sorted(self.ancestors[x])]

    def minimal(self) -> list[int]:
        return [x for x in range(1, self.n + 1) if not self.children[x]]

    @cached_property
    def hooks(self) -> tuple[int, ...]:
        size = [1] * (self.n + 1)
        # children before parents: process vertices by decreasing depth
        for x in sorted(range(1, self.n + 1), key=lambda v: -len(self.ancestors[v])):
            p = self.parent[x - 1]
            if p is not None:
                size[p] += size[x]
        return tuple(size[1:])


def hook_lengths(P: ForestPoset) -> tuple[int, ...]:
    """``h_x = |{a <= x}|`` for each vertex."""
    return P.hooks


@dataclass(frozen=True)
class Labelling:
    forest: ForestPoset
    label: tuple[int, ...]  # label[x-1] = w(x)

    def __post_init__(self):
        if sorted(self.label) != list(range(1, self.forest.n + 1)):
            raise ValueError(f"labels {self.label} are not a bijection onto [{self.forest.n}]")

    def __call__(self, x: int) -> int:
        return self.label[x - 1]

    @cached_property
    def vertex_of(self) -> tuple[int, ...]:
        """``vertex_of[a-1]`` is the vertex labelled ``a``."""
        out = [0] * self.forest.n
        for x, a in enumerate(self.label, 1):
            out[a - 1] = x
        return tuple(out)

    def descents(self) -> list[int]:
        lab = self.label
        return [x for x, y in self.forest.covers() if lab[x - 1] > lab[y - 1]]

    def inv(self) -> int:
        lab = self.label
        return sum(1 for x, y in self.forest.relations() if lab[x - 1] > lab[y - 1])

    def maj(self) -> int:
        h = self.forest.hooks
        return sum(h[x - 1] for x in self.descents())

    def relabel(self, swap: Mapping[int, int]) -> Labelling:
        return Labelling(self.forest, tuple(swap.get(a, a) for a in self.label))


def inv_label(w: Labelling) -> int:
    return w.inv()


def maj_label(w: Labelling) -> int:
    return w.maj()


def all_labellings(P: ForestPoset) -> Iterator[Labelling]:
    check_budget(math.factorial(P.n), what="labellings")
    for lab in itertools.permutations(range(1, P.n + 1)):
        yield Labelling(P, lab)


def maj_distribution(P: ForestPoset) -> IntPolynomial:
    """``sum over all labellings of q^maj``, by enumeration."""
    check_budget(math.factorial(P.n), what="labellings")
    covers = [(x - 1, y - 1, P.hooks[x - 1]) for x, y in P.covers()]
    counts = Counter()
    for lab in itertools.permutations(range(P.n)):
        counts[sum(h for x, y, h in covers if lab[x] > lab[y])] += 1
    return IntPolynomial.from_counts(("q",), counts)


def linear_extensions(w: Labelling) -> Iterator[Permutation]:
    """Words ``sigma`` with ``w(x)`` left of ``w(y)`` whenever ``x < y``, lexicographically."""
    P = w.forest
    n = P.n
    pending = [len(P.children[x]) for x in range(n + 1)]
    placed = [False] * (n + 1)
    word = []
    vertex_of = w.vertex_of

    def rec():
        if len(word) == n:
            yield Permutation(word)
            return
        for a in range(1, n + 1):
            x = vertex_of[a - 1]
            if placed[x] or pending[x]:
                continue
            placed[x] = True
            p = P.parent[x - 1]
            if p is not None:
                pending[p] -= 1
            word.append(a)
            yield from rec()
            word.pop()
            if p is not None:
                pending[p] += 1
            placed[x] = False

    yield from rec()


def le_maj_distribution(w: Labelling) -> IntPolynomial:
    counts = Counter(word_maj(s) for s in linear_extensions(w))
    return IntPolynomial.from_counts(("q",), counts)


# -- the two families -----------------------------------------------------

def make_tnk(n: int, k: int) -> ForestPoset:
    """``n-k`` isolated vertices followed by a chain ``x_{n-k+1} < ... < x_n``."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    return ForestPoset(n, tuple(x + 1 if n - k < x < n else None for x in range(1, n + 1)))


def make_rake(n: int, k: int) -> ForestPoset:
    """``x_i < x_j`` iff ``i < j`` and ``j > k``."""
    if not 0 <= k < n:
        raise ValueError(f"need 0 <= k < n, got n={n}, k={k}")
    return ForestPoset(n, tuple(max(x, k) + 1 if x < n else None for x in range(1, n + 1)))


def rake_teeth(P: ForestPoset) -> int:
    """Number of teeth of a rake; a chain counts as one tooth."""
    return max(1, len(P.minimal())) if P.n else 0


def rake_classes(n: int, k: int) -> Iterator[Labelling]:
    """Canonical representatives of labellings of R(n,k) modulo tooth permutations."""
    P = make_rake(n, k)
    check_budget(math.factorial(n) // math.factorial(k), what=f"R({n},{k}) classes")
    labels = range(1, n + 1)
    for teeth in itertools.combinations(labels, k):
        rest = [a for a in labels if a not in teeth]
        for handle in itertools.permutations(rest):
            yield Labelling(P, teeth + handle)


def is_canonical(w: Labelling, k: int) -> bool:
    return all(w.label[i] < w.label[i + 1] for i in range(k - 1))


def r_stat(w: Labelling) -> int:
    """``n - w(top)`` for a rake labelling."""
    return w.forest.n - w.label[-1]


def rake_signed_distribution(n: int, k: int, signed: bool = True) -> IntPolynomial:
    """``sum over R(n,k) classes of (-1)^inv q^maj t^r``."""
    counts = Counter()
    for w in rake_classes(n, k):
        c = -1 if signed and w.inv() % 2 else 1
        counts[(w.maj(), r_stat(w))] += c
    return IntPolynomial.from_counts(("q", "t"), counts)


# -- sign-reversing involution on rakes with an even number of vertices ----

def phi(w: Labelling) -> Labelling:
    """Swap ``2i-1, 2i`` for the least ``i`` whose vertices are comparable but not adjacent."""
    P = w.forest
    for i in range(1, P.n // 2 + 1):
        x, y = w.vertex_of[2 * i - 2], w.vertex_of[2 * i - 1]
        if P.comparable(x, y) and not P.adjacent(x, y):
            return w.relabel({2 * i - 1: 2 * i, 2 * i: 2 * i - 1})
    return w


def halve(w: Labelling, k: int | None = None) -> tuple[Labelling, tuple[int, ...]]:
    """Map a fixed point of ``phi`` on R(n,k) to a class of R(n/2, k//2) and a 0-1 vector.

    Label pairs lying on two teeth become the teeth of the smaller rake;
    the remaining pairs fill its handle in the order of the vertices
    carrying their even label.  ``a_j`` records whether the even label of
    the j-th handle pair sits below the odd one.
    """
    P = w.forest
    n = P.n
    k = rake_teeth(P) if k is None else k
    if n % 2:
        raise NotFixedPoint(f"halving needs an even number of vertices, got {n}")
    if phi(w) != w:
        raise NotFixedPoint(f"{w.label} is moved by phi")
    if not is_canonical(w, k):
        raise NotFixedPoint(f"{w.label} is not a canonical class representative")
    at = w.vertex_of
    tooth_pairs, handle_pairs = [], []
    for i in range(1, n // 2 + 1):
        lo, hi = at[2 * i - 2], at[2 * i - 1]
        if lo <= k and hi <= k:
            tooth_pairs.append(i)
        else:
            handle_pairs.append(i)
    handle_pairs.sort(key=lambda i: at[2 * i - 1])
    small = make_rake(n // 2, k // 2)
    if len(tooth_pairs) != k // 2:
        raise NotFixedPoint(f"{w.label} has {len(tooth_pairs)} tooth pairs, expected {k // 2}")
    w_bar = Labelling(small, tuple(tooth_pairs) + tuple(handle_pairs))
    a = tuple(int(at[2 * i - 1] < at[2 * i - 2]) for i in handle_pairs)
    return w_bar, a


# -- forest shapes ---------------------------------------------------------

def canonical_form(P: ForestPoset) -> str:
    """Isomorphism-invariant encoding of a forest."""
    memo = {}

    def enc(x):
        if x not in memo:
            memo[x] = "(" + "".join(sorted(enc(c) for c in P.children[x])) + ")"
        return memo[x]

    return "".join(sorted(enc(x) for x in range(1, P.n + 1) if P.parent[x - 1] is None))


def _from_canonical(code: str) -> ForestPoset:
    parent = {}
    stack = []
    count = 0
    for ch in code:
        if ch == "(":
            count += 1
            if stack:
                parent[count] = stack[-1]
            stack.append(count)
        else:
            stack.pop()
    return ForestPoset.from_parent_map(count, parent)


def forest_shapes(n: int) -> list[ForestPoset]:
    """One forest per isomorphism class on ``n`` vertices, built by adding leaves."""
    shapes = {""}
    for _ in range(n):
        grown = set()
        for code in shapes:
            P = _from_canonical(code) if code else ForestPoset(0, ())
            m = P.n
            grown.add(canonical_form(ForestPoset(m + 1, P.parent + (None,))))
            for x in range(1, m + 1):
                grown.add(canonical_form(ForestPoset(m + 1, P.parent + (x,))))
        shapes = grown
    return [_from_canonical(c) if c else ForestPoset(0, ()) for c in sorted(shapes)]


def parent_maps(n: int) -> Iterator[ForestPoset]:
    """Every acyclic parent map on ``n`` labelled vertices."""
    check_budget((n + 1) ** n, what="parent maps")
    for choice in itertools.product(range(n + 1), repeat=n):
        parent = tuple(None if p == 0 else p for p in choice)
        try:
            yield ForestPoset(n, parent)
        except ValueError:
            continue


def random_forest(n: int, rng: random.Random) -> ForestPoset:
    """Random forest shape, vertices relabelled by a random permutation."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    parent = {}
    for i, x in enumerate(order):
        later = order[i + 1:]
        if later and rng.random() < 0.75:
            parent[x] = rng.choice(later)
    return ForestPoset.from_parent_map(n, parent)


def random_labelling(P: ForestPoset, rng: random.Random) -> Labelling:
    lab = list(range(1, P.n + 1))
    rng.shuffle(lab)
    return Labelling(P, tuple(lab))
