import itertools
import json
import math
import random

import pytest

from mahonia.forest import (
    ForestPoset, Labelling, NotFixedPoint, all_labellings, canonical_form, forest_shapes, halve,
    hook_lengths, is_canonical, linear_extensions, maj_distribution, make_rake,
    make_tnk, parent_maps, phi, r_stat, rake_classes, rake_signed_distribution, random_forest,
    random_labelling,
)
from mahonia.permstat import inv as word_inv, maj as word_maj
from mahonia.qpoly import IntPolynomial, bracket, bracket_product

Q = IntPolynomial.variable("q")
R74_JSON = '{"n":7,"parent":{"1":5,"2":5,"3":5,"4":5,"5":6,"6":7}}'


def filtered_extensions(w):
    P = w.forest
    out = []
    for s in itertools.permutations(range(1, P.n + 1)):
        pos = {a: i for i, a in enumerate(s)}
        if all(pos[w(x)] < pos[w(y)] for x, y in P.relations()):
            out.append(s)
    return out


def test_hook_examples():
    assert hook_lengths(ForestPoset.antichain(5)) == (1,) * 5
    assert hook_lengths(make_rake(7, 4)) == (1, 1, 1, 1, 5, 6, 7)
    assert hook_lengths(ForestPoset.chain(3)) == (1, 2, 3)


def test_natural_labelling_has_maj_zero():
    for P in forest_shapes(5):
        # label vertices in the order of a linear extension of the identity labelling
        order = next(linear_extensions(Labelling(P, tuple(range(1, 6)))))
        label = [0] * 5
        for i, x in enumerate(order, 1):
            label[x - 1] = i
        assert Labelling(P, tuple(label)).maj() == 0
    assert Labelling(make_rake(7, 4), tuple(range(1, 8))).maj() == 0
    assert Labelling(make_tnk(7, 4), (3, 2, 1, 4, 5, 6, 7)).maj() == 0


def test_maj_distribution_examples():
    assert maj_distribution(ForestPoset.chain(3)) == bracket_product([(1, 1), (2, 1), (3, 1)])
    assert maj_distribution(ForestPoset.antichain(4)) == 24
    assert maj_distribution(make_rake(7, 4)) == 24 * bracket(5) * bracket(6) * bracket(7)


def test_linear_extension_examples():
    anti = Labelling(ForestPoset.antichain(3), (2, 3, 1))
    assert list(linear_extensions(anti)) == sorted(itertools.permutations(range(1, 4)))
    assert list(linear_extensions(Labelling(ForestPoset.chain(4), (1, 2, 3, 4)))) == [(1, 2, 3, 4)]


@pytest.mark.parametrize("seed", range(25))
def test_linear_extensions_match_filter(seed):
    rng = random.Random(seed)
    w = random_labelling(random_forest(rng.randint(1, 6), rng), rng)
    assert list(linear_extensions(w)) == filtered_extensions(w)


def test_families():
    R = make_rake(7, 4)
    assert R.minimal() == [1, 2, 3, 4]
    assert R.parent == (5, 5, 5, 5, 6, 7, None)
    T = make_tnk(7, 4)
    assert T.parent == (None, None, None, 5, 6, 7, None)
    for n in range(2, 6):
        assert make_rake(n, 1) == ForestPoset.chain(n)
        assert make_rake(n, 0) == ForestPoset.chain(n)
    with pytest.raises(ValueError):
        make_rake(3, 3)


def test_chain_statistics_are_word_statistics():
    for n in range(2, 7):
        P = make_rake(n, 1)
        for w in all_labellings(P):
            assert (w.inv(), w.maj()) == (word_inv(w.label), word_maj(w.label))


def test_rake_classes_examples():
    got = {(w.label[:2], w.label[2]) for w in rake_classes(3, 2)}
    assert got == {((1, 2), 3), ((1, 3), 2), ((2, 3), 1)}
    assert sum(1 for _ in rake_classes(3, 1)) == 6
    assert sum(1 for _ in rake_classes(7, 4)) == 210
    assert all(is_canonical(w, 4) for w in rake_classes(6, 4))


def test_rake_distribution_examples():
    assert rake_signed_distribution(3, 1).eval_at_one("t") == 1 - Q**3
    assert rake_signed_distribution(4, 2).eval_at_one("t") == bracket(3) * bracket(4, -1)
    qt = IntPolynomial.variable("q", ("q", "t")) * IntPolynomial.variable("t", ("q", "t"))
    for k in (1, 3, 5):
        sign = (-1) ** (k + 2)
        expected = sum(((sign * qt) ** i for i in range(k + 1)), IntPolynomial.constant(0, ("q", "t")))
        assert rake_signed_distribution(k + 1, k) == expected


def test_r_stat():
    w = Labelling(make_rake(4, 2), (1, 4, 3, 2))
    assert r_stat(w) == 2


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 8) for k in range(2, n)])
def test_tooth_permutations_preserve_inv_and_maj(n, k):
    P = make_rake(n, k)
    rng = random.Random(n * 10 + k)
    for _ in range(10):
        w = random_labelling(P, rng)
        base = (w.inv(), w.maj())
        for perm in itertools.permutations(w.label[:k]):
            assert (Labelling(P, perm + w.label[k:]).inv(), Labelling(P, perm + w.label[k:]).maj()) == base


@pytest.mark.parametrize("n", range(2, 9, 2))
def test_phi_is_sign_reversing_involution(n):
    for k in range(0, n):
        for w in rake_classes(n, k):
            v = phi(w)
            assert phi(v) == w
            if v != w:
                assert v.maj() == w.maj()
                assert (v.inv() - w.inv()) % 2 == 1


def fixed_points(n, k):
    return [w for w in rake_classes(n, k) if phi(w) == w]


def test_fixed_point_count_example():
    assert len(fixed_points(4, 2)) == 4


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_halve_is_bijection_with_statistics(n):
    for k in range(1, n):
        d = (n + 1 - k) // 2
        fixed = fixed_points(n, k)
        small = math.factorial(n // 2) // math.factorial(max(k // 2, 1))
        assert len(fixed) == small * 2**d
        images = set()
        for w in fixed:
            wb, a = halve(w, k)
            assert len(a) == d
            images.add((wb.label, a))
            assert w.inv() % 2 == sum(a) % 2
            if k % 2:
                weights = [1] + [k + 2 * i - 2 for i in range(2, d + 1)]
            else:
                weights = [k + 2 * i - 1 for i in range(1, d + 1)]
            assert w.maj() == 2 * wb.maj() + sum(c * x for c, x in zip(weights, a))
        assert len(images) == len(fixed)


def test_halve_rejects():
    with pytest.raises(NotFixedPoint):
        halve(Labelling(make_rake(3, 1), (1, 2, 3)))
    moved = next(w for w in rake_classes(4, 2) if phi(w) != w)
    with pytest.raises(NotFixedPoint):
        halve(moved, 2)


def test_forest_shape_counts():
    # rooted forests on n unlabelled vertices: 1, 1, 2, 4, 9, 20, 48, 115
    assert [len(forest_shapes(n)) for n in range(0, 8)] == [1, 1, 2, 4, 9, 20, 48, 115]
    for n in range(1, 5):
        assert len({canonical_form(P) for P in parent_maps(n)}) == len(forest_shapes(n))
        # labelled rooted forests: (n+1)^(n-1)
        assert sum(1 for _ in parent_maps(n)) == (n + 1) ** (n - 1)


def test_forest_json():
    P = ForestPoset.from_json(R74_JSON)
    assert P == make_rake(7, 4)
    assert ForestPoset.from_json(P.to_json()) == P
    assert json.loads(P.to_json()) == json.loads(R74_JSON)
    with pytest.raises(ValueError):
        ForestPoset.from_parent_map(2, {1: 2, 2: 1})
