import json
import math

import pytest

from mahonia import identities as I
from mahonia.permstat import signed_distribution
from mahonia.qpoly import IntPolynomial, bracket, bracket_product, substitute_sign
from mahonia.wreath import canonical_dual, fmaj_inverse_distribution, pi_set

Q = IntPolynomial.variable("q")
q = IntPolynomial.variable("q", I.QZ)
z = IntPolynomial.variable("z", I.QZ)


def test_s_recur_examples():
    assert I.s_recur(3, 2) == z - q * z + q**2
    for n in range(1, 6):
        assert I.s_recur(n, n) == 1
    assert I.s_recur(4, 3) == z * (1 - q + q**2) - q**3


def test_s_closed_examples():
    assert I.s_closed(3, 2) == z * (1 - q) + q**2
    assert I.s_closed(4, 1).eval_at_one("z") == bracket(2, -1) * bracket(3) * bracket(4, -1)
    assert I.s_closed(5, 3) == signed_distribution(5, 3)
    with pytest.raises(I.OutOfRange):
        I.s_closed(3, 5)


def test_s_nn1_two_term_shape():
    for n in range(2, 9):
        assert I.s_nn1(n) == z * bracket(n - 1, -1) + (-q) ** (n - 1)


def test_z1_product_examples():
    assert I.s_corollary(3, 2) == 1 - Q + Q**2
    assert I.s_corollary(3, 1) == 1 - Q**3
    for n in range(1, 6):
        assert I.s_corollary(n, n) == 1


@pytest.mark.parametrize("n", range(2, 9))
def test_closed_form_at_z1_is_product(n):
    for k in range(1, n):
        assert I.s_closed(n, k).eval_at_one("z") == I.s_corollary(n, k)


def test_gessel_simion_values():
    assert I.gessel_simion(3) == 1 - Q**3
    assert I.gessel_simion(1) == 1


def test_rake_forms_examples():
    assert I.r_closed_odd(3, 1).eval_at_one("t") == 1 - Q**3
    assert I.r_closed_even_n(4, 2) == bracket(3) * bracket(4, -1)


@pytest.mark.parametrize("n", range(2, 9, 2))
def test_rake_odd_and_even_forms_agree(n):
    for k in range(1, n, 2):
        assert I.r_closed_odd(n, k).eval_at_one("t") == I.r_closed_even_n(n, k)
        assert I.r_recur(n, k) == I.r_closed_odd(n, k)


def test_wreath_rhs_examples():
    assert I.grn_rhs(2, 2, 1) == bracket(4)
    assert I.grpn_rhs(2, 2, 2, 1) == 1 + 2 * Q + Q**2
    assert I.grpn_rhs(2, 1, 2, 1) == bracket(4)
    assert I.fmaj_dual_rhs(2, 1, 3) == bracket(2) * bracket(4) * bracket(6)
    assert I.fmaj_dual_rhs(4, 2, 3) == bracket(4) * bracket(8) * bracket(6)
    for r, p, n in [(2, 1, 3), (4, 2, 3), (3, 3, 2)]:
        assert I.grpn_rhs(r, p, n, 0) == I.fmaj_dual_rhs(r, p, n)


def test_pi_rhs_examples():
    for r in (1, 2, 3):
        assert I.pi_rhs(r, 4, 0) == 1
        # Pi_{r,n,0} is the identity alone
        assert [g.word for g in pi_set(r, 4, 0)] == [(1, 2, 3, 4)]
    for r, n, k in [(1, 4, 1), (2, 4, 2), (3, 5, 2)]:
        lhs = fmaj_inverse_distribution(canonical_dual(g) for g in pi_set(r, n, k))
        assert lhs == I.pi_rhs(r, n, k)
    with pytest.raises(I.OutOfRange):
        I.pi_rhs(2, 3, 2)


def printed_pi_sum(r, n, k):
    """The alternating sum with sign (-1)^i on the i-th term."""
    out = IntPolynomial(("q",))
    for i in range(k + 1):
        out = out + (-1) ** i * math.comb(k, i) * bracket_product((r * j, 1) for j in range(n - i + 1, n + 1))
    return out


@pytest.mark.parametrize("r,n,k", [(1, 4, 1), (2, 4, 2), (1, 6, 3), (3, 5, 1)])
def test_pi_sign_convention(r, n, k):
    # the (-1)^i form differs from the enumeration by an overall (-1)^k
    assert printed_pi_sum(r, n, k) == (-1) ** k * I.pi_rhs(r, n, k)
    if k % 2:
        assert printed_pi_sum(r, n, k) != I.pi_rhs(r, n, k)


def test_bw_rhs_examples():
    from mahonia.forest import ForestPoset, Labelling, make_rake
    assert I.bw_forest_rhs(make_rake(7, 4)) == 24 * bracket(5) * bracket(6) * bracket(7)
    assert I.bw_forest_rhs(ForestPoset.antichain(3)) == 6
    w = Labelling(ForestPoset.chain(3), (1, 2, 3))
    assert I.bw_extension_rhs(w) == 1


def test_bracket_factors():
    assert I.bracket_factors(bracket(3) * bracket(4, -1)) == [(3, 1), (4, -1)]
    assert I.bracket_factors(IntPolynomial.constant(1)) == []
    assert I.bracket_factors(1 + Q - Q**2) is None
    assert I.bracket_factors(IntPolynomial(("q",))) is None


def test_coset_meet_example():
    # G(2,2) has |G(2,2)|/|G(2,1)| = 4 cosets, each meeting C_1 once
    assert I.coset_meet_distribution(2, 1, 2, 1) == 4 * Q


def test_verify_reports():
    reps = list(I.verify("cormain", I.Grid(n_max=3)))
    assert [(r.params["n"], r.params["k"]) for r in reps] == [(n, k) for n in range(1, 4) for k in range(1, n + 1)]
    assert all(r.ok and r.equal and r.asserted for r in reps)
    d = json.loads(reps[-1].to_json())
    assert d["identity"] == "cormain" and d["equal"] is True
    assert IntPolynomial.from_dict(d["lhs"]) == reps[-1].lhs
    assert list(I.verify("gessel-simion", I.Grid(n_max=2)))[0].identity == "gessel_simion"
    with pytest.raises(KeyError):
        list(I.verify("bogus"))


def test_snk_eq_rnk_assertion_pattern():
    for rep in I.verify("snk_eq_rnk", I.Grid(n_max=6)):
        n, k = rep.params["n"], rep.params["k"]
        assert rep.asserted == (not (n % 2 and k % 2 == 0))
        assert rep.ok


def test_problem_scans_are_unasserted():
    for name in ("problem1", "problem2"):
        reps = list(I.verify(name, I.Grid(n_max=3, r_values=(2,))))
        assert reps and all(not r.asserted and r.ok for r in reps)


def test_signed_substitution_relates_brackets():
    for n in range(1, 8):
        assert substitute_sign(I.gessel_simion(n), "q") == bracket_product(
            (j, -((-1) ** (j - 1))) for j in range(2, n + 1))
