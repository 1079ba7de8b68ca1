"""Closed forms and recursions for the signed mahonian and flag-major distributions.

Every closed form here has a brute-force counterpart in :mod:`permstat`,
:mod:`forest` or :mod:`wreath`; :func:`verify` pairs them up and streams
one :class:`IdentityReport` per parameter tuple.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from . import forest, permstat, wreath
from .qpoly import IntPolynomial, bracket, exact_div

__all__ = [
    "OutOfRange", "IdentityReport", "Grid", "IDENTITIES", "verify",
    "s_recur", "s_closed", "s_corollary", "s_nn1", "gessel_simion",
    "r_recur", "r_closed_odd", "r_closed_even_n",
    "grpn_rhs", "grn_rhs", "fmaj_dual_rhs", "pi_rhs",
    "bw_forest_rhs", "bw_extension_rhs", "coset_meet_distribution",
    "bracket_factors",
]

QZ = ("q", "z")
QT = ("q", "t")
SIGN = (1, -1)  # SIGN[e % 2] == (-1)**e


class OutOfRange(ValueError):
    pass


def _one(vars=("q",)):
    return IntPolynomial.constant(1, vars)


def _br(n, e, vars=("q",)):
    """``[n]_{(-1)^e q}``."""
    return bracket(n, SIGN[e % 2], "q", vars)


# -- signed major index on S(n,k) -----------------------------------------

def s_nn1(n: int) -> IntPolynomial:
    """``s(n, n-1) = z [n-1]_{-q} + (-q)^{n-1}``."""
    z = IntPolynomial.variable("z", QZ)
    return z * _br(n - 1, 1, QZ) + IntPolynomial.monomial((n - 1, 0), SIGN[(n - 1) % 2], QZ)


@lru_cache(maxsize=None)
def s_recur(n: int, k: int) -> IntPolynomial:
    """Bivariate ``s(n,k)(q,z)`` from the catalytic recursion in ``n``."""
    if not 0 <= k <= n:
        raise OutOfRange(f"need 0 <= k <= n, got n={n}, k={k}")
    if k == 0:
        k = 1
    if k >= n:
        return _one(QZ)
    z = IntPolynomial.variable("z", QZ)
    prev = s_recur(n - 1, k)
    prev_at_one = prev.eval_at_one("z")
    inner = ((SIGN[k % 2] * z ** (n - k) + IntPolynomial.monomial((n - 1, 0), SIGN[(n - 1) % 2], QZ))
             * prev_at_one
             + SIGN[n % 2] * z * (1 - IntPolynomial.monomial((n - 1, 0), 1, QZ)) * prev.substitute_sign("z"))
    tail = z ** (n - k) * s_recur(n - 1, k - 1).eval_at_one("z")
    return exact_div(inner, 1 + z) + tail


def s_closed(n: int, k: int) -> IntPolynomial:
    """Explicit bivariate ``s(n,k)(q,z)`` for ``0 <= k < n``."""
    if not 0 <= k < n:
        raise OutOfRange(f"need 0 <= k < n, got n={n}, k={k}")
    if k == 0:
        k = 1
    z = IntPolynomial.variable("z", QZ)
    if k % 2:
        prefix = _one(QZ)
        for j in range(k + 1, n):
            prefix = prefix * _br(j, j - 1, QZ)
        inner = IntPolynomial(QZ)
        for i in range(n - k):
            inner = inner + IntPolynomial.monomial((n - i - 1, i), SIGN[((n + 1) * (n - i - 1)) % 2], QZ)
        inner = inner + z ** (n - k) * _br(k, n - 1, QZ)
        return prefix * inner
    if k == n - 1:
        return s_nn1(n)
    prefix = _one(QZ)
    for j in range(k + 2, n):
        prefix = prefix * _br(j, j - 1, QZ)
    head = _br(k + 1, n, QZ)
    diff = _br(k, 1, QZ) - _br(k, 0, QZ)
    inner = IntPolynomial(QZ)
    for i in range(n - k):
        inner = inner + head * _br(n - i - 1, n + 1, QZ) * z ** i
        if i % 2 == 0:
            inner = inner + IntPolynomial.monomial((n - i - 1, i), 1, QZ) * diff
    return prefix * (head * _br(n, n - 1, QZ) + (z - 1) * inner)


def s_corollary(n: int, k: int) -> IntPolynomial:
    """``s(n,k)(q) = [k+1]_{e^{k+n+nk} q} [k+2]_{e^{k+1} q} ... [n]_{e^{n-1} q}``, ``e = -1``."""
    if not 0 <= k <= n:
        raise OutOfRange(f"need 0 <= k <= n, got n={n}, k={k}")
    k = max(k, 1)
    if k >= n:
        return _one()
    out = _br(k + 1, k + n + n * k)
    for j in range(k + 2, n + 1):
        out = out * _br(j, j - 1)
    return out


def gessel_simion(n: int) -> IntPolynomial:
    """``[2]_{-q} [3]_q ... [n]_{(-1)^{n-1} q}``."""
    out = _one()
    for j in range(2, n + 1):
        out = out * _br(j, j - 1)
    return out


# -- rakes ----------------------------------------------------------------

@lru_cache(maxsize=None)
def r_recur(n: int, k: int) -> IntPolynomial:
    """Bivariate ``r(n,k)(q,t)`` from the recursion in ``n``; base ``r(k+1,k) = [k+1]_{-qt}``."""
    if not 0 <= k < n:
        raise OutOfRange(f"need 0 <= k < n, got n={n}, k={k}")
    if n == k + 1:
        return _geometric_qt(n, -1)
    t = IntPolynomial.variable("t", QT)
    prev = r_recur(n - 1, k)
    qn1 = IntPolynomial.monomial((n - 1, 0), 1, QT)
    mqt = IntPolynomial.monomial((n - 1, n - 1), SIGN[(n - 1) % 2], QT)
    inner = t * (1 - qn1) * prev.substitute_sign("t") + (1 + t * mqt) * prev.eval_at_one("t")
    return exact_div(inner, 1 + t)


def _geometric_qt(n, sign):
    return IntPolynomial(QT, {(i, i): sign ** i for i in range(n)})


def r_closed_odd(n: int, k: int) -> IntPolynomial:
    """``[k+1]_{-q} [k+2]_q ... [n-1]_{e^n q} [n]_{e^{n+1} q t}`` for odd ``k < n``."""
    if k % 2 == 0 or not 0 < k < n:
        raise OutOfRange(f"need odd k < n, got n={n}, k={k}")
    out = _one(QT)
    for j in range(k + 1, n):
        out = out * _br(j, j - 1, QT)
    return out * _geometric_qt(n, SIGN[(n + 1) % 2])


def r_closed_even_n(n: int, k: int) -> IntPolynomial:
    """``r(n,k)(q) = [k+1]_{e^k q} ... [n-1]_q [n]_{-q}`` for even ``n``."""
    if n % 2 or not 0 <= k < n:
        raise OutOfRange(f"need even n and 0 <= k < n, got n={n}, k={k}")
    out = _one()
    for j in range(k + 1, n + 1):
        out = out * _br(j, j - 1)
    return out


# -- wreath products ------------------------------------------------------

def _check_rpn(r, p, n, k=None):
    if r < 1 or p < 1 or r % p:
        raise OutOfRange(f"need p | r, got r={r}, p={p}")
    if n < 1:
        raise OutOfRange(f"need n >= 1, got {n}")
    if k is not None and not 0 <= k < n:
        raise OutOfRange(f"need 0 <= k < n, got n={n}, k={k}")


def fmaj_dual_rhs(r: int, p: int, n: int) -> IntPolynomial:
    """``prod [d_i]_q`` with ``d_i = ri`` for ``i < n`` and ``d_n = rn/p``."""
    _check_rpn(r, p, n)
    out = _one()
    for i in range(1, n):
        out = out * bracket(r * i)
    return out * bracket(r * n // p)


def grpn_rhs(r: int, p: int, n: int, k: int) -> IntPolynomial:
    """``[p]_{q^{kr/p}} [r(k+1)]_q ... [r(n-1)]_q [rn/p]_q``.

    For ``k = 0`` the set summed over is the whole dual group and the
    leading factor is 1, giving :func:`fmaj_dual_rhs`.
    """
    _check_rpn(r, p, n, k)
    if k == 0:
        return fmaj_dual_rhs(r, p, n)
    out = bracket(p).substitute_power("q", k * r // p)
    for j in range(k + 1, n):
        out = out * bracket(r * j)
    return out * bracket(r * n // p)


def grn_rhs(r: int, n: int, k: int) -> IntPolynomial:
    """``[r(k+1)]_q [r(k+2)]_q ... [rn]_q``."""
    _check_rpn(r, 1, n, k)
    out = _one()
    for j in range(k + 1, n + 1):
        out = out * bracket(r * j)
    return out


def pi_rhs(r: int, n: int, k: int) -> IntPolynomial:
    """``sum_i (-1)^{k-i} C(k,i) [r(n-i+1)]_q ... [rn]_q`` for ``n >= 2k``."""
    if n < 2 * k or k < 0:
        raise OutOfRange(f"need n >= 2k, got n={n}, k={k}")
    out = IntPolynomial(("q",))
    for i in range(k + 1):
        term = IntPolynomial.constant(SIGN[(k - i) % 2] * math.comb(k, i))
        for j in range(n - i + 1, n + 1):
            term = term * bracket(r * j)
        out = out + term
    return out


def coset_meet_distribution(r: int, p: int, n: int, k: int) -> IntPolynomial:
    """``sum over cosets g*G(r,k) in G(r,p,n)* of q^{|coset & C_k|}``."""
    _check_rpn(r, p, n, k)
    sub = [wreath.ColoredPermutation(r, w + tuple(range(k + 1, n + 1)), z + (0,) * (n - k))
           for w in itertools.permutations(range(1, k + 1))
           for z in itertools.product(range(r), repeat=k)]
    seen = set()
    counts = Counter()
    for g in wreath.enumerate_dual(r, p, n):
        if g in seen:
            continue
        coset = {wreath.canonical_dual(g.rep * h, p) for h in sub}
        seen |= coset
        counts[sum(1 for x in coset if wreath.in_c_k(x, k))] += 1
    return IntPolynomial.from_counts(("q",), counts)


# -- forests --------------------------------------------------------------

def bw_forest_rhs(P: forest.ForestPoset) -> IntPolynomial:
    """``(n! / prod h_x) prod [h_x]_q``."""
    hooks = P.hooks
    out = IntPolynomial.constant(math.factorial(P.n) // math.prod(hooks))
    for h in hooks:
        out = out * bracket(h)
    return out


def bw_extension_rhs(w: forest.Labelling) -> IntPolynomial:
    """``q^{maj(w)} [n]_q! / prod [h_x]_q``."""
    num = IntPolynomial.monomial((w.maj(),))
    for i in range(1, w.forest.n + 1):
        num = num * bracket(i)
    den = _one()
    for h in w.forest.hooks:
        den = den * bracket(h)
    return exact_div(num, den)


# -- factorization heuristic for scans ------------------------------------

def bracket_factors(p: IntPolynomial, max_n: int | None = None) -> list[tuple[int, int]] | None:
    """Write a univariate ``p`` as a product of ``[m]_{+-q}``, greedily; ``None`` if impossible."""
    if not p or p.used_vars() not in ((), ("q",)):
        return None
    rest = p.embed(("q",)) if p.used_vars() else p
    factors = []
    m = max_n or rest.degree("q") + 1
    while rest.degree("q") > 0 and m >= 2:
        for sign in (1, -1):
            try:
                quot = exact_div(rest, bracket(m, sign))
            except ArithmeticError:
                continue
            factors.append((m, sign))
            rest = quot
            break
        else:
            m -= 1
    if rest.degree("q") != 0 or rest.coefficient(0) not in (1, -1):
        return None
    if rest.coefficient(0) == -1:
        factors.append((0, -1))
    return sorted(factors)


# -- verification ---------------------------------------------------------

@dataclass
class IdentityReport:
    identity: str
    params: dict
    lhs: IntPolynomial
    rhs: IntPolynomial
    equal: bool = field(init=False)
    asserted: bool = True

    def __post_init__(self):
        self.equal = self.lhs == self.rhs

    @property
    def ok(self) -> bool:
        return self.equal or not self.asserted

    def to_dict(self) -> dict:
        return {"identity": self.identity, "params": self.params,
                "lhs": self.lhs.to_dict(), "rhs": self.rhs.to_dict(),
                "equal": self.equal, "asserted": self.asserted}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


@dataclass
class Grid:
    n_max: int = 6
    n_min: int = 1
    k_max: int | None = None
    r_values: Sequence[int] = (1, 2, 3)
    p_values: Sequence[int] | None = None  # default: every divisor of r
    samples: int = 20
    seed: int = 0
    degree: int = 12
    jobs: int = 1

    def ns(self):
        return range(max(self.n_min, 1), self.n_max + 1)

    def ks(self, lo, hi):
        top = hi if self.k_max is None else min(hi, self.k_max)
        return range(lo, top + 1)

    def rp(self):
        for r in self.r_values:
            ps = [p for p in range(1, r + 1) if r % p == 0]
            if self.p_values is not None:
                ps = [p for p in ps if p in self.p_values]
            for p in ps:
                yield r, p


def _s_brute(n, k, jobs=1):
    return permstat.signed_distribution(n, k, True, jobs)


def _cormain(g):
    for n in g.ns():
        for k in g.ks(1, n):
            yield {"n": n, "k": k}, _s_brute(n, k, g.jobs).eval_at_one("z"), s_corollary(n, k)


def _main(g):
    for n in g.ns():
        for k in g.ks(1, n - 1):
            yield {"n": n, "k": k}, _s_brute(n, k, g.jobs), s_closed(n, k)


def _recur(g):
    for n in g.ns():
        for k in g.ks(1, n):
            yield {"n": n, "k": k}, _s_brute(n, k, g.jobs), s_recur(n, k)


def _gessel_simion(g):
    for n in g.ns():
        yield {"n": n}, _s_brute(n, 1, g.jobs).eval_at_one("z"), gessel_simion(n)


def _macmahon(g):
    for n in g.ns():
        fact = _one()
        for i in range(1, n + 1):
            fact = fact * bracket(i)
        yield {"n": n, "stat": "maj"}, permstat.sn_distribution(n, permstat.maj), fact
        yield {"n": n, "stat": "inv"}, permstat.sn_distribution(n, permstat.inv), fact


def _unsigned_quotient(g):
    for n in g.ns():
        for k in g.ks(1, n):
            rhs = _one()
            for j in range(k + 1, n + 1):
                rhs = rhs * bracket(j)
            lhs = permstat.signed_distribution(n, k, False, g.jobs).eval_at_one("z")
            yield {"n": n, "k": k}, lhs, rhs


def _rake_recur(g):
    for n in g.ns():
        for k in g.ks(0, n - 1):
            yield {"n": n, "k": k}, forest.rake_signed_distribution(n, k), r_recur(n, k)


def _rake_odd(g):
    for n in g.ns():
        for k in g.ks(1, n - 1):
            if k % 2:
                yield {"n": n, "k": k}, forest.rake_signed_distribution(n, k), r_closed_odd(n, k)


def _rake_even(g):
    for n in g.ns():
        if n % 2 == 0:
            for k in g.ks(0, n - 1):
                lhs = forest.rake_signed_distribution(n, k).eval_at_one("t")
                yield {"n": n, "k": k}, lhs, r_closed_even_n(n, k)


def _snk_eq_rnk(g):
    for n in g.ns():
        for k in g.ks(1, n - 1):
            lhs = _s_brute(n, k, g.jobs).eval_at_one("z")
            rhs = forest.rake_signed_distribution(n, k).eval_at_one("t")
            yield {"n": n, "k": k}, lhs, rhs, not (n % 2 and k % 2 == 0)


def _problem1(g):
    for n in g.ns():
        for k in g.ks(1, n):
            lhs = permstat.signed_distribution_prime(n, k, True, g.jobs)
            rhs = _s_brute(n, k, g.jobs).eval_at_one("z")
            yield {"n": n, "k": k, "predicted": bool(n % 2 == 0 or k % 2)}, lhs, rhs, False


def _bw6(g):
    for n in g.ns():
        for P in forest.forest_shapes(n):
            yield {"n": n, "shape": forest.canonical_form(P)}, forest.maj_distribution(P), bw_forest_rhs(P)


def _bw7(g):
    rng = random.Random(g.seed)
    for i in range(g.samples):
        n = rng.randint(max(g.n_min, 1), g.n_max)
        P = forest.random_forest(n, rng)
        w = forest.random_labelling(P, rng)
        params = {"n": n, "forest": json.loads(P.to_json())["parent"], "label": list(w.label)}
        yield params, forest.le_maj_distribution(w), bw_extension_rhs(w)


def _fmaj_dual(g):
    for r, p in g.rp():
        for n in g.ns():
            lhs = IntPolynomial.from_counts(("q",), Counter(x.fmaj() for x in wreath.enumerate_dual(r, p, n)))
            yield {"r": r, "p": p, "n": n}, lhs, fmaj_dual_rhs(r, p, n)


def _grpn(g):
    for r, p in g.rp():
        for n in g.ns():
            for k in g.ks(0, n - 1):
                lhs = wreath.fmaj_inverse_distribution(wreath.c_k_set(r, p, n, k))
                yield {"r": r, "p": p, "n": n, "k": k}, lhs, grpn_rhs(r, p, n, k)


def _grn(g):
    for r in g.r_values:
        for n in g.ns():
            for k in g.ks(0, n - 1):
                lhs = wreath.fmaj_inverse_distribution(wreath.c_k_set(r, 1, n, k))
                yield {"r": r, "n": n, "k": k}, lhs, grn_rhs(r, n, k)


def _transversal(g):
    for r, p in g.rp():
        for n in g.ns():
            for k in g.ks(1, n - 1):
                lhs = coset_meet_distribution(r, p, n, k)
                cosets = wreath.dual_size(r, p, n) // (r ** k * math.factorial(k))
                yield {"r": r, "p": p, "n": n, "k": k}, lhs, IntPolynomial.monomial((p,), cosets)


def _pi(g):
    for r in g.r_values:
        for n in g.ns():
            for k in g.ks(0, n // 2):
                elems = (wreath.canonical_dual(x) for x in wreath.pi_set(r, n, k))
                yield {"r": r, "n": n, "k": k}, wreath.fmaj_inverse_distribution(elems), pi_rhs(r, n, k)


def _bij(g):
    for r, p in g.rp():
        for n in g.ns():
            total = (2 * r) ** n
            good = 0
            for f in itertools.product(range(2 * r), repeat=n):
                try:
                    x, mu, h = wreath.decode_compatible(f, r, p)
                except ArithmeticError:
                    continue
                good += wreath.encode_compatible(x, mu, h) == f
            yield ({"r": r, "p": p, "n": n}, IntPolynomial.constant(good),
                   IntPolynomial.constant(total))


def _fg(g):
    rng = random.Random(g.seed)
    for r, p in g.rp():
        for n in g.ns():
            elems = list(wreath.enumerate_dual(r, p, n))
            for x in rng.sample(elems, min(g.samples, len(elems))):
                params = {"r": r, "p": p, "n": n, "g": x.to_dict(), "degree": g.degree}
                yield params, wreath.fg_series_truncated(x, g.degree), wreath.fg_series_closed(x, g.degree)


def _colori(g):
    for r, p in g.rp():
        for n in g.ns():
            elems = list(wreath.enumerate_dual(r, p, n))
            good = sum(wreath.colori_check(x) for x in elems)
            yield {"r": r, "p": p, "n": n}, IntPolynomial.constant(good), IntPolynomial.constant(len(elems))


def _calA(g):
    for r, p in g.rp():
        for n in g.ns():
            for k in g.ks(0, n - 1):
                agree = total = 0
                for f in itertools.product(range(2 * r), repeat=n):
                    x, _, _ = wreath.decode_compatible(f, r, p)
                    total += 1
                    agree += wreath.in_calA(f, r, p, k) == wreath.in_c_k(x.inverse(), k)
                yield ({"r": r, "p": p, "n": n, "k": k}, IntPolynomial.constant(agree),
                       IntPolynomial.constant(total))


def _problem2(g):
    for r in g.r_values:
        for n in g.ns():
            for k in g.ks(0, n - 1):
                elems = list(wreath.c_k_set(r, 1, n, k))
                lhs = wreath.signed_fmaj_inverse_distribution(elems)
                rhs = wreath.fmaj_inverse_distribution(elems)
                yield {"r": r, "n": n, "k": k}, lhs, rhs, False


IDENTITIES: dict[str, Callable] = {
    "cormain": _cormain,
    "main": _main,
    "recur": _recur,
    "gessel_simion": _gessel_simion,
    "macmahon": _macmahon,
    "unsigned_quotient": _unsigned_quotient,
    "rake_recur": _rake_recur,
    "rake_odd": _rake_odd,
    "rake_even": _rake_even,
    "snk_eq_rnk": _snk_eq_rnk,
    "bw6": _bw6,
    "bw7": _bw7,
    "fmaj_dual": _fmaj_dual,
    "grpn": _grpn,
    "grn": _grn,
    "transversal": _transversal,
    "pi": _pi,
    "bij": _bij,
    "fg": _fg,
    "colori": _colori,
    "calA": _calA,
    "problem1": _problem1,
    "problem2": _problem2,
}


def verify(identity: str, grid: Grid | None = None) -> Iterator[IdentityReport]:
    """Stream reports for ``identity`` over ``grid``; lhs is always the enumeration."""
    try:
        gen = IDENTITIES[identity.replace("-", "_")]
    except KeyError:
        raise KeyError(f"unknown identity {identity!r}") from None
    grid = grid or Grid()
    name = identity.replace("-", "_")
    for row in gen(grid):
        params, lhs, rhs, *rest = row
        yield IdentityReport(name, params, lhs, rhs, asserted=rest[0] if rest else True)
