"""Sparse integer polynomials in one or two variables, and q-brackets.

Polynomials are immutable.  Binary operations between polynomials over
different variable sets embed both operands into the union of their
variables (at most two), so a univariate ``q`` polynomial can be added to
or multiplied with a bivariate ``(q, z)`` one.

>>> bracket(3, -1)
IntPolynomial('1 - q + q^2')
>>> bracket_product([(2, -1), (3, +1)])
IntPolynomial('1 - q^3')
"""

from __future__ import annotations

import json
from collections import defaultdict
from typing import Iterable, Mapping, Sequence

__all__ = [
    "IntPolynomial", "NotDivisible", "UnknownVariable",
    "bracket", "bracket_product", "geometric", "exact_div",
    "substitute_sign", "eval_at_one",
]

MAX_VARS = 2


class NotDivisible(ArithmeticError):
    """Polynomial division left a nonzero remainder."""


class UnknownVariable(KeyError):
    pass


def _union(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    out = list(a)
    for v in b:
        if v not in out:
            out.append(v)
    if len(out) > MAX_VARS:
        raise ValueError(f"at most {MAX_VARS} variables supported, got {out}")
    return tuple(out)


class IntPolynomial:
    """Exact polynomial with integer coefficients.

    ``vars`` names the variables in order; ``terms`` maps exponent tuples
    (one entry per variable) to nonzero integer coefficients.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str] = ("q",), terms: Mapping | Iterable = ()):
        vars = tuple(vars)
        if not 1 <= len(vars) <= MAX_VARS or len(set(vars)) != len(vars):
            raise ValueError(f"bad variable list {vars!r}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple[int, ...], int] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != len(vars) or min(e) < 0:
                raise ValueError(f"bad exponent {e} for variables {vars}")
            c = int(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.vars = vars
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c: int, vars: Sequence[str] = ("q",)) -> IntPolynomial:
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def monomial(cls, exps: Sequence[int], c: int = 1,
                 vars: Sequence[str] = ("q",)) -> IntPolynomial:
        return cls(vars, {tuple(exps): c})

    @classmethod
    def variable(cls, name: str, vars: Sequence[str] | None = None) -> IntPolynomial:
        vars = tuple(vars) if vars else (name,)
        if name not in vars:
            raise UnknownVariable(name)
        return cls(vars, {tuple(int(v == name) for v in vars): 1})

    @classmethod
    def from_counts(cls, vars: Sequence[str], counts: Mapping) -> IntPolynomial:
        """Build from a ``{exponent: coefficient}`` accumulator.

        Univariate accumulators may be keyed by bare integers.
        """
        vars = tuple(vars)
        if len(vars) == 1:
            return cls(vars, (((e,) if isinstance(e, int) else e, c)
                              for e, c in counts.items()))
        return cls(vars, counts)

    # -- structure ----------------------------------------------------------

    def embed(self, vars: Sequence[str]) -> IntPolynomial:
        """Re-express over ``vars``, which must contain every used variable."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        used = self.used_vars()
        missing = [v for v in used if v not in vars]
        if missing:
            raise UnknownVariable(missing[0])
        idx = {v: i for i, v in enumerate(self.vars)}
        out = {}
        for e, c in self.terms.items():
            out[tuple(e[idx[v]] if v in idx else 0 for v in vars)] = c
        return IntPolynomial(vars, out)

    def used_vars(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vars)
                     if any(e[i] for e in self.terms))

    def _aligned(self, other):
        if isinstance(other, int):
            other = IntPolynomial.constant(other, self.vars)
        if not isinstance(other, IntPolynomial):
            return None, None, None
        if other.vars == self.vars:
            return self.vars, self, other
        try:
            vars = _union(self.vars, other.vars)
        except ValueError:
            # drop variables that do not actually occur
            vars = _union(self.used_vars() or self.vars[:1], other.used_vars())
        return vars, self.embed(vars), other.embed(vars)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree if omitted); -1 for zero."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self._index(var)
        return max(e[i] for e in self.terms)

    def coefficient(self, *exps: int) -> int:
        return self.terms.get(tuple(exps), 0)

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise UnknownVariable(var) from None

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items())

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        vars, a, b = self._aligned(other)
        if vars is None:
            return NotImplemented
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out.get(e, 0) + c
        return IntPolynomial(vars, out)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        vars, a, b = self._aligned(other)
        if vars is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        vars, a, b = self._aligned(other)
        if vars is None:
            return NotImplemented
        out: dict[tuple[int, ...], int] = defaultdict(int)
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                out[tuple(x + y for x, y in zip(e1, e2))] += c1 * c2
        return IntPolynomial(vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = IntPolynomial.constant(1, self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        vars, a, b = self._aligned(other)
        if vars is None:
            return NotImplemented
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(
                (tuple((v, x) for v, x in zip(self.vars, e) if x), c)
                for e, c in self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- substitutions ------------------------------------------------------

    def substitute_sign(self, var: str) -> IntPolynomial:
        i = self._index(var)
        return IntPolynomial(self.vars, {e: -c if e[i] % 2 else c
                                         for e, c in self.terms.items()})

    def eval_at_one(self, var: str) -> IntPolynomial:
        i = self._index(var)
        rest = self.vars[:i] + self.vars[i + 1:] or self.vars
        out: dict[tuple[int, ...], int] = defaultdict(int)
        for e, c in self.terms.items():
            key = e[:i] + e[i + 1:] if len(self.vars) > 1 else (0,)
            out[key] += c
        return IntPolynomial(rest, out)

    def substitute_power(self, var: str, m: int) -> IntPolynomial:
        """Replace ``var`` by ``var**m``."""
        i = self._index(var)
        return IntPolynomial(self.vars, {e[:i] + (e[i] * m,) + e[i + 1:]: c
                                         for e, c in self.terms.items()})

    def evaluate(self, **values: int) -> int:
        """Integer value at the given point; every used variable must be bound."""
        total = 0
        for e, c in self.terms.items():
            term = c
            for v, x in zip(self.vars, e):
                if x:
                    if v not in values:
                        raise UnknownVariable(v)
                    term *= values[v] ** x
            total += term
        return total

    def truncate(self, var: str, max_degree: int) -> IntPolynomial:
        i = self._index(var)
        return IntPolynomial(self.vars, {e: c for e, c in self.terms.items()
                                         if e[i] <= max_degree})

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {"vars": list(self.vars),
                "terms": [{"e": list(e), "c": c} for e, c in self.sorted_terms()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: Mapping) -> IntPolynomial:
        return cls(d["vars"], ((t["e"], t["c"]) for t in d["terms"]))

    @classmethod
    def from_json(cls, s: str) -> IntPolynomial:
        return cls.from_dict(json.loads(s))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if x == 1 else f"{v}^{x}"
                            for v, x in zip(self.vars, e) if x)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"IntPolynomial({str(self)!r})"


# -- q-analogues ----------------------------------------------------------

def geometric(n: int, sign: int = 1, exps: Sequence[int] = (1,),
              vars: Sequence[str] = ("q",)) -> IntPolynomial:
    """``sum_{i<n} (sign * m)**i`` where ``m`` is the monomial with exponents ``exps``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    exps = tuple(exps)
    return IntPolynomial(vars, {tuple(i * x for x in exps): sign ** i
                                for i in range(n)})


def bracket(n: int, sign: int = 1, var: str = "q",
            vars: Sequence[str] | None = None) -> IntPolynomial:
    """The q-integer ``[n]_{sign*q}``."""
    vars = tuple(vars) if vars else (var,)
    return geometric(n, sign, tuple(int(v == var) for v in vars), vars)


def bracket_product(factors: Iterable[tuple[int, int]], var: str = "q") -> IntPolynomial:
    out = IntPolynomial.constant(1, (var,))
    for n, sign in factors:
        out = out * bracket(n, sign, var)
    return out


# -- division -------------------------------------------------------------

def _as_univariate(p: IntPolynomial, i: int) -> dict[int, IntPolynomial]:
    """Split ``p`` by the exponent of variable ``i``; coefficients keep full vars."""
    out: dict[int, dict] = defaultdict(dict)
    for e, c in p.terms.items():
        out[e[i]][e[:i] + (0,) + e[i + 1:]] = c
    return {d: IntPolynomial(p.vars, t) for d, t in out.items()}


def _divide_int_poly(num: IntPolynomial, den: IntPolynomial) -> IntPolynomial:
    # both constant in every variable except possibly one
    used = set(num.used_vars()) | set(den.used_vars())
    if not used:
        a, b = num.coefficient(*([0] * len(num.vars))), den.coefficient(*([0] * len(den.vars)))
        if a % b:
            raise NotDivisible(f"{a} / {b}")
        return IntPolynomial.constant(a // b, num.vars)
    (v,) = used
    return _long_divide(num, den, num.vars.index(v), _divide_int_poly)


def _long_divide(num, den, i, divide_coeff):
    den_parts = _as_univariate(den, i)
    dd = max(den_parts)
    lead = den_parts[dd]
    quotient = IntPolynomial(num.vars)
    rem = num
    while rem:
        parts = _as_univariate(rem, i)
        rd = max(parts)
        if rd < dd:
            raise NotDivisible(f"remainder {rem} dividing by {den}")
        c = divide_coeff(parts[rd], lead)
        shift = [0] * len(num.vars)
        shift[i] = rd - dd
        step = c * IntPolynomial.monomial(shift, 1, num.vars)
        quotient = quotient + step
        rem = rem - step * den
    return quotient


def exact_div(num: IntPolynomial, den: IntPolynomial) -> IntPolynomial:
    """Return ``Q`` with ``num == Q * den``; raise NotDivisible otherwise."""
    vars, num, den = num._aligned(den)
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    used = den.used_vars()
    if not used:
        d = den.coefficient(*([0] * len(vars)))
        if any(c % d for c in num.terms.values()):
            raise NotDivisible(f"{num} / {d}")
        return IntPolynomial(vars, {e: c // d for e, c in num.terms.items()})
    # main variable: the last one den depends on; coefficients live in the other
    i = vars.index(used[-1])
    return _long_divide(num, den, i, _divide_int_poly if len(used) == 1 else exact_div)


def substitute_sign(p: IntPolynomial, var: str) -> IntPolynomial:
    return p.substitute_sign(var)


def eval_at_one(p: IntPolynomial, var: str) -> IntPolynomial:
    return p.eval_at_one(var)
