"""Exact sparse multivariate polynomials over the rationals.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
``gmpy2.mpq`` coefficients over an ordered tuple of variable names.  The
zero polynomial has degree ``NEG_INFINITY`` and order ``INFINITY``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Sequence, Tuple

from gmpy2 import mpq, mpz

Exponent = Tuple[int, ...]
Terms = Dict[Exponent, mpq]

INFINITY = math.inf
NEG_INFINITY = -math.inf

LT, EQ, GT = -1, 0, 1


class VariableMismatch(ValueError):
    pass


def to_rational(value) -> mpq:
    """Coerce ints, Fractions, mpq or ``"p/q"`` strings to ``mpq``."""
    if isinstance(value, type(mpq())):
        return value
    if isinstance(value, (int, type(mpz()))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return mpq(text)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def rational_str(c: mpq) -> str:
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# monomial orderings


def _degrevlex_key(e: Exponent):
    return (sum(e),) + tuple(-x for x in reversed(e))


def _lex_key(e: Exponent):
    return e


def _local_key(e: Exponent):
    # lower degree is larger; revlex tiebreak inside a degree
    return (-sum(e),) + tuple(-x for x in reversed(e))


@dataclass(frozen=True)
class MonomialOrdering:
    """A monomial ordering given by a flat integer sort key (larger key = larger monomial).

    ``kind`` is one of ``"degrevlex"``, ``"lex"``, ``"block"`` (degrevlex on
    the first ``block`` variables, then degrevlex on the rest) and
    ``"local"`` (antigraded degrevlex, where 1 is the largest monomial).
    """

    kind: str = "degrevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "block", "local"):
            raise ValueError(f"unknown ordering kind {self.kind!r}")
        if self.kind == "block" and self.block < 0:
            raise ValueError("block size must be non-negative")

    @property
    def is_global(self) -> bool:
        return self.kind != "local"

    @property
    def key(self) -> Callable[[Exponent], tuple]:
        if self.kind == "degrevlex":
            return _degrevlex_key
        if self.kind == "lex":
            return _lex_key
        if self.kind == "local":
            return _local_key
        k = self.block

        def block_key(e: Exponent):
            return _degrevlex_key(e[:k]) + _degrevlex_key(e[k:])

        return block_key

    def compare(self, a: Exponent, b: Exponent) -> int:
        if len(a) != len(b):
            raise ValueError("monomials of different lengths")
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


DEGREVLEX = MonomialOrdering("degrevlex")
LEX = MonomialOrdering("lex")
LOCAL = MonomialOrdering("local")


def block_ordering(front: int) -> MonomialOrdering:
    return MonomialOrdering("block", front)


def compare(a: Exponent, b: Exponent, ordering: MonomialOrdering = DEGREVLEX) -> int:
    return ordering.compare(a, b)


# ---------------------------------------------------------------------------
# raw term-dict helpers (used by the inner loops of the engines)


def mono_mul(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Exponent, a: Exponent) -> Exponent:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def terms_add(p: Terms, q: Terms) -> Terms:
    out = dict(p)
    for m, c in q.items():
        s = out.get(m)
        if s is None:
            out[m] = c
        else:
            s += c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def terms_mul(p: Terms, q: Terms) -> Terms:
    if len(p) > len(q):
        p, q = q, p
    out: Terms = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            s = out.get(m)
            out[m] = c1 * c2 if s is None else s + c1 * c2
    return {m: c for m, c in out.items() if c}


def terms_scale(p: Terms, c: mpq, shift: Exponent | None = None) -> Terms:
    if shift is None:
        return {m: c * v for m, v in p.items()}
    return {tuple(x + y for x, y in zip(m, shift)): c * v for m, v in p.items()}


# ---------------------------------------------------------------------------


class Polynomial:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.vars = tuple(variables)
        n = len(self.vars)
        clean: Terms = {}
        for m, c in (terms or {}).items():
            m = tuple(int(x) for x in m)
            if len(m) != n or any(x < 0 for x in m):
                raise ValueError(f"bad exponent {m} for variables {self.vars}")
            c = to_rational(c)
            if c:
                clean[m] = clean.get(m, mpq(0)) + c
                if not clean[m]:
                    del clean[m]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: Tuple[str, ...], terms: Terms) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p.vars = variables
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, value, variables: Sequence[str]) -> "Polynomial":
        c = to_rational(value)
        zero = (0,) * len(variables)
        return cls._raw(tuple(variables), {zero: c} if c else {})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise VariableMismatch(f"unknown variable {name!r}")
        e = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(variables, {e: mpq(1)})

    @classmethod
    def linear_form(cls, coefficients: Sequence, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        if len(coefficients) != len(variables):
            raise ValueError("coefficient count does not match variable count")
        n = len(variables)
        terms = {}
        for i, c in enumerate(coefficients):
            c = to_rational(c)
            if c:
                terms[tuple(1 if j == i else 0 for j in range(n))] = c
        return cls._raw(variables, terms)

    @classmethod
    def generators(cls, variables: Sequence[str]) -> list["Polynomial"]:
        return [cls.variable(v, variables) for v in variables]

    # -- basic queries ----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> mpq:
        return self.terms.get((0,) * self.nvars, mpq(0))

    def coefficient(self, exponent: Exponent) -> mpq:
        return self.terms.get(tuple(exponent), mpq(0))

    def degree(self, var: str | None = None):
        """Total degree, or degree in ``var``; ``NEG_INFINITY`` for zero."""
        if not self.terms:
            return NEG_INFINITY
        if var is None:
            return max(sum(m) for m in self.terms)
        i = self._index(var)
        return max(m[i] for m in self.terms)

    def order(self):
        """Least total degree of a term; ``INFINITY`` for zero."""
        if not self.terms:
            return INFINITY
        return min(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def homogeneous_component(self, k: int) -> "Polynomial":
        return Polynomial._raw(self.vars, {m: c for m, c in self.terms.items() if sum(m) == k})

    def lowest_form(self) -> "Polynomial":
        if not self.terms:
            raise ValueError("the zero polynomial has no lowest-degree form")
        return self.homogeneous_component(self.order())

    def highest_form(self) -> "Polynomial":
        if not self.terms:
            raise ValueError("the zero polynomial has no leading form")
        return self.homogeneous_component(self.degree())

    def leading_monomial(self, ordering: MonomialOrdering = DEGREVLEX) -> Exponent:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=ordering.key)

    def leading_coefficient(self, ordering: MonomialOrdering = DEGREVLEX) -> mpq:
        return self.terms[self.leading_monomial(ordering)]

    def sorted_terms(self, ordering: MonomialOrdering = DEGREVLEX):
        return sorted(self.terms.items(), key=lambda mc: ordering.key(mc[0]), reverse=True)

    def used_variables(self) -> Tuple[str, ...]:
        used = set()
        for m in self.terms:
            used.update(i for i, x in enumerate(m) if x)
        return tuple(v for i, v in enumerate(self.vars) if i in used)

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise VariableMismatch(f"unknown variable {var!r}") from None

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.vars != other.vars:
            raise VariableMismatch(f"variable lists differ: {self.vars} vs {other.vars}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(other, self.vars)

    def __add__(self, other):
        other = self._coerce(other)
        return Polynomial._raw(self.vars, terms_add(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return Polynomial._raw(self.vars, terms_mul(self.terms, other.terms))
        c = to_rational(other)
        if not c:
            return Polynomial.zero(self.vars)
        return Polynomial._raw(self.vars, terms_scale(self.terms, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = to_rational(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_term(self, exponent: Exponent, coefficient) -> "Polynomial":
        c = to_rational(coefficient)
        if not c:
            return Polynomial.zero(self.vars)
        return Polynomial._raw(self.vars, terms_scale(self.terms, c, tuple(exponent)))

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.terms == other.terms
        try:
            return self == Polynomial.constant(other, self.vars)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- normalisation ----------------------------------------------------
    def monic(self, ordering: MonomialOrdering = DEGREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        return self * (1 / self.leading_coefficient(ordering))

    def primitive(self, ordering: MonomialOrdering = DEGREVLEX) -> "Polynomial":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self.terms:
            return self
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            den = lcm(den, int(c.denominator))
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for x in nums:
            g = gcd(g, x)
        scale = mpq(den, g)
        if self.leading_coefficient(ordering) < 0:
            scale = -scale
        return self * scale

    # -- structure --------------------------------------------------------
    def embed(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express over a variable list containing all used variables."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        idx = []
        for i, v in enumerate(self.vars):
            if v in pos:
                idx.append((i, pos[v]))
        used = set(self.used_variables())
        missing = [v for v in used if v not in pos]
        if missing:
            raise VariableMismatch(f"variables {missing} not in target list {variables}")
        out = {}
        n = len(variables)
        for m, c in self.terms.items():
            e = [0] * n
            for i, j in idx:
                e[j] = m[i]
            out[tuple(e)] = c
        return Polynomial._raw(variables, out)

    def diff(self, var: str) -> "Polynomial":
        i = self._index(var)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return Polynomial._raw(self.vars, out)

    def coefficients_in(self, var: str) -> Dict[int, "Polynomial"]:
        """Split as ``sum_j P_j * var**j``; the ``P_j`` keep the full variable list."""
        i = self._index(var)
        parts: Dict[int, Terms] = {}
        for m, c in self.terms.items():
            e = list(m)
            j = e[i]
            e[i] = 0
            parts.setdefault(j, {})[tuple(e)] = c
        return {j: Polynomial._raw(self.vars, t) for j, t in sorted(parts.items())}

    def substitute(self, assignment: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Compose: replace each variable by a polynomial over a common target ring."""
        images = []
        target = None
        for v in self.vars:
            if v not in assignment:
                if any(m[self.vars.index(v)] for m in self.terms):
                    raise VariableMismatch(f"assignment misses variable {v!r}")
                images.append(None)
                continue
            img = assignment[v]
            if not isinstance(img, Polynomial):
                raise TypeError("assignment values must be polynomials")
            if target is None:
                target = img.vars
            elif img.vars != target:
                raise VariableMismatch("substituted polynomials use different variable lists")
            images.append(img)
        if target is None:
            # constant polynomial or empty assignment
            return self
        powers: list[dict[int, Terms]] = [{0: {(0,) * len(target): mpq(1)}} for _ in images]

        def power(i: int, k: int) -> Terms:
            cache = powers[i]
            if k not in cache:
                best = max(j for j in cache if j <= k)
                acc = cache[best]
                for j in range(best + 1, k + 1):
                    acc = terms_mul(acc, images[i].terms)
                    cache[j] = acc
            return cache[k]

        out: Terms = {}
        for m, c in self.terms.items():
            acc = {(0,) * len(target): c}
            for i, k in enumerate(m):
                if k:
                    acc = terms_mul(acc, power(i, k))
            out = terms_add(out, acc)
        return Polynomial._raw(tuple(target), out)

    def evaluate(self, point: Mapping[str, object] | Sequence) -> mpq:
        if isinstance(point, Mapping):
            vals = [to_rational(point[v]) for v in self.vars]
        else:
            vals = [to_rational(x) for x in point]
        total = mpq(0)
        for m, c in self.terms.items():
            term = c
            for x, k in zip(vals, m):
                if k:
                    term *= x**k
            total += term
        return total

    # -- display ----------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, vars={list(self.vars)})"


def format_polynomial(p: Polynomial) -> str:
    """Canonical text: descending degrevlex, ``p/q*`` coefficients, ``^`` powers."""
    if not p.terms:
        return "0"
    pieces = []
    for m, c in p.sorted_terms(DEGREVLEX):
        factors = []
        for v, k in zip(p.vars, m):
            if k == 1:
                factors.append(v)
            elif k > 1:
                factors.append(f"{v}^{k}")
        mono = "*".join(factors)
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if not mono:
            body = rational_str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{rational_str(a)}*{mono}"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def lowest_degree_form(p: Polynomial) -> Polynomial:
    return p.lowest_form()


def order_of_vanishing(p: Polynomial):
    return p.order()


def common_vars(polys: Iterable[Polynomial]) -> Tuple[str, ...]:
    polys = list(polys)
    if not polys:
        raise ValueError("empty polynomial list")
    v = polys[0].vars
    for p in polys[1:]:
        if p.vars != v:
            raise VariableMismatch("polynomials use different variable lists")
    return v
