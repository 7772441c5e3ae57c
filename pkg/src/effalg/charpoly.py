"""Elimination through characteristic polynomials of multiplication maps.

Let ``H_k = z_k**D_k + g_k`` with every term of ``g_k`` of total degree below
``D_k``.  Then ``A = Q[y][z] / (H_1 - y_1, ..., H_n - y_n)`` is a free
``Q[y]``-module with basis the box monomials ``z**b``, ``b_k < D_k``, and
``A`` is isomorphic to ``Q[z]`` through ``y -> H(z)``.  For a linear form ``N``
the characteristic polynomial ``chi(y, t)`` of multiplication by ``N`` on
``A`` is the norm of ``t - N``; it equals ``P**k`` where ``P`` generates the
kernel of ``Q[y, t] -> Q[z]``.

Traces of monomials obey ``tau(z**c) = y_k tau(z**(c - D_k e_k)) - sum_e
g_{k,e} tau(z**(c - D_k e_k + e))``, so power sums ``Tr(N**j)`` come cheaply
and Newton's identities turn them into ``chi``.
"""

from __future__ import annotations

import itertools
import random
from typing import Dict, List, Sequence, Tuple

from gmpy2 import mpq, mpz

from .poly import DEGREVLEX, Polynomial, common_vars

YPoly = Dict[tuple, mpq]

_PRIME = (1 << 61) - 1


class ShapeError(ValueError):
    """The map does not have the pure-power shape the trace route needs."""


# ---------------------------------------------------------------------------
# dense-free helpers for polynomials in y


def _yadd(acc: YPoly, p: YPoly, c=1) -> None:
    for m, v in p.items():
        w = acc.get(m, 0) + c * v
        if w:
            acc[m] = w
        else:
            acc.pop(m, None)


def _ymul(p: YPoly, q: YPoly) -> YPoly:
    if len(p) > len(q):
        p, q = q, p
    out: YPoly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            w = out.get(m, 0) + c1 * c2
            if w:
                out[m] = w
            else:
                del out[m]
    return out


def _yshift(p: YPoly, k: int) -> YPoly:
    return {m[:k] + (m[k] + 1,) + m[k + 1 :]: c for m, c in p.items()}


def _pure_power_split(h: Polynomial, k: int):
    """Return ``(D, g)`` with ``h = z_k**D + g`` and ``deg g < D``, or None."""
    if not h:
        return None
    top = h.degree()
    top_terms = [m for m in h.terms if sum(m) == top]
    if len(top_terms) != 1:
        return None
    m = top_terms[0]
    if m[k] != top or h.terms[m] != 1 or top < 1:
        return None
    g = {e: c for e, c in h.terms.items() if e != m}
    return top, g


def has_pure_power_shape(H: Sequence[Polynomial]) -> bool:
    H = list(H)
    if not H or len(H) != H[0].nvars:
        return False
    return all(_pure_power_split(h, k) is not None for k, h in enumerate(H))


# ---------------------------------------------------------------------------
# modular helpers for the multiplicity of the characteristic polynomial


def _poly_mod(coeffs: List[int]) -> List[int]:
    while coeffs and coeffs[-1] % _PRIME == 0:
        coeffs.pop()
    return [c % _PRIME for c in coeffs]


def _gcd_mod(a: List[int], b: List[int]) -> List[int]:
    """Monic gcd of coefficient lists (constant term first) over GF(p)."""
    a, b = _poly_mod(list(a)), _poly_mod(list(b))
    while b:
        inv = pow(b[-1], -1, _PRIME)
        while len(a) >= len(b):
            f = a[-1] * inv % _PRIME
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] = (a[shift + i] - f * c) % _PRIME
            a = _poly_mod(a)
            if not a:
                break
        a, b = b, a
    return a


def _to_mod(c) -> int:
    c = mpq(c)
    return int(c.numerator) * pow(int(c.denominator), -1, _PRIME) % _PRIME


# ---------------------------------------------------------------------------


class TraceAlgebra:
    """The algebra ``Q[y][z]/(H - y)`` for a map of pure-power shape."""

    def __init__(self, H: Sequence[Polynomial]):
        H = list(H)
        self.variables = common_vars(H)
        self.n = n = len(self.variables)
        if len(H) != n:
            raise ShapeError("the trace route needs as many components as variables")
        self.H = H
        self.D: List[int] = []
        self.g: List[List[Tuple[tuple, mpq]]] = []
        for k, h in enumerate(H):
            split = _pure_power_split(h, k)
            if split is None:
                raise ShapeError(f"component {k + 1} is not z_{k + 1}^D plus lower-degree terms")
            self.D.append(split[0])
            self.g.append(sorted(split[1].items()))
        self.box = list(itertools.product(*(range(D) for D in self.D)))
        self.rank = len(self.box)
        self._zero = (0,) * n
        self._nf: Dict[tuple, Dict[tuple, YPoly]] = {}
        self._tau: Dict[tuple, YPoly] = {}
        self._tau0: Dict[tuple, mpq] = {}

    # -- normal forms -----------------------------------------------------
    def _reducible(self, a) -> int:
        for k, (x, D) in enumerate(zip(a, self.D)):
            if x >= D:
                return k
        return -1

    def normal_form(self, a: tuple) -> Dict[tuple, YPoly]:
        """Coordinates of ``z**a`` in the box basis."""
        hit = self._nf.get(a)
        if hit is not None:
            return hit
        k = self._reducible(a)
        if k < 0:
            out = {a: {self._zero: mpq(1)}}
        else:
            base = a[:k] + (a[k] - self.D[k],) + a[k + 1 :]
            out: Dict[tuple, YPoly] = {}
            for b, c in self.normal_form(base).items():
                out[b] = _yshift(c, k)
            for e, ge in self.g[k]:
                mono = tuple(x + y for x, y in zip(base, e))
                for b, c in self.normal_form(mono).items():
                    acc = out.setdefault(b, {})
                    _yadd(acc, c, -ge)
                    if not acc:
                        del out[b]
        self._nf[a] = out
        return out

    # -- traces -------------------------------------------------------------
    def _base_trace(self, c: tuple) -> YPoly:
        acc: YPoly = {}
        for b in self.box:
            entry = self.normal_form(tuple(x + y for x, y in zip(b, c))).get(b)
            if entry:
                _yadd(acc, entry)
        return acc

    def trace(self, c: tuple) -> YPoly:
        """Trace of multiplication by ``z**c`` as a polynomial in y."""
        hit = self._tau.get(c)
        if hit is not None:
            return hit
        k = self._reducible(c)
        if k < 0:
            out = self._base_trace(c)
        else:
            base = c[:k] + (c[k] - self.D[k],) + c[k + 1 :]
            out = _yshift(self.trace(base), k)
            for e, ge in self.g[k]:
                _yadd(out, self.trace(tuple(x + y for x, y in zip(base, e))), -ge)
        self._tau[c] = out
        return out

    def trace_at_zero(self, c: tuple) -> mpq:
        """Trace of ``z**c`` on the fibre over ``y = 0``."""
        hit = self._tau0.get(c)
        if hit is not None:
            return hit
        if c in self._tau:
            out = self._tau[c].get(self._zero, mpq(0))
        else:
            k = self._reducible(c)
            if k < 0:
                out = self._base_trace(c).get(self._zero, mpq(0))
            else:
                base = c[:k] + (c[k] - self.D[k],) + c[k + 1 :]
                out = mpq(0)
                for e, ge in self.g[k]:
                    out -= ge * self.trace_at_zero(tuple(x + y for x, y in zip(base, e)))
        self._tau0[c] = out
        return out

    def _linear_terms(self, N: Polynomial):
        if N.vars != self.variables:
            raise ShapeError("N uses a different variable list")
        if not N or not N.is_homogeneous() or N.degree() != 1:
            raise ShapeError("N must be a nonzero linear form")
        return list(N.terms.items())

    def _power_sums(self, N: Polynomial, at_zero: bool):
        terms = self._linear_terms(N)
        power = {self._zero: mpq(1)}
        sums = []
        for _ in range(self.rank):
            nxt: Dict[tuple, mpq] = {}
            for m, c in power.items():
                for e, a in terms:
                    mm = tuple(x + y for x, y in zip(m, e))
                    nxt[mm] = nxt.get(mm, 0) + c * a
            power = {m: c for m, c in nxt.items() if c}
            # fill traces degree by degree so the recursion stays shallow
            if at_zero:
                sums.append(sum((c * self.trace_at_zero(m) for m, c in power.items()), mpq(0)))
            else:
                acc: YPoly = {}
                for m, c in power.items():
                    _yadd(acc, self.trace(m), c)
                sums.append(acc)
        return sums

    # -- characteristic polynomial -------------------------------------------
    def charpoly_at_zero(self, N: Polynomial) -> List[mpq]:
        """Coefficients (constant first) of ``det(t - N)`` on the fibre over 0."""
        p = self._power_sums(N, at_zero=True)
        e = [mpq(1)]
        for k in range(1, self.rank + 1):
            s = mpq(0)
            for i in range(1, k + 1):
                term = e[k - i] * p[i - 1]
                s += term if i % 2 else -term
            e.append(s / k)
        M = self.rank
        return [(-1) ** (M - j) * e[M - j] for j in range(M + 1)]

    def zero_fibre_order(self, N: Polynomial) -> int:
        """Order of vanishing in t of ``chi(0, t)``: summed multiplicity of
        the points of ``H = 0`` on which ``N`` vanishes."""
        coeffs = self.charpoly_at_zero(N)
        return next(j for j, c in enumerate(coeffs) if c)

    def charpoly(self, N: Polynomial) -> List[YPoly]:
        """Coefficients ``chi_j(y)`` (constant in t first) of ``det(t - N)``."""
        p = self._power_sums(N, at_zero=False)
        e: List[YPoly] = [{self._zero: mpq(1)}]
        for k in range(1, self.rank + 1):
            s: YPoly = {}
            for i in range(1, k + 1):
                if e[k - i] and p[i - 1]:
                    _yadd(s, _ymul(e[k - i], p[i - 1]), 1 if i % 2 else -1)
            inv = mpq(1, k)
            e.append({m: c * inv for m, c in s.items()})
        M = self.rank
        out = []
        for j in range(M + 1):
            sign = -1 if (M - j) % 2 else 1
            out.append({m: sign * c for m, c in e[M - j].items()})
        return out

    # -- minimal polynomial --------------------------------------------------
    def _power_exponent(self, chi: List[YPoly]) -> int:
        """Estimate k with ``chi = P**k`` from a random specialisation."""
        M = len(chi) - 1
        rng = random.Random(0x5EED)
        best = 1
        for attempt in range(2):
            point = [rng.randrange(1, _PRIME) for _ in range(self.n)]
            spec = []
            for cj in chi:
                v = 0
                for m, c in cj.items():
                    term = _to_mod(c)
                    for x, k in zip(point, m):
                        term = term * pow(x, k, _PRIME) % _PRIME
                    v += term
                spec.append(v % _PRIME)
            deriv = [(j * spec[j]) % _PRIME for j in range(1, M + 1)]
            g = _gcd_mod(spec, deriv)
            sqfree = M - (len(g) - 1)
            k = M // sqfree if sqfree and M % sqfree == 0 else 1
            best = k if attempt == 0 else min(best, k)
        return best

    def _root(self, chi: List[YPoly], k: int) -> List[YPoly]:
        """Monic k-th root in t, via the binomial series of the reversed polynomial."""
        M = len(chi) - 1
        m = M // k
        g = [chi[M - i] for i in range(M + 1)]  # reversed, g[0] = 1
        f: List[YPoly] = [{self._zero: mpq(1)}]
        alpha = mpq(1, k)
        for j in range(1, m + 1):
            acc: YPoly = {}
            for i in range(1, j + 1):
                if g[i] and f[j - i]:
                    _yadd(acc, _ymul(g[i], f[j - i]), (alpha + 1) * i - j)
            f.append({mm: c / j for mm, c in acc.items()})
        return [f[m - j] for j in range(m + 1)]

    @staticmethod
    def _tmul(a: List[YPoly], b: List[YPoly]) -> List[YPoly]:
        out: List[YPoly] = [dict() for _ in range(len(a) + len(b) - 1)]
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    _yadd(out[i + j], _ymul(ai, bj))
        return out

    def minimal_polynomial(self, N: Polynomial) -> Tuple[List[YPoly], int]:
        """``(P, k)`` with ``P`` monic in t and ``chi = P**k``."""
        chi = self.charpoly(N)
        # the estimate never undershoots; a bad specialisation can only
        # overshoot, so fall back through the smaller divisors of deg chi
        k = self._power_exponent(chi)
        M = len(chi) - 1
        for cand in (c for c in range(k, 0, -1) if M % c == 0):
            root = self._root(chi, cand)
            power = root
            for _ in range(cand - 1):
                power = self._tmul(power, root)
            if power == chi:
                return root, cand
        raise AssertionError("characteristic polynomial is not a power of its root")

    # -- verification -------------------------------------------------------
    def evaluate_in_algebra(self, coeffs: List[YPoly], N: Polynomial) -> Dict[tuple, YPoly]:
        """Horner evaluation of ``sum coeffs[j](y) t**j`` at ``t = N`` inside A."""
        terms = self._linear_terms(N)
        elem: Dict[tuple, YPoly] = {}
        for cj in reversed(coeffs):
            nxt: Dict[tuple, YPoly] = {}
            for b, c in elem.items():
                for e, a in terms:
                    mono = tuple(x + y for x, y in zip(b, e))
                    if self._reducible(mono) < 0:
                        # still a box monomial: no reduction needed
                        acc = nxt.setdefault(mono, {})
                        _yadd(acc, c, a)
                        if not acc:
                            del nxt[mono]
                        continue
                    for bb, cc in self.normal_form(mono).items():
                        acc = nxt.setdefault(bb, {})
                        _yadd(acc, _ymul(c, cc), a)
                        if not acc:
                            del nxt[bb]
            if cj:
                acc = nxt.setdefault(self._zero, {})
                _yadd(acc, cj)
                if not acc:
                    del nxt[self._zero]
            elem = nxt
        return elem

    def elimination_polynomial(
        self, N: Polynomial, y_names: Sequence[str], t_name: str, check: bool = True
    ) -> Polynomial:
        """Primitive generator of the kernel of ``Q[y, t] -> Q[z]``."""
        coeffs, _ = self.minimal_polynomial(N)
        if check and self.evaluate_in_algebra(coeffs, N):
            raise AssertionError("minimal polynomial does not annihilate N")
        ring = tuple(y_names) + (t_name,)
        terms = {}
        for j, cj in enumerate(coeffs):
            for m, c in cj.items():
                terms[m + (j,)] = c
        return Polynomial(ring, terms).primitive(DEGREVLEX)
