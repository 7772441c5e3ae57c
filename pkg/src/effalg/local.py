"""Local algebra at the origin: Mora standard bases, colength, tangent cones."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from gmpy2 import mpq

from .groebner import IdealBasis
from .poly import (
    DEGREVLEX,
    LOCAL,
    Polynomial,
    Terms,
    common_vars,
    mono_divides,
    mono_lcm,
)

INFINITE = math.inf


def _key(m):
    return LOCAL.key(m)


def _lead(p: Terms):
    return max(p, key=_key)


def _ecart(p: Terms, lm) -> int:
    return max(sum(m) for m in p) - sum(lm)


def _sub_multiple(h: Terms, c, shift, g: Terms) -> Terms:
    out = dict(h)
    for m, gc in g.items():
        mm = tuple(x + y for x, y in zip(m, shift))
        v = out.get(mm, 0) - c * gc
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def _monic(p: Terms) -> Terms:
    inv = 1 / p[_lead(p)]
    return {m: c * inv for m, c in p.items()}


def _mora_nf(h: Terms, reducers: List[Terms]) -> Terms:
    """Mora's weak normal form: reduce the leading term, choosing minimal ecart.

    Reducers with larger ecart than the current remainder cause the remainder
    to join the reducer set, which guarantees termination.
    """
    table = [(_lead(g), _ecart(g, _lead(g)), g) for g in reducers]
    while h:
        lh = _lead(h)
        eh = _ecart(h, lh)
        best = None
        for lg, eg, g in table:
            if mono_divides(lg, lh) and (best is None or eg < best[1]):
                best = (lg, eg, g)
        if best is None:
            return h
        lg, eg, g = best
        if eg > eh:
            table.append((lh, eh, h))
        shift = tuple(a - b for a, b in zip(lh, lg))
        h = _sub_multiple(h, h[lh] / g[lg], shift, g)
    return h


def _spoly(f: Terms, g: Terms) -> Terms:
    lf, lg = _lead(f), _lead(g)
    lcm = mono_lcm(lf, lg)
    sf = tuple(a - b for a, b in zip(lcm, lf))
    sg = tuple(a - b for a, b in zip(lcm, lg))
    out: Terms = {}
    for m, c in f.items():
        out[tuple(x + y for x, y in zip(m, sf))] = c / f[lf]
    return _sub_multiple(out, 1 / g[lg], sg, g)


@dataclass(frozen=True)
class StandardBasis:
    """Standard basis of an ideal in the local ring at 0 (antigraded degrevlex)."""

    generators: tuple
    variables: tuple

    @property
    def ordering(self):
        return LOCAL

    @property
    def leading_monomials(self) -> List[tuple]:
        return [_lead(g.terms) for g in self.generators]

    def is_unit(self) -> bool:
        return any(not any(m) for m in self.leading_monomials)


def mora_standard_basis(generators: Iterable[Polynomial]) -> StandardBasis:
    gens = list(generators)
    variables = common_vars(gens)
    basis: List[Terms] = []
    pairs: List[Tuple[int, int]] = []

    def add(h: Terms):
        h = _monic(h)
        lh = _lead(h)
        k = len(basis)
        basis.append(h)
        for i in range(k):
            li = _lead(basis[i])
            if all(a == 0 or b == 0 for a, b in zip(li, lh)):
                continue  # product criterion
            pairs.append((i, k))

    for g in gens:
        if not g:
            continue
        h = _mora_nf(dict(g.terms), basis)
        if h:
            add(h)
    while pairs:
        pairs.sort(key=lambda ij: (sum(mono_lcm(_lead(basis[ij[0]]), _lead(basis[ij[1]]))), ij))
        i, j = pairs.pop(0)
        h = _mora_nf(_spoly(basis[i], basis[j]), basis)
        if h:
            add(h)
            if not any(_lead(h)):
                break
    # keep a minimal set of leading monomials
    order = sorted(range(len(basis)), key=lambda i: (sum(_lead(basis[i])), _key(_lead(basis[i]))))
    kept: List[Terms] = []
    for i in order:
        li = _lead(basis[i])
        if not any(mono_divides(_lead(k), li) for k in kept):
            kept.append(basis[i])
    if any(not any(_lead(k)) for k in kept):
        kept = [{(0,) * len(variables): mpq(1)}]
    polys = tuple(Polynomial._raw(variables, k) for k in kept)
    return StandardBasis(polys, variables)


def staircase_size(leading: Sequence[tuple], nvars: int):
    """Number of monomials outside the monomial ideal; INFINITE if unbounded."""
    if any(not any(m) for m in leading):
        return 0
    bounds = []
    for k in range(nvars):
        powers = [m[k] for m in leading if m[k] > 0 and sum(m) == m[k]]
        if not powers:
            return INFINITE
        bounds.append(min(powers))
    count = 0
    for e in itertools.product(*(range(b) for b in bounds)):
        if not any(all(a <= b for a, b in zip(m, e)) for m in leading):
            count += 1
    return count


def colength(generators: Iterable[Polynomial]):
    """dim_Q of the local ring at 0 modulo the ideal; INFINITE when not finite."""
    sb = generators if isinstance(generators, StandardBasis) else mora_standard_basis(generators)
    return staircase_size(sb.leading_monomials, len(sb.variables))


def tangent_cone_ideal(generators: Iterable[Polynomial]) -> IdealBasis:
    """Homogeneous ideal generated by the lowest forms of a standard basis."""
    sb = mora_standard_basis(generators)
    forms = tuple(g.lowest_form().primitive(DEGREVLEX) for g in sb.generators)
    return IdealBasis(forms, DEGREVLEX, False, sb.variables)
