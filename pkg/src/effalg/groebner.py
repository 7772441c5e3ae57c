"""Buchberger's algorithm, elimination, and zero-set predicates."""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .poly import (
    DEGREVLEX,
    MonomialOrdering,
    Polynomial,
    Terms,
    VariableMismatch,
    block_ordering,
    common_vars,
    mono_divides,
    mono_lcm,
)


class EliminationError(AssertionError):
    """The eliminated part of a Groebner basis did not collapse to one polynomial."""


# ---------------------------------------------------------------------------
# term-level engine


class _Engine:
    """Reduction machinery for one ordering; caches monomial sort keys."""

    def __init__(self, ordering: MonomialOrdering):
        if not ordering.is_global:
            raise ValueError("Buchberger needs a global ordering; use local_algebra for local ones")
        self.ordering = ordering
        self._key = ordering.key
        self._cache: dict = {}

    def key(self, m):
        k = self._cache.get(m)
        if k is None:
            k = self._key(m)
            self._cache[m] = k
        return k

    def lead(self, p: Terms):
        return max(p, key=self.key)

    def monic(self, p: Terms) -> Terms:
        lc = p[self.lead(p)]
        if lc == 1:
            return p
        inv = 1 / lc
        return {m: c * inv for m, c in p.items()}

    def reduce(self, p: Terms, basis: Sequence[Tuple[tuple, Terms]], full: bool = True) -> Terms:
        """Remainder of ``p`` on division by monic ``basis`` entries ``(lm, terms)``."""
        p = dict(p)
        neg = lambda m: tuple(-x for x in self.key(m))  # noqa: E731
        heap = [(neg(m), m) for m in p]
        heapq.heapify(heap)
        rem: Terms = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = p.get(m)
            if c is None:
                continue
            for lm, g in basis:
                if all(x <= y for x, y in zip(lm, m)):
                    q = tuple(y - x for x, y in zip(lm, m))
                    for gm, gc in g.items():
                        mm = tuple(x + y for x, y in zip(gm, q))
                        old = p.get(mm)
                        if old is None:
                            p[mm] = -c * gc
                            heapq.heappush(heap, (neg(mm), mm))
                        else:
                            new = old - c * gc
                            if new:
                                p[mm] = new
                            else:
                                del p[mm]
                    break
            else:
                rem[m] = c
                del p[m]
                if not full:
                    rem.update(p)
                    return rem
        return rem

    def spoly(self, f: Tuple[tuple, Terms], g: Tuple[tuple, Terms]) -> Terms:
        (lf, tf), (lg, tg) = f, g
        lcm = mono_lcm(lf, lg)
        sf = tuple(a - b for a, b in zip(lcm, lf))
        sg = tuple(a - b for a, b in zip(lcm, lg))
        out: Terms = {}
        for m, c in tf.items():
            out[tuple(x + y for x, y in zip(m, sf))] = c
        for m, c in tg.items():
            mm = tuple(x + y for x, y in zip(m, sg))
            v = out.get(mm, 0) - c
            if v:
                out[mm] = v
            else:
                out.pop(mm, None)
        return out


def _coprime(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _groebner_terms(gens: List[Terms], engine: _Engine) -> List[Tuple[tuple, Terms]]:
    """Reduced Groebner basis (monic) of term dicts.

    Pairs are pruned with the Gebauer-Moeller criteria and selected by sugar
    degree, which tames coefficient growth under block orderings.
    """
    polys: List[Tuple[tuple, Terms]] = []
    sugar: List[int] = []
    active: List[int] = []
    pairs: dict = {}

    def lcm_of(i, j):
        return mono_lcm(polys[i][0], polys[j][0])

    def add(h: Terms, s: int):
        nonlocal active
        h = engine.monic(h)
        lh = engine.lead(h)
        polys.append((lh, h))
        sugar.append(s)
        k = len(polys) - 1
        # Gebauer-Moeller criteria
        cand = [(i, lcm_of(i, k)) for i in active]
        keep = []
        for idx, (i, l) in enumerate(cand):
            if _coprime(polys[i][0], lh):
                keep.append((i, l, True))
                continue
            dominated = False
            for jdx, (j, l2) in enumerate(cand):
                if jdx == idx:
                    continue
                if mono_divides(l2, l) and (l2 != l or jdx < idx):
                    dominated = True
                    break
            if not dominated:
                keep.append((i, l, False))
        for (a, b), l in list(pairs.items()):
            if (
                mono_divides(lh, l)
                and mono_lcm(polys[a][0], lh) != l
                and mono_lcm(polys[b][0], lh) != l
            ):
                del pairs[(a, b)]
        for i, l, cop in keep:
            if not cop:
                pairs[(i, k)] = l
        active = [i for i in active if not mono_divides(lh, polys[i][0])] + [k]

    for g in gens:
        if g:
            r = engine.reduce(g, [polys[i] for i in active])
            if r:
                add(r, max(sum(m) for m in g))

    def pair_sugar(ij):
        i, j = ij
        deg = sum(pairs[ij])
        return max(sugar[i] + deg - sum(polys[i][0]), sugar[j] + deg - sum(polys[j][0]))

    while pairs:
        (i, j) = min(pairs, key=lambda ij: (pair_sugar(ij), sum(pairs[ij]), engine.key(pairs[ij]), ij))
        s_ij = pair_sugar((i, j))
        del pairs[(i, j)]
        s = engine.spoly(polys[i], polys[j])
        if not s:
            continue
        r = engine.reduce(s, [polys[a] for a in active])
        if r:
            add(r, s_ij)
            if not any(polys[-1][0]):
                break  # unit ideal

    basis = [polys[i] for i in active]
    # unit ideal shortcut
    for lm, t in basis:
        if not any(lm):
            n = len(lm)
            return [((0,) * n, {(0,) * n: mpq(1)})]
    # minimalise then interreduce
    basis.sort(key=lambda lt: engine.key(lt[0]))
    minimal = []
    for lm, t in basis:
        if not any(mono_divides(l2, lm) for l2, _ in minimal):
            minimal.append((lm, t))
    reduced = []
    for idx, (lm, t) in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        tail = {m: c for m, c in t.items() if m != lm}
        r = engine.reduce(tail, others) if tail else {}
        r[lm] = mpq(1)
        reduced.append((lm, r))
    reduced.sort(key=lambda lt: engine.key(lt[0]), reverse=True)
    return reduced


# ---------------------------------------------------------------------------
# public API


@dataclass(frozen=True)
class IdealBasis:
    """Generators of an ideal with an ordering and a Groebner-basis flag."""

    generators: tuple
    ordering: MonomialOrdering = DEGREVLEX
    groebner_flag: bool = False
    variables: tuple = field(default=(), compare=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not self.variables:
            if not gens:
                raise ValueError("empty ideal basis needs an explicit variable list")
            object.__setattr__(self, "variables", common_vars(gens))
        for g in gens:
            if g.vars != self.variables:
                raise VariableMismatch("generators use different variable lists")

    @property
    def leading_monomials(self) -> List[tuple]:
        return [g.leading_monomial(self.ordering) for g in self.generators if g]

    def is_unit(self) -> bool:
        if not self.groebner_flag:
            return buchberger(self.generators, self.ordering, self.variables).is_unit()
        return any(g.is_constant() and g for g in self.generators)

    def normal_form(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self)

    def contains(self, p: Polynomial) -> bool:
        basis = self if self.groebner_flag else buchberger(self.generators, self.ordering, self.variables)
        return not normal_form(p, basis)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


def normal_form(p: Polynomial, basis: IdealBasis) -> Polynomial:
    """Fully reduced remainder of ``p`` by the generators of ``basis``.

    The result is canonical only when ``basis`` is a Groebner basis.
    """
    if not basis.ordering.is_global:
        raise ValueError("normal_form needs a global ordering; local orderings go through effalg.local")
    if p.vars != basis.variables:
        raise VariableMismatch("polynomial and basis use different variable lists")
    engine = _Engine(basis.ordering)
    red = [(engine.lead(g.terms), engine.monic(g.terms)) for g in basis.generators if g]
    return Polynomial._raw(p.vars, engine.reduce(p.terms, red))


def buchberger(
    generators: Iterable[Polynomial],
    ordering: MonomialOrdering = DEGREVLEX,
    variables: Sequence[str] | None = None,
) -> IdealBasis:
    """Reduced Groebner basis; elements are monic with respect to ``ordering``."""
    gens = [g for g in generators]
    if variables is None:
        variables = common_vars(gens)
    variables = tuple(variables)
    for g in gens:
        if g.vars != variables:
            raise VariableMismatch("generators use different variable lists")
    engine = _Engine(ordering)
    basis = _groebner_terms([g.terms for g in gens if g], engine)
    polys = tuple(Polynomial._raw(variables, t) for _, t in basis)
    return IdealBasis(polys, ordering, True, variables)


def s_polynomial(f: Polynomial, g: Polynomial, ordering: MonomialOrdering = DEGREVLEX) -> Polynomial:
    engine = _Engine(ordering)
    a = (engine.lead(f.terms), engine.monic(f.terms))
    b = (engine.lead(g.terms), engine.monic(g.terms))
    return Polynomial._raw(f.vars, engine.spoly(a, b))


def is_groebner(basis: IdealBasis) -> bool:
    """Check that every S-polynomial reduces to zero."""
    gens = [g for g in basis.generators if g]
    for f, g in itertools.combinations(gens, 2):
        if normal_form(s_polynomial(f, g, basis.ordering), IdealBasis(tuple(gens), basis.ordering, False, basis.variables)):
            return False
    return True


# ---------------------------------------------------------------------------
# predicates


def _fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base
    while name in taken:
        name += "_"
    return name


def _as_list(basis) -> List[Polynomial]:
    if isinstance(basis, IdealBasis):
        return list(basis.generators)
    return list(basis)


def vanishes_only_at_origin(basis) -> bool:
    """True iff the complex zero set of the generators is contained in {0}.

    For every variable x_k, tests x_k in the radical via the ideal
    I + (1 - w*x_k) being the unit ideal.
    """
    gens = _as_list(basis)
    if not gens:
        raise ValueError("need at least one generator")
    variables = common_vars(gens)
    gens = [g for g in gens if g]
    if not gens:
        return False
    if any(g.is_constant() for g in gens):
        return True
    gb = buchberger(gens, DEGREVLEX, variables)
    if gb.is_unit():
        return True
    # quick exit: a leading-term ideal without a pure power of some variable
    # means the zero set is positive dimensional
    lms = gb.leading_monomials
    for k in range(len(variables)):
        if not any(m[k] > 0 and sum(m) == m[k] for m in lms):
            return False
    w = _fresh_name("w", variables)
    ext = variables + (w,)
    lifted = [g.embed(ext) for g in gb.generators]
    W = Polynomial.variable(w, ext)
    for v in variables:
        aux = Polynomial.constant(1, ext) - W * Polynomial.variable(v, ext)
        if not buchberger(lifted + [aux], DEGREVLEX, ext).is_unit():
            return False
    return True


def ideal_dimension(basis, variables: Sequence[str] | None = None) -> int:
    """Krull dimension of the affine zero set (-1 for the unit ideal)."""
    gens = _as_list(basis)
    if isinstance(basis, IdealBasis):
        variables = basis.variables
    elif variables is None:
        variables = common_vars(gens)
    variables = tuple(variables)
    gens = [g for g in gens if g]
    if not gens:
        return len(variables)
    gb = basis if isinstance(basis, IdealBasis) and basis.groebner_flag and basis.ordering.is_global else None
    if gb is None:
        gb = buchberger(gens, DEGREVLEX, variables)
    if gb.is_unit():
        return -1
    supports = [frozenset(i for i, x in enumerate(m) if x) for m in gb.leading_monomials]
    n = len(variables)
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


# ---------------------------------------------------------------------------
# elimination


@dataclass
class ImagePolynomial:
    """Generator ``P(y, t)`` of the ideal of the image of ``z -> (H(z), N(z))``."""

    P: Polynomial
    y_names: tuple
    t_name: str
    source: str = ""
    r_plus_1: Optional[int] = None

    def regularity_order(self):
        """Order of ``P(0, t)`` in ``t``; None when ``P(0, t) == 0``."""
        if self.r_plus_1 is None:
            parts = self.P.coefficients_in(self.t_name)
            for j, pj in parts.items():
                if pj.constant_term():
                    self.r_plus_1 = j
                    break
        return self.r_plus_1


def _elimination_names(zvars: Sequence[str], n: int, y_names=None, t_name=None):
    taken = set(zvars)
    if y_names is None:
        y_names = []
        for k in range(1, n + 1):
            name = _fresh_name(f"y{k}", taken)
            taken.add(name)
            y_names.append(name)
    else:
        y_names = list(y_names)
        if len(y_names) != n or taken & set(y_names):
            raise ValueError("bad image variable names")
        taken.update(y_names)
    if t_name is None:
        t_name = _fresh_name("t", taken)
    elif t_name in taken:
        raise ValueError("bad t variable name")
    return tuple(y_names), t_name


def check_image_identity(P: Polynomial, H: Sequence[Polynomial], N: Polynomial, y_names, t_name) -> bool:
    assignment = {y: h for y, h in zip(y_names, H)}
    assignment[t_name] = N
    return P.substitute(assignment).is_zero()


def elimination_generator(
    H: Sequence[Polynomial],
    N: Polynomial,
    y_names: Sequence[str] | None = None,
    t_name: str | None = None,
    method: str = "groebner",
    check: bool = True,
) -> ImagePolynomial:
    """Generator of ``(y - H(z), t - N(z))`` intersected with ``Q[y, t]``.

    ``method="groebner"`` runs Buchberger with a block ordering that puts the
    z-variables first.  ``method="trace"`` uses the characteristic polynomial
    of multiplication by ``N`` and requires each ``H_k`` to have the pure
    power ``z_k**D`` as its unique top-degree term (see :mod:`effalg.charpoly`).
    ``"auto"`` picks ``"trace"`` whenever that shape is present.
    """
    H = list(H)
    zvars = common_vars(H + [N])
    if not N:
        raise ValueError("N must be a nonzero linear form")
    ys, t = _elimination_names(zvars, len(H), y_names, t_name)
    if method == "auto":
        from .charpoly import has_pure_power_shape

        method = "trace" if len(H) == len(zvars) and has_pure_power_shape(H) else "groebner"
    if method == "trace":
        from .charpoly import TraceAlgebra

        P = TraceAlgebra(H).elimination_polynomial(N, ys, t, check=check)
        return ImagePolynomial(P, ys, t, source=f"trace: H={[str(h) for h in H]}, N={N}")
    if method != "groebner":
        raise ValueError(f"unknown elimination method {method!r}")

    ring = tuple(zvars) + ys + (t,)
    gens = [Polynomial.variable(y, ring) - h.embed(ring) for y, h in zip(ys, H)]
    gens.append(Polynomial.variable(t, ring) - N.embed(ring))
    gb = buchberger(gens, block_ordering(len(zvars)), ring)
    nz = len(zvars)
    eliminated = [g for g in gb.generators if not any(g.leading_monomial(gb.ordering)[:nz])]
    if len(eliminated) != 1:
        raise EliminationError(
            f"eliminated part has {len(eliminated)} generators; expected exactly one"
        )
    sub = ys + (t,)
    P = eliminated[0].embed(sub).primitive(DEGREVLEX)
    if check and not check_image_identity(P, H, N, ys, t):
        raise EliminationError("P(H(z), N(z)) does not vanish identically")
    return ImagePolynomial(P, ys, t, source=f"groebner: H={[str(h) for h in H]}, N={N}")
