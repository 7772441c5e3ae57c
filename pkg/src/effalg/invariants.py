"""Multiplicity, Lojasiewicz exponent, local dimension and finiteness of polynomial maps."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .charpoly import TraceAlgebra, has_pure_power_shape
from .groebner import elimination_generator, vanishes_only_at_origin
from .linear import (
    FormSystem,
    count_loj,
    count_loj_proper,
    count_multiplicity,
    tuples,
    vandermonde_system,
)
from .local import INFINITE, colength
from .parse import MapSpec
from .poly import INFINITY, Polynomial, format_polynomial

AT_LEAST_Q_PLUS_1 = "AT_LEAST_Q_PLUS_1"
AT_MOST_Q = "AT_MOST_Q"


class NotFinite(ValueError):
    """The map is not finite at the origin."""


class NotRegular(ValueError):
    """``P(0, t)`` vanishes identically, so Delta is undefined."""

    def __init__(self, P: Polynomial, t_name: str):
        self.P = P
        self.t_name = t_name
        super().__init__(f"P(0, {t_name}) = 0 identically: P = {format_polynomial(P)} is not regular in {t_name}")


class MapError(ValueError):
    """The map violates a precondition (constant term, zero component, degree bound)."""


# ---------------------------------------------------------------------------
# preconditions


def check_pipeline_map(f: MapSpec) -> None:
    for k, p in enumerate(f.components, 1):
        if p.is_zero():
            raise MapError(f"component {k} is identically zero")
        if p.constant_term():
            raise MapError(f"component {k} has a nonzero constant term; need f(0) = 0")
    if f.m < f.n:
        raise MapError(f"need at least as many components as variables (m={f.m} < n={f.n})")
    if f.d < f.max_degree:
        raise MapError(f"degree bound {f.d} is below the degree {f.max_degree} of the map")


def compose(system: FormSystem, index: Sequence[int], components: Sequence[Polynomial]) -> List[Polynomial]:
    """``(L_{i_1} o G, ..., L_{i_k} o G)`` for the forms of ``system`` at ``index``."""
    return [system.compose(i, components) for i in index]


# ---------------------------------------------------------------------------
# Delta


def delta(P: Polynomial, t_name: str = "t") -> Tuple[object, int]:
    """``(Delta(P), r + 1)`` where ``r + 1`` is the order of ``P(0, t)``.

    ``Delta(P) = min_{j <= r} ord P_j / (r + 1 - j)`` over the expansion
    ``P = sum_j P_j(y) t**j``; zero ``P_j`` are skipped and the result is
    INFINITY when every ``P_j`` with ``j <= r`` vanishes.
    """
    if P.is_zero():
        raise ValueError("Delta of the zero polynomial")
    parts = P.coefficients_in(t_name)
    order = None
    for j in sorted(parts):
        if parts[j].constant_term():
            order = j
            break
    if order is None:
        raise NotRegular(P, t_name)
    best = INFINITY
    for j in range(order):
        pj = parts.get(j)
        if pj is None or pj.is_zero():
            continue
        value = mpq(pj.order(), order - j)
        if best == INFINITY or value < best:
            best = value
    return best, order


def exponent_from_delta(value):
    """``1 / Delta`` with ``1 / INFINITY = 0``."""
    if value == INFINITY:
        return mpq(0)
    return 1 / mpq(value)


# ---------------------------------------------------------------------------
# multiplicity


@dataclass
class MultiplicityReport:
    value: object  # int or INFINITE
    witness_tuple: Optional[Tuple[int, ...]]
    system: FormSystem
    per_tuple_values: List[Tuple[Tuple[int, ...], object]] = field(default_factory=list)

    @property
    def finite(self) -> bool:
        return self.value != INFINITE


def _multiplicity_over(f: MapSpec, length: int, nodes=None) -> MultiplicityReport:
    check_pipeline_map(f)
    system = vandermonde_system(f.m, length, nodes)
    best, witness, table = INFINITE, None, []
    for idx in tuples(length, f.n):
        value = colength(compose(system, idx, f.components))
        table.append((idx, value))
        if value < best:
            best, witness = value, idx
    return MultiplicityReport(best, witness, system, table)


def multiplicity(f: MapSpec, nodes=None) -> MultiplicityReport:
    """i_0(f) as the least colength of ``L_{i_1} o f, ..., L_{i_n} o f``."""
    check_pipeline_map(f)
    return _multiplicity_over(f, count_multiplicity(f.n, f.m, f.d), nodes)


def multiplicity_with_image_degree(f: MapSpec, image_degree: int, nodes=None) -> MultiplicityReport:
    """Same minimum over the shorter system d_image*(m - n) + n, where
    ``image_degree`` bounds the local degree of the image closure at 0."""
    if not isinstance(image_degree, int) or image_degree < 1:
        raise MapError("image degree must be a positive integer")
    return _multiplicity_over(f, image_degree * (f.m - f.n) + f.n, nodes)


# ---------------------------------------------------------------------------
# Lojasiewicz exponent of a proper map C^n -> C^n


def build_H(f: MapSpec | Sequence[Polynomial], L: Sequence[Sequence], d: int) -> List[Polynomial]:
    """``L o f + (z_1**(d**n + 1), ..., z_n**(d**n + 1))``."""
    comps = list(f.components if isinstance(f, MapSpec) else f)
    variables = comps[0].vars
    n = len(variables)
    top = max(max(p.degree(), 0) for p in comps)
    if d < top:
        raise MapError(f"degree bound {d} is below deg f = {top}")
    if len(L) != n:
        raise MapError("need exactly n rows of L")
    D = d**n + 1
    out = []
    for k, row in enumerate(L):
        if len(row) != len(comps):
            raise MapError("row of L has the wrong length")
        h = Polynomial.zero(variables)
        for c, p in zip(row, comps):
            if c:
                h = h + p * c
        h = h + Polynomial.variable(variables[k], variables) ** D
        out.append(h)
    return out


@dataclass
class ProbeResult:
    """One form N_i tried against a proper map."""

    index: int
    survived: bool
    P: Optional[Polynomial] = None
    r_plus_1: Optional[int] = None
    delta: object = None

    @property
    def exponent(self):
        return exponent_from_delta(self.delta) if self.survived else None


@dataclass
class ProperExponent:
    value: Optional[mpq]
    witness_i: Optional[int]
    probes: List[ProbeResult]
    stopped_early: bool = False

    @property
    def witness(self) -> Optional[ProbeResult]:
        for p in self.probes:
            if p.index == self.witness_i:
                return p
        return None


class _ProperMap:
    """Exponent machinery for one proper map G: C^n -> C^n."""

    def __init__(self, G: Sequence[Polynomial], method: str = "auto"):
        self.G = list(G)
        self.variables = self.G[0].vars
        if method == "auto":
            method = "trace" if has_pure_power_shape(self.G) else "groebner"
        self.method = method
        self.algebra = TraceAlgebra(self.G) if method == "trace" else None
        self._i0 = None

    @property
    def local_multiplicity(self):
        if self._i0 is None:
            self._i0 = colength(self.G)
        return self._i0

    def survives(self, N: Polynomial) -> bool:
        """``V(G) and V(N)`` meet only at the origin."""
        if self.algebra is not None:
            # chi(0, t) vanishes to order sum of multiplicities of zeros of G on
            # which N vanishes; equality with the local multiplicity at 0 means
            # no other zero of G lies on V(N)
            return self.algebra.zero_fibre_order(N) == self.local_multiplicity
        return vanishes_only_at_origin(self.G + [N])

    def probe(self, index: int, N: Polynomial, require_regular: bool = True) -> ProbeResult:
        if not self.survives(N):
            return ProbeResult(index, False)
        image = elimination_generator(self.G, N, method=self.method)
        try:
            value, order = delta(image.P, image.t_name)
        except NotRegular:
            if require_regular:
                raise AssertionError(f"surviving form N_{index} gave a polynomial not regular in t")
            raise
        image.r_plus_1 = order
        return ProbeResult(index, True, image.P, order, value)


_WORKER_CACHE: Dict[tuple, _ProperMap] = {}


def _probe_worker(args):
    sources, variables, method, index, row = args
    key = (sources, variables, method)
    pm = _WORKER_CACHE.get(key)
    if pm is None:
        from .parse import parse_polynomial

        pm = _ProperMap([parse_polynomial(s, variables) for s in sources], method)
        _WORKER_CACHE.clear()
        _WORKER_CACHE[key] = pm
    N = Polynomial.linear_form(row, variables)
    r = pm.probe(index, N)
    return r


def proper_exponent(
    G: Sequence[Polynomial],
    nsystem: FormSystem,
    method: str = "auto",
    stop_at: Optional[mpq] = None,
    jobs: int = 1,
) -> ProperExponent:
    """max over surviving N_i of 1/Delta(P_{G, N_i}).

    With ``stop_at`` set, scanning stops once the running maximum reaches it.
    """
    pm = _ProperMap(G, method)
    variables = pm.variables
    probes: List[ProbeResult] = []
    best, witness = None, None
    indices = list(range(1, len(nsystem) + 1))
    batch = max(1, jobs)
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    sources = tuple(format_polynomial(g) for g in pm.G)
    try:
        for start in range(0, len(indices), batch):
            chunk = indices[start : start + batch]
            if pool is None:
                results = [pm.probe(i, nsystem.form(i, variables)) for i in chunk]
            else:
                args = [(sources, variables, pm.method, i, nsystem.rows[i - 1]) for i in chunk]
                results = list(pool.map(_probe_worker, args))
            for r in results:
                probes.append(r)
                if r.survived:
                    e = r.exponent
                    if best is None or e > best:
                        best, witness = e, r.index
                if stop_at is not None and best is not None and best >= stop_at:
                    return ProperExponent(best, witness, probes, stopped_early=r.index < len(nsystem))
    finally:
        if pool is not None:
            pool.shutdown()
    return ProperExponent(best, witness, probes)


# ---------------------------------------------------------------------------
# Lojasiewicz exponent of f


@dataclass
class ExponentReport:
    value: mpq
    witness_s: Tuple[int, ...]
    L_system: FormSystem
    N_system: FormSystem
    per_s_values: List[dict] = field(default_factory=list)

    @property
    def witness(self) -> dict:
        for entry in self.per_s_values:
            if entry["s"] == self.witness_s:
                return entry
        raise KeyError(self.witness_s)


def lojasiewicz(
    f: MapSpec,
    L_nodes=None,
    N_nodes=None,
    method: str = "auto",
    jobs: int = 1,
    early_stop: bool = True,
) -> ExponentReport:
    """min over L-tuples s of max over forms N_i of 1/Delta(P_{f, L_s, N_i})."""
    check_pipeline_map(f)
    if not multiplicity(f).finite:
        raise NotFinite("the map is not finite at the origin")
    n, d = f.n, f.d
    ell_L, ell_N = count_loj(n, f.m, d)
    Lsys = vandermonde_system(f.m, ell_L, L_nodes)
    Nsys = vandermonde_system(n, ell_N, N_nodes)
    best, winner, table = None, None, []
    for s in tuples(ell_L, n):
        H = build_H(f, [Lsys.rows[i - 1] for i in s], d)
        res = proper_exponent(H, Nsys, method, stop_at=best if early_stop else None, jobs=jobs)
        if res.value is None:
            raise AssertionError(f"no form N_i survived the filter for s={s}")
        entry = _entry(s, H, res)
        table.append(entry)
        if best is None or res.value < best:
            best, winner = res.value, s
    bound = d**n
    if best > bound:
        raise AssertionError(f"exponent {best} exceeds the bound d^n = {bound}")
    return ExponentReport(best, winner, Lsys, Nsys, table)


def _entry(s, H, res: ProperExponent) -> dict:
    w = res.witness
    return {
        "s": tuple(s),
        "H": [format_polynomial(h) for h in H],
        "value": res.value,
        "witness_i": res.witness_i,
        "P": w.P if w else None,
        "r_plus_1": w.r_plus_1 if w else None,
        "delta": w.delta if w else None,
        "surviving": [p.index for p in res.probes if p.survived],
        "probed": len(res.probes),
        "stopped_early": res.stopped_early,
    }


def lojasiewicz_proper(f: MapSpec, N_nodes=None, method: str = "auto", jobs: int = 1) -> ExponentReport:
    """Variant for proper maps C^n -> C^n: no augmentation, shorter N-system.

    The only L-tuple is an invertible Vandermonde matrix, which changes
    neither the exponent nor Delta, so the map is used as given.  Properness
    is asserted by the caller and checked through regularity of every P.
    """
    check_pipeline_map(f)
    if f.m != f.n:
        raise MapError("the proper variant needs m = n")
    if not multiplicity(f).finite:
        raise NotFinite("the map is not finite at the origin")
    n, d = f.n, f.d
    Nsys = vandermonde_system(n, count_loj_proper(n, d), N_nodes)
    Lsys = vandermonde_system(f.m, n)
    res = proper_exponent(list(f.components), Nsys, method, jobs=jobs)
    if res.value is None:
        raise AssertionError("no form N_i survived the filter")
    entry = _entry(tuple(range(1, n + 1)), list(f.components), res)
    return ExponentReport(res.value, entry["s"], Lsys, Nsys, [entry])


# ---------------------------------------------------------------------------
# dimension and finiteness


def _augmented(f: MapSpec, M: FormSystem, k: Sequence[int]) -> List[Polynomial]:
    gens = Polynomial.generators(f.variable_names)
    return list(f.components) + [M.compose(j, gens) for j in k]


def dimension_systems(f: MapSpec, q: int, L_nodes=None, M_nodes=None) -> Tuple[FormSystem, FormSystem]:
    """Systems of lengths d^n(m+q-n)+n on Q^(m+q) and d^n(n-q)+q on Q^n.

    The first length is the multiplicity count for the augmented map
    ``(f, M): C^n -> C^(m+q)``; the shorter d^n(m-n)+n cannot even hold m+q
    independent forms once q >= 1.
    """
    n, m, D = f.n, f.m, f.d**f.n
    A = D * (m + q - n) + n
    B = D * (n - q) + q
    return vandermonde_system(m + q, A, L_nodes), vandermonde_system(n, B, M_nodes)


def dim0_at_least(f: MapSpec, q: int, L_nodes=None, M_nodes=None) -> bool:
    """True iff the least colength of ``L_i o (f, M_j)`` exceeds d^n, which
    holds exactly when dim_0 V(f) >= q + 1."""
    check_pipeline_map(f)
    if not (0 <= q < f.n):
        raise MapError(f"need 0 <= q < n, got q={q}")
    Lsys, Msys = dimension_systems(f, q, L_nodes, M_nodes)
    bound = f.d**f.n
    for k in tuples(len(Msys), q):
        G = _augmented(f, Msys, k)
        for i in tuples(len(Lsys), f.n):
            if colength(compose(Lsys, i, G)) <= bound:
                return False
    return True


def local_dimension(f: MapSpec) -> int:
    """dim_0 V(f); the map is finite at 0 exactly when this is 0."""
    check_pipeline_map(f)
    for q in range(f.n - 1, -1, -1):
        if dim0_at_least(f, q):
            return q + 1
    return 0


def threshold_exponent(
    f: MapSpec, q: int, method: str = "auto", jobs: int = 1, stop_below: bool = True
) -> Tuple[mpq, Tuple, Tuple]:
    """min over (s, k) of the exponent of ``L_s o (f, M_k) + (z_i**(d^n+1))``.

    Returns ``(value, s, k)``.  With ``stop_below`` the scan ends as soon as a
    value at most d^n is seen, which already decides the classification.
    """
    check_pipeline_map(f)
    if not (0 <= q <= f.n):
        raise MapError(f"need 0 <= q <= n, got q={q}")
    n, d = f.n, f.d
    bound = d**n
    Lsys, Msys = dimension_systems(f, q)
    ell_N = count_loj_proper(n, bound + 1)
    Nsys = vandermonde_system(n, ell_N)
    best = None
    where = (None, None)
    for k in tuples(len(Msys), q):
        G = _augmented(f, Msys, k)
        for s in tuples(len(Lsys), n):
            H = build_H(G, [Lsys.rows[i - 1] for i in s], d)
            # once the exponent passes d^n (or the best so far) the tuple cannot win
            cap = bound + 1 if best is None else min(best, bound + 1)
            res = proper_exponent(H, Nsys, method, stop_at=cap, jobs=jobs)
            if best is None or res.value < best:
                best, where = res.value, (s, k)
            if stop_below and best <= bound:
                return best, where[0], where[1]
    return best, where[0], where[1]


def finiteness_threshold_test(f: MapSpec, q: int, method: str = "auto", jobs: int = 1) -> str:
    """Classify dim_0 V(f) against q by comparing exponents with d^n."""
    value, _, _ = threshold_exponent(f, q, method, jobs)
    return AT_MOST_Q if value <= f.d**f.n else AT_LEAST_Q_PLUS_1


def local_dimension_threshold(f: MapSpec, method: str = "auto", jobs: int = 1) -> int:
    """dim_0 V(f) through the exponent threshold instead of colengths."""
    check_pipeline_map(f)
    # ascending q: finite maps are settled by the single test at q = 0
    for q in range(f.n):
        if finiteness_threshold_test(f, q, method, jobs) == AT_MOST_Q:
            return q
    return f.n
