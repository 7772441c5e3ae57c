"""Independent systems of linear forms, the explicit counts, and kernel points."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .groebner import IdealBasis, vanishes_only_at_origin
from .poly import Polynomial, to_rational


class ParameterError(ValueError):
    pass


NOT_FOUND = None


# ---------------------------------------------------------------------------
# exact linear algebra


def determinant(rows: Sequence[Sequence]) -> mpq:
    a = [[mpq(x) for x in r] for r in rows]
    n = len(a)
    det = mpq(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return mpq(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def row_reduce(rows: Sequence[Sequence]) -> Tuple[List[List[mpq]], List[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[mpq(x) for x in r] for r in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows)[1])


def kernel_basis(rows: Sequence[Sequence], ncols: int | None = None) -> List[List[mpq]]:
    """Basis of {x : rows * x = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = row_reduce(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [mpq(0)] * ncols
        v[f] = mpq(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> List[mpq]:
    """Unique solution of a square nonsingular system."""
    n = len(matrix)
    aug = [list(r) + [rhs[i]] for i, r in enumerate(matrix)]
    red, pivots = row_reduce(aug)
    if pivots != list(range(n)):
        raise ParameterError("singular system")
    return [red[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# form systems


@dataclass(frozen=True)
class FormSystem:
    """``s`` linear forms on Q^m stored as rows; ``nodes`` set for Vandermonde systems."""

    ambient_dim: int
    rows: tuple
    nodes: Optional[tuple] = None
    independent: Optional[bool] = field(default=None, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(to_rational(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if any(len(r) != self.ambient_dim for r in rows):
            raise ParameterError("row length differs from ambient dimension")
        if self.nodes is not None:
            object.__setattr__(self, "nodes", tuple(to_rational(a) for a in self.nodes))

    def __len__(self) -> int:
        return len(self.rows)

    def form(self, index: int, variables: Sequence[str]) -> Polynomial:
        """The 1-based ``index``-th form as a polynomial."""
        return Polynomial.linear_form(self.rows[index - 1], variables)

    def compose(self, index: int, components: Sequence[Polynomial]) -> Polynomial:
        """``N_index o f`` for a list of polynomials ``f``."""
        out = components[0] * 0
        for c, p in zip(self.rows[index - 1], components):
            if c:
                out = out + p * c
        return out


def vandermonde_system(m: int, s: int, nodes: Sequence | None = None) -> FormSystem:
    """Rows ``(1, a, a^2, ..., a^(m-1))``; nodes default to ``1..s``."""
    if m < 1:
        raise ParameterError("ambient dimension must be positive")
    if s < m:
        raise ParameterError(f"need at least m={m} forms, got {s}")
    if nodes is None:
        nodes = list(range(1, s + 1))
    nodes = [to_rational(a) for a in nodes]
    if len(nodes) != s:
        raise ParameterError("node count differs from system length")
    if len(set(nodes)) != len(nodes):
        raise ParameterError("nodes must be pairwise distinct")
    rows = tuple(tuple(a**k for k in range(m)) for a in nodes)
    return FormSystem(m, rows, tuple(nodes), True)


def check_independent(system: FormSystem) -> bool:
    """True iff every m rows are linearly independent."""
    m = system.ambient_dim
    if len(system) < m:
        raise ParameterError("system shorter than the ambient dimension")
    for idx in itertools.combinations(range(len(system)), m):
        if not determinant([system.rows[i] for i in idx]):
            return False
    return True


def tuples(s: int, k: int) -> Iterable[Tuple[int, ...]]:
    """Strictly increasing 1-based k-tuples from 1..s in lexicographic order."""
    return itertools.combinations(range(1, s + 1), k)


# ---------------------------------------------------------------------------
# counts


def _positive(**kw):
    for name, v in kw.items():
        if not isinstance(v, int) or v < 1:
            raise ParameterError(f"{name} must be a positive integer")


def count_main_lemma(d: int, m: int, q: int) -> int:
    """Length d(m-q)+q of a system guaranteed to contain a good q-tuple."""
    _positive(d=d, m=m, q=q)
    if q > m:
        raise ParameterError("need m >= q")
    return d * (m - q) + q


def count_every_subtuple(d: int, m: int, q: int, k: int) -> int:
    _positive(d=d, m=m, q=q, k=k)
    if m < 2 or q > m or k < q:
        raise ParameterError("need m >= 2, m >= q and k >= q")
    return k + d * (m - 1) * comb(k, q) - d * (q - 1)


def count_loj(n: int, m: int, d: int) -> Tuple[int, int]:
    """Lengths (l_L, l_N) of the L-system on Q^m and the N-system on Q^n."""
    _positive(n=n, m=m, d=d)
    if m < n:
        raise ParameterError("need m >= n")
    D = d**n
    return D * (m - n) + n, n + ((D + 1) ** n - 1) * n * (n - 1)


def count_loj_proper(n: int, d: int) -> int:
    _positive(n=n, d=d)
    return (d**n - 1) * n * (n - 1) + n


def count_multiplicity(n: int, m: int, d: int) -> int:
    _positive(n=n, m=m, d=d)
    if m < n:
        raise ParameterError("need m >= n")
    return d**n * (m - n) + n


# ---------------------------------------------------------------------------
# Main Lemma search


def find_vanishing_tuple(cone, system: FormSystem, q: int, variables: Sequence[str] | None = None):
    """Lexicographically first q-tuple cutting the cone down to the origin."""
    gens = list(cone.generators if isinstance(cone, IdealBasis) else cone)
    if variables is None:
        variables = gens[0].vars
    for g in gens:
        if g and not g.is_homogeneous():
            raise ParameterError(f"cone generator {g} is not homogeneous")
    if len(variables) != system.ambient_dim:
        raise ParameterError("cone and system live in different dimensions")
    for idx in tuples(len(system), q):
        forms = [system.form(i, variables) for i in idx]
        if vanishes_only_at_origin([g for g in gens if g] + forms):
            return idx
    return NOT_FOUND


# ---------------------------------------------------------------------------
# kernel points


def _check_nodes(nodes):
    nodes = [to_rational(a) for a in nodes]
    if not nodes:
        raise ParameterError("need at least one node")
    if any(a == 0 for a in nodes):
        raise ParameterError("nodes must be nonzero")
    if len(set(nodes)) != len(nodes):
        raise ParameterError("nodes must be pairwise distinct")
    return nodes


def kernel_point_solve(nodes: Sequence) -> List[mpq]:
    """Point with first coordinate 1 killed by every Vandermonde form at ``nodes``."""
    a = _check_nodes(nodes)
    n = len(a)
    matrix = [[aj**k for k in range(1, n + 1)] for aj in a]
    return [mpq(1)] + solve(matrix, [mpq(-1)] * n)


def kernel_point_formula(nodes: Sequence) -> List[mpq]:
    """The same point from the Lagrange interpolation closed form."""
    a = _check_nodes(nodes)
    n = len(a)
    weights = []
    for j in range(n):
        prod = a[j]
        for i in range(n):
            if i != j:
                prod *= a[j] - a[i]
        weights.append(1 / prod)
    F = [mpq(1)]
    for k in range(1, n + 1):
        total = mpq(0)
        for j in range(n):
            others = [a[i] for i in range(n) if i != j]
            esym = sum((_prod(c) for c in itertools.combinations(others, n - k)), mpq(0))
            total += weights[j] * esym
        F.append((-1) ** (n - k + 1) * total)
    return F


def _prod(values) -> mpq:
    out = mpq(1)
    for v in values:
        out *= v
    return out


def kernel_point(nodes: Sequence) -> List[mpq]:
    """Kernel point computed both ways; AssertionError if the two disagree."""
    solved = kernel_point_solve(nodes)
    closed = kernel_point_formula(nodes)
    if solved != closed:
        raise AssertionError(f"closed formula {closed} disagrees with linear solve {solved}")
    return solved
