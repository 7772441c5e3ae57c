"""Effective Bertini families of hyperplanes and subspaces, with a symbolic transversality check."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .groebner import ideal_dimension, vanishes_only_at_origin
from .linear import (
    FormSystem,
    NOT_FOUND,
    ParameterError,
    kernel_basis,
    kernel_point,
    rank,
    tuples,
)
from .poly import Polynomial, common_vars, to_rational


class HypothesisError(ValueError):
    """A cone fails the smoothness or shape hypotheses it claims."""


def count_bertini(d: int, m: int, q: int) -> int:
    """Family length 2 d^(m-q) [(m-q)(d-1)+1]^(q-1) + m - 1 for hyperplane sections."""
    _check(d, m, q)
    return 2 * d ** (m - q) * ((m - q) * (d - 1) + 1) ** (q - 1) + m - 1


def count_bertini_multi(d: int, m: int, q: int) -> int:
    """Family length d^(m-q) [(m-q)(d-1)+q-1] + m(q-1) - 1 for codimension-s sections."""
    _check(d, m, q)
    return d ** (m - q) * ((m - q) * (d - 1) + q - 1) + m * (q - 1) - 1


def _check(d, m, q):
    for name, v in (("d", d), ("m", m), ("q", q)):
        if not isinstance(v, int) or v < 1:
            raise ParameterError(f"{name} must be a positive integer")
    if q > m:
        raise ParameterError("need m >= q")


# ---------------------------------------------------------------------------
# sections


@dataclass(frozen=True)
class LinearSection:
    """Forms ``a_1.x, ..., a_s.x`` cutting out a linear subspace of Q^m."""

    forms: tuple
    tuple_index: tuple = ()
    kernel: tuple = ()
    degenerate: bool = False

    def __post_init__(self):
        object.__setattr__(self, "forms", tuple(tuple(to_rational(c) for c in f) for f in self.forms))

    @property
    def codim(self) -> int:
        return len(self.forms)

    def polynomials(self, variables: Sequence[str]) -> List[Polynomial]:
        return [Polynomial.linear_form(f, variables) for f in self.forms]

    def scaled(self, factors: Sequence) -> "LinearSection":
        forms = tuple(tuple(to_rational(c) * mpq(k) for c in f) for f, k in zip(self.forms, factors))
        return LinearSection(forms, self.tuple_index, self.kernel, self.degenerate)


def _primitive_vector(v: Sequence) -> Tuple[mpq, ...]:
    """Scale a nonzero rational vector so its first nonzero entry is 1."""
    lead = next(x for x in v if x)
    return tuple(mpq(x) / lead for x in v)


def hyperplane_family(system: FormSystem) -> List[LinearSection]:
    """One hyperplane a.x = 0 per (m-1)-tuple, a spanning the common kernel."""
    m = system.ambient_dim
    if m < 2:
        raise ParameterError("hyperplane families need m >= 2")
    if len(system) < m - 1:
        raise ParameterError("system shorter than m - 1")
    out = []
    for idx in tuples(len(system), m - 1):
        if system.nodes is not None and all(system.nodes[i - 1] for i in idx):
            a = tuple(kernel_point([system.nodes[i - 1] for i in idx]))
        else:
            ker = kernel_basis([system.rows[i - 1] for i in idx], m)
            if len(ker) != 1:
                raise AssertionError(f"rows {idx} of an independent system have a {len(ker)}-dimensional kernel")
            a = _primitive_vector(ker[0])
        out.append(LinearSection((a,), idx, (a,)))
    return out


def subspace_family(system: FormSystem, m: int, q: int, s: int) -> List[LinearSection]:
    """Sections by the first ``s`` blocks of a kernel line in (Q^m)^(q-1).

    Entries whose first ``s`` blocks are linearly dependent are kept with
    ``degenerate=True``.
    """
    if q < 2 or not (1 <= s <= q - 1):
        raise ParameterError("need q >= 2 and 1 <= s <= q - 1")
    ambient = m * (q - 1)
    if system.ambient_dim != ambient:
        raise ParameterError(f"system must live on Q^{ambient}")
    out = []
    for idx in tuples(len(system), ambient - 1):
        ker = kernel_basis([system.rows[i - 1] for i in idx], ambient)
        if len(ker) != 1:
            raise AssertionError(f"rows {idx} of an independent system have a {len(ker)}-dimensional kernel")
        a = _primitive_vector(ker[0])
        blocks = tuple(a[k * m : (k + 1) * m] for k in range(q - 1))
        forms = blocks[:s]
        degenerate = rank(forms) < s
        out.append(LinearSection(forms, idx, blocks, degenerate))
    return out


# ---------------------------------------------------------------------------
# cones and the transversality check


def jacobian(generators: Sequence[Polynomial]) -> List[List[Polynomial]]:
    variables = common_vars(generators)
    return [[g.diff(v) for v in variables] for g in generators]


def polynomial_determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant by cofactor expansion along the first row."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = None
    for j, entry in enumerate(matrix[0]):
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = entry * polynomial_determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else matrix[0][0] * 0


def minors(matrix: Sequence[Sequence[Polynomial]], size: int) -> List[Polynomial]:
    rows, cols = len(matrix), len(matrix[0])
    out = []
    if size > min(rows, cols) or size < 1:
        return out
    for r in itertools.combinations(range(rows), size):
        for c in itertools.combinations(range(cols), size):
            det = polynomial_determinant([[matrix[i][j] for j in c] for i in r])
            if det:
                out.append(det)
    return out


@dataclass(frozen=True)
class SmoothConeSpec:
    """A homogeneous cone claimed to be smooth away from 0 with the given dimension
    and Jacobian rank; the claims are verified on construction."""

    generators: tuple
    claimed_dim: int
    claimed_rank: int
    variables: tuple = field(default=(), compare=False)

    def __post_init__(self):
        gens = tuple(g for g in self.generators if g)
        if not gens:
            raise HypothesisError("a cone needs a nonzero generator")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "variables", common_vars(gens))
        for g in gens:
            if not g.is_homogeneous():
                raise HypothesisError(f"generator {g} is not homogeneous")
        m = len(self.variables)
        if not (0 <= self.claimed_dim <= m) or not (0 < self.claimed_rank <= m):
            raise HypothesisError("claimed dimension or rank out of range")
        if ideal_dimension(list(gens)) != self.claimed_dim:
            raise HypothesisError(f"the cone does not have dimension {self.claimed_dim}")
        if not self.smooth_away_from_origin():
            raise HypothesisError("the singular locus of the cone meets the complement of the origin")

    @property
    def m(self) -> int:
        return len(self.variables)

    def smooth_away_from_origin(self) -> bool:
        """Generators plus all rank-size Jacobian minors vanish only at 0."""
        bad = list(self.generators) + minors(jacobian(self.generators), self.claimed_rank)
        return vanishes_only_at_origin(bad)


def check_transversal_smooth(cone: SmoothConeSpec, section: LinearSection) -> bool:
    """True iff the stacked Jacobian [Jac; section rows] has full rank
    ``rank + s`` at every nonzero point of the intersection."""
    if section.degenerate or rank(section.forms) < section.codim:
        raise ParameterError("section forms are linearly dependent")
    variables = cone.variables
    if any(len(f) != cone.m for f in section.forms):
        raise ParameterError("section lives in a different ambient space")
    forms = section.polynomials(variables)
    stacked = jacobian(cone.generators) + [[Polynomial.constant(c, variables) for c in f] for f in section.forms]
    size = cone.claimed_rank + section.codim
    bad = list(cone.generators) + forms + minors(stacked, size)
    return vanishes_only_at_origin(bad)


@dataclass
class WitnessSearch:
    witness: Optional[LinearSection]
    table: List[Tuple[tuple, Optional[bool]]]


def find_bertini_witness(cone: SmoothConeSpec, family: Sequence[LinearSection], full_table: bool = False) -> WitnessSearch:
    """Lexicographically first non-degenerate section that is transversal.

    Degenerate sections are recorded with ``None`` and skipped.
    """
    table = []
    witness = NOT_FOUND
    for section in family:
        if section.degenerate:
            table.append((section.tuple_index, None))
            continue
        ok = check_transversal_smooth(cone, section)
        table.append((section.tuple_index, ok))
        if ok and witness is None:
            witness = section
            if not full_table:
                break
    return WitnessSearch(witness, table)
