"""Finite sections of an operator and exact injectivity tests.

For an enumeration ``v_1, v_2, ...`` the k-section is the k x k matrix
whose entry ``(i, j)`` is the coefficient of the row at ``v_i`` on
``v_j``: the operator restricted to functions supported on the first k
positions, with every output coordinate beyond k discarded.  The rows
matrix keeps the full (untruncated) rows 1..k instead.  Injectivity of the
section implies linear independence of those rows, which is the
finite-window form of the independence of the row functionals.

Only the first condition of Eidelheit's criterion is computed here.  For
the space of all sequences the second condition holds automatically: the
functionals bounded by the k-th seminorm are exactly those supported on
the first k coordinates, a finite-dimensional space.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .errors import EnumerationTooShort
from .graphs import Enumeration
from .operators import Operator, VertexFunction
from .scalars import RATIONAL, Field

__all__ = [
    "SectionMatrix",
    "RowsMatrix",
    "build_section",
    "build_rows_matrix",
    "determinant",
    "rank",
    "is_injective",
    "kernel_basis",
    "rows_independent",
    "seminorm",
    "format_triplets",
]


@dataclass(frozen=True)
class SectionMatrix:
    k: int
    enumeration: Enumeration
    entries: tuple[tuple, ...]
    field: Field

    def vertices(self) -> tuple:
        return self.enumeration.order[: self.k]

    def rows(self) -> list[list]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class RowsMatrix:
    k: int
    columns: tuple
    entries: tuple[tuple, ...]
    field: Field

    def rows(self) -> list[list]:
        return [list(r) for r in self.entries]


def build_section(op: Operator, e: Enumeration, k: int) -> SectionMatrix:
    if k < 1:
        raise ValueError("k must be positive")
    if len(e) < k:
        raise EnumerationTooShort(f"enumeration has {len(e)} vertices, section needs {k}")
    zero = op.field.zero
    window = e.order[:k]
    entries = []
    for v in window:
        coeffs = op.row(v).coeffs
        entries.append(tuple(coeffs.get(w, zero) for w in window))
    return SectionMatrix(k, e, tuple(entries), op.field)


def build_rows_matrix(op: Operator, e: Enumeration, k: int) -> RowsMatrix:
    """Untruncated rows 1..k; window columns first, then the rest by key."""
    if len(e) < k:
        raise EnumerationTooShort(f"enumeration has {len(e)} vertices, rows matrix needs {k}")
    window = e.order[:k]
    in_window = set(window)
    extra = set()
    rows = [op.row(v).coeffs for v in window]
    for coeffs in rows:
        extra.update(w for w in coeffs if w not in in_window)
    columns = tuple(window) + tuple(sorted(extra, key=op.graph.sort_key))
    zero = op.field.zero
    entries = tuple(tuple(c.get(w, zero) for w in columns) for c in rows)
    return RowsMatrix(k, columns, entries, op.field)


def determinant(m: SectionMatrix):
    m.field.require_exact("determinant")
    return linalg.determinant(m.rows(), m.field)


def rank(m: SectionMatrix | RowsMatrix) -> int:
    m.field.require_exact("rank")
    return linalg.rank(m.rows(), m.field)


def is_injective(m: SectionMatrix) -> bool:
    """Exact rank test; in float mode a heuristic ``|det| > eps``."""
    if not m.field.exact:
        det = np.linalg.det(np.array(m.entries, dtype=float))
        return bool(abs(det) > m.field.eps)
    return rank(m) == m.k


def _matvec(rows, x, field: Field) -> list:
    out = []
    for row in rows:
        s = field.zero
        for a, b in zip(row, x):
            if a and b:
                s = s + a * b
        out.append(s)
    return out


def kernel_basis(m: SectionMatrix | RowsMatrix) -> list[list]:
    m.field.require_exact("kernel_basis")
    rows = m.rows()
    basis = linalg.kernel_basis(rows, m.field)
    for vec in basis:
        if any(_matvec(rows, vec, m.field)):
            raise ArithmeticError("kernel vector failed exact re-verification")
    return basis


def rows_independent(op: Operator, e: Enumeration, k: int) -> bool:
    op.field.require_exact("rows_independent")
    return rank(build_rows_matrix(op, e, k)) == k


def seminorm(f: Mapping, e: Enumeration, k: int, field: Field | None = None):
    """Sum of ``|f(v_j)|`` over the first k positions.

    Gaussian mode returns the exact sum of squared moduli instead, since
    moduli themselves are generally irrational.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if field is None:
        field = f.field if isinstance(f, VertexFunction) else RATIONAL
    total = Fraction(0) if field.exact else 0.0
    for v in e.order[:k]:
        x = f[v] if isinstance(f, VertexFunction) else f.get(v, 0)
        x = field.coerce(x)
        total += field.magnitude(x)
    return total


def format_triplets(m: SectionMatrix | RowsMatrix) -> str:
    """Sparse dump, one ``(i, j, "p/q")`` per nonzero entry, 1-based."""
    lines = []
    for i, row in enumerate(m.entries, 1):
        for j, x in enumerate(row, 1):
            if not m.field.is_zero(x):
                lines.append(f'({i}, {j}, "{m.field.format(x)}")')
    return "\n".join(lines)
