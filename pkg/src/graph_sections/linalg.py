"""Fraction-free (Bareiss) elimination over Q and Q(i).

Each row is first scaled by the lcm of its denominators so that all the
work happens over Z (or Z[i]).  Bareiss' update

    m[i][j] = (p * m[i][j] - m[i][c] * m[r][j]) / prev_pivot

divides exactly, so intermediate entries stay minors of the scaled matrix
instead of accumulating denominators.  Pivoting takes the first nonzero
entry in the column; there is no numerical pivoting because nothing is
rounded.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .scalars import Field, GaussianRational

__all__ = ["echelon", "determinant", "rank", "solve", "kernel_basis"]


def _exact_int_div(a: int, b: int) -> int:
    q, rem = divmod(a, b)
    if rem:
        raise ArithmeticError(f"inexact Bareiss division {a} / {b}")
    return q


def _gauss_div(a: GaussianRational, b: GaussianRational) -> GaussianRational:
    return a / b


def _integer_rows(entries, field: Field):
    """Scale rows to Z or Z[i]; return (rows, row scale factors, divider)."""
    field.require_exact("fraction-free elimination")
    rows, scales = [], []
    if field.name == "rational":
        for row in entries:
            row = [field.coerce(x) for x in row]
            d = lcm(1, *(x.denominator for x in row))
            rows.append([x.numerator * (d // x.denominator) for x in row])
            scales.append(d)
        return rows, scales, _exact_int_div
    for row in entries:
        row = [field.coerce(x) for x in row]
        d = lcm(1, *(x.re.denominator for x in row), *(x.im.denominator for x in row))
        rows.append([x * d for x in row])
        scales.append(d)
    return rows, scales, _gauss_div


def echelon(rows: list[list], div, pivot_limit: int | None = None):
    """Fraction-free row echelon form, in place.

    Only columns ``< pivot_limit`` are searched for pivots (all columns by
    default); every column is updated.  Returns ``(pivot_columns, swaps)``
    where pivot ``i`` sits in row ``i``.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    limit = n_cols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    swaps = 0
    prev = 1
    r = 0
    for c in range(limit):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if rows[i][c]), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            swaps += 1
        piv_row = rows[r]
        piv = piv_row[c]
        for i in range(r + 1, n_rows):
            row = rows[i]
            a = row[c]
            if a:
                for j in range(c + 1, n_cols):
                    row[j] = div(piv * row[j] - a * piv_row[j], prev)
                row[c] = 0 * a
            else:
                for j in range(c + 1, n_cols):
                    if row[j]:
                        row[j] = div(piv * row[j], prev)
        pivots.append(c)
        prev = piv
        r += 1
    return pivots, swaps


def _lift(x, field: Field):
    if field.name == "rational":
        return Fraction(x)
    return x


def determinant(entries, field: Field):
    n = len(entries)
    if n == 0:
        return field.one
    if any(len(row) != n for row in entries):
        raise ValueError("determinant needs a square matrix")
    rows, scales, div = _integer_rows(entries, field)
    pivots, swaps = echelon(rows, div)
    if len(pivots) < n:
        return field.zero
    det = _lift(rows[n - 1][n - 1], field)
    for d in scales:
        det = det / d
    return field.coerce(-det if swaps % 2 else det)


def rank(entries, field: Field) -> int:
    if not entries or not entries[0]:
        return 0
    rows, _, div = _integer_rows(entries, field)
    pivots, _ = echelon(rows, div)
    return len(pivots)


def _back_substitute(rows, pivots, x, field: Field, rhs_col: int | None = None):
    """Fill pivot coordinates of ``x`` from the echelon rows, bottom-up."""
    n_cols = len(x)
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        row = rows[r]
        s = _lift(row[rhs_col], field) if rhs_col is not None else field.zero
        for j in range(c + 1, n_cols):
            if row[j] and x[j]:
                s = s - row[j] * x[j]
        x[c] = s / _lift(row[c], field)
    return x


def solve(entries, rhs, field: Field):
    """Unique solution of ``entries @ x = rhs``, or ``None`` if singular."""
    n = len(entries)
    if len(rhs) != n or any(len(row) != n for row in entries):
        raise ValueError("solve needs a square system")
    if n == 0:
        return []
    augmented = [list(row) + [b] for row, b in zip(entries, rhs)]
    rows, _, div = _integer_rows(augmented, field)
    pivots, _ = echelon(rows, div, pivot_limit=n)
    if len(pivots) < n:
        return None
    x = [field.zero] * n
    _back_substitute(rows, pivots, x, field, rhs_col=n)
    return [field.coerce(v) for v in x]


def kernel_basis(entries, field: Field) -> list[list]:
    """Basis of the right null space, one vector per free column."""
    if not entries:
        return []
    n_cols = len(entries[0])
    rows, _, div = _integer_rows(entries, field)
    pivots, _ = echelon(rows, div)
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = []
    for fc in free:
        x = [field.zero] * n_cols
        x[fc] = field.one
        _back_substitute(rows, pivots, x, field)
        basis.append([field.coerce(v) for v in x])
    return basis
