"""Finite-hopping-range operators on K^V, stored as per-vertex stencil rows.

An operator is a pure function from a vertex to its :class:`StencilRow`,
the finitely supported coefficients of ``A f(v) = sum_w a[v, w] f(w)``
together with the radius ``n`` of a ball containing that support.
"""

from __future__ import annotations

import numbers
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from typing import NamedTuple

from .errors import (
    DirectedGraph,
    NegativeLambda,
    NotSimplicial,
    SupportOutsideBall,
    ZeroDegree,
)
from .graphs import Enumeration, Graph, ball
from .scalars import RATIONAL, Field

__all__ = [
    "StencilRow",
    "VertexFunction",
    "Operator",
    "laplacian_row",
    "laplacian_plus_lambda_row",
    "adjacency_row",
    "laplacian",
    "laplacian_plus_lambda",
    "adjacency",
    "custom_operator",
    "apply",
    "row_support_indices",
    "RowSupport",
]


@dataclass(frozen=True)
class StencilRow:
    vertex: object
    radius: int
    coeffs: Mapping

    def support(self) -> set:
        return set(self.coeffs)

    def diagonal(self, field: Field):
        return self.coeffs.get(self.vertex, field.zero)

    def off_diagonal(self) -> dict:
        return {w: c for w, c in self.coeffs.items() if w != self.vertex}


def _drop_zeros(items: Iterable, field: Field) -> dict:
    out = {}
    for w, c in items:
        c = field.coerce(c)
        if w in out:
            c = out[w] + c
        out[w] = c
    return {w: c for w, c in out.items() if not field.is_zero(c)}


class VertexFunction(Mapping):
    """Finitely supported function on the vertices; missing keys read as 0."""

    def __init__(self, values: Mapping | Iterable = (), field: Field = RATIONAL):
        self.field = field
        items = values.items() if isinstance(values, Mapping) else values
        self._data = _drop_zeros(items, field)

    def __getitem__(self, v):
        return self._data.get(v, self.field.zero)

    def __contains__(self, v):
        return v in self._data

    def __iter__(self):
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    def support(self) -> set:
        return set(self._data)

    def __add__(self, other: VertexFunction) -> VertexFunction:
        keys = set(self._data) | set(other)
        return VertexFunction({v: self[v] + other[v] for v in keys}, self.field)

    def __sub__(self, other: VertexFunction) -> VertexFunction:
        return self + (-other)

    def __neg__(self):
        return VertexFunction({v: -c for v, c in self._data.items()}, self.field)

    def __rmul__(self, scalar) -> VertexFunction:
        s = self.field.coerce(scalar)
        return VertexFunction({v: s * c for v, c in self._data.items()}, self.field)

    def __eq__(self, other):
        if isinstance(other, VertexFunction):
            return self._data == other._data
        return NotImplemented

    def __repr__(self):
        inner = ", ".join(f"{v!r}: {self.field.format(c)}" for v, c in self._data.items())
        return f"VertexFunction({{{inner}}})"


class Operator:
    """Linear operator given by a pure vertex -> row function.

    ``principle_radius`` optionally declares the radius for which the
    pointwise maximum principle is claimed; when absent the row radius is
    used.  ``uniform_radius`` is an upper bound checked on every row.
    """

    def __init__(
        self,
        name: str,
        graph: Graph,
        row_fn: Callable[[object], StencilRow],
        field: Field = RATIONAL,
        uniform_radius: int | None = None,
        principle_radius: int | None = None,
    ):
        self.name = name
        self.graph = graph
        self.field = field
        self.uniform_radius = uniform_radius
        self.principle_radius = principle_radius
        self._row_fn = row_fn
        self._cache: dict = {}

    def row(self, v) -> StencilRow:
        try:
            return self._cache[v]
        except KeyError:
            pass
        self.graph.validate(v)
        r = self._row_fn(v)
        if self.uniform_radius is not None and r.radius > self.uniform_radius:
            raise ValueError(
                f"row at {v!r} has radius {r.radius} > uniform bound {self.uniform_radius}"
            )
        self._cache[v] = r
        return r

    def radius_used(self, v) -> int:
        """Radius at which the maximum principle is checked at ``v``."""
        r = self.row(v).radius
        if self.principle_radius is None:
            return r
        return max(r, self.principle_radius)

    def __repr__(self):
        return f"Operator({self.name!r} on {self.graph!r}, {self.field.name})"


def _check_laplacian_vertex(g: Graph, v) -> list:
    g.validate(v)
    if not g.undirected_at(v):
        raise DirectedGraph(f"the Laplacian needs an undirected graph at {v!r}")
    nbrs = g.neighbors(v)[0]
    if v in nbrs:
        raise NotSimplicial(f"vertex {v!r} has a loop")
    if not nbrs:
        raise ZeroDegree(f"vertex {v!r} has degree 0")
    return nbrs


def laplacian_row(g: Graph, v, field: Field = RATIONAL) -> StencilRow:
    """Row of ``f(v) - mean of f over the neighbours of v``."""
    nbrs = _check_laplacian_vertex(g, v)
    w_coef = field.coerce(-1) / field.coerce(len(nbrs))
    coeffs = {v: field.one}
    coeffs.update({w: w_coef for w in nbrs})
    return StencilRow(v, 1, coeffs)


def _lambda_value(lam, v, field: Field):
    if isinstance(lam, Mapping):
        value = lam.get(v, 0)
    elif callable(lam):
        value = lam(v)
    else:
        value = lam
    if isinstance(value, str):
        value = field.parse(value)
    value = field.coerce(value)
    if not field.is_real_nonnegative(value):
        raise NegativeLambda(f"lambda({v!r}) = {field.format(value)} is not a nonnegative real")
    return value


def laplacian_plus_lambda_row(g: Graph, lam, v, field: Field = RATIONAL) -> StencilRow:
    """Laplacian row with ``lam(v)`` added on the diagonal.

    ``lam`` may be a mapping (missing vertices read as 0), a callable, or a
    constant.
    """
    value = _lambda_value(lam, v, field)
    base = laplacian_row(g, v, field)
    coeffs = dict(base.coeffs)
    coeffs[v] = coeffs[v] + value
    return StencilRow(v, 1, coeffs)


def adjacency_row(g: Graph, v, field: Field = RATIONAL) -> StencilRow:
    g.validate(v)
    return StencilRow(v, 1, {w: field.one for w in g.neighbors(v)[0]})


def laplacian(g: Graph, field: Field = RATIONAL) -> Operator:
    return Operator("laplacian", g, lambda v: laplacian_row(g, v, field), field, uniform_radius=1)


def laplacian_plus_lambda(g: Graph, lam, field: Field = RATIONAL) -> Operator:
    return Operator(
        "laplacian_plus_lambda",
        g,
        lambda v: laplacian_plus_lambda_row(g, lam, v, field),
        field,
        uniform_radius=1,
    )


def adjacency(g: Graph, field: Field = RATIONAL) -> Operator:
    return Operator("adjacency", g, lambda v: adjacency_row(g, v, field), field, uniform_radius=1)


def custom_operator(
    g: Graph,
    rows: Mapping,
    default: Operator | None = None,
    radius: int = 1,
    field: Field = RATIONAL,
    principle_radius: int | None = None,
) -> Operator:
    """Operator read from an explicit table of rows.

    ``rows`` maps a vertex to ``(w, coefficient)`` pairs (or a mapping
    ``w -> coefficient``).  Every listed coefficient must sit inside
    ``ball(v, radius)``.  Vertices missing from the table use ``default``,
    or the zero row when there is none.
    """
    table = {}
    for v, entries in rows.items():
        g.validate(v)
        items = entries.items() if isinstance(entries, Mapping) else entries
        coeffs = _drop_zeros(
            ((w, field.parse(c) if isinstance(c, str) else c) for w, c in items), field
        )
        near = ball(g, v, radius)
        for w in coeffs:
            if w not in near:
                raise SupportOutsideBall(v, w, radius)
        table[v] = StencilRow(v, radius, coeffs)

    def row_fn(v):
        if v in table:
            return table[v]
        if default is not None:
            return default.row(v)
        return StencilRow(v, 0, {})

    name = "custom" if default is None else f"custom+{default.name}"
    return Operator(name, g, row_fn, field, principle_radius=principle_radius)


def apply(op: Operator, f: Mapping, v):
    """Exact value of ``(A f)(v)`` from the stencil row at ``v``."""
    field = op.field
    total = field.zero
    for w, c in op.row(v).coeffs.items():
        x = f.get(w, 0) if not isinstance(f, VertexFunction) else f[w]
        if x:
            total = total + c * field.coerce(x)
    return total


class RowSupport(NamedTuple):
    positions: frozenset
    outside: tuple

    @property
    def leaves_window(self) -> bool:
        return bool(self.outside)


def row_support_indices(
    op: Operator, e: Enumeration, j: int, k: int | None = None, radius: int | None = None
) -> RowSupport:
    """Positions ``l <= k`` with ``v_l`` in the ball around ``v_j``.

    The ball radius defaults to the row radius at ``v_j``.  Ball vertices
    outside the window (not enumerated, or beyond position ``k``) are
    returned in ``outside``, sorted by key.
    """
    k = len(e) if k is None else k
    if not 1 <= j <= k:
        raise IndexError(f"position {j} outside 1..{k}")
    v = e.vertex(j)
    n = op.row(v).radius if radius is None else radius
    positions = set()
    outside = []
    for w in ball(op.graph, v, n):
        p = e.position(w)
        if p is not None and p <= k:
            positions.add(p)
        else:
            outside.append(w)
    outside.sort(key=op.graph.sort_key)
    return RowSupport(frozenset(positions), tuple(outside))
