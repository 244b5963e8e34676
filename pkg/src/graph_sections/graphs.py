"""Lazily generated locally finite graphs, two-sided balls and BFS windows.

A graph is never materialized: each family answers neighbour queries for a
single vertex key.  Queries are pure, so graph objects can be shared
freely.  Every family also fixes a total order on its keys, which is what
makes enumerations (and hence section matrices) reproducible bit for bit.

Key conventions
---------------
* ``ZLine``: ``int``; text form ``"-3"``.
* ``ZSquare``: ``(x, y)`` ordered lexicographically; text ``"(x,y)"``.
* ``RegularTree(d)``: path from the root as a tuple of child indices,
  ordered by ``(len(path), path)``; text ``"()"`` or ``"(0,2,1)"``.  The
  root has ``d`` children, every other vertex ``d - 1`` plus its parent.
* ``DirectedRay``: ``int >= 0`` with edges ``i -> i + 1``.
* ``ExplicitFinite``: text labels, ordered as strings.
* ``DisjointUnion``: ``(part_name, inner_key)``; text ``"name:inner"``.
"""

from __future__ import annotations

import warnings
from abc import ABC, abstractmethod
from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass, field

from .errors import DirectedGraph, InvalidKey, WindowExhausted

__all__ = [
    "Graph",
    "ZLine",
    "ZSquare",
    "RegularTree",
    "DirectedRay",
    "ExplicitFinite",
    "DisjointUnion",
    "FunctionGraph",
    "Enumeration",
    "neighbors",
    "degree",
    "ball",
    "enumerate_vertices",
    "window_connected",
]

VertexKey = Hashable


def _parse_int_tuple(text: str) -> tuple[int, ...]:
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"expected a parenthesized tuple, got {text!r}")
    body = s[1:-1].strip()
    if not body:
        return ()
    return tuple(int(part) for part in body.split(",") if part.strip())


def _format_int_tuple(t: tuple[int, ...]) -> str:
    return "(" + ",".join(str(x) for x in t) + ")"


class Graph(ABC):
    """Abstract locally finite graph, queried one vertex at a time."""

    undirected: bool = True
    simplicial: bool = True
    #: built-in infinite families are connected by construction
    connected_by_contract: bool = False

    @abstractmethod
    def validate(self, v) -> None:
        """Raise :class:`InvalidKey` unless ``v`` is a vertex."""

    @abstractmethod
    def _out(self, v) -> Iterable:
        ...

    def _in(self, v) -> Iterable:
        return self._out(v)

    def sort_key(self, v):
        return v

    def parse_key(self, text):
        return text

    def format_key(self, v) -> str:
        return str(v)

    def undirected_at(self, v) -> bool:
        """Whether the neighbourhood of ``v`` is symmetric."""
        return self.undirected

    def is_finite(self) -> bool:
        return False

    def neighbors(self, v) -> tuple[list, list]:
        self.validate(v)
        out = sorted(set(self._out(v)), key=self.sort_key)
        inc = out if self.undirected_at(v) else sorted(set(self._in(v)), key=self.sort_key)
        return out, list(inc)

    def coerce_key(self, v):
        """Accept either a native key or its text form."""
        if isinstance(v, str):
            v = self.parse_key(v)
        self.validate(v)
        return v


class ZLine(Graph):
    connected_by_contract = True

    def validate(self, v):
        if not isinstance(v, int) or isinstance(v, bool):
            raise InvalidKey(v, self)

    def _out(self, v):
        return (v - 1, v + 1)

    def parse_key(self, text):
        try:
            return int(str(text).strip())
        except ValueError:
            raise InvalidKey(text, self) from None

    def __repr__(self):
        return "ZLine()"


class ZSquare(Graph):
    connected_by_contract = True

    def validate(self, v):
        if not (
            isinstance(v, tuple)
            and len(v) == 2
            and all(isinstance(c, int) and not isinstance(c, bool) for c in v)
        ):
            raise InvalidKey(v, self)

    def _out(self, v):
        x, y = v
        return ((x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1))

    def parse_key(self, text):
        try:
            key = _parse_int_tuple(str(text))
        except ValueError:
            raise InvalidKey(text, self) from None
        return key

    def format_key(self, v):
        return _format_int_tuple(v)

    def __repr__(self):
        return "ZSquare()"


class RegularTree(Graph):
    """The infinite ``d``-regular tree, rooted at the empty path ``()``."""

    connected_by_contract = True

    def __init__(self, d: int):
        if d < 2:
            raise ValueError("RegularTree needs degree >= 2")
        self.d = d

    root = ()

    def validate(self, v):
        if not isinstance(v, tuple):
            raise InvalidKey(v, self)
        for depth, c in enumerate(v):
            bound = self.d if depth == 0 else self.d - 1
            if not isinstance(c, int) or isinstance(c, bool) or not 0 <= c < bound:
                raise InvalidKey(v, self)

    def _out(self, v):
        n_children = self.d if not v else self.d - 1
        nbrs = [v + (i,) for i in range(n_children)]
        if v:
            nbrs.append(v[:-1])
        return nbrs

    def sort_key(self, v):
        return (len(v), v)

    def parse_key(self, text):
        try:
            return _parse_int_tuple(str(text))
        except ValueError:
            raise InvalidKey(text, self) from None

    def format_key(self, v):
        return _format_int_tuple(v)

    def __repr__(self):
        return f"RegularTree({self.d})"


class DirectedRay(Graph):
    """Vertices ``0, 1, 2, ...`` with directed edges ``i -> i + 1``."""

    undirected = False
    connected_by_contract = True

    def validate(self, v):
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise InvalidKey(v, self)

    def _out(self, v):
        return (v + 1,)

    def _in(self, v):
        return (v - 1,) if v > 0 else ()

    def parse_key(self, text):
        try:
            return int(str(text).strip())
        except ValueError:
            raise InvalidKey(text, self) from None

    def __repr__(self):
        return "DirectedRay()"


class ExplicitFinite(Graph):
    """A finite graph given by an edge list over text labels.

    With ``undirected=True`` every edge is stored in both directions.
    ``vertices`` may list isolated vertices.
    """

    def __init__(
        self,
        edges: Iterable[tuple[str, str]],
        undirected: bool = True,
        vertices: Iterable[str] = (),
    ):
        self.undirected = bool(undirected)
        self.edges = tuple((str(a), str(b)) for a, b in edges)
        out: dict[str, set[str]] = {str(v): set() for v in vertices}
        inc: dict[str, set[str]] = {str(v): set() for v in vertices}
        for a, b in self.edges:
            pairs = [(a, b), (b, a)] if self.undirected else [(a, b)]
            for s, t in pairs:
                out.setdefault(s, set()).add(t)
                out.setdefault(t, set())
                inc.setdefault(t, set()).add(s)
                inc.setdefault(s, set())
        self._out_map = out
        self._in_map = inc
        self.simplicial = all(a != b for a, b in self.edges)

    def validate(self, v):
        if not isinstance(v, str) or v not in self._out_map:
            raise InvalidKey(v, self)

    def _out(self, v):
        return self._out_map[v]

    def _in(self, v):
        return self._in_map[v]

    def is_finite(self):
        return True

    def vertices(self) -> list[str]:
        return sorted(self._out_map)

    def __repr__(self):
        return f"ExplicitFinite({len(self._out_map)} vertices, {len(self.edges)} edges)"


class DisjointUnion(Graph):
    """Disjoint union of named parts; keys are ``(name, inner_key)``."""

    def __init__(self, parts: Sequence[Graph | tuple[str, Graph]]):
        named: list[tuple[str, Graph]] = []
        for i, part in enumerate(parts):
            if isinstance(part, Graph):
                named.append((f"g{i}", part))
            else:
                name, g = part
                named.append((str(name), g))
        names = [n for n, _ in named]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate part names in union: {names}")
        if any(":" in n for n in names):
            raise ValueError("part names may not contain ':'")
        self.parts = tuple(named)
        self._by_name = {n: (i, g) for i, (n, g) in enumerate(named)}
        self.undirected = all(g.undirected for _, g in named)
        self.simplicial = all(g.simplicial for _, g in named)

    def _split(self, v):
        if not (isinstance(v, tuple) and len(v) == 2 and v[0] in self._by_name):
            raise InvalidKey(v, self)
        return self._by_name[v[0]][1], v[1]

    def validate(self, v):
        g, inner = self._split(v)
        try:
            g.validate(inner)
        except InvalidKey:
            raise InvalidKey(v, self) from None

    def _out(self, v):
        g, inner = self._split(v)
        return [(v[0], w) for w in g._out(inner)]

    def _in(self, v):
        g, inner = self._split(v)
        return [(v[0], w) for w in g._in(inner)]

    def undirected_at(self, v):
        g, inner = self._split(v)
        return g.undirected_at(inner)

    def sort_key(self, v):
        i, g = self._by_name[v[0]]
        return (i, g.sort_key(v[1]))

    def parse_key(self, text):
        name, sep, inner = str(text).partition(":")
        if not sep or name not in self._by_name:
            raise InvalidKey(text, self)
        g = self._by_name[name][1]
        return (name, g.parse_key(inner))

    def format_key(self, v):
        g, inner = self._split(v)
        return f"{v[0]}:{g.format_key(inner)}"

    def is_finite(self):
        return all(g.is_finite() for _, g in self.parts)

    def __repr__(self):
        inner = ", ".join(f"{n}={g!r}" for n, g in self.parts)
        return f"DisjointUnion({inner})"


class FunctionGraph(Graph):
    """Graph backed by user callables (library use only).

    ``out_fn`` maps a vertex to its out-neighbours; ``in_fn`` defaults to
    ``out_fn``, in which case the graph is undirected.
    """

    def __init__(
        self,
        out_fn: Callable[[VertexKey], Iterable],
        in_fn: Callable[[VertexKey], Iterable] | None = None,
        *,
        is_vertex: Callable[[VertexKey], bool] | None = None,
        sort_key: Callable | None = None,
        simplicial: bool = True,
    ):
        self._out_fn = out_fn
        self._in_fn = in_fn if in_fn is not None else out_fn
        self.undirected = in_fn is None
        self.simplicial = simplicial
        self._is_vertex = is_vertex
        self._sort_key = sort_key

    def validate(self, v):
        if self._is_vertex is not None and not self._is_vertex(v):
            raise InvalidKey(v, self)

    def _out(self, v):
        return self._out_fn(v)

    def _in(self, v):
        return self._in_fn(v)

    def sort_key(self, v):
        return self._sort_key(v) if self._sort_key is not None else v


def neighbors(g: Graph, v) -> tuple[list, list]:
    """Sorted, duplicate-free ``(out, in)`` neighbour lists of ``v``."""
    return g.neighbors(v)


def degree(g: Graph, v) -> int:
    g.validate(v)
    if not g.undirected_at(v):
        raise DirectedGraph(f"degree is undefined at {v!r}: {g!r} is directed there")
    return len(g.neighbors(v)[0])


def _one_sided(g: Graph, sources: Iterable, n: int, side: int) -> set:
    seen = set(sources)
    frontier = list(seen)
    for _ in range(n):
        nxt = []
        for u in frontier:
            for w in g.neighbors(u)[side]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return seen


def ball(g: Graph, v, n: int) -> set:
    """Two-sided ball: ``v``, endpoints of paths of length <= n leaving
    ``v``, and starting points of paths of length <= n entering ``v``.

    For undirected graphs this is the ordinary graph ball.
    """
    if n < 0:
        raise ValueError("radius must be nonnegative")
    g.validate(v)
    return _one_sided(g, [v], n, 0) | _one_sided(g, [v], n, 1)


@dataclass(frozen=True)
class Enumeration:
    """BFS-ordered prefix ``v_1, v_2, ...`` of a vertex window.

    Positions are 1-based throughout the public API, matching the
    coordinates of K^N.
    """

    roots: tuple
    order: tuple
    layers: tuple[int, ...]
    exhausted: bool = False
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        idx = {v: i + 1 for i, v in enumerate(self.order)}
        if len(idx) != len(self.order):
            raise ValueError("enumeration order contains duplicates")
        object.__setattr__(self, "index", idx)

    def __len__(self):
        return len(self.order)

    def vertex(self, position: int):
        if not 1 <= position <= len(self.order):
            raise IndexError(f"position {position} outside 1..{len(self.order)}")
        return self.order[position - 1]

    def position(self, v) -> int | None:
        return self.index.get(v)

    def prefix(self, k: int) -> Enumeration:
        k = min(k, len(self.order))
        return Enumeration(self.roots, self.order[:k], self.layers[:k], self.exhausted)


def enumerate_vertices(g: Graph, roots: Sequence, k: int) -> Enumeration:
    """First ``k`` vertices in BFS order over symmetrized adjacency.

    Layer 0 is ``roots`` in the given order; every later layer is sorted by
    the graph's key order.  If fewer than ``k`` vertices are reachable a
    :class:`WindowExhausted` warning is issued and the full order returned.
    """
    if k < 1:
        raise ValueError("k must be positive")
    roots = tuple(roots)
    if not roots:
        raise ValueError("roots must be nonempty")
    if len(set(roots)) != len(roots):
        raise ValueError("roots must be duplicate-free")
    for r in roots:
        g.validate(r)

    order = list(roots[:k])
    layers = [0] * len(order)
    seen = set(roots)
    frontier = list(roots)
    depth = 0
    while len(order) < k and frontier:
        depth += 1
        nxt = set()
        for u in frontier:
            out, inc = g.neighbors(u)
            for w in out + inc:
                if w not in seen:
                    nxt.add(w)
        seen |= nxt
        frontier = sorted(nxt, key=g.sort_key)
        take = frontier[: k - len(order)]
        order.extend(take)
        layers.extend([depth] * len(take))

    exhausted = len(order) < k
    if exhausted:
        warnings.warn(
            WindowExhausted(f"only {len(order)} vertices reachable from roots, {k} requested"),
            stacklevel=2,
        )
    return Enumeration(roots, tuple(order), tuple(layers), exhausted)


def window_connected(g: Graph, e: Enumeration) -> bool:
    """Connectivity of the window under symmetrized adjacency.

    Search starts at the first enumerated vertex and may only step inside
    the window; every window vertex must be reached.
    """
    window = set(e.order)
    if len(window) <= 1:
        return True
    start = e.order[0]
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        out, inc = g.neighbors(u)
        for w in out + inc:
            if w in window and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == window
