"""Exact preimages on finite sections.

``solve_section`` finds the unique ``f`` supported on the first k
positions whose image agrees with ``g`` on those k positions.  No global
preimage is assembled: coordinate traces across growing k are reported as
they are, and nothing here claims they converge.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from . import linalg
from .errors import SingularSection
from .graphs import Enumeration
from .operators import Operator, VertexFunction, apply
from .sections import build_section, kernel_basis

__all__ = [
    "SectionSolution",
    "StabilizationReport",
    "solve_section",
    "solve_progressive",
    "verify",
]


@dataclass(frozen=True)
class SectionSolution:
    k: int
    f: VertexFunction
    residual_checked: bool


@dataclass(frozen=True)
class StabilizationReport:
    ladder: tuple[int, ...]
    window: int
    traces: dict  # position -> list of (k, value)
    stable: dict  # position -> bool


def _value(g: Mapping, v, field):
    x = g[v] if isinstance(g, VertexFunction) else g.get(v, 0)
    if isinstance(x, str):
        return field.parse(x)
    return field.coerce(x)


def verify(op: Operator, e: Enumeration, f: Mapping, g: Mapping, positions: Iterable[int]) -> dict:
    """Exact residuals ``A f(v_j) - g(v_j)`` at the given positions."""
    field = op.field
    return {j: apply(op, f, e.vertex(j)) - _value(g, e.vertex(j), field) for j in positions}


def solve_section(op: Operator, e: Enumeration, g: Mapping, k: int) -> SectionSolution:
    field = op.field
    field.require_exact("solve_section")
    m = build_section(op, e, k)
    window = e.order[:k]
    rhs = [_value(g, v, field) for v in window]
    x = linalg.solve(m.rows(), rhs, field)
    if x is None:
        raise SingularSection(k, kernel_basis(m))
    f = VertexFunction(dict(zip(window, x)), field)
    residuals = verify(op, e, f, g, range(1, k + 1))
    if any(not field.is_zero(r) for r in residuals.values()):
        raise ArithmeticError(f"nonzero residual after exact solve at k={k}")
    return SectionSolution(k, f, True)


def solve_progressive(
    op: Operator, e: Enumeration, g: Mapping, ladder: Sequence[int], s: int = 2
) -> tuple[list[SectionSolution], StabilizationReport]:
    """Solve on every section size in ``ladder`` and track coordinates.

    Position ``j`` is stable when ``f_k(j)`` is identical over the last
    ``s`` ladder entries (all of which must contain ``j``).
    """
    ladder = tuple(ladder)
    if not ladder or any(a >= b for a, b in zip(ladder, ladder[1:])):
        raise ValueError("ladder must be a nonempty strictly ascending list")
    if not 1 <= s <= len(ladder):
        raise ValueError(f"stability window must be in 1..{len(ladder)}")
    solutions = [solve_section(op, e, g, k) for k in ladder]
    top = ladder[-1]
    traces = {j: [] for j in range(1, top + 1)}
    for sol in solutions:
        for j in range(1, sol.k + 1):
            traces[j].append((sol.k, sol.f[e.vertex(j)]))
    recent = solutions[-s:]
    stable = {}
    for j in traces:
        if any(sol.k < j for sol in recent):
            stable[j] = False
            continue
        vals = [sol.f[e.vertex(j)] for sol in recent]
        stable[j] = all(v == vals[0] for v in vals)
    return solutions, StabilizationReport(ladder, s, traces, stable)
