import random
import warnings
from fractions import Fraction

import pytest

from graph_sections import (
    DirectedRay,
    DisjointUnion,
    ExplicitFinite,
    SingularSection,
    VertexFunction,
    WindowExhausted,
    ZLine,
    build_section,
    enumerate_vertices,
    laplacian,
    solve_progressive,
    solve_section,
    verify,
)
from oracles import naive_solve

F = Fraction


@pytest.fixture
def zline():
    g = ZLine()
    return laplacian(g), enumerate_vertices(g, [0], 9)


def triangle_demo():
    tri = ExplicitFinite([("a", "b"), ("b", "c"), ("c", "a")])
    g = DisjointUnion([("tri", tri), ("ray", DirectedRay())])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WindowExhausted)
        e = enumerate_vertices(g, [("tri", "a")], 3)
    return laplacian(g), e


def test_solve_section_example(zline):
    op, e = zline
    g = VertexFunction({0: 1})
    m = build_section(op, e, 3)
    assert naive_solve(m.rows(), [1, 0, 0]) == [2, 1, 1]
    sol = solve_section(op, e, g, 3)
    assert [sol.f[v] for v in (0, -1, 1)] == [2, 1, 1]
    assert sol.residual_checked and sol.f.support() <= {0, -1, 1}


def test_zero_rhs_gives_zero(zline):
    op, e = zline
    assert len(solve_section(op, e, VertexFunction({}), 7).f) == 0


def test_singular_section_reports_kernel():
    op, e = triangle_demo()
    with pytest.raises(SingularSection) as exc:
        solve_section(op, e, {("tri", "a"): 1}, 3)
    assert exc.value.k == 3
    (vec,) = exc.value.kernel
    assert len(set(vec)) == 1 and vec[0] != 0


def test_solve_progressive(zline):
    op, e = zline
    g = VertexFunction({0: 1})
    sols, report = solve_progressive(op, e, g, (3, 5, 7), s=2)
    assert [s.k for s in sols] == [3, 5, 7]
    for sol in sols:
        res = verify(op, e, sol.f, g, range(1, sol.k + 1))
        assert all(r == 0 for r in res.values())
        assert sol.f == solve_section(op, e, g, sol.k).f
    assert len(report.traces[1]) == 3 and len(report.traces[4]) == 2
    assert len(report.traces[6]) == 1
    assert sum(len(t) for t in report.traces.values()) == 3 + 5 + 7
    _, trivial = solve_progressive(op, e, g, (3, 5, 7), s=1)
    assert all(trivial.stable.values())


def test_progressive_names_singular_k():
    op, e = triangle_demo()
    with pytest.raises(SingularSection) as exc:
        solve_progressive(op, e, {("tri", "a"): 1}, (1, 2, 3))
    assert exc.value.k == 3


def test_verify_examples(zline):
    op, e = zline
    g = VertexFunction({0: 1})
    sol = solve_section(op, e, g, 3)
    assert all(r == 0 for r in verify(op, e, sol.f, g, [1, 2, 3]).values())
    assert verify(op, e, VertexFunction({}), g, [1]) == {1: -1}
    outside = verify(op, e, sol.f, g, [4, 5])
    assert any(r != 0 for r in outside.values())


def test_solution_map_is_linear(family):
    _, graph, root = family
    op = laplacian(graph)
    e = enumerate_vertices(graph, [root], 20)
    rng = random.Random(31)
    for _ in range(5):
        g1 = VertexFunction({v: F(rng.randint(-9, 9), rng.randint(1, 9)) for v in e.order[:6]})
        g2 = VertexFunction({v: F(rng.randint(-9, 9), rng.randint(1, 9)) for v in e.order[:6]})
        a, b = F(rng.randint(-4, 4), rng.randint(1, 4)), F(rng.randint(-4, 4), rng.randint(1, 4))
        lhs = solve_section(op, e, a * g1 + b * g2, 20).f
        rhs = a * solve_section(op, e, g1, 20).f + b * solve_section(op, e, g2, 20).f
        assert lhs == rhs


def test_two_solve_paths_agree(family):
    _, graph, root = family
    op = laplacian(graph)
    e = enumerate_vertices(graph, [root], 30)
    rng = random.Random(8)
    m = build_section(op, e, 30)
    for _ in range(5):
        rhs = [F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(10)] + [F(0)] * 20
        g = dict(zip(e.order, rhs))
        sol = solve_section(op, e, g, 30)
        assert [sol.f[v] for v in e.order] == naive_solve(m.rows(), rhs)
