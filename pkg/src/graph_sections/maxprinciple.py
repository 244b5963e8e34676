"""Pointwise maximum principle: structural certificates, a randomized
falsifier, and the propagation argument for section injectivity.

Structural criterion
--------------------
Write the row at ``v`` as ``a f(v) + sum_w b_w f(w)``.  Suppose
``A f(v) = 0`` and ``|f(v)| = M`` is maximal on the ball.  Then

    |a| M = |sum_w b_w f(w)| <= sum_w |b_w| |f(w)| <= M sum_w |b_w|.

* If ``|a| > sum |b_w|`` the chain forces ``M = 0``, so ``|f|`` is
  constant (zero) on the ball: *strict* dominance.
* If ``|a| = sum |b_w|`` and ``a != 0``, both inequalities are equalities,
  so ``|f(w)| = M`` wherever ``b_w != 0``.  When every vertex of the
  punctured ball carries a nonzero coefficient that is the whole ball:
  *equality* dominance.

Anything else is reported as ``UNKNOWN``; the falsifier may then search for
an explicit counterexample.

Propagation
-----------
Given certificates at every position of a k-window, let ``f`` be in the
kernel of the k-section and let position ``j0`` attain ``M = max |f|``.
The principle at ``j0`` spreads ``|f| = M`` over its ball.  Repeating from
every ball position inside the window, either the spread reaches a vertex
outside the window (where ``f`` vanishes, so ``M = 0``) or a strictly
dominant position (which forces ``M = 0`` directly).  So the section is
injective as soon as every position can reach such a terminal in the
digraph ``j -> l`` for ``l`` in the ball of ``v_j``.
"""

from __future__ import annotations

import enum
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .errors import EnumerationTooShort, NoOffDiagonal, PremiseFailed
from .graphs import Enumeration, ball
from .operators import Operator, VertexFunction, apply, row_support_indices
from .scalars import Field

__all__ = [
    "Status",
    "MaxPrincipleCertificate",
    "check_structural",
    "falsify",
    "check_witness",
    "certify_vertex",
    "PropagationStep",
    "PropagationCertificate",
    "propagation_certificate",
]


class Status(str, enum.Enum):
    STRUCTURAL_STRICT = "StructuralStrict"
    STRUCTURAL_EQUALITY = "StructuralEquality"
    FALSIFIED = "Falsified"
    UNKNOWN = "Unknown"

    @property
    def structural(self) -> bool:
        return self in (Status.STRUCTURAL_STRICT, Status.STRUCTURAL_EQUALITY)


@dataclass(frozen=True)
class MaxPrincipleCertificate:
    vertex: object
    status: Status
    radius_used: int
    witness: VertexFunction | None = None


def _exact_sqrt(q: Fraction) -> Fraction | None:
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _sqrt_bounds(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    # sqrt(n/d) = sqrt(n*d)/d
    n, d = q.numerator, q.denominator
    scale = 1 << bits
    lo = isqrt(n * d * scale * scale)
    return Fraction(lo, d * scale), Fraction(lo + 1, d * scale)


def _compare_dominance(field: Field, diag, off: list) -> int | None:
    """Sign of ``|diag| - sum |off|``; ``None`` if it cannot be decided."""
    if field.name == "rational":
        s = sum((abs(x) for x in off), Fraction(0))
        d = abs(diag)
        return (d > s) - (d < s)
    norms = [field.magnitude(x) for x in off]
    dn = field.magnitude(diag)
    roots = [_exact_sqrt(n) for n in norms]
    droot = _exact_sqrt(dn)
    if droot is not None and all(r is not None for r in roots):
        s = sum(roots, Fraction(0))
        return (droot > s) - (droot < s)
    # irrational moduli: interval bounds decide strict inequalities only
    for bits in (64, 256, 1024):
        d_lo, d_hi = _sqrt_bounds(dn, bits)
        s_lo = s_hi = Fraction(0)
        for n in norms:
            lo, hi = _sqrt_bounds(n, bits)
            s_lo += lo
            s_hi += hi
        if d_lo > s_hi:
            return 1
        if d_hi < s_lo:
            return -1
    return None


def check_structural(op: Operator, v, g=None) -> MaxPrincipleCertificate:
    """Sufficient dominance test; never returns ``FALSIFIED``."""
    field = op.field
    field.require_exact("structural maximum-principle certification")
    g = op.graph if g is None else g
    row = op.row(v)
    radius = op.radius_used(v)
    diag = row.diagonal(field)
    off = row.off_diagonal()
    cmp = _compare_dominance(field, diag, list(off.values()))
    if cmp == 1:
        status = Status.STRUCTURAL_STRICT
    elif cmp == 0 and not field.is_zero(diag):
        punctured = ball(g, v, radius) - {v}
        full = all(w in off for w in punctured)
        status = Status.STRUCTURAL_EQUALITY if full else Status.UNKNOWN
    else:
        status = Status.UNKNOWN
    return MaxPrincipleCertificate(v, status, radius)


def check_witness(op: Operator, v, witness, radius: int) -> bool:
    """Exact re-check that ``witness`` violates the principle at ``v``."""
    field = op.field
    if not field.is_zero(apply(op, witness, v)):
        return False
    region = ball(op.graph, v, radius)
    top = field.magnitude(witness[v])
    if any(field.magnitude(witness[w]) > top for w in region):
        return False
    return any(field.magnitude(witness[w]) != top for w in region)


def _sample(rng: random.Random, field: Field, max_den: int = 4):
    def one():
        q = rng.randint(1, max_den)
        return Fraction(rng.randint(-q, q), q)

    if field.name == "gaussian":
        return field.coerce(one()) + field.coerce(one()) * field.parse("i")
    return field.coerce(one())


def falsify(op: Operator, v, trials: int, seed: int, g=None) -> VertexFunction | None:
    """Seeded search for ``f`` with ``A f(v) = 0``, ``|f(v)|`` maximal on the
    ball, and ``|f|`` not constant there.

    Trial ``t`` fixes ``f(v) = 1`` (any witness rescales to this), draws the
    other ball values from a small rational lattice in ``[-1, 1]``, and
    solves ``A f(v) = 0`` for one off-diagonal support coordinate (cycled
    through by ``t``).  Randomness depends only on ``(seed, v, t)``.
    """
    field = op.field
    field.require_exact("falsify")
    if trials < 1:
        raise ValueError("trials must be positive")
    g = op.graph if g is None else g
    row = op.row(v)
    off = sorted(row.off_diagonal(), key=g.sort_key)
    if not off:
        raise NoOffDiagonal(f"row at {v!r} has no off-diagonal coefficient to solve for")
    radius = op.radius_used(v)
    region = sorted(ball(g, v, radius), key=g.sort_key)
    vkey = g.format_key(v)
    top = field.magnitude(field.one)
    for t in range(trials):
        rng = random.Random(f"{seed}:{vkey}:{t}")
        c = off[t % len(off)]
        values = {v: field.one}
        for w in region:
            if w != v and w != c:
                values[w] = _sample(rng, field)
        rest = field.zero
        for w, a in row.coeffs.items():
            if w != c:
                rest = rest + a * values.get(w, field.zero)
        values[c] = -rest / row.coeffs[c]
        if any(field.magnitude(values[w]) > top for w in region):
            continue
        if all(field.magnitude(values[w]) == top for w in region):
            continue
        witness = VertexFunction(values, field)
        if check_witness(op, v, witness, radius):
            return witness
    return None


def certify_vertex(
    op: Operator, v, falsify_trials: int | None = None, seed: int = 0
) -> MaxPrincipleCertificate:
    """Structural check, falling back to the falsifier for ``UNKNOWN``."""
    cert = check_structural(op, v)
    if cert.status is not Status.UNKNOWN or not falsify_trials:
        return cert
    try:
        witness = falsify(op, v, falsify_trials, seed)
    except NoOffDiagonal:
        return cert
    if witness is None:
        return cert
    return MaxPrincipleCertificate(v, Status.FALSIFIED, cert.radius_used, witness)


@dataclass(frozen=True)
class PropagationStep:
    """How one position reaches a terminal.

    ``path`` starts at the position and ends at the terminal position;
    ``reason`` is ``"escape"`` (the terminal's ball leaves the window, via
    ``escape_vertex``) or ``"strict"``.  Unreached positions have
    ``reason=None`` and ``path=(position,)``.
    """

    path: tuple[int, ...]
    reason: str | None
    escape_vertex: object = None


@dataclass(frozen=True)
class PropagationCertificate:
    k: int
    certified: bool
    trace: dict = field(repr=False)
    window_only: bool = False

    def __bool__(self):
        return self.certified

    def unreached(self) -> list[int]:
        return sorted(j for j, step in self.trace.items() if step.reason is None)


def propagation_certificate(op: Operator, e: Enumeration, k: int) -> PropagationCertificate:
    """Injectivity certificate for the k-section from the principle.

    Raises :class:`PremiseFailed` at the first position lacking a
    structural certificate.
    """
    op.field.require_exact("propagation_certificate")
    if len(e) < k:
        raise EnumerationTooShort(f"enumeration has {len(e)} vertices, need {k}")
    succ: dict[int, frozenset] = {}
    terminal: dict[int, tuple[str, object]] = {}
    for j in range(1, k + 1):
        v = e.vertex(j)
        cert = check_structural(op, v)
        if not cert.status.structural:
            raise PremiseFailed(v, j, cert.status.value)
        support = row_support_indices(op, e, j, k, radius=cert.radius_used)
        succ[j] = support.positions
        if support.leaves_window:
            terminal[j] = ("escape", support.outside[0])
        elif cert.status is Status.STRUCTURAL_STRICT:
            terminal[j] = ("strict", None)

    pred: dict[int, list[int]] = {j: [] for j in succ}
    for j, targets in succ.items():
        for l in sorted(targets):
            if l != j:
                pred[l].append(j)

    # reverse BFS: next_hop[j] is one step along a shortest path to a terminal
    next_hop: dict[int, int | None] = {j: None for j in sorted(terminal)}
    queue = deque(sorted(terminal))
    while queue:
        l = queue.popleft()
        for j in pred[l]:
            if j not in next_hop:
                next_hop[j] = l
                queue.append(j)

    trace = {}
    for j in range(1, k + 1):
        if j not in next_hop:
            trace[j] = PropagationStep((j,), None)
            continue
        path = [j]
        while next_hop[path[-1]] is not None:
            path.append(next_hop[path[-1]])
        reason, escape = terminal[path[-1]]
        trace[j] = PropagationStep(tuple(path), reason, escape)
    certified = len(next_hop) == k
    return PropagationCertificate(k, certified, trace, window_only=op.graph.is_finite())
