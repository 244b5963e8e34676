"""Run configuration files.

A run is described by one TOML file::

    schema_version = 1
    scalar = "rational"          # "rational" | "gaussian" | "float"
    eps = 1e-9                   # float mode only
    roots = ["0"]
    k = 10                       # or: ladder = [3, 5, 7]
    seed = 42
    stability = 2                # solve --ladder only
    falsify = [1000, 42]         # maxcheck only: trials, seed (or just trials; seed from `seed`)
    rhs = { "0" = "1" }          # solve only; or pass --rhs FILE

    [graph]
    family = "zline"             # zline | zsquare | tree | ray | explicit | union
    degree = 3                   # tree
    edges = [["a", "b"], ["b", "c"]]   # explicit
    vertices = ["d"]             # explicit, isolated vertices
    undirected = true            # explicit
    union = [ { name = "tri", family = "explicit", edges = [...] },
              { name = "ray", family = "ray" } ]            # union

    [operator]
    op = "laplacian"             # laplacian | laplacian_plus_lambda | adjacency | custom
    lambda = { "0" = "1/2" }     # laplacian_plus_lambda, per vertex
    lambda_const = "1"           # laplacian_plus_lambda, constant
    rows = { "0" = { "0" = "3", "1" = "-1" } }   # custom
    default = "laplacian"        # custom fallback
    radius = 1                   # custom
    principle_radius = 1         # optional

Vertex keys are written in their text form (see :mod:`graph_sections.graphs`)
and scalars as ``"p/q"`` strings.  Errors carry the offending field and,
when it can be located, its line number.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import tomli

from .errors import GraphSectionsError, InvalidKey, SupportOutsideBall
from .graphs import (
    DirectedRay,
    DisjointUnion,
    ExplicitFinite,
    Graph,
    RegularTree,
    ZLine,
    ZSquare,
)
from .operators import (
    Operator,
    adjacency,
    custom_operator,
    laplacian,
    laplacian_plus_lambda,
)
from .scalars import Field, field_from_name

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "ConfigError",
    "RunConfig",
    "load_config",
    "parse_config",
    "build_graph",
    "build_operator",
    "load_table",
    "parse_table",
]


class ConfigError(GraphSectionsError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field `{field}`")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


def _locate(text: str, dotted: str) -> int | None:
    name = dotted.split(".")[-1]
    name = re.sub(r"\[\d+\]$", "", name)
    pat = re.compile(rf'^\s*(?:\[\s*{re.escape(name)}\s*\]|"?{re.escape(name)}"?\s*=)')
    for i, line in enumerate(text.splitlines(), 1):
        if pat.search(line):
            return i
    return None


@dataclass
class RunConfig:
    graph: Graph
    operator: Operator
    field: Field
    roots: list
    k: int | None = None
    ladder: tuple[int, ...] | None = None
    seed: int = 0
    stability: int = 2
    falsify: tuple[int, int | None] | None = None
    rhs: dict | None = None
    raw: dict = field(default_factory=dict)


class _Ctx:
    def __init__(self, text: str):
        self.text = text

    def error(self, message: str, dotted: str) -> ConfigError:
        return ConfigError(message, dotted, _locate(self.text, dotted))

    def require(self, table: dict, key: str, prefix: str = ""):
        dotted = f"{prefix}{key}"
        if key not in table:
            line = _locate(self.text, prefix.rstrip(".")) if prefix else None
            raise ConfigError("missing required field", dotted, line)
        return table[key]


def _positive_int(ctx: _Ctx, value, dotted: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ctx.error(f"expected a positive integer, got {value!r}", dotted)
    return value


def build_graph(spec: dict, ctx: _Ctx | None = None, prefix: str = "graph") -> Graph:
    ctx = ctx or _Ctx("")
    if not isinstance(spec, dict):
        raise ctx.error("expected a table", prefix)
    family = spec.get("family")
    if family is None and "union" in spec:
        family = "union"
    if family is None:
        raise ConfigError("missing required field", prefix + ".family", _locate(ctx.text, prefix))
    if family == "zline":
        return ZLine()
    if family == "zsquare":
        return ZSquare()
    if family == "tree":
        d = _positive_int(ctx, ctx.require(spec, "degree", prefix + "."), prefix + ".degree")
        if d < 2:
            raise ctx.error("tree degree must be >= 2", prefix + ".degree")
        return RegularTree(d)
    if family == "ray":
        return DirectedRay()
    if family == "explicit":
        edges = ctx.require(spec, "edges", prefix + ".")
        if not isinstance(edges, list) or not all(
            isinstance(e, list) and len(e) == 2 for e in edges
        ):
            raise ctx.error("edges must be a list of [from, to] pairs", prefix + ".edges")
        undirected = spec.get("undirected", True)
        if not isinstance(undirected, bool):
            raise ctx.error("expected true or false", prefix + ".undirected")
        return ExplicitFinite(edges, undirected=undirected, vertices=spec.get("vertices", []))
    if family == "union":
        parts = ctx.require(spec, "union", prefix + ".")
        if not isinstance(parts, list) or not parts:
            raise ctx.error("union must be a nonempty list of graph tables", prefix + ".union")
        built = []
        for i, sub in enumerate(parts):
            g = build_graph(sub, ctx, f"{prefix}.union[{i}]")
            built.append((str(sub.get("name", f"g{i}")), g))
        try:
            return DisjointUnion(built)
        except ValueError as exc:
            raise ctx.error(str(exc), prefix + ".union") from None
    raise ctx.error(f"unknown graph family {family!r}", prefix + ".family")


def _parse_key(ctx: _Ctx, g: Graph, text, dotted: str):
    try:
        return g.coerce_key(str(text))
    except InvalidKey:
        raise ctx.error(f"{text!r} is not a vertex of {g!r}", dotted) from None


def _parse_scalar(ctx: _Ctx, fld: Field, value, dotted: str):
    try:
        if isinstance(value, bool):
            raise ValueError
        if isinstance(value, (int, str)):
            return fld.parse(str(value))
        if isinstance(value, float) and not fld.exact:
            return value
    except (ValueError, ZeroDivisionError):
        pass
    raise ctx.error(f'expected a rational string "p/q", got {value!r}', dotted)


def build_operator(spec: dict, g: Graph, fld: Field, ctx: _Ctx | None = None) -> Operator:
    ctx = ctx or _Ctx("")
    if not isinstance(spec, dict):
        raise ctx.error("expected a table", "operator")
    op = ctx.require(spec, "op", "operator.")
    principle_radius = spec.get("principle_radius")
    if op == "laplacian":
        result = laplacian(g, fld)
    elif op == "adjacency":
        result = adjacency(g, fld)
    elif op == "laplacian_plus_lambda":
        if "lambda_const" in spec:
            lam = _parse_scalar(ctx, fld, spec["lambda_const"], "operator.lambda_const")
        elif "lambda" in spec:
            table = spec["lambda"]
            if not isinstance(table, dict):
                raise ctx.error("expected a table of vertex = \"p/q\"", "operator.lambda")
            lam = {
                _parse_key(ctx, g, k, f"operator.lambda.{k}"): _parse_scalar(
                    ctx, fld, v, f"operator.lambda.{k}"
                )
                for k, v in table.items()
            }
        else:
            raise ctx.error("needs `lambda` or `lambda_const`", "operator.op")
        values = lam.items() if isinstance(lam, dict) else [("lambda_const", lam)]
        for k, v in values:
            if not fld.is_real_nonnegative(v):
                raise ctx.error("lambda values must be nonnegative reals", f"operator.lambda.{k}")
        result = laplacian_plus_lambda(g, lam, fld)
    elif op == "custom":
        rows_spec = ctx.require(spec, "rows", "operator.")
        if not isinstance(rows_spec, dict):
            raise ctx.error("expected a table of rows", "operator.rows")
        rows = {}
        for vk, entries in rows_spec.items():
            dotted = f"operator.rows.{vk}"
            if not isinstance(entries, dict):
                raise ctx.error("expected a table of vertex = \"p/q\"", dotted)
            v = _parse_key(ctx, g, vk, dotted)
            rows[v] = {
                _parse_key(ctx, g, wk, f"{dotted}.{wk}"): _parse_scalar(ctx, fld, c, f"{dotted}.{wk}")
                for wk, c in entries.items()
            }
        default = None
        if "default" in spec:
            if spec["default"] == "custom":
                raise ctx.error("default must be a built-in operator", "operator.default")
            base = {k: v for k, v in spec.items() if k not in ("rows", "default", "radius")}
            default = build_operator({**base, "op": spec["default"]}, g, fld, ctx)
        radius = spec.get("radius", 1)
        if not isinstance(radius, int) or radius < 0:
            raise ctx.error("radius must be a nonnegative integer", "operator.radius")
        try:
            result = custom_operator(g, rows, default, radius, fld, principle_radius)
        except SupportOutsideBall as exc:
            raise ctx.error(str(exc), f"operator.rows.{g.format_key(exc.vertex)}") from None
    else:
        raise ctx.error(f"unknown operator {op!r}", "operator.op")
    if principle_radius is not None:
        result.principle_radius = _positive_int(ctx, principle_radius, "operator.principle_radius")
    return result


def parse_config(text: str) -> RunConfig:
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"TOML syntax error: {exc.msg}", None, exc.lineno) from None
    ctx = _Ctx(text)

    version = raw.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ctx.error(f"unsupported schema_version {version!r}", "schema_version")

    eps = raw.get("eps", 1e-9)
    if not isinstance(eps, (int, float)) or eps <= 0:
        raise ctx.error("eps must be a positive number", "eps")
    try:
        fld = field_from_name(raw.get("scalar", "rational"), eps)
    except ValueError as exc:
        raise ctx.error(str(exc), "scalar") from None

    g = build_graph(ctx.require(raw, "graph"), ctx)
    op = build_operator(ctx.require(raw, "operator"), g, fld, ctx)

    roots_raw = ctx.require(raw, "roots")
    if not isinstance(roots_raw, list) or not roots_raw:
        raise ctx.error("roots must be a nonempty list of vertex keys", "roots")
    roots = [_parse_key(ctx, g, r, "roots") for r in roots_raw]
    if len(set(roots)) != len(roots):
        raise ctx.error("roots must be duplicate-free", "roots")

    cfg = RunConfig(graph=g, operator=op, field=fld, roots=roots, raw=raw)
    if "k" in raw:
        cfg.k = _positive_int(ctx, raw["k"], "k")
    if "ladder" in raw:
        cfg.ladder = _parse_ladder(ctx, raw["ladder"])
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ctx.error("seed must be an integer", "seed")
    cfg.seed = seed
    if "stability" in raw:
        cfg.stability = _positive_int(ctx, raw["stability"], "stability")
    if "falsify" in raw:
        fz = raw["falsify"]
        if isinstance(fz, int) and not isinstance(fz, bool):
            cfg.falsify = (_positive_int(ctx, fz, "falsify"), None)
        elif isinstance(fz, list) and len(fz) == 2 and all(isinstance(x, int) for x in fz):
            cfg.falsify = (_positive_int(ctx, fz[0], "falsify"), fz[1])
        else:
            raise ctx.error("falsify must be TRIALS or [TRIALS, SEED]", "falsify")
    if "rhs" in raw:
        cfg.rhs = parse_table(raw["rhs"], g, fld, ctx, "rhs")
    return cfg


def _parse_ladder(ctx: _Ctx, value) -> tuple[int, ...]:
    if not isinstance(value, list) or not value:
        raise ctx.error("ladder must be a nonempty list of integers", "ladder")
    ladder = tuple(_positive_int(ctx, x, "ladder") for x in value)
    if any(a >= b for a, b in zip(ladder, ladder[1:])):
        raise ctx.error("ladder must be strictly ascending", "ladder")
    return ladder


def parse_table(table, g: Graph, fld: Field, ctx: _Ctx | None = None, name: str = "rhs") -> dict:
    """``{"<vertexkey>": "p/q"}`` -> ``{vertex: scalar}``."""
    ctx = ctx or _Ctx("")
    if not isinstance(table, dict):
        raise ctx.error('expected a table of "<vertexkey>" = "p/q"', name)
    return {
        _parse_key(ctx, g, k, f"{name}.{k}"): _parse_scalar(ctx, fld, v, f"{name}.{k}")
        for k, v in table.items()
    }


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


def load_table(path: str | Path, key: str | None = None) -> dict:
    """Read a JSON or TOML table file, optionally descending into ``key``."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text) if path.suffix == ".json" else tomli.loads(text)
    except (json.JSONDecodeError, tomli.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    if key is not None and isinstance(data, dict) and key in data:
        data = data[key]
    return data
