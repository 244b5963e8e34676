"""``graph-sections`` command line front-end.

Every command reads one TOML config (see :mod:`graph_sections.config`) and
writes a JSON report::

    {
      "schema_version": 1,
      "command": "...",
      "config": {...},        # echo of the parsed config file
      "results": {...},       # command specific, rationals as "p/q"
      "summary": ["..."],     # human-readable lines
      "metadata": {...}       # tool name and version; no timestamps
    }

Exit codes: 0 success, 2 config error, 3 certificate or solve failure,
4 unsupported scalar mode.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import __version__
from .config import SCHEMA_VERSION, ConfigError, RunConfig, load_config, load_table, parse_table
from .errors import (
    FloatModeUnsupported,
    GraphSectionsError,
    PremiseFailed,
    SingularSection,
    WindowExhausted,
)
from .graphs import enumerate_vertices, window_connected
from .maxprinciple import certify_vertex, propagation_certificate
from .sections import (
    build_section,
    determinant,
    format_triplets,
    is_injective,
    kernel_basis,
    rows_independent,
)
from .solver import solve_progressive, solve_section, verify

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FAILURE = 3
EXIT_MODE = 4


class CommandFailed(Exception):
    """A command produced a report but its verdict is a failure."""

    def __init__(self, report: dict):
        self.report = report


def _window(cfg: RunConfig, k: int):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", WindowExhausted)
        e = enumerate_vertices(cfg.graph, cfg.roots, k)
    notes = [str(w.message) for w in caught if issubclass(w.category, WindowExhausted)]
    return e, notes


def _fmt_key(cfg: RunConfig, v) -> str:
    return cfg.graph.format_key(v)


def _fmt(cfg: RunConfig, x) -> str:
    return cfg.field.format(x)


def _table(cfg: RunConfig, mapping) -> dict:
    return {_fmt_key(cfg, v): _fmt(cfg, x) for v, x in mapping.items()}


def _require_k(cfg: RunConfig) -> int:
    if cfg.k is None:
        raise ConfigError("missing required field (or pass --k)", "k")
    return cfg.k


def cmd_enumerate(cfg: RunConfig, args) -> dict:
    k = _require_k(cfg)
    e, notes = _window(cfg, k)
    entries = [
        {"position": i, "vertex": _fmt_key(cfg, v), "layer": layer}
        for i, (v, layer) in enumerate(zip(e.order, e.layers), 1)
    ]
    results = {
        "entries": entries,
        "window_exhausted": e.exhausted,
        "window_connected": window_connected(cfg.graph, e),
        "notes": notes,
    }
    summary = [f"enumerated {len(e)} of {k} requested vertices"] + notes
    return {"results": results, "summary": summary}


def cmd_maxcheck(cfg: RunConfig, args) -> dict:
    cfg.field.require_exact("maxcheck")
    k = _require_k(cfg)
    e, notes = _window(cfg, k)
    trials, fseed = cfg.falsify if cfg.falsify else (None, cfg.seed)
    if fseed is None:
        fseed = cfg.seed
    vertices = []
    counts: dict[str, int] = {}
    for j, v in enumerate(e.order, 1):
        cert = certify_vertex(cfg.operator, v, trials, fseed)
        entry = {
            "position": j,
            "vertex": _fmt_key(cfg, v),
            "status": cert.status.value,
            "radius_used": cert.radius_used,
        }
        if cert.witness is not None:
            entry["witness"] = _table(cfg, cert.witness)
        vertices.append(entry)
        counts[cert.status.value] = counts.get(cert.status.value, 0) + 1
    summary = [f"{n} x {status}" for status, n in sorted(counts.items())] + notes
    if cfg.graph.is_finite():
        summary.append("finite graph: certificates are window-only")
    return {"results": {"vertices": vertices, "notes": notes}, "summary": summary}


def _kernel_json(cfg: RunConfig, kernel) -> list:
    return [[_fmt(cfg, x) for x in vec] for vec in kernel]


def cmd_certify(cfg: RunConfig, args) -> dict:
    cfg.field.require_exact("certify")
    top = _require_k(cfg)
    e, notes = _window(cfg, top)
    op = cfg.operator
    per_k = []
    failed = False
    for k in range(1, min(top, len(e)) + 1):
        m = build_section(op, e, k)
        injective = is_injective(m)
        entry = {
            "k": k,
            "injective": injective,
            "determinant": _fmt(cfg, determinant(m)),
            "rows_independent": rows_independent(op, e, k),
        }
        if not injective:
            entry["kernel"] = _kernel_json(cfg, kernel_basis(m))
        try:
            cert = propagation_certificate(op, e, k)
            entry["propagation"] = {
                "certified": cert.certified,
                "unreached": cert.unreached(),
                "trace": {
                    str(j): {
                        "path": list(step.path),
                        "reason": step.reason,
                        **(
                            {"escape_vertex": _fmt_key(cfg, step.escape_vertex)}
                            if step.escape_vertex is not None
                            else {}
                        ),
                    }
                    for j, step in cert.trace.items()
                },
            }
            checks = [injective, entry["rows_independent"], cert.certified]
        except PremiseFailed as exc:
            entry["propagation"] = {"error": "PremiseFailed", "message": str(exc)}
            checks = [injective, entry["rows_independent"]]
        entry["agree"] = len(set(checks)) == 1
        failed = failed or not all(checks) or "error" in entry["propagation"]
        per_k.append(entry)

    checked = len(per_k)
    if all(x["injective"] for x in per_k) and checked == top:
        overall = (
            f"surjectivity evidence: sections 1..{top} injective; certificate is for the "
            "window only; the conclusion for the whole graph requires the hypotheses "
            "for all v"
        )
    else:
        bad = [x["k"] for x in per_k if not x["injective"]]
        overall = (
            f"no surjectivity evidence: singular sections at k={bad}"
            if bad
            else f"only {checked} of {top} sections could be built"
        )
    premise = [x for x in per_k if "error" in x["propagation"]]
    summary = [overall]
    if premise:
        summary.append(f"propagation premise failed: {premise[0]['propagation']['message']}")
    if cfg.graph.is_finite():
        summary.append("finite graph: certificates are window-only")
    summary += notes
    report = {"results": {"sections": per_k, "notes": notes}, "summary": summary}
    if failed or checked < top:
        raise CommandFailed(report)
    return report


def _rhs(cfg: RunConfig, args) -> dict:
    if args.rhs:
        table = load_table(args.rhs, key="rhs")
        return parse_table(table, cfg.graph, cfg.field, name="rhs")
    if cfg.rhs is None:
        raise ConfigError("missing right-hand side (config `rhs` or --rhs FILE)", "rhs")
    return cfg.rhs


def _audit(cfg: RunConfig, e, f, g, k) -> dict:
    residuals = verify(cfg.operator, e, f, g, range(1, k + 1))
    return {
        "positions": f"1..{k}",
        "all_zero": all(cfg.field.is_zero(r) for r in residuals.values()),
        "residuals": {_fmt_key(cfg, e.vertex(j)): _fmt(cfg, r) for j, r in residuals.items()},
    }


def _solution_json(cfg: RunConfig, e, sol) -> dict:
    window = e.order[: sol.k]
    return {_fmt_key(cfg, v): _fmt(cfg, sol.f[v]) for v in window}


def cmd_solve(cfg: RunConfig, args) -> dict:
    cfg.field.require_exact("solve")
    if args.verify:
        return _verify_report(cfg, args)
    g = _rhs(cfg, args)
    ladder = cfg.ladder
    top = ladder[-1] if ladder else _require_k(cfg)
    e, notes = _window(cfg, top)
    op = cfg.operator
    try:
        if ladder:
            sols, report = solve_progressive(op, e, g, ladder, min(cfg.stability, len(ladder)))
        else:
            sols, report = [solve_section(op, e, g, top)], None
    except SingularSection as exc:
        results = {
            "error": {
                "type": "SingularSection",
                "k": exc.k,
                "kernel": _kernel_json(cfg, exc.kernel),
                "kernel_vertices": [_fmt_key(cfg, v) for v in e.order[: exc.k]],
            },
            "notes": notes,
        }
        raise CommandFailed(
            {"results": results, "summary": [f"section k={exc.k} is singular"] + notes}
        ) from None

    entries = []
    for sol in sols:
        entries.append(
            {
                "k": sol.k,
                "determinant": _fmt(cfg, determinant(build_section(op, e, sol.k))),
                "solution": _solution_json(cfg, e, sol),
                "audit": _audit(cfg, e, sol.f, g, sol.k),
            }
        )
    last = entries[-1]
    results = {"rhs": _table(cfg, g), **last, "notes": notes}
    if ladder:
        results["ladder"] = entries
        results["stabilization"] = {
            "window": report.window,
            "traces": {
                _fmt_key(cfg, e.vertex(j)): [[k, _fmt(cfg, x)] for k, x in trace]
                for j, trace in report.traces.items()
            },
            "stable": {_fmt_key(cfg, e.vertex(j)): ok for j, ok in report.stable.items()},
            "note": "coordinate traces are reported as-is; convergence is not asserted",
        }
    verdict = "all-zero" if all(x["audit"]["all_zero"] for x in entries) else "NONZERO"
    summary = [f"solved k={x['k']}: residual audit {verdict}" for x in entries] + notes
    return {"results": results, "summary": summary}


def _verify_report(cfg: RunConfig, args) -> dict:
    data = load_table(args.verify)
    results = data.get("results", data) if isinstance(data, dict) else None
    if not isinstance(results, dict) or "solution" not in results:
        raise ConfigError(f"{args.verify} has no `solution` table", "solution")
    if args.rhs or cfg.rhs is not None:
        g = _rhs(cfg, args)
    else:
        g = parse_table(results.get("rhs", {}), cfg.graph, cfg.field, name="rhs")
    f = parse_table(results["solution"], cfg.graph, cfg.field, name="solution")
    k = results.get("k") or _require_k(cfg)
    e, notes = _window(cfg, k)
    audit = _audit(cfg, e, f, g, min(k, len(e)))
    summary = [f"verify k={k}: residual audit {'all-zero' if audit['all_zero'] else 'NONZERO'}"]
    report = {"results": {"k": k, "audit": audit, "notes": notes}, "summary": summary}
    if not audit["all_zero"]:
        raise CommandFailed(report)
    return report


COMMANDS = {
    "enumerate": cmd_enumerate,
    "maxcheck": cmd_maxcheck,
    "certify": cmd_certify,
    "solve": cmd_solve,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graph-sections",
        description="Exact finite sections of finite-hopping-range operators on graphs.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="TOML run configuration")
    size = parser.add_mutually_exclusive_group()
    size.add_argument("--k", type=int, help="window / section size (overrides config)")
    size.add_argument("--ladder", help="comma separated ascending section sizes (solve)")
    parser.add_argument("--seed", type=int, help="seed (overrides config)")
    parser.add_argument(
        "--falsify", nargs=2, type=int, metavar=("TRIALS", "SEED"),
        help="run the falsifier on vertices without a structural certificate",
    )
    parser.add_argument("--eps", type=float, help="float-mode tolerance (overrides config)")
    parser.add_argument("--rhs", help="right-hand side table file (solve)")
    parser.add_argument("--verify", metavar="REPORT", help="audit a saved solve report (solve)")
    parser.add_argument("--dump-matrix", action="store_true",
                        help="include sparse (i, j, \"p/q\") triplets of each section (certify)")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    return parser


def _apply_overrides(cfg: RunConfig, args) -> None:
    if args.k is not None:
        if args.k < 1:
            raise ConfigError("--k must be positive", "k")
        cfg.k = args.k
        cfg.ladder = None
    if args.ladder:
        try:
            ladder = tuple(int(x) for x in args.ladder.split(","))
        except ValueError:
            raise ConfigError(f"bad --ladder {args.ladder!r}", "ladder") from None
        if not ladder or ladder[0] < 1 or any(a >= b for a, b in zip(ladder, ladder[1:])):
            raise ConfigError("--ladder must be strictly ascending positive integers", "ladder")
        cfg.ladder = ladder
    if args.seed is not None:
        cfg.seed = args.seed
    if args.falsify:
        trials, seed = args.falsify
        if trials < 1:
            raise ConfigError("--falsify trials must be positive", "falsify")
        cfg.falsify = (trials, seed)
    if args.eps is not None:
        if not cfg.field.exact:
            cfg.field.eps = args.eps


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, ensure_ascii=False, default=str) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
        for line in report.get("summary", []):
            print(line)
    else:
        sys.stdout.write(text)


def _envelope(command: str, raw: dict, body: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": raw,
        "results": body.get("results", {}),
        "summary": body.get("summary", []),
        "metadata": {"tool": "graph-sections", "version": __version__},
    }


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        _apply_overrides(cfg, args)
    except ConfigError as exc:
        print(f"{args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    code = EXIT_OK
    try:
        body = COMMANDS[args.command](cfg, args)
        if args.dump_matrix and args.command == "certify":
            e, _ = _window(cfg, cfg.k)
            body["results"]["matrices"] = {
                str(k): format_triplets(build_section(cfg.operator, e, k)).splitlines()
                for k in range(1, min(cfg.k, len(e)) + 1)
            }
    except CommandFailed as exc:
        body = exc.report
        code = EXIT_FAILURE
    except ConfigError as exc:
        print(f"{args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FloatModeUnsupported as exc:
        print(f"unsupported scalar mode: {exc}", file=sys.stderr)
        return EXIT_MODE
    except GraphSectionsError as exc:
        body = {
            "results": {"error": {"type": type(exc).__name__, "message": str(exc)}},
            "summary": [f"{type(exc).__name__}: {exc}"],
        }
        code = EXIT_FAILURE
    _emit(_envelope(args.command, cfg.raw, body), args.out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
