import json
from pathlib import Path

import pytest

from graph_sections.cli import main
from graph_sections.config import ConfigError, parse_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

ZLINE = """\
schema_version = 1
roots = ["0"]
k = 5

[graph]
family = "zline"

[operator]
op = "laplacian"
"""


def run(tmp_path, text, *args, name="cfg.toml"):
    cfg = tmp_path / name
    cfg.write_text(text)
    out = tmp_path / "report.json"
    code = main([args[0], "--config", str(cfg), "--out", str(out), *args[1:]])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


def test_enumerate_zline(tmp_path):
    code, rep = run(tmp_path, ZLINE, "enumerate")
    assert code == 0
    entries = rep["results"]["entries"]
    assert [e["vertex"] for e in entries] == ["0", "-1", "1", "-2", "2"]
    assert [e["layer"] for e in entries] == [0, 1, 1, 2, 2]
    assert rep["schema_version"] == 1 and rep["command"] == "enumerate"


def test_enumerate_triangle_exhausted(tmp_path):
    text = """\
roots = ["a"]
k = 5
[graph]
family = "explicit"
edges = [["a", "b"], ["b", "c"], ["c", "a"]]
[operator]
op = "laplacian"
"""
    code, rep = run(tmp_path, text, "enumerate")
    assert code == 0
    assert len(rep["results"]["entries"]) == 3
    assert rep["results"]["window_exhausted"] and rep["results"]["notes"]


def test_missing_roots_names_field(tmp_path, capsys):
    code, rep = run(tmp_path, ZLINE.replace('roots = ["0"]\n', ""), "enumerate")
    assert code == 2 and rep is None
    assert "`roots`" in capsys.readouterr().err


def test_bad_value_names_line_and_field():
    with pytest.raises(ConfigError) as exc:
        parse_config(ZLINE.replace("k = 5", 'k = "five"'))
    assert exc.value.field == "k" and exc.value.line == 3
    with pytest.raises(ConfigError) as exc:
        parse_config(ZLINE.replace('"zline"', '"moebius"'))
    assert exc.value.field == "graph.family" and exc.value.line == 6
    with pytest.raises(ConfigError) as exc:
        parse_config("roots = [\n")
    assert exc.value.line is not None


def test_negative_lambda_rejected():
    text = ZLINE.replace('op = "laplacian"', 'op = "laplacian_plus_lambda"\nlambda = { "0" = "-1" }')
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert "operator.lambda.0" == exc.value.field


def test_maxcheck_statuses(tmp_path):
    code, rep = run(tmp_path, ZLINE.replace("k = 5", "k = 10"), "maxcheck")
    assert code == 0
    assert [v["status"] for v in rep["results"]["vertices"]] == ["StructuralEquality"] * 10
    text = ZLINE.replace("k = 5", "k = 10").replace(
        'op = "laplacian"', 'op = "laplacian_plus_lambda"\nlambda_const = "1"'
    )
    code, rep = run(tmp_path, text, "maxcheck")
    assert [v["status"] for v in rep["results"]["vertices"]] == ["StructuralStrict"] * 10


def test_maxcheck_falsifies_tree_adjacency(tmp_path):
    text = (CONFIGS / "tree_adjacency.toml").read_text()
    code, rep = run(tmp_path, text.replace("falsify = [1000, 42]\n", ""), "maxcheck",
                    "--falsify", "1000", "42")
    assert code == 0
    (entry,) = rep["results"]["vertices"]
    assert entry["status"] == "Falsified"
    witness = {k: v for k, v in entry["witness"].items()}
    assert witness["()"] == "1"
    from fractions import Fraction
    children = [Fraction(witness.get(f"({i})", "0")) for i in range(3)]
    assert sum(children) == 0 and max(abs(c) for c in children) <= 1


def test_certify_zline_25(tmp_path):
    code, rep = run(tmp_path, ZLINE, "certify", "--k", "25")
    assert code == 0
    sections = rep["results"]["sections"]
    assert len(sections) == 25
    for s in sections:
        assert s["injective"] and s["rows_independent"] and s["propagation"]["certified"]
        assert s["agree"]
    assert rep["summary"][0].startswith("surjectivity evidence: sections 1..25 injective")


def test_certify_triangle_demo(tmp_path):
    code, rep = run(tmp_path, (CONFIGS / "triangle_ray.toml").read_text(), "certify")
    assert code == 3
    last = rep["results"]["sections"][-1]
    assert last["k"] == 3 and not last["injective"] and last["determinant"] == "0"
    assert last["kernel"] == [["1", "1", "1"]]


def test_certify_tree_adjacency_premise_failed(tmp_path):
    code, rep = run(tmp_path, (CONFIGS / "tree_adjacency.toml").read_text(), "certify", "--k", "5")
    assert code == 3
    for s in rep["results"]["sections"]:
        assert s["propagation"]["error"] == "PremiseFailed"
        assert "determinant" in s


def test_solve_zline(tmp_path):
    code, rep = run(tmp_path, ZLINE + '\n', "solve", "--k", "3", "--rhs",
                    str(CONFIGS / "rhs_delta0.json"))
    assert code == 0
    res = rep["results"]
    assert res["solution"] == {"0": "2", "-1": "1", "1": "1"}
    assert res["determinant"] == "1/2" and res["audit"]["all_zero"]


def test_solve_empty_rhs(tmp_path):
    text = ZLINE.replace("k = 5", "k = 5\nrhs = {}")
    code, rep = run(tmp_path, text, "solve")
    assert code == 0
    assert set(rep["results"]["solution"].values()) == {"0"}


def test_solve_triangle_singular(tmp_path):
    code, rep = run(tmp_path, (CONFIGS / "triangle_ray.toml").read_text(), "solve")
    assert code == 3
    err = rep["results"]["error"]
    assert err["type"] == "SingularSection" and err["kernel"] == [["1", "1", "1"]]


def test_solve_ladder(tmp_path):
    text = ZLINE.replace("k = 5", 'rhs = { "0" = "1" }')
    code, rep = run(tmp_path, text, "solve", "--ladder", "3,5,7")
    assert code == 0
    ladder = rep["results"]["ladder"]
    assert [x["k"] for x in ladder] == [3, 5, 7]
    assert all(x["audit"]["all_zero"] for x in ladder)
    assert "stabilization" in rep["results"]


def test_reports_are_deterministic(tmp_path):
    text = ZLINE.replace("k = 5", 'k = 12\nrhs = { "0" = "1/3", "1" = "-2" }')
    cfg = tmp_path / "c.toml"
    cfg.write_text(text)
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert main(["solve", "--config", str(cfg), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_solution_round_trip(tmp_path):
    text = ZLINE.replace("k = 5", 'k = 9\nrhs = { "0" = "1/3", "-2" = "5/7" }')
    cfg = tmp_path / "c.toml"
    cfg.write_text(text)
    out = tmp_path / "sol.json"
    assert main(["solve", "--config", str(cfg), "--out", str(out)]) == 0
    audit = tmp_path / "audit.json"
    assert main(["solve", "--config", str(cfg), "--verify", str(out), "--out", str(audit)]) == 0
    rep = json.loads(audit.read_text())
    assert rep["results"]["audit"]["all_zero"]
    # tampering with the solution breaks the audit
    data = json.loads(out.read_text())
    data["results"]["solution"]["0"] = "7"
    out.write_text(json.dumps(data))
    assert main(["solve", "--config", str(cfg), "--verify", str(out), "--out", str(audit)]) == 3


def test_float_mode_unsupported_exit_code(tmp_path):
    code, rep = run(tmp_path, 'scalar = "float"\n' + ZLINE, "certify")
    assert code == 4


def test_gaussian_mode_certify(tmp_path):
    code, rep = run(tmp_path, 'scalar = "gaussian"\n' + ZLINE, "certify", "--k", "6")
    assert code == 0
    assert rep["results"]["sections"][2]["determinant"] == "1/2"


def test_custom_operator_config(tmp_path):
    text = ZLINE.replace(
        'op = "laplacian"',
        'op = "custom"\ndefault = "laplacian"\nrows = { "0" = { "0" = "2", "1" = "-1/2", "-1" = "-1/2" } }',
    )
    code, rep = run(tmp_path, text, "maxcheck")
    assert code == 0
    statuses = [v["status"] for v in rep["results"]["vertices"]]
    assert statuses[0] == "StructuralStrict" and statuses[1:] == ["StructuralEquality"] * 4


def test_custom_support_outside_ball(tmp_path):
    text = ZLINE.replace('op = "laplacian"', 'op = "custom"\nrows = { "0" = { "7" = "1" } }')
    code, rep = run(tmp_path, text, "maxcheck")
    assert code == 2 and rep is None


def test_dump_matrix(tmp_path):
    code, rep = run(tmp_path, ZLINE, "certify", "--k", "3", "--dump-matrix")
    assert rep["results"]["matrices"]["3"][1] == '(1, 2, "-1/2")'


@pytest.mark.parametrize("name", sorted(p.name for p in CONFIGS.glob("*.toml")))
def test_shipped_configs_parse(name):
    parse_config((CONFIGS / name).read_text())
