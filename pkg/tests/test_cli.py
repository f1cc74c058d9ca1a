import json

import pytest

from app.cli.middleware import exit_code_for
from app.cli.parser import parse_args
from app.core.config import settings
from app.core.errors import (
    BudgetExceededError,
    DivisibilityError,
    MalformedExpressionError,
)
from app.core.expr import hypercube_expr
from app.core.graph import gen_clique, gen_cycle, gen_kneser, gen_path
from app.models.schemas import expr_to_json
from main import main

from .conftest import graph_payload


def _run(capsys, *argv: str):
    code = main(list(argv))
    return code, capsys.readouterr().out.strip()


class TestCount:
    def test_bruteforce_edge_into_petersen(self, capsys, write_json):
        g = write_json("g.json", graph_payload(gen_clique(2)))
        h = write_json("h.json", graph_payload(gen_kneser(5, 2)))
        assert _run(capsys, "count", "-G", g, "-H", h, "--method", "bruteforce") == (0, "30")

    def test_kneser_shortcut(self, capsys, write_json):
        g = write_json("g.json", graph_payload(gen_clique(2)))
        assert _run(capsys, "count", "-G", g, "--kneser", "5", "2") == (0, "30")

    def test_bounded_degree_method(self, capsys, write_json):
        g = write_json("g.json", graph_payload(gen_cycle(4)))
        h = write_json("h.json", graph_payload(gen_cycle(4)))
        assert _run(capsys, "count", "-G", g, "-H", h, "--method", "bounded-degree") == (0, "32")

    def test_expression_target(self, capsys, write_json, tmp_path):
        expr_path = tmp_path / "hc2.json"
        expr_path.write_text(expr_to_json(hypercube_expr(2)), encoding="utf-8")
        triangle = write_json("k3.json", graph_payload(gen_clique(3)))
        edge = write_json("k2.json", graph_payload(gen_clique(2)))
        assert _run(capsys, "count", "-G", triangle, "--expr", str(expr_path)) == (0, "0")
        assert _run(capsys, "count", "-G", edge, "--expr", str(expr_path)) == (0, "8")

    def test_subdivided_target(self, capsys, write_json):
        g = write_json("g.json", graph_payload(gen_clique(2)))
        u = write_json("u.json", graph_payload(gen_clique(1)))
        assert _run(capsys, "count", "-G", g, "--subdivided", "2", u) == (0, "4")

    def test_output_file(self, capsys, write_json, tmp_path):
        g = write_json("g.json", graph_payload(gen_clique(2)))
        out = tmp_path / "count.txt"
        code, printed = _run(capsys, "count", "-G", g, "--kneser", "5", "2", "-o", str(out))
        assert code == 0 and printed == ""
        assert out.read_text(encoding="utf-8").strip() == "30"

    def test_missing_target_is_invalid(self, capsys, write_json):
        g = write_json("g.json", graph_payload(gen_clique(2)))
        assert _run(capsys, "count", "-G", g, "--method", "bruteforce")[0] == 2

    def test_budget_flag(self, capsys, write_json):
        g = write_json("g.json", graph_payload(gen_path(5)))
        h = write_json("h.json", graph_payload(gen_clique(10)))
        argv = ["count", "-G", g, "-H", h, "--method", "bruteforce", "--budget", "1000"]
        code, _ = _run(capsys, *argv)
        assert code == 3


class TestInvalidInput:
    def test_missing_file(self, capsys, tmp_path):
        missing = str(tmp_path / "nope.json")
        assert _run(capsys, "count", "-G", missing, "--kneser", "5", "2")[0] == 2

    def test_malformed_json(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        assert _run(capsys, "count", "-G", str(bad), "--kneser", "5", "2")[0] == 2

    def test_edge_out_of_range(self, capsys, write_json):
        g = write_json("g.json", {"n": 2, "edges": [[0, 5]]})
        assert _run(capsys, "count", "-G", g, "--kneser", "5", "2")[0] == 2

    def test_malformed_expression(self, capsys, write_json):
        expr = write_json("e.json", {"k": 1, "root": {"op": "vertex", "label": 4}})
        assert _run(capsys, "eval", expr)[0] == 2

    def test_subdivided_size_must_be_integer(self, capsys, write_json):
        g = write_json("g.json", graph_payload(gen_clique(2)))
        u = write_json("u.json", graph_payload(gen_clique(1)))
        assert _run(capsys, "count", "-G", g, "--subdivided", "x", u)[0] == 2

    def test_argparse_rejects_non_positive(self):
        with pytest.raises(SystemExit):
            parse_args(["synth", "-G", "g.json", "-k", "0"])


class TestSynthAndEval:
    def test_round_trip(self, capsys, write_json, tmp_path):
        g = write_json("k4.json", graph_payload(gen_clique(4)))
        out = tmp_path / "k4.expr.json"
        assert _run(capsys, "synth", "-G", g, "-k", "2", "-o", str(out))[0] == 0
        code, printed = _run(capsys, "eval", str(out))
        assert code == 0
        result = json.loads(printed)
        assert result["n"] == 4
        assert len(result["edges"]) == 6
        assert len(result["labels"]) == 4

    def test_no_expression_exits_one(self, capsys, write_json):
        settings.synth_beta_max_k = 0
        g = write_json("p4.json", graph_payload(gen_path(4)))
        assert _run(capsys, "synth", "-G", g, "-k", "1") == (1, "")

    def test_eval_classic(self, capsys, write_json):
        expr = write_json(
            "classic.json",
            {
                "k": 2,
                "kind": "classic",
                "root": {
                    "op": "add_edges",
                    "first": 1,
                    "second": 2,
                    "child": {
                        "op": "union",
                        "left": {"op": "vertex", "label": 1},
                        "right": {"op": "vertex", "label": 2},
                    },
                },
            },
        )
        code, printed = _run(capsys, "eval", expr)
        assert code == 0
        assert json.loads(printed)["edges"] == [[0, 1]]


class TestGen:
    def test_hypercube(self, capsys):
        code, printed = _run(capsys, "gen", "hypercube", "2")
        document = json.loads(printed)
        assert code == 0
        assert document["n"] == 4 and len(document["edges"]) == 4

    def test_kneser(self, capsys):
        document = json.loads(_run(capsys, "gen", "kneser", "5", "2")[1])
        assert document["n"] == 10 and len(document["edges"]) == 15

    def test_hypercube_expression(self, capsys):
        code, printed = _run(capsys, "gen", "hypercube", "3", "--expression")
        document = json.loads(printed)
        assert code == 0
        assert document["k"] == 2 and document["kind"] == "extended"

    def test_subdivided_clique(self, capsys, write_json):
        u = write_json("u.json", graph_payload(gen_clique(1)))
        document = json.loads(_run(capsys, "gen", "subdivided-clique", "3", u)[1])
        assert document["n"] == 6 and len(document["edges"]) == 6

    def test_wrong_parameter_count(self, capsys):
        assert _run(capsys, "gen", "kneser", "5")[0] == 2

    def test_expression_only_for_hypercube(self, capsys):
        assert _run(capsys, "gen", "clique", "3", "--expression")[0] == 2


class TestIso:
    def test_verdicts(self, capsys, write_json):
        a = write_json("a.json", graph_payload(gen_path(3), (1, 2, 1)))
        b = write_json("b.json", graph_payload(gen_path(3), (2, 1, 1)))
        c = write_json("c.json", {"n": 3, "edges": [[2, 1], [1, 0]], "labels": [1, 2, 1]})
        assert _run(capsys, "iso", a, b) == (0, "non-iso")
        assert _run(capsys, "iso", a, c) == (0, "iso")

    def test_gadget_output(self, capsys, write_json, tmp_path):
        a = write_json("a.json", graph_payload(gen_path(3), (1, 2, 1)))
        out = tmp_path / "gadget.json"
        code, printed = _run(capsys, "iso", a, a, "--gadget", "-o", str(out))
        assert code == 0 and printed == "iso"
        document = json.loads(out.read_text(encoding="utf-8"))
        n, q = 3, 2
        assert document["q"] == q and document["n"] == n
        assert document["g_prime"]["n"] == n + 6 + 5 * q + q * (n + 2) + q


class TestVerify:
    def test_selected_suites_pass(self, capsys):
        code, printed = _run(
            capsys, "verify", "--cases", "2", "--suite", "expr_dp", "--suite", "partition"
        )
        report = json.loads(printed)
        assert code == 0
        assert report["ok"] is True
        assert [s["name"] for s in report["suites"]] == ["expr_dp", "partition"]

    def test_unknown_suite_rejected(self):
        with pytest.raises(SystemExit):
            parse_args(["verify", "--suite", "nonsense"])


class TestExitCodes:
    @pytest.mark.parametrize(
        "error, code",
        [
            (BudgetExceededError("too big"), 3),
            (DivisibilityError("not divisible"), 4),
            (MalformedExpressionError("bad"), 2),
            (ValueError("bad"), 2),
            (RuntimeError("boom"), 70),
        ],
    )
    def test_mapping(self, error, code):
        assert exit_code_for(error) == code
