import json

import pytest

from cosan.cli import build_plan, main
from cosan.coeff import builtin_inj_coeff, inj_coeff_to_json, inj_nat_to_json, yoneda_inj_nat
from cosan.cosan import tabulate_cosan, tabulate_nat
from cosan.tabular import tab_functor_to_json, tab_nat_to_json
from util import ff


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def write_doc(path, doc):
    path.write_text(json.dumps(doc) + "\n", encoding="utf-8")
    return str(path)


class TestBuildPlan:
    def test_eval_plan(self):
        plan = build_plan(["eval", "--coeff", "builtin:powerset", "--size", "3"])
        assert plan.command == "eval"
        assert plan.options["coeff"].level_sizes() == [1, 2, 2, 0]

    def test_check_plan(self, tmp_path):
        T = tabulate_cosan(builtin_inj_coeff("exp:2", 2), 2)
        path = write_doc(tmp_path / "F.json", tab_functor_to_json(T.tab))
        plan = build_plan(["check", "cocone", "--tab", path, "--at", "2"])
        assert plan.command == "check" and plan.what == "cocone"
        assert plan.options["at"] == 2

    def test_usage_error_exits_two(self):
        with pytest.raises(SystemExit) as err:
            build_plan(["eval", "--size"])
        assert err.value.code == 2

    def test_unknown_flag_rejected(self):
        with pytest.raises(SystemExit) as err:
            build_plan(["eval", "--coeff", "builtin:powerset", "--sizes", "3"])
        assert err.value.code == 2


class TestEval:
    def test_powerset_three(self, capsys):
        code, out = run(
            capsys, "eval", "--coeff", "builtin:powerset", "--size", "3"
        )
        doc = json.loads(out)
        assert code == 0
        assert doc["kind"] == "cosan-eval" and doc["count"] == 8
        assert doc["elements"][0]["epi"] == "3>1:1,1,1"

    def test_san_eval(self, capsys):
        code, out = run(capsys, "eval", "--san", "builtin:pplus", "--size", "3")
        doc = json.loads(out)
        assert code == 0 and doc["count"] == 7

    def test_needs_exactly_one_source(self, capsys):
        code, out = run(
            capsys, "eval", "--coeff", "builtin:powerset", "--san",
            "builtin:pplus", "--size", "2",
        )
        assert code == 2


class TestChecks:
    def test_check_all_on_tabulation(self, capsys, tmp_path):
        T = tabulate_cosan(builtin_inj_coeff("exp:2", 2), 2)
        path = write_doc(tmp_path / "F.json", tab_functor_to_json(T.tab))
        code, out = run(capsys, "check", "all", "--tab", path)
        doc = json.loads(out)
        assert code == 0 and doc["result"] == "pass"
        names = [r["check"] for r in doc["reports"]]
        assert names[:2] == ["functor", "pullbacks"]
        assert "phi-iso" in names

    def test_semicartesian_collapse_fixture(self, capsys, tmp_path):
        w = 3
        src = tabulate_cosan(builtin_inj_coeff("exp:2", w), w)
        tgt = tabulate_cosan(builtin_inj_coeff("constant", w), w)
        from cosan.tabular import TabNat

        psi = TabNat(
            src.tab,
            tgt.tab,
            tuple(tuple(0 for _ in range(src.tab.size(k))) for k in range(w + 1)),
        )
        src_p = write_doc(tmp_path / "src.json", tab_functor_to_json(src.tab))
        tgt_p = write_doc(tmp_path / "tgt.json", tab_functor_to_json(tgt.tab))
        nat_p = write_doc(tmp_path / "psi.json", tab_nat_to_json(psi))
        code, out = run(
            capsys, "check", "semicartesian",
            "--tab", src_p, "--tab", tgt_p, "--nat", nat_p,
        )
        doc = json.loads(out)
        assert code == 1
        assert doc["result"] == "fail" and doc["witness"]["fun"] == "2>1:1,1"

    def test_boolean_hom(self, capsys):
        code, out = run(capsys, "check", "boolean-hom", "--window", "2")
        assert code == 0 and json.loads(out)["result"] == "pass"

    def test_strength(self, capsys):
        code, out = run(
            capsys, "check", "strength", "--san", "builtin:pplus", "--window", "2"
        )
        assert code == 0 and json.loads(out)["result"] == "pass"


class TestPipelines:
    def test_tabulate_extract_files(self, capsys, tmp_path):
        code, out = run(
            capsys, "tabulate", "--coeff", "builtin:powerset", "--window", "3",
            "--out", str(tmp_path / "F.json"),
        )
        assert code == 0
        code, out = run(capsys, "extract", "--tab", str(tmp_path / "F.json"))
        doc = json.loads(out)
        assert code == 0 and doc["kind"] == "inj-coeff"
        assert [len(s) for s in doc["sets"]] == [1, 2, 2, 0]

    def test_compose_sizes(self, capsys):
        code, out = run(
            capsys, "compose", "--san", "builtin:pplus",
            "--coeff", "builtin:powerset", "--window", "3",
        )
        doc = json.loads(out)
        assert code == 0
        assert [len(s) for s in doc["sets"]] == [1, 3, 12, 216]

    def test_compose_resource_bound(self, capsys):
        code, out = run(
            capsys, "compose", "--san", "builtin:pplus",
            "--coeff", "builtin:powerset", "--window", "3", "--cap", "100",
        )
        assert code == 2
        assert json.loads(out)["error"]["kind"] == "resource-bound"

    def test_extract_nat_yoneda(self, capsys, tmp_path):
        tau = yoneda_inj_nat(ff("1>2:1"), 3)
        psi = tabulate_nat(tau, 3)
        nat_p = write_doc(tmp_path / "psi.json", tab_nat_to_json(psi))
        code, out = run(
            capsys, "extract-nat",
            "--coeff", "builtin:exp:1", "--coeff", "builtin:exp:2",
            "--nat", nat_p, "--window", "3",
        )
        doc = json.loads(out)
        assert code == 0
        assert doc == inj_nat_to_json(tau)

    def test_roundtrip_builtin(self, capsys):
        code, out = run(
            capsys, "roundtrip", "--coeff", "builtin:powerset", "--window", "3"
        )
        doc = json.loads(out)
        assert code == 0 and doc["result"] == "pass"

    def test_roundtrip_sweep(self, capsys):
        code, out = run(
            capsys, "roundtrip", "--random", "3", "--seed", "5", "--window", "3"
        )
        doc = json.loads(out)
        assert code == 0 and doc["result"] == "pass" and len(doc["runs"]) == 3

    def test_map_with_coeff(self, capsys):
        code, out = run(
            capsys, "map", "--coeff", "builtin:powerset", "--fun", "2>3:1,2",
            "--window", "3",
        )
        doc = json.loads(out)
        assert code == 0
        assert doc["kind"] == "cosan-map" and len(doc["pairs"]) == 8

    def test_map_with_tab(self, capsys, tmp_path):
        T = tabulate_cosan(builtin_inj_coeff("exp:2", 2), 2)
        path = write_doc(tmp_path / "F.json", tab_functor_to_json(T.tab))
        code, out = run(capsys, "map", "--tab", path, "--fun", "2>1:1,1")
        doc = json.loads(out)
        assert code == 0 and len(doc["table"]) == T.tab.size(1)

    def test_builtin_materialization(self, capsys):
        code, out = run(
            capsys, "builtin", "--coeff", "builtin:exp:2", "--window", "3"
        )
        assert code == 0
        assert json.loads(out) == inj_coeff_to_json(builtin_inj_coeff("exp:2", 3))


class TestDeterminism:
    def test_repeated_runs_identical(self, capsys):
        _, first = run(capsys, "eval", "--coeff", "builtin:powerset", "--size", "3")
        _, second = run(capsys, "eval", "--coeff", "builtin:powerset", "--size", "3")
        assert first == second
