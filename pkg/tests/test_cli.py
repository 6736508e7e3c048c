import json

from ctrskit.cli import main

from conftest import corpus_path

FIB = str(corpus_path("fib.ctrs"))
OVERLAP = str(corpus_path("overlap.ctrs"))
IF2 = str(corpus_path("if2.ctrs"))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


def test_check_text(capsys):
    code, out, _ = run(capsys, "check", FIB)
    assert code == 0
    assert out.splitlines()[0] == "YES (level-confluent)"


def test_check_json_schema(capsys):
    code, payload, _ = run_json(capsys, "check", FIB)
    assert code == 0
    assert set(payload) == {"verdict", "properties", "overlaps", "bounds", "truncated"}
    assert payload["verdict"] == "LEVEL_CONFLUENT"
    assert set(payload["properties"]) == {
        "type-3", "left-linear", "properly-oriented", "right-stable",
        "almost-orthogonal",
    }
    assert payload["bounds"] == {"max_level": 8, "max_depth": 8, "max_terms": 4096}
    assert payload["truncated"] is False


def test_check_not_applicable_text(capsys):
    code, out, _ = run(capsys, "check", OVERLAP)
    assert code == 0
    assert out.startswith("MAYBE (criterion not applicable:")


def test_check_strict_exit_code(capsys):
    code, _, _ = run(capsys, "check", OVERLAP, "--strict")
    assert code == 1
    code, _, _ = run(capsys, "check", FIB, "--strict")
    assert code == 0


def test_check_missing_file(capsys):
    code, _, err = run(capsys, "check", "no/such/file.ctrs")
    assert code == 2
    assert "error:" in err


def test_check_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.ctrs"
    bad.write_text("(RULES x -> ", encoding="utf-8")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert "error:" in err


def test_check_binary_file_exit(tmp_path, capsys):
    bad = tmp_path / "binary.ctrs"
    bad.write_bytes(b"(RULES \xff\xfe -> a)")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert "error:" in err


def test_props(capsys):
    code, payload, _ = run_json(capsys, "props", FIB)
    assert code == 0
    assert payload["type"] == 3
    assert payload["properties"]["properly-oriented"]["holds"] is True


def test_overlaps(capsys):
    code, payload, _ = run_json(capsys, "overlaps", IF2)
    assert code == 0
    assert [o["disposition"] for o in payload["overlaps"]] == [
        "root-variant", "infeasible-IF2", "infeasible-IF2", "root-variant",
    ]
    assert [o["rules"] for o in payload["overlaps"]] == [[1, 1], [1, 2], [2, 1], [2, 2]]


def test_rewrite(capsys):
    code, payload, _ = run_json(
        capsys, "rewrite", FIB, "--term", "fib(s(0))", "--level", "2", "--steps", "4"
    )
    assert code == 0
    assert "pair(s(0), add(0, s(0)))" in payload["reachable"]
    assert payload["truncated"] is False


def test_rewrite_level_cap(capsys):
    code, _, err = run(
        capsys, "rewrite", FIB, "--term", "fib(0)", "--level", "99", "--steps", "2"
    )
    assert code == 2
    assert "max-level" in err


def test_rewrite_bad_term(capsys):
    code, _, err = run(
        capsys, "rewrite", FIB, "--term", "quux(0)", "--level", "1", "--steps", "2"
    )
    assert code == 2
    assert "unknown symbol" in err


def test_epar(capsys):
    code, payload, _ = run_json(
        capsys, "epar", FIB, "--term", "pair(fib(0), fib(0))", "--level", "1"
    )
    assert code == 0
    terms = {s["term"] for s in payload["successors"]}
    assert "pair(pair(0, s(0)), pair(0, s(0)))" in terms
    both = next(
        s for s in payload["successors"]
        if s["term"] == "pair(pair(0, s(0)), pair(0, s(0)))"
    )
    assert both["holes"] == 2
    assert both["kinds"] == ["root", "root"]


def test_diamond_clean(capsys):
    code, payload, _ = run_json(
        capsys, "diamond", FIB, "--m", "1", "--n", "1", "--seed-size", "3"
    )
    assert code == 0
    assert payload["counterexample"] is None
    assert payload["seeds"] == 9


def test_diamond_counterexample(capsys):
    code, payload, _ = run_json(
        capsys, "diamond", OVERLAP, "--m", "1", "--n", "1", "--seed-size", "2"
    )
    assert code == 0
    assert payload["counterexample"] == {"seed": "f(b)", "left": "a", "right": "b"}


def test_diamond_text(capsys):
    code, out, _ = run(
        capsys, "diamond", OVERLAP, "--m", "1", "--n", "1", "--seed-size", "2"
    )
    assert code == 0
    assert "counterexample peak: a <- f(b) -> b" in out


def test_diamond_level_cap(capsys):
    code, _, err = run(
        capsys, "diamond", FIB, "--m", "9", "--n", "1", "--seed-size", "2"
    )
    assert code == 2
    assert "max-level" in err


def test_props_type4(capsys):
    code, payload, _ = run_json(capsys, "props", str(corpus_path("type4.ctrs")))
    assert code == 0
    assert payload["type"] == 4


def test_render_report_views(capsys):
    from ctrskit.analysis import check_level_confluence
    from ctrskit.cops import parse
    from ctrskit.ctrs import check_left_linear
    from ctrskit.engine import Bounds
    from ctrskit.reports import render_report

    spec = parse(corpus_path("fib.ctrs").read_text(encoding="utf-8"))
    verdict = check_level_confluence(spec.ctrs, Bounds())
    assert render_report(verdict).startswith("YES (level-confluent)")
    assert render_report(check_left_linear(spec.ctrs)).startswith(
        "property left-linear: holds"
    )
    bad = parse(corpus_path("non_left_linear.ctrs").read_text(encoding="utf-8"))
    report = render_report(check_left_linear(bad.ctrs))
    assert "FAILS" in report and "rule 1" in report
