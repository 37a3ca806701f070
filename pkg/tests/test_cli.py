"""
命令行测试
"""
import json

import pytest

from cli import app, report
from cli.app import EXIT_INCONSISTENT, EXIT_INPUT, EXIT_OK, main
from core.moduli import OracleVerdict


@pytest.fixture
def run(capsys, monkeypatch, missing_config):
    """运行一条子命令，返回 (退出码, 解析后的报告, stderr)"""
    monkeypatch.delenv("MODULI_TOL", raising=False)

    def _run(*argv):
        command, rest = argv[0], list(argv[1:])
        code = main([command, "--config", missing_config] + rest)
        captured = capsys.readouterr()
        parsed = json.loads(captured.out) if code == EXIT_OK else None
        if parsed is not None:
            report.validate(parsed)
        return code, parsed, captured.err

    return _run


def test_decide_constant(run):
    code, out, _ = run("decide", "--curve", "X^3+Y^3+Z^3", "--point", "1,0,0")
    assert code == EXIT_OK
    assert out["command"] == "decide"
    assert out["seed"] == 1
    assert out["tolerance"] == 1e-10
    verdict = out["result"]["verdict"]
    assert verdict["constant"] is True
    assert verdict["k"] == 3
    assert out["result"]["automorphisms"]["cyclic_order"] == 3
    assert "timings" not in out


def test_decide_with_oracle(run):
    code, out, _ = run("decide", "--curve", "X^3 + X*Z^2 + Y^3", "--point", "1,0,0", "--oracle")
    assert code == EXIT_OK
    assert out["result"]["verdict"]["constant"] is False
    assert out["result"]["oracle"]["constant"] is False
    assert out["input"]["oracle"] is True


def test_oracle_disagreement_exits_with_3(run, monkeypatch):
    fake = OracleVerdict(constant=False, samples_used=2, worst_deviation=1.0, threshold=1e-5)
    monkeypatch.setattr(app, "constant_moduli_oracle", lambda *args, **kwargs: fake)
    code, out, err = run("decide", "--curve", "X^3+Y^3+Z^3", "--point", "1,0,0", "--oracle")
    assert code == EXIT_INCONSISTENT
    assert out is None
    assert "内部不一致" in err


def test_reports_are_deterministic(run):
    argv = ("decide", "--curve", "X^4-Y^3*Z+Y*Z^3", "--point", "1,0,0", "--oracle")
    _, first, _ = run(*argv)
    _, second, _ = run(*argv)
    assert json.dumps(first) == json.dumps(second)


def test_timings_are_opt_in(run):
    code, out, _ = run("normalize", "--curve", "X^3+Y^3+Z^3", "--point", "1,0,0", "--timings")
    assert code == EXIT_OK
    assert "reduce" in out["timings"]


def test_parse_error_exits_with_2(run):
    code, out, err = run("decide", "--curve", "X^3+Y^3+", "--point", "1,0,0")
    assert code == EXIT_INPUT
    assert out is None
    assert "^" in err


def test_classify_other_degree_exits_with_2(run):
    code, _, err = run("classify", "--curve", "X^5+Y^5+Z^5", "--point", "1,0,0")
    assert code == EXIT_INPUT
    assert "InvalidInputError" in err


def test_classify(run):
    code, out, _ = run("classify", "--curve", "X^3+Y^2*Z", "--point", "1,0,0")
    assert code == EXIT_OK
    assert out["result"]["case_id"] == "D3_CUSPIDAL"


def test_normalize(run):
    code, out, _ = run("normalize", "--curve", "2*X^3 + 3*X^2*Y + Y^2*Z", "--point", "1,0,0")
    assert code == EXIT_OK
    assert out["result"]["d"] == 3
    assert out["result"]["reduced"] is True
    assert "X^2" not in out["result"]["curve"]


def test_tolerance_flag_overrides_environment(run, monkeypatch):
    monkeypatch.setenv("MODULI_TOL", "1e-7")
    code, out, _ = run("normalize", "--curve", "X^3+Y^3+Z^3", "--point", "1,0,0", "--tol", "1e-9")
    assert code == EXIT_OK
    assert out["tolerance"] == 1e-9


def test_special_lines(run):
    code, out, _ = run("special-lines", "--curve", "X^3+Y^2*Z", "--point", "1,0,0")
    assert code == EXIT_OK
    assert [line["line"] for line in out["result"]["lines"]] == ["0", "inf"]


def test_tangents(run):
    code, out, _ = run("tangents", "--curve", "X^3+Y^3+Z^3", "--point", "1,0,0", "--line", "2")
    assert code == EXIT_OK
    assert out["result"]["concurrent"] is True
    assert out["result"]["frame"] == "X^3 + Y^3 + Z^3"
    assert out["result"]["threshold"] == pytest.approx(out["tolerance"] ** 0.5)


def test_tangents_on_special_line_exits_with_2(run):
    code, _, err = run("tangents", "--curve", "X^3+Y^3+Z^3", "--point", "1,0,0", "--line", "-1")
    assert code == EXIT_INPUT
    assert "DegenerateLineError" in err


def test_t_locus(run):
    code, out, _ = run("t-locus", "--curve", "X^3+Y^3+Z^3", "--point", "1,0,0")
    assert code == EXIT_OK
    assert out["result"]["kind"] == "LineX0"


def test_isotrivial(run):
    code, out, _ = run("isotrivial", "--family", "z^2 = x^3 + t")
    assert code == EXIT_OK
    assert out["result"]["isotrivial"] is True
    assert out["result"]["j_invariant"]["value"] == "0"


def test_singular(run):
    code, out, _ = run("singular", "--curve", "X^3+Y^2*Z")
    assert code == EXIT_OK
    assert [p["point"] for p in out["result"]["points"]] == ["[0:0:1]"]


def test_plot_writes_svg(run, tmp_path):
    target = tmp_path / "fermat.svg"
    code, out, _ = run("plot", "--curve", "X^3+Y^3+Z^3", "--point", "1,0,0", "--out", str(target), "--lines", "4")
    assert code == EXIT_OK
    assert out["result"]["svg"] == str(target)
    text = target.read_text(encoding="utf-8")
    assert "<svg" in text and text.rstrip().endswith("</svg>")
    assert out["input"]["lines"] == 4


def test_plot_creates_missing_output_directories(run, tmp_path):
    target = tmp_path / "figures" / "cubic" / "fermat.svg"
    png = tmp_path / "raster" / "fermat.png"
    code, out, _ = run(
        "plot", "--curve", "X^3+Y^3+Z^3", "--point", "1,0,0",
        "--out", str(target), "--png", str(png), "--lines", "3",
    )
    assert code == EXIT_OK
    assert target.exists()
    assert png.exists()
