"""
命令行入口
子命令解析、参数与配置合并、调用核心库并输出 JSON 报告；退出码只表示运行失败的类别
"""
import argparse
import logging
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

from config.config import Config
from core import TOOL_NAME, __version__
from core.classify import classify
from core.errors import InternalInconsistencyError, ModuliError, ParseError
from core.fibration import family_from_coefficients, is_locally_trivial
from core.moduli import constant_moduli_oracle
from core.parser import parse_family, parse_form, parse_point
from core.pencil import DEFAULT_MAX_HEIGHT, PencilLine, setup, special_lines, t_locus, tangent_point
from core.singular import singular_points
from core.weierstrass import automorphism_group, decide, reduce
from utils.common import LogUtils

from . import report
from .plot import PlotSettings, plot

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3

Result = Tuple[Dict[str, Any], Dict[str, Any]]


@dataclass
class RunContext:
    """一次运行的有效参数：CLI 参数 > MODULI_TOL > config.json > 默认值"""
    tol: float
    seed: int
    samples: int
    workers: int
    max_height: int = DEFAULT_MAX_HEIGHT
    t_samples: int = 12
    plot: PlotSettings = field(default_factory=PlotSettings)
    timings: Optional[Dict[str, float]] = None

    @contextmanager
    def timed(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            if self.timings is not None:
                self.timings[name] = time.perf_counter() - start


def parse_line(text: str) -> PencilLine:
    """--line 参数：有理数 y0 或 inf（直线 Z=0）"""
    if text.strip().lower() == "inf":
        return PencilLine(None)
    try:
        return PencilLine(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"无效的直线参数: {text!r}（应为 a/b 或 inf）")


def _pencil_inputs(args: argparse.Namespace) -> Dict[str, Any]:
    return {"curve": args.curve, "point": args.point}


def _normalized(args: argparse.Namespace, ctx: RunContext):
    """化为 (*) 形式后在 p = [1:0:0] 处重新建立直线束"""
    with ctx.timed("reduce"):
        w = reduce(setup(parse_form(args.curve), parse_point(args.point)))
        return w, setup(w.curve(), (1, 0, 0))


def cmd_decide(args: argparse.Namespace, ctx: RunContext) -> Result:
    pencil = setup(parse_form(args.curve), parse_point(args.point))
    with ctx.timed("reduce"):
        w = reduce(pencil)
    with ctx.timed("decide"):
        verdict = decide(w)
    result: Dict[str, Any] = {
        "verdict": report.verdict_json(verdict),
        "normalized": report.weierstrass_json(w),
    }
    if verdict.constant and verdict.representable:
        result["automorphisms"] = report.automorphism_json(automorphism_group(w, verdict))
    if args.oracle:
        with ctx.timed("oracle"):
            oracle = constant_moduli_oracle(pencil, ctx.samples, ctx.seed, ctx.tol, ctx.workers, ctx.max_height)
        result["oracle"] = report.oracle_json(oracle)
        if oracle.constant != verdict.constant:
            raise InternalInconsistencyError(
                f"符号判定为{'常' if verdict.constant else '非常'}模数，采样预言机给出相反结论"
            )
    inputs = dict(_pencil_inputs(args), oracle=args.oracle, samples=ctx.samples)
    return inputs, result


def cmd_normalize(args: argparse.Namespace, ctx: RunContext) -> Result:
    with ctx.timed("reduce"):
        w = reduce(setup(parse_form(args.curve), parse_point(args.point)))
    return _pencil_inputs(args), report.weierstrass_json(w)


def cmd_classify(args: argparse.Namespace, ctx: RunContext) -> Result:
    with ctx.timed("reduce"):
        w = reduce(setup(parse_form(args.curve), parse_point(args.point)))
    with ctx.timed("classify"):
        result = classify(decide(w), w, ctx.tol)
    return _pencil_inputs(args), report.classification_json(result)


def cmd_special_lines(args: argparse.Namespace, ctx: RunContext) -> Result:
    pencil = setup(parse_form(args.curve), parse_point(args.point))
    with ctx.timed("special_lines"):
        lines = special_lines(pencil, ctx.tol)
    return _pencil_inputs(args), {"d": pencil.d, "lines": [report.special_line_json(s) for s in lines]}


def cmd_t_locus(args: argparse.Namespace, ctx: RunContext) -> Result:
    w, pencil = _normalized(args, ctx)
    with ctx.timed("t_locus"):
        locus = t_locus(pencil, ctx.t_samples, ctx.seed, ctx.tol, True, ctx.workers, ctx.max_height)
    result = report.t_locus_json(locus)
    result["frame"] = w.curve().to_text()
    return dict(_pencil_inputs(args), samples=ctx.t_samples), result


def cmd_tangents(args: argparse.Namespace, ctx: RunContext) -> Result:
    w, pencil = _normalized(args, ctx)
    with ctx.timed("tangents"):
        tangents = tangent_point(pencil, args.line, ctx.tol)
    result = report.tangent_json(tangents)
    result["frame"] = w.curve().to_text()
    return dict(_pencil_inputs(args), line=args.line.label()), result


def cmd_isotrivial(args: argparse.Namespace, ctx: RunContext) -> Result:
    family = family_from_coefficients(parse_family(args.family))
    with ctx.timed("isotrivial"):
        verdict = is_locally_trivial(family)
    return {"family": args.family}, report.triviality_json(verdict)


def cmd_singular(args: argparse.Namespace, ctx: RunContext) -> Result:
    curve = parse_form(args.curve)
    with ctx.timed("singular"):
        points = singular_points(curve, ctx.tol)
    return {"curve": args.curve}, {"points": [report.singular_json(p) for p in points]}


def cmd_plot(args: argparse.Namespace, ctx: RunContext) -> Result:
    pencil = setup(parse_form(args.curve), parse_point(args.point))
    settings = ctx.plot
    if args.lines is not None:
        settings = PlotSettings(args.lines, settings.sweep_steps, settings.width, settings.height,
                                settings.y_range, settings.margin)
    with ctx.timed("plot"):
        summary = plot(pencil, args.out, settings, args.png, ctx.seed, ctx.tol, title=args.curve)
    result = {
        "svg": summary.svg,
        "png": summary.png,
        "real_points": summary.real_points,
        "complex_points": summary.complex_points,
    }
    return dict(_pencil_inputs(args), lines=settings.lines), result


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunContext], Result]] = {
    "decide": cmd_decide,
    "normalize": cmd_normalize,
    "classify": cmd_classify,
    "special-lines": cmd_special_lines,
    "t-locus": cmd_t_locus,
    "tangents": cmd_tangents,
    "isotrivial": cmd_isotrivial,
    "singular": cmd_singular,
    "plot": cmd_plot,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="config.json", help="配置文件路径（默认 config.json）")
    common.add_argument("--tol", type=float, default=None, help="数值容差，覆盖 MODULI_TOL 与配置文件")
    common.add_argument("--seed", type=int, default=None, help="随机采样种子")
    common.add_argument("--samples", type=int, default=None, help="采样直线数")
    common.add_argument("--workers", type=int, default=None, help="求根线程数")
    common.add_argument("--verbose", "-v", action="store_true", help="输出调试日志到 stderr")
    common.add_argument("--timings", action="store_true", help="在报告中附带耗时（报告不再逐字节确定）")

    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="平面曲线与点对 (C, p) 的常模数判定、正规形、低次分类与超椭圆族等平凡性",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def pencil_command(name: str, help_text: str) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        cmd.add_argument("--curve", required=True, help='齐次多项式，如 "X^3+Y^3+Z^3"')
        cmd.add_argument("--point", required=True, help="有理射影点，如 1,0,0")
        return cmd

    decide_cmd = pencil_command("decide", "判定模数是否恒定")
    decide_cmd.add_argument("--oracle", action="store_true", help="同时运行采样预言机，结论不一致时以退出码 3 结束")
    pencil_command("normalize", "化为 (*) 形式")
    pencil_command("classify", "d=3 与 d=4 的几何分类")
    pencil_command("special-lines", "列出特殊直线")
    pencil_command("t-locus", "切线公共点 T 的轨迹")
    tangents_cmd = pencil_command("tangents", "某条直线上各交点处的切线")
    tangents_cmd.add_argument("--line", required=True, type=parse_line, help="直线参数 y0（a/b 或 inf）")
    plot_cmd = pencil_command("plot", "输出 SVG 示意图")
    plot_cmd.add_argument("--out", required=True, help="SVG 输出路径")
    plot_cmd.add_argument("--png", default=None, help="可选的 PNG 输出路径")
    plot_cmd.add_argument("--lines", type=int, default=None, help="绘制的采样直线数")

    iso_cmd = sub.add_parser("isotrivial", parents=[common], help="超椭圆族的局部平凡性")
    iso_cmd.add_argument("--family", required=True, help='族方程，如 "z^2 = x^3 + y^2*x + y^3"')
    singular_cmd = sub.add_parser("singular", parents=[common], help="曲线的奇点")
    singular_cmd.add_argument("--curve", required=True, help="齐次多项式")
    return parser


def make_context(args: argparse.Namespace, config: Config) -> RunContext:
    plot_config = config.get("plot")
    return RunContext(
        tol=args.tol if args.tol is not None else config.get("tolerance"),
        seed=args.seed if args.seed is not None else config.get_nested("oracle.seed"),
        samples=args.samples if args.samples is not None else config.get_nested("oracle.samples"),
        workers=args.workers if args.workers is not None else config.get_nested("oracle.workers"),
        max_height=config.get_nested("oracle.max_height", DEFAULT_MAX_HEIGHT),
        t_samples=args.samples if args.samples is not None else config.get_nested("t_locus.samples"),
        plot=PlotSettings(
            lines=plot_config["lines"],
            sweep_steps=plot_config["sweep_steps"],
            width=plot_config["width"],
            height=plot_config["height"],
            y_range=tuple(plot_config["y_range"]),
            margin=plot_config["margin"],
        ),
        timings={} if args.timings else None,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """运行一条子命令，返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)

    config = Config(args.config)
    LogUtils.suppress_third_party_logs()
    LogUtils.configure(logging.DEBUG if args.verbose else config.get_nested("logging.level", "WARNING"))
    ctx = make_context(args, config)
    logger.debug(f"运行 {args.command}: tol={ctx.tol}, seed={ctx.seed}, samples={ctx.samples}")

    try:
        inputs, result = COMMANDS[args.command](args, ctx)
    except InternalInconsistencyError as e:
        logger.error(f"内部不一致: {e}")
        print(f"内部不一致: {e}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except ParseError as e:
        print(e.annotated(), file=sys.stderr)
        return EXIT_INPUT
    except ModuliError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT

    output = report.build_report(args.command, inputs, result, ctx.seed, ctx.tol, ctx.timings)
    print(report.dumps(output))
    return EXIT_OK
