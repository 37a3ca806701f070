"""
静态示意图
在 p 移到 [1:0:0] 后的 Z=1 图上绘制：扫描直线得到的实轨迹、采样直线、某条纤维上的切线、
T 轨迹、特殊点，以及两条同模数纤维之间 p_i q_i 连线的公共点；复数点只在注释块中列出
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from PIL import Image, ImageDraw

from core.errors import InsufficientSamplesError, ModuliError
from core.moduli import same_moduli
from core.numkernel import DEFAULT_TOL
from core.pencil import (
    LocusKind,
    PencilLine,
    PencilSetup,
    format_complex,
    intersect,
    is_generic_line,
    normalize_point,
    special_lines,
    t_locus,
    tangent_point,
)
from utils.common import PathUtils

logger = logging.getLogger(__name__)

REAL_TOL = 1e-7
MAX_ANNOTATIONS = 12

COLORS = {
    "curve": "#1f4e79",
    "pencil": "#b0b0b0",
    "tangent": "#d98c00",
    "t_locus": "#2e8b57",
    "special": "#c0392b",
    "match": "#7d3c98",
    "text": "#333333",
}


@dataclass(frozen=True)
class PlotSettings:
    lines: int = 8
    sweep_steps: int = 400
    width: int = 800
    height: int = 600
    y_range: Tuple[float, float] = (-3.0, 3.0)
    margin: float = 0.1


@dataclass(frozen=True)
class Shape:
    """绘图元素：dot / segment / text，坐标为曲线平面上的 (x, y)"""
    kind: str
    coords: Tuple[float, ...]
    color: str
    label: str = ""
    dashed: bool = False


@dataclass
class PlotScene:
    shapes: List[Shape] = field(default_factory=list)
    annotations: List[str] = field(default_factory=list)
    real_points: int = 0
    complex_points: int = 0
    bounds: Tuple[float, float, float, float] = (-1.0, 1.0, -1.0, 1.0)


@dataclass(frozen=True)
class PlotSummary:
    svg: str
    png: Optional[str]
    real_points: int
    complex_points: int


def _is_real(value: complex, scale: float = 1.0) -> bool:
    return abs(complex(value).imag) <= REAL_TOL * max(1.0, scale)


def _affine(point: Sequence[complex]) -> Optional[Tuple[float, float]]:
    """射影点在 Z=1 图上的实坐标；在无穷远或非实时返回 None"""
    vec = normalize_point(point)
    if abs(vec[2]) <= REAL_TOL:
        return None
    x, y = vec[0] / vec[2], vec[1] / vec[2]
    if not (_is_real(x, abs(x)) and _is_real(y, abs(y))):
        return None
    return float(x.real), float(y.real)


def _grid(low: Fraction, high: Fraction, count: int, offset: Fraction) -> List[Fraction]:
    return [low + (high - low) * (Fraction(i) + offset) / count for i in range(count)]


def _line_segment(coeffs: Sequence[complex], bounds: Tuple[float, float, float, float]) -> Optional[Tuple[float, ...]]:
    """直线 a x + b y + c = 0 在视窗内的一段"""
    vec = normalize_point(coeffs)
    if any(not _is_real(v) for v in vec):
        return None
    a, b, c = (float(v.real) for v in vec)
    if max(abs(a), abs(b)) <= REAL_TOL:
        return None
    x0, x1, y0, y1 = bounds
    if abs(b) >= abs(a):
        return (x0, -(a * x0 + c) / b, x1, -(a * x1 + c) / b)
    return (-(b * y0 + c) / a, y0, -(b * y1 + c) / a, y1)


def build_scene(pencil: PencilSetup, settings: PlotSettings, seed: int = 1, tol: float = DEFAULT_TOL) -> PlotScene:
    scene = PlotScene()
    low, high = (Fraction(str(v)) for v in settings.y_range)
    curve_points: List[Tuple[float, float]] = []

    for y0 in _grid(low, high, settings.sweep_steps, Fraction(0)):
        try:
            roots = intersect(pencil, PencilLine(y0), tol).values()
        except ModuliError as e:
            logger.debug(f"扫描跳过 y0={y0}: {e}")
            continue
        for x in roots:
            if _is_real(x, abs(x)):
                curve_points.append((x.real, float(y0)))
    scene.real_points = len(curve_points)

    xs = [x for x, _ in curve_points] or [float(low), float(high)]
    span_x = (max(xs) - min(xs)) or 1.0
    span_y = float(high - low) or 1.0
    scene.bounds = (
        min(xs) - settings.margin * span_x,
        max(xs) + settings.margin * span_x,
        float(low) - settings.margin * span_y,
        float(high) + settings.margin * span_y,
    )
    x_lo, x_hi = scene.bounds[0], scene.bounds[1]

    plot_lines = [y0 for y0 in _grid(low, high, settings.lines, Fraction(1, 2)) if is_generic_line(pencil, y0)]
    fibres: List[Tuple[Fraction, List[complex]]] = []
    for y0 in plot_lines:
        scene.shapes.append(Shape("segment", (x_lo, float(y0), x_hi, float(y0)), COLORS["pencil"], dashed=True))
        roots = intersect(pencil, PencilLine(y0), tol).values()
        fibres.append((y0, roots))
        for x in roots:
            if not _is_real(x, abs(x)):
                scene.complex_points += 1
                scene.annotations.append(f"y0={y0}: x={format_complex(x, 6)}")
    for x, y in curve_points:
        scene.shapes.append(Shape("dot", (x, y, 1.2), COLORS["curve"]))

    if plot_lines:
        chosen = PencilLine(plot_lines[len(plot_lines) // 2])
        try:
            report = tangent_point(pencil, chosen, tol)
            for coeffs in report.tangent_lines:
                segment = _line_segment(coeffs, scene.bounds)
                if segment is not None:
                    scene.shapes.append(Shape("segment", segment, COLORS["tangent"]))
            t_affine = _affine(report.t_point)
            if t_affine is not None:
                scene.shapes.append(Shape("dot", (*t_affine, 4.0), COLORS["t_locus"], "T"))
        except ModuliError as e:
            logger.info(f"所选纤维上无法计算切线: {e}")

    try:
        locus = t_locus(pencil, samples=max(3, settings.lines), seed=seed, tol=tol, check_special=False)
        if locus.kind is LocusKind.LINE_X0:
            scene.shapes.append(Shape("segment", (0.0, scene.bounds[2], 0.0, scene.bounds[3]), COLORS["t_locus"]))
        for point in locus.t_points:
            t_affine = _affine(point)
            if t_affine is not None:
                scene.shapes.append(Shape("dot", (*t_affine, 2.5), COLORS["t_locus"]))
        scene.annotations.insert(0, f"T 轨迹: {locus.kind.value}")
    except (InsufficientSamplesError, ModuliError) as e:
        logger.info(f"T 轨迹未绘制: {e}")

    try:
        for special in special_lines(pencil, tol):
            if special.point is None:
                continue
            location = _affine(special.point)
            if location is None:
                scene.annotations.append(f"特殊点 y0={special.line.label()} 非实或在无穷远")
                continue
            scene.shapes.append(Shape("dot", (*location, 4.5), COLORS["special"], f"n={special.count}"))
    except ModuliError as e:
        logger.info(f"特殊点未绘制: {e}")

    _add_matching(scene, fibres, tol)
    if len(scene.annotations) > MAX_ANNOTATIONS:
        hidden = len(scene.annotations) - MAX_ANNOTATIONS
        scene.annotations = scene.annotations[:MAX_ANNOTATIONS] + [f"……另有 {hidden} 条"]
    return scene


def _add_matching(scene: PlotScene, fibres: List[Tuple[Fraction, List[complex]]], tol: float):
    """两条同模数纤维：p_i 与 q_i = a·p_i + b 的连线交于一点"""
    if len(fibres) < 2:
        return
    (y1, first), (y2, second) = fibres[0], fibres[1]
    match = same_moduli(first, second, tol)
    if not match.same:
        scene.annotations.append(f"y0={y1} 与 y0={y2} 上的交点不同模数")
        return
    for i, x in enumerate(first):
        q = second[match.bijection[i]]
        if _is_real(x, abs(x)) and _is_real(q, abs(q)):
            scene.shapes.append(Shape("segment", (x.real, float(y1), q.real, float(y2)), COLORS["match"]))
    a, b = match.a, match.b
    if _is_real(a) and _is_real(b, abs(b)) and abs(a - 1) > REAL_TOL:
        s = 1 / (1 - a.real)
        common = (b.real / (1 - a.real), float(y1) + s * float(y2 - y1))
        scene.shapes.append(Shape("dot", (*common, 4.0), COLORS["match"], "O"))


class _Viewport:
    def __init__(self, bounds: Tuple[float, float, float, float], width: int, height: int):
        self.x0, self.x1, self.y0, self.y1 = bounds
        self.width = width
        self.height = height

    def __call__(self, x: float, y: float) -> Tuple[float, float]:
        px = (x - self.x0) / (self.x1 - self.x0) * self.width
        py = (self.y1 - y) / (self.y1 - self.y0) * self.height
        return px, py


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def render_svg(scene: PlotScene, settings: PlotSettings, title: str = "") -> str:
    view = _Viewport(scene.bounds, settings.width, settings.height)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{settings.width}" '
        f'height="{settings.height}" viewBox="0 0 {settings.width} {settings.height}">',
        f'<rect x="0" y="0" width="{settings.width}" height="{settings.height}" fill="white" />',
    ]
    if title:
        parts.append(f'<title>{_escape(title)}</title>')
    for shape in scene.shapes:
        if shape.kind == "segment":
            (ax, ay), (bx, by) = view(*shape.coords[:2]), view(*shape.coords[2:])
            dash = ' stroke-dasharray="4,3"' if shape.dashed else ""
            parts.append(
                f'<line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" y2="{_fmt(by)}" '
                f'stroke="{shape.color}" stroke-width="1"{dash} />'
            )
        elif shape.kind == "dot":
            cx, cy = view(shape.coords[0], shape.coords[1])
            parts.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{shape.coords[2]}" fill="{shape.color}" />')
            if shape.label:
                parts.append(
                    f'<text x="{_fmt(cx + 6)}" y="{_fmt(cy - 6)}" font-size="11" fill="{shape.color}">'
                    f'{_escape(shape.label)}</text>'
                )
    for i, note in enumerate(scene.annotations):
        parts.append(
            f'<text x="8" y="{16 + 14 * i}" font-size="11" font-family="monospace" '
            f'fill="{COLORS["text"]}">{_escape(note)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_png(scene: PlotScene, settings: PlotSettings, path: Path):
    """同一场景的位图版本"""
    view = _Viewport(scene.bounds, settings.width, settings.height)
    image = Image.new("RGB", (settings.width, settings.height), "white")
    draw = ImageDraw.Draw(image)
    for shape in scene.shapes:
        if shape.kind == "segment":
            draw.line([view(*shape.coords[:2]), view(*shape.coords[2:])], fill=shape.color, width=1)
        elif shape.kind == "dot":
            cx, cy = view(shape.coords[0], shape.coords[1])
            r = shape.coords[2]
            draw.ellipse([cx - r, cy - r, cx + r, cy + r], fill=shape.color)
    for i, note in enumerate(scene.annotations):
        draw.text((8, 4 + 14 * i), note.encode("ascii", "replace").decode("ascii"), fill=COLORS["text"])
    image.save(path, format="PNG")


def plot(
    pencil: PencilSetup,
    out: str,
    settings: PlotSettings,
    png: Optional[str] = None,
    seed: int = 1,
    tol: float = DEFAULT_TOL,
    title: str = "",
) -> PlotSummary:
    scene = build_scene(pencil, settings, seed, tol)
    svg_path = Path(out)
    PathUtils.ensure_dir(svg_path.parent)
    svg_path.write_text(render_svg(scene, settings, title), encoding="utf-8")
    logger.info(f"SVG 已写入 {svg_path}（{scene.real_points} 个实点）")
    if png:
        PathUtils.ensure_dir(Path(png).parent)
        render_png(scene, settings, Path(png))
        logger.info(f"PNG 已写入 {png}")
    return PlotSummary(str(svg_path), png, scene.real_points, scene.complex_points)


__all__ = ["PlotScene", "PlotSettings", "PlotSummary", "build_scene", "plot", "render_png", "render_svg"]
