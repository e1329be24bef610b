"""
Static pictures of execution traces: robot trajectories as polylines,
final multiplicities as labels and crashed robots as crosses. SVG is written
as text, PNG through Pillow.
"""

import io
import logging
from collections import Counter
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from PIL import Image, ImageDraw

from .engine import ExecutionTrace
from .errors import TraceFormatError
from .geom import Point

logger = logging.getLogger(__name__)

WIDTH = 640
HEIGHT = 640
MARGIN = 48
CAPTION_HEIGHT = 32
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


@dataclass(frozen=True)
class _Layout:
    """Maps plane coordinates onto the drawing area, y pointing up."""
    min_x: float
    min_y: float
    unit: float

    @classmethod
    def fit(cls, points: Sequence[Point]) -> "_Layout":
        xs = [float(p.x) for p in points]
        ys = [float(p.y) for p in points]
        span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
        usable = min(WIDTH, HEIGHT - CAPTION_HEIGHT) - 2 * MARGIN
        return cls(min(xs), min(ys), usable / span)

    def pixel(self, p: Point) -> Tuple[float, float]:
        x = MARGIN + (float(p.x) - self.min_x) * self.unit
        y = HEIGHT - CAPTION_HEIGHT - MARGIN - (float(p.y) - self.min_y) * self.unit
        return round(x, 2), round(y, 2)


def _trajectories(trace: ExecutionTrace) -> List[List[Point]]:
    """Per robot, its positions with consecutive repeats collapsed."""
    paths: List[List[Point]] = [[] for _ in trace.steps[0].positions]
    for step in trace.steps:
        for robot_id, p in enumerate(step.positions):
            if not paths[robot_id] or paths[robot_id][-1] != p:
                paths[robot_id].append(p)
    return paths


def caption(trace: ExecutionTrace) -> str:
    support = len(set(trace.final.positions))
    return f"{trace.verdict} at t={trace.final.time}, final support {support}"


def _check(trace: ExecutionTrace) -> None:
    if not trace.steps or not trace.steps[0].positions:
        raise TraceFormatError("cannot draw an empty trace")


def render_svg(trace: ExecutionTrace) -> str:
    _check(trace)
    paths = _trajectories(trace)
    layout = _Layout.fit([p for step in trace.steps for p in step.positions])
    final = trace.final
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
             f'viewBox="0 0 {WIDTH} {HEIGHT}">',
             f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    for robot_id, path in enumerate(paths):
        if len(path) < 2:
            continue
        coords = " ".join(f"{x},{y}" for x, y in map(layout.pixel, path))
        parts.append(f'<polyline class="trajectory" data-robot="{robot_id}" points="{coords}" '
                     f'fill="none" stroke="{PALETTE[robot_id % len(PALETTE)]}" stroke-width="1.5"/>')
    for p, count in sorted(Counter(final.positions).items()):
        x, y = layout.pixel(p)
        parts.append(f'<circle class="robot" cx="{x}" cy="{y}" r="4" fill="black"/>')
        if count > 1:
            parts.append(f'<text class="multiplicity" x="{x + 6}" y="{y - 6}" font-size="12">{count}</text>')
    for robot_id in final.crashed:
        x, y = layout.pixel(final.positions[robot_id])
        parts.append(f'<path class="crash" d="M{x - 6},{y - 6} L{x + 6},{y + 6} M{x - 6},{y + 6} L{x + 6},{y - 6}" '
                     f'stroke="red" stroke-width="2"/>')
    parts.append(f'<text class="caption" x="{MARGIN}" y="{HEIGHT - CAPTION_HEIGHT // 2}" '
                 f'font-size="14">{caption(trace)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_png(trace: ExecutionTrace) -> bytes:
    _check(trace)
    paths = _trajectories(trace)
    layout = _Layout.fit([p for step in trace.steps for p in step.positions])
    final = trace.final
    img = Image.new("RGB", (WIDTH, HEIGHT), (255, 255, 255))
    draw = ImageDraw.Draw(img)
    for robot_id, path in enumerate(paths):
        if len(path) >= 2:
            draw.line([layout.pixel(p) for p in path], fill=PALETTE[robot_id % len(PALETTE)], width=2)
    for p, count in Counter(final.positions).items():
        x, y = layout.pixel(p)
        draw.ellipse((x - 4, y - 4, x + 4, y + 4), fill="black")
        if count > 1:
            draw.text((x + 6, y - 18), str(count), fill="black")
    for robot_id in final.crashed:
        x, y = layout.pixel(final.positions[robot_id])
        draw.line((x - 6, y - 6, x + 6, y + 6), fill="red", width=2)
        draw.line((x - 6, y + 6, x + 6, y - 6), fill="red", width=2)
    draw.text((MARGIN, HEIGHT - CAPTION_HEIGHT), caption(trace), fill="black")
    output_buffer = io.BytesIO()
    img.save(output_buffer, format="PNG")
    return output_buffer.getvalue()


def render_to_file(trace: ExecutionTrace, path: str) -> None:
    """Write SVG, or PNG when path ends in .png."""
    if path.lower().endswith(".png"):
        data = render_png(trace)
        with open(path, "wb") as f:
            f.write(data)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(render_svg(trace))
    logger.info("wrote %s", path)
