import pytest

from swarmkit.engine import ExecutionTrace, Verdict, VerdictKind
from swarmkit.errors import TraceFormatError
from swarmkit.render import caption, render_png, render_svg, render_to_file
from swarmkit.scenarios import build_scenario, run_scenario


@pytest.fixture(scope="module")
def trace():
    return run_scenario(build_scenario("crash_scatter_lower_bound", f=2, n=5, variant="tight", horizon=10)).trace


def test_caption(trace):
    assert caption(trace) == f"reached {trace.verdict.time} at t={trace.final.time}, final support 2"


def test_svg(trace):
    svg = render_svg(trace)
    assert svg.startswith("<svg")
    assert svg.rstrip().endswith("</svg>")
    assert 'class="trajectory"' in svg
    assert 'class="multiplicity"' in svg
    assert svg.count('class="crash"') == 2
    assert caption(trace) in svg


def test_png(trace):
    assert render_png(trace).startswith(b"\x89PNG\r\n\x1a\n")


def test_render_to_file(trace, tmp_path):
    svg_path, png_path = tmp_path / "run.svg", tmp_path / "run.PNG"
    render_to_file(trace, str(svg_path))
    render_to_file(trace, str(png_path))
    assert svg_path.read_text(encoding="utf-8").startswith("<svg")
    assert png_path.read_bytes()[:4] == b"\x89PNG"


def test_empty_trace():
    with pytest.raises(TraceFormatError):
        render_svg(ExecutionTrace((), Verdict(VerdictKind.STASIS, 0)))
