import pytest

from swarmkit.errors import TraceFormatError
from swarmkit.scenarios import build_scenario, run_scenario
from swarmkit.trace_format import MAGIC, VERSION, format_step, parse_trace, write_trace


@pytest.fixture(scope="module")
def traces():
    crash = run_scenario(build_scenario("crash_scatter_lower_bound", f=2, n=5, horizon=5)).trace
    clones = run_scenario(build_scenario("clone_symmetric_failure", variant="sgta")).trace
    return [crash, clones]


def test_written_runs_parse_back(traces):
    text = write_trace(traces)
    assert text.startswith(f"{MAGIC} {VERSION}\nrun 0\n")
    parsed = parse_trace(text)
    assert parsed == traces


def test_step_line(traces):
    line = format_step(traces[0].steps[1])
    assert line.split("\t")[:4] == ["step", "1", "0,1,2,3,4", "0,1"]
    assert line.split("\t")[4] == ";".join(["0/1,0/1"] * 5)


def test_blank_lines_between_runs(traces):
    text = write_trace(traces).replace("end\nrun 1", "end\n\nrun 1")
    assert len(parse_trace(text)) == 2


@pytest.mark.parametrize("mangle", [
    lambda text: "",
    lambda text: text.replace(MAGIC, "other-trace", 1),
    lambda text: text.replace(f"{MAGIC} {VERSION}", MAGIC, 1),
    lambda text: text.replace(f"{MAGIC} {VERSION}", f"{MAGIC} 99", 1),
    lambda text: text.rsplit("end", 1)[0],
    lambda text: text.replace("verdict: ", "outcome: ", 1),
    lambda text: text.replace("step\t", "steb\t", 1),
    lambda text: text.replace("0/1,0/1", "0/1,0/0", 1),
    lambda text: text.replace("verdict: ", "verdict: x", 1),
])
def test_malformed(traces, mangle):
    with pytest.raises(TraceFormatError):
        parse_trace(mangle(write_trace(traces)), "bad.trace")
