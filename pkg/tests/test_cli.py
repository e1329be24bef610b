import pytest

from swarmkit.__main__ import main
from swarmkit.trace_format import parse_trace

RANDOM_SPEC = """\
algorithm: 2gata
n: 4
initial: random box=3
frames: random
scheduler: fair-random
horizon: 50
"""

BIVALENT_SPEC = """\
algorithm: 2gata
point: 0 0
point: 0 0
point: 1 0
point: 1 0
horizon: 5
"""


@pytest.fixture
def spec_file(tmp_path):
    def write(text, name="run.spec"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


@pytest.fixture(autouse=True)
def no_seed_env(monkeypatch):
    monkeypatch.delenv("SWARMKIT_SEED", raising=False)


class TestRun:
    def test_scenario(self, capsys):
        assert main(["run", "--scenario", "scatter_lower_bound"]) == 0
        out, err = capsys.readouterr()
        assert out.startswith("swarmkit-trace 1\n")
        assert "Done. 1 run: 1 passed, 0 failed" in err

    def test_scenario_params(self, capsys):
        assert main(["run", "-s", "scatter_lower_bound", "-p", "c=4", "-p", "m=3", "--horizon", "20"]) == 0
        traces = parse_trace(capsys.readouterr().out)
        assert traces[0].final.time == 20

    def test_seed_reaches_seeded_scenarios(self, capsys):
        assert main(["run", "-s", "bivalent_stasis", "--seed", "3", "--horizon", "10"]) == 0

    def test_failing_spec(self, spec_file, capsys):
        assert main(["run", spec_file(BIVALENT_SPEC)]) == 1
        out, err = capsys.readouterr()
        assert parse_trace(out)[0].verdict.kind.value == "stasis"
        assert "Done. 1 run: 0 passed, 1 failed" in err

    def test_expected_stasis_passes(self, spec_file, capsys):
        assert main(["run", spec_file(BIVALENT_SPEC + "expect: not-change\n")]) == 0

    def test_output_file(self, spec_file, tmp_path, capsys):
        out_path = tmp_path / "run.trace"
        main(["run", spec_file(BIVALENT_SPEC), "-o", str(out_path)])
        assert capsys.readouterr().out == ""
        assert len(parse_trace(out_path.read_text(encoding="utf-8"))) == 1

    def test_environment_seed_matches_seed_option(self, spec_file, monkeypatch, capsys):
        path = spec_file(RANDOM_SPEC)
        main(["run", path, "--seed", "5"])
        with_option = capsys.readouterr().out
        monkeypatch.setenv("SWARMKIT_SEED", "5")
        main(["run", path])
        assert capsys.readouterr().out == with_option

    @pytest.mark.parametrize("args", [
        ["run"],
        ["run", "x.spec", "--scenario", "scatter_lower_bound"],
        ["run", "--scenario", "teleport"],
        ["run", "--scenario", "scatter_lower_bound", "-p", "c"],
        ["run", "--scenario", "scatter_lower_bound", "--horizon", "0"],
        ["run", "does-not-exist.spec"],
        ["suite", "--jobs", "0"],
        ["suite", "nothing_*"],
    ])
    def test_usage_errors(self, args, capsys):
        assert main(args) == 2

    def test_bad_environment_seed(self, monkeypatch, capsys):
        monkeypatch.setenv("SWARMKIT_SEED", "abc")
        assert main(["run", "--scenario", "scatter_lower_bound"]) == 2

    def test_malformed_spec(self, spec_file, capsys):
        assert main(["run", spec_file("algorithm: 2gata\ncolour: red\n", "bad.spec")]) == 2
        assert "unknown key 'colour'" in capsys.readouterr().err


class TestAnalyze:
    def test_square(self, spec_file, capsys):
        path = spec_file("0 0\n2 0\n0 2\n2 2\n", "square.txt")
        assert main(["analyze", path, "--query", "0,0"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert "n: 4" in lines
        assert "k: 4" in lines
        assert "sigma: 4" in lines
        assert sum(line.startswith("orbit: ") for line in lines) == 1
        assert not any(line.startswith("order: ") for line in lines)
        assert any(line.startswith("view of ") for line in lines)

    def test_asymmetric_prints_the_order(self, spec_file, capsys):
        assert main(["analyze", spec_file("0 0\n1 0\n3 0\n", "line.txt")]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert "k: 1" in lines
        assert sum(line.startswith("order: ") for line in lines) == 1

    def test_bad_query(self, spec_file, capsys):
        assert main(["analyze", spec_file("0 0\n1 0\n", "pair.txt"), "--query", "zero"]) == 2


class TestSuite:
    def test_filter(self, capsys):
        assert main(["suite", "scatter_lower_bound"]) == 0
        err = capsys.readouterr().err
        assert "swarmkit suite running 2 scenarios: scatter_lower_bound" in err
        assert "Done. 2 runs: 2 passed, 0 failed" in err

    def test_traces_to_file(self, tmp_path, capsys):
        out_path = tmp_path / "suite.trace"
        assert main(["suite", "bivalent_*", "-o", str(out_path)]) == 0
        assert len(parse_trace(out_path.read_text(encoding="utf-8"))) == 3


class TestRender:
    def test_svg_from_trace(self, tmp_path, capsys):
        trace_path = tmp_path / "run.trace"
        picture = tmp_path / "run.svg"
        main(["run", "-s", "crash_scatter_lower_bound", "-p", "variant=tight", "-o", str(trace_path)])
        assert main(["render", str(trace_path), str(picture)]) == 0
        assert picture.read_text(encoding="utf-8").startswith("<svg")

    def test_missing_run(self, tmp_path, capsys):
        trace_path = tmp_path / "run.trace"
        main(["run", "-s", "scatter_lower_bound", "-o", str(trace_path)])
        assert main(["render", str(trace_path), str(tmp_path / "x.svg"), "--run", "3"]) == 2

    def test_not_a_trace(self, spec_file, tmp_path, capsys):
        assert main(["render", spec_file(BIVALENT_SPEC), str(tmp_path / "x.svg")]) == 2
