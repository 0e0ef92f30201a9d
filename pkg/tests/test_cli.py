import json

import pytest

from augur import __version__
from augur.cli import build_parser, main
from augur.results import ResultTable, read_csv

SUBCOMMANDS = ["search-bench", "ski-grid", "sketch-bench", "bloom-bench", "cache-bench",
               "pom-static", "queue-bench"]

FAST = {
    "search-bench": ["--n", "256", "--queries", "200"],
    "ski-grid": ["--b-max", "5", "--d-max", "10", "--lambda", "0.5"],
    "sketch-bench": ["--length", "5000", "--universe", "200"],
    "bloom-bench": ["--members", "200", "--queries", "5000"],
    "cache-bench": ["--length", "2000", "--k", "4"],
    "pom-static": [],
    "queue-bench": ["--lambda", "0.8", "--trials", "2", "--horizon", "2000", "--warmup", "200",
                    "--alpha", "0,0.5"],
}


def _run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _strip_timestamp(text):
    return "\n".join(l for l in text.splitlines() if not l.startswith("# timestamp:"))


def test_no_arguments_prints_usage(capsys):
    code, out, err = _run(capsys, [])
    assert code == 2 and "usage:" in err


def test_unknown_subcommand(capsys):
    code, out, err = _run(capsys, ["frobnicate"])
    assert code == 2 and "usage:" in err


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = _run(capsys, ["ski-grid", "--no-such-flag"])
    assert code == 2


@pytest.mark.parametrize("argv,flag", [
    (["ski-grid", "--b-max", "0"], "--b-max"),
    (["ski-grid", "--lambda", "1.5"], "--lambda"),
    (["queue-bench", "--lambda", "1.2"], "--lambda"),
    (["queue-bench", "--trials", "abc"], "--trials"),
    (["queue-bench", "--dist", "pareto"], "--dist"),
    (["bloom-bench", "--tau", "2"], "--tau"),
    (["cache-bench", "--policy", "fifo"], "--policy"),
    (["search-bench", "--noise", "gaussian:1"], "--noise"),
    (["pom-static", "--alpha", "1.0"], "--alpha"),
])
def test_invalid_parameter_names_the_flag(capsys, argv, flag):
    code, _, err = _run(capsys, argv)
    assert code == 1 and flag in err


@pytest.mark.parametrize("name", SUBCOMMANDS)
def test_help_lists_flags_and_defaults(capsys, name):
    with pytest.raises(SystemExit) as exc:
        main([name, "--help"])
    out = capsys.readouterr().out
    assert exc.value.code == 0
    assert "--seed" in out and "--output" in out and "--format" in out and "default" in out


def test_every_subcommand_registered():
    sub = next(a for a in build_parser()._actions if a.dest == "experiment")
    assert sorted(sub.choices) == sorted(SUBCOMMANDS)


@pytest.mark.parametrize("name", SUBCOMMANDS)
def test_runs_and_is_byte_reproducible(capsys, tmp_path, name):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main([name, *FAST[name], "--seed", "3", "-o", str(a)]) == 0
    assert main([name, *FAST[name], "--seed", "3", "-o", str(b)]) == 0
    assert _strip_timestamp(a.read_text()) == _strip_timestamp(b.read_text())
    meta, rows = read_csv(a.read_text())
    assert rows and json.loads(meta["config"])["experiment"] == name
    assert meta["version"] == __version__


def test_ski_grid_example(capsys):
    code, out, _ = _run(capsys, ["ski-grid", "--b-max", "5", "--d-max", "10", "--lambda", "0.5"])
    meta, rows = read_csv(out)
    assert code == 0 and len(rows) == 5 * 10 * 10
    assert meta["violations"] == "0"
    assert list(rows[0]) == ["b", "d_star", "h", "lambda", "cost", "opt", "ratio", "bound"]


def test_queue_bench_example(capsys):
    code, out, _ = _run(capsys, ["queue-bench", "--lambda", "0.95", "--dist", "mm1",
                                 "--policy", "fcfs", "--trials", "5"])
    _, rows = read_csv(out)
    assert code == 0 and len(rows) == 1
    assert rows[0]["alpha"] == ""
    assert float(rows[0]["mean_T"]) == pytest.approx(20.0, rel=0.15)


def test_json_output(capsys):
    code, out, _ = _run(capsys, ["pom-static", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and set(doc) == {"config", "rows"}
    assert doc["rows"][0]["ratio"] == pytest.approx(4 / 3, abs=1e-3)


def test_seed_changes_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["sketch-bench", *FAST["sketch-bench"], "--seed", "1", "-o", str(a)])
    main(["sketch-bench", *FAST["sketch-bench"], "--seed", "2", "-o", str(b)])
    assert _strip_timestamp(a.read_text()) != _strip_timestamp(b.read_text())


def test_cache_bench_trace_file(tmp_path, capsys):
    trace = tmp_path / "trace.txt"
    trace.write_text("# pages\n" + "\n".join(str(p) for p in [1, 2, 3, 1, 2, 4, 1, 2, 5] * 5))
    code, out, _ = _run(capsys, ["cache-bench", "--trace", str(trace), "--k", "3",
                                 "--policy", "belady,lru"])
    _, rows = read_csv(out)
    assert code == 0 and [r["policy"] for r in rows] == ["belady", "lru"]
    assert int(rows[1]["misses"]) >= int(rows[0]["misses"])


def test_missing_trace_file(capsys, tmp_path):
    code, _, err = _run(capsys, ["cache-bench", "--trace", str(tmp_path / "nope.txt")])
    assert code == 1 and "--trace" in err


def test_figure_written(tmp_path):
    fig = tmp_path / "fig.png"
    assert main(["cache-bench", *FAST["cache-bench"], "-o", str(tmp_path / "o.csv"),
                 "--figure", str(fig)]) == 0
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_result_table_csv_format():
    t = ResultTable(["a", "b"], config={"x": 1}, summary={"s": 2})
    t.add(1, float("inf"))
    t.add(None, 0.5)
    text = t.to_csv(timestamp="T")
    assert text.splitlines()[:4] == ['# config: {"x": 1}', f"# version: {__version__}", "# s: 2",
                                     "# timestamp: T"]
    assert text.splitlines()[4:] == ["a,b", "1,inf", ",0.5"]
    with pytest.raises(ValueError):
        t.add(1)
