import json

from graphstage.cli import main
from graphstage.serialize import load_corpus, read_jsonl


def run_cli(*argv):
    return main(list(argv))


def test_generate_arithmetic(tmp_path):
    out = tmp_path / "d"
    assert run_cli("generate", "--tasks", "all", "--count", "10", "--seed", "7", "--out", str(out)) == 0
    corpus = load_corpus(out / "corpus.jsonl")
    assert len(corpus) == 200  # 10 instances for each of the 20 kinds


def test_generate_selected_tool_expands_directions(tmp_path):
    out = tmp_path / "d"
    assert run_cli("generate", "--tasks", "cycle_detection", "--count", "3", "--out", str(out)) == 0
    corpus = load_corpus(out / "corpus.jsonl")
    assert {i.kind.label for i in corpus} == {
        "cycle_detection:directed",
        "cycle_detection:undirected",
    }


def test_generate_writes_el_graph_files(tmp_path):
    out = tmp_path / "d"
    assert run_cli(
        "generate", "--tasks", "edge_count:directed", "--count", "2", "--size", "el",
        "--out", str(out),
    ) == 0
    corpus = load_corpus(out / "corpus.jsonl")
    for inst in corpus:
        assert (out / inst.graph_file).exists()


def test_unknown_task_is_usage_error(tmp_path):
    assert run_cli("generate", "--tasks", "nope", "--out", str(tmp_path)) == 2


def test_unknown_subcommand_exits_2(capsys):
    assert run_cli("frobnicate") == 2


def test_version_flag(capsys):
    assert run_cli("--version") == 0
    assert "graphstage" in capsys.readouterr().out


def test_full_oracle_loop_reports_100(tmp_path, capsys):
    out = tmp_path / "d"
    assert run_cli("generate", "--tasks", "all", "--count", "2", "--seed", "3", "--out", str(out)) == 0
    assert run_cli(
        "run", "--corpus", str(out / "corpus.jsonl"), "--backend", "oracle",
        "--out", str(out / "traces.jsonl"), "--workers", "4",
    ) == 0
    assert run_cli(
        "build-dataset", "--traces", str(out / "traces.jsonl"),
        "--corpus", str(out / "corpus.jsonl"),
        "--out", str(out / "alpaca.json"), "--stats", str(out / "stats.json"),
    ) == 0
    assert run_cli(
        "evaluate", "--traces", str(out / "traces.jsonl"),
        "--corpus", str(out / "corpus.jsonl"), "--out", str(out / "eval"),
    ) == 0
    assert run_cli("report", "--in", str(out / "eval"), "--format", "md") == 0
    rendered = capsys.readouterr().out
    assert "| Overall | wl |" in rendered

    stats = json.loads((out / "stats.json").read_text())
    assert stats["retained_fraction"] == 1.0
    report = json.loads((out / "eval" / "report.json").read_text())
    assert report["overall"]["wl"]["answer_acc"] == 100.0
    assert (out / "eval" / "records.jsonl").exists()
    assert (out / "eval" / "report.txt").exists()


def test_fault_run_writes_labels_and_lowers_retention(tmp_path):
    out = tmp_path / "d"
    assert run_cli("generate", "--tasks", "all", "--count", "4", "--seed", "5", "--out", str(out)) == 0
    assert run_cli(
        "run", "--corpus", str(out / "corpus.jsonl"), "--backend", "fault",
        "--fault-drop", "0.5", "--fault-garbage", "0.3", "--seed", "11",
        "--fault-labels", str(out / "labels.json"),
        "--out", str(out / "traces.jsonl"),
    ) == 0
    labels = json.loads((out / "labels.json").read_text())
    assert labels  # some corruption happened
    assert run_cli(
        "build-dataset", "--traces", str(out / "traces.jsonl"),
        "--corpus", str(out / "corpus.jsonl"),
        "--out", str(out / "alpaca.json"), "--stats", str(out / "stats.json"),
    ) == 0
    stats = json.loads((out / "stats.json").read_text())
    assert stats["retained_instances"] < stats["traces"]


def test_fill_quota_reaches_target(tmp_path):
    out = tmp_path / "d"
    quota = 3
    assert run_cli("generate", "--tasks", "degree_count", "--count", "4", "--seed", "2", "--out", str(out)) == 0
    assert run_cli(
        "run", "--corpus", str(out / "corpus.jsonl"), "--backend", "fault",
        "--fault-name", "0.6", "--seed", "4",
        "--out", str(out / "traces.jsonl"),
    ) == 0
    assert run_cli(
        "build-dataset", "--traces", str(out / "traces.jsonl"),
        "--corpus", str(out / "corpus.jsonl"),
        "--out", str(out / "alpaca.json"), "--stats", str(out / "stats.json"),
        "--fill-quota", str(quota), "--seed", "2",
    ) == 0
    stats = json.loads((out / "stats.json").read_text())
    for kind_stats in stats["per_kind"].values():
        assert kind_stats["retained"] >= quota


def test_run_http_without_endpoint_is_usage_error(tmp_path):
    out = tmp_path / "d"
    run_cli("generate", "--tasks", "node_count:directed", "--count", "1", "--out", str(out))
    code = run_cli(
        "run", "--corpus", str(out / "corpus.jsonl"), "--backend", "http",
        "--out", str(out / "traces.jsonl"),
    )
    assert code == 2
